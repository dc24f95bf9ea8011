//
// Copyright 2026 The stabclust Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//

#ifndef STABCLUST_ERROR_HPP_
#define STABCLUST_ERROR_HPP_

#include <stdexcept>
#include <string>
#include <string_view>

namespace stabclust {

enum class ErrorCode {
  kInvalidArgument,
  kDimensionMismatch,
  kEmptyInput,
  kOutOfBall,
  kTooLarge,
  kDegenerate,
  kAlgorithmFailure,
  kParse,
};

inline std::string_view ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument:
      return "invalid_argument";
    case ErrorCode::kDimensionMismatch:
      return "dimension_mismatch";
    case ErrorCode::kEmptyInput:
      return "empty_input";
    case ErrorCode::kOutOfBall:
      return "out_of_ball";
    case ErrorCode::kTooLarge:
      return "too_large";
    case ErrorCode::kDegenerate:
      return "degenerate";
    case ErrorCode::kAlgorithmFailure:
      return "algorithm_failure";
    case ErrorCode::kParse:
      return "parse";
  }
  return "unknown";
}

// Every failure raised by the library carries a machine-readable code so
// callers (and tests) can branch on the kind of error, not on message text.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(ErrorCodeName(code)) + ": " + message),
        code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

inline void Require(bool condition, ErrorCode code, const std::string& message) {
  if (!condition) throw Error(code, message);
}

}  // namespace stabclust

#endif  // STABCLUST_ERROR_HPP_
