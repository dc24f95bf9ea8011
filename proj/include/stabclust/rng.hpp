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

#ifndef STABCLUST_RNG_HPP_
#define STABCLUST_RNG_HPP_

#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <string>
#include <string_view>

namespace stabclust {

inline constexpr std::uint64_t Fnv1a64(std::string_view text,
                                       std::uint64_t hash = 0xcbf29ce484222325ULL) {
  for (unsigned char c : text) {
    hash ^= c;
    hash *= 0x100000001b3ULL;
  }
  return hash;
}

inline constexpr std::uint64_t Mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// A (seed, stream-label) pair. Identical pairs reproduce identical noise.
struct RngSeed {
  std::uint64_t seed = 0;
  std::string label = "default";
};

// Counter-based generator: output i of a stream is Mix64(key + i * golden),
// i.e. SplitMix64 keyed by the hashed stream label. Child streams are derived
// by re-keying, so independent trials or users never share a sequence.
//
// The uniform/normal/Laplace transforms are implemented here rather than via
// <random> distributions so that sequences are bit-identical across standard
// library implementations.
class Rng {
 public:
  using result_type = std::uint64_t;

  Rng(std::uint64_t seed, std::string_view label)
      : key_(Mix64(seed ^ Fnv1a64(label)) ^ Fnv1a64(label, seed)) {}
  explicit Rng(const RngSeed& s) : Rng(s.seed, s.label) {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() {
    return std::numeric_limits<result_type>::max();
  }

  result_type operator()() {
    counter_ += kGolden;
    return Mix64(key_ + counter_);
  }

  // Derives an independent stream; does not advance this one.
  Rng Fork(std::string_view sublabel) const { return Rng(key_, sublabel, 0); }
  Rng Fork(std::uint64_t index) const {
    return Rng(Mix64(key_ ^ Mix64(index + 0x5851f42d4c957f2dULL)), RawKey{});
  }

  // Uniform on the open interval (0, 1).
  double Uniform() {
    return (static_cast<double>((*this)() >> 11) + 0.5) * 0x1.0p-53;
  }

  // Uniform integer in [0, n).
  std::uint64_t Below(std::uint64_t n) {
    if (n <= 1) return 0;
    // Lemire's multiply-shift; the bias is below 2^-64 * n, irrelevant here.
    return static_cast<std::uint64_t>(
        (static_cast<unsigned __int128>((*this)()) * n) >> 64);
  }

  bool Bernoulli(double p) { return Uniform() < p; }

  // Standard normal via Box-Muller, caching the second variate.
  double Normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    const double u1 = Uniform();
    const double u2 = Uniform();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * std::numbers::pi * u2;
    spare_ = radius * std::sin(angle);
    has_spare_ = true;
    return radius * std::cos(angle);
  }

  double Normal(double stddev) { return stddev == 0.0 ? 0.0 : stddev * Normal(); }

  // Laplace(0, scale) by inverse CDF.
  double Laplace(double scale) {
    if (scale == 0.0) return 0.0;
    const double u = Uniform() - 0.5;
    const double magnitude = -scale * std::log(1.0 - 2.0 * std::fabs(u));
    return u < 0 ? -magnitude : magnitude;
  }

 private:
  static constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;

  struct RawKey {};
  Rng(std::uint64_t key, RawKey) : key_(key) {}
  Rng(std::uint64_t parent_key, std::string_view label, int /*tag*/)
      : key_(Mix64(Fnv1a64(label, parent_key) + kGolden)) {}

  std::uint64_t key_;
  std::uint64_t counter_ = 0;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace stabclust

#endif  // STABCLUST_RNG_HPP_
