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

#include "stabclust/dataset_io.hpp"

#include <gtest/gtest.h>

#include <sstream>

namespace stabclust {
namespace {

TEST(CsvTest, RoundTrip) {
  const Dataset d = Dataset::FromRows({{0.1, -0.2}, {1.0 / 3.0, 0.5}}, 1.0);
  std::ostringstream out;
  WriteDatasetCsv(d, out);
  std::istringstream in(out.str());
  const Dataset back = ReadDatasetCsv(in);
  EXPECT_EQ(back.dim(), 2u);
  EXPECT_EQ(back.radius(), 1.0);
  EXPECT_EQ(back.coords(), d.coords());
}

TEST(CsvTest, AcceptsSpacesAndComments) {
  std::istringstream in("# dim=2 radius=2.5\n0 1\n\n# note\n1.5, -1\n");
  const Dataset d = ReadDatasetCsv(in);
  EXPECT_EQ(d.size(), 2u);
  EXPECT_EQ(d.radius(), 2.5);
  EXPECT_EQ(d.point(1)[0], 1.5);
}

TEST(CsvTest, ErrorsCarryLineNumbers) {
  std::istringstream missing("0,1\n");
  EXPECT_THROW(ReadDatasetCsv(missing), Error);
  std::istringstream bad("# dim=2 radius=1\n0,0\n0,abc\n");
  try {
    ReadDatasetCsv(bad);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kParse);
    EXPECT_NE(std::string(e.what()).find("line 3"), std::string::npos);
  }
  std::istringstream outside("# dim=1 radius=1\n2\n");
  try {
    ReadDatasetCsv(outside);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kOutOfBall);
  }
}

TEST(JsonTest, RoundTrip) {
  const Dataset d = Dataset::FromRows({{0.1}, {-0.7}}, 1.0);
  const Dataset back = DatasetFromJson(DatasetToJson(d));
  EXPECT_EQ(back.coords(), d.coords());
  EXPECT_THROW(DatasetFromJson(nlohmann::json{{"dim", 1}}), Error);
}

TEST(HashTest, StableAndSensitive) {
  const Dataset a = Dataset::FromRows({{0.1}, {-0.7}}, 1.0);
  const Dataset b = Dataset::FromRows({{0.1}, {-0.7}}, 1.0);
  const Dataset c = Dataset::FromRows({{0.1}, {-0.70000001}}, 1.0);
  EXPECT_EQ(DatasetHash(a), DatasetHash(b));
  EXPECT_NE(DatasetHash(a), DatasetHash(c));
}

}  // namespace
}  // namespace stabclust
