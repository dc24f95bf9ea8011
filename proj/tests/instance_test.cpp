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

#include "stabclust/instance.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numeric>
#include <vector>

namespace stabclust {
namespace {

InstanceSpec TwoBlobSpec() {
  InstanceSpec s;
  s.k = 2;
  s.dim = 1;
  s.n = 10000;
  s.scale = 0.5;
  s.sigma = 0.01;
  s.oracle_restarts = 10;
  return s;
}

TEST(InstanceTest, ZeroSpreadIsPerfectlySeparated) {
  InstanceSpec s = TwoBlobSpec();
  s.sigma = 0.0;
  s.n = 200;
  const Instance inst = GenerateInstance(s);
  EXPECT_EQ(inst.stability.phi_p, 0.0);
  EXPECT_EQ(inst.oracle_cost, 0.0);
}

TEST(InstanceTest, TwoBlobRatioMatchesVarianceRatio) {
  // Within-cluster variance 1e-4 over one-cluster variance 0.25 + 1e-4.
  const Instance inst = GenerateInstance(TwoBlobSpec());
  EXPECT_NEAR(inst.stability.phi_p, 4e-4, 2e-4);
  EXPECT_EQ(inst.stability.method, OracleMethod::kHeuristic);
  EXPECT_LE(inst.stability.opt_k, inst.oracle_cost * (1.0 + 1e-9));
}

TEST(InstanceTest, SameSeedSameHash) {
  InstanceSpec s = TwoBlobSpec();
  s.n = 500;
  const std::uint64_t a = GenerateInstance(s).hash;
  EXPECT_EQ(GenerateInstance(s).hash, a);
  s.seed = 2;
  EXPECT_NE(GenerateInstance(s).hash, a);
}

TEST(InstanceTest, PointsStayInBall) {
  InstanceSpec s;
  s.k = 3;
  s.dim = 2;
  s.n = 3000;
  s.scale = 0.95;
  s.sigma = 0.2;
  s.placement = Placement::kRing;
  s.oracle_restarts = 3;
  const Instance inst = GenerateInstance(s);
  for (std::size_t i = 0; i < inst.data.size(); ++i) EXPECT_LE(Norm(inst.data.point(i)), 1.0 + 1e-12);
  EXPECT_EQ(inst.labels.size(), 3000u);
}

TEST(InstanceTest, SimplexVerticesAreEquidistant) {
  for (std::size_t k : {2u, 3u, 4u, 5u}) {
    const std::vector<Point> v = SimplexVertices(k, 6, 0.7);
    const double side = Distance(v[0], v[1]);
    for (std::size_t i = 0; i < k; ++i) {
      EXPECT_NEAR(Norm(v[i]), 0.7, 1e-12);
      for (std::size_t j = i + 1; j < k; ++j) EXPECT_NEAR(Distance(v[i], v[j]), side, 1e-12);
    }
  }
  EXPECT_THROW(SimplexVertices(4, 2, 1.0), Error);
  const std::vector<Point> line = SimplexVertices(2, 1, 0.5);
  EXPECT_NEAR(std::fabs(line[0][0] - line[1][0]), 1.0, 1e-12);
}

TEST(InstanceTest, RandomPlacementKeepsSeparation) {
  Rng rng(3, "placement");
  const std::vector<Point> c = RandomSeparatedCenters(6, 3, 0.9, 0.5, rng);
  for (std::size_t i = 0; i < c.size(); ++i) {
    EXPECT_LE(Norm(c[i]), 0.9);
    for (std::size_t j = i + 1; j < c.size(); ++j) EXPECT_GE(Distance(c[i], c[j]), 0.5);
  }
  EXPECT_THROW(RandomSeparatedCenters(50, 1, 0.5, 0.5, rng), Error);
}

TEST(InstanceTest, ClusterSizesByLargestRemainder) {
  EXPECT_EQ(ClusterSizes(10, 3, {}), (std::vector<std::size_t>{4, 3, 3}));
  EXPECT_EQ(ClusterSizes(10, 3, {1.0, 2.0, 2.0}), (std::vector<std::size_t>{2, 4, 4}));
  EXPECT_EQ(ClusterSizes(7, 2, {0.0, 1.0}), (std::vector<std::size_t>{0, 7}));
  EXPECT_THROW(ClusterSizes(7, 2, {1.0}), Error);
}

TEST(InstanceTest, RejectsWhenRatioTooLarge) {
  InstanceSpec s = TwoBlobSpec();
  s.n = 400;
  s.sigma = 0.3;
  s.max_phi_p = 1e-6;
  s.max_attempts = 2;
  try {
    GenerateInstance(s);
    FAIL() << "expected rejection";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kDegenerate);
  }
  s.max_phi_p = 1.0;
  EXPECT_EQ(GenerateInstance(s).attempts, 1);
}

TEST(InstanceTest, MedianOracleForP1) {
  InstanceSpec s = TwoBlobSpec();
  s.n = 101;
  s.p = 1;
  const Instance inst = GenerateInstance(s);
  EXPECT_NEAR(inst.oracle_cost, Cost(inst.data, inst.oracle, Objective::kMedian), 1e-12);
  EXPECT_EQ(inst.stability.p, 1);
}

}  // namespace
}  // namespace stabclust
