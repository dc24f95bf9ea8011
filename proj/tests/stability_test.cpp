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

#include "stabclust/stability.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "oracles.hpp"

namespace stabclust {
namespace {

Dataset Line(std::vector<double> xs, double radius = 100.0) {
  Dataset d(1, radius);
  for (double x : xs) d.Add(std::vector<double>{x});
  return d;
}

CenterSet Centers1D(std::vector<double> xs) {
  std::vector<Point> c;
  for (double x : xs) c.push_back({x});
  return CenterSet(c);
}

// k tight groups of `per` points around random well spaced centers.
Dataset SeparatedInstance(std::size_t k, std::size_t per, double spread, Rng& rng) {
  Dataset data(2, 1.0);
  for (std::size_t j = 0; j < k; ++j) {
    const double angle = 2.0 * M_PI * (static_cast<double>(j) + 0.3 * rng.Uniform()) / static_cast<double>(k);
    for (std::size_t i = 0; i < per; ++i) {
      const Point p{0.7 * std::cos(angle) + rng.Normal(spread), 0.7 * std::sin(angle) + rng.Normal(spread)};
      data.Add(ClampToBall(p, 1.0));
    }
  }
  return data;
}

TEST(SeparabilityTest, FrozenValues) {
  const auto r = SeparabilityRatio(Line({0, 1, 10, 11}), 2, Objective::kMeans, OracleMethod::kExact);
  EXPECT_NEAR(r.ratio, 1.0 / 101.0, 1e-12);
  EXPECT_EQ(SeparabilityRatio(Line({0, 0, 0, 10, 10, 10}), 2, Objective::kMeans, OracleMethod::kExact).ratio,
            0.0);
  try {
    SeparabilityRatio(Line({3, 3, 3}), 2, Objective::kMeans, OracleMethod::kExact);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kDegenerate);
  }
  EXPECT_THROW(SeparabilityRatio(Line({0, 1}), 1, Objective::kMeans, OracleMethod::kExact), Error);
}

TEST(SeparabilityTest, RatioTimesOptKMinusOneIsOptK) {
  Rng rng(1, "sep-identity");
  for (int t = 0; t < 20; ++t) {
    const Dataset x = oracle::RandomDataset(9, 2, 1.0, rng);
    const auto r = SeparabilityRatio(x, 3, Objective::kMeans, OracleMethod::kExact);
    EXPECT_NEAR(r.ratio * r.opt_k_minus_1, r.opt_k, 1e-9 * r.opt_k);
  }
}

TEST(SeparabilityTest, HeuristicOnFarBlobs) {
  Rng rng(2, "sep-blobs");
  Dataset x(1, 30.0);
  for (int i = 0; i < 5000; ++i) x.Add(std::vector<double>{-20.0 + rng.Normal()});
  for (int i = 0; i < 5000; ++i) x.Add(std::vector<double>{20.0 + rng.Normal()});
  const auto r = SeparabilityRatio(x, 2, Objective::kMeans, OracleMethod::kHeuristic, {50, 3});
  EXPECT_EQ(r.method, OracleMethod::kHeuristic);
  EXPECT_LT(r.ratio, 0.01);
}

TEST(CenterDeletionTest, FrozenAndDegenerate) {
  const auto b = CenterDeletionStability(Line({0, 1, 10, 11}), 2, Objective::kMeans, OracleMethod::kExact);
  // Cluster {0,1} moved onto 10.5 costs 10.5^2 + 9.5^2 = 200.5, plus 0.5 from
  // the other cluster; OPT_2 = 1.
  EXPECT_NEAR(b.value, 201.0, 1e-9);
  EXPECT_FALSE(b.degenerate);
  const auto d = CenterDeletionStability(Line({0, 0, 0, 10, 10, 10}), 2, Objective::kMeans,
                                         OracleMethod::kExact);
  EXPECT_TRUE(d.degenerate);
  EXPECT_TRUE(std::isinf(d.value));
}

TEST(CenterSeparationTest, FrozenAndDegenerate) {
  const auto g = CenterSeparationStability(Line({0, 1, 10, 11}), 2, Objective::kMeans, OracleMethod::kExact);
  EXPECT_NEAR(g.value, 200.0, 1e-9);
  EXPECT_TRUE(CenterSeparationStability(Line({0, 0, 10, 10}), 2, Objective::kMeans, OracleMethod::kExact)
                  .degenerate);
}

TEST(ImplicationChainTest, SeparabilityDeletionSeparation) {
  Rng rng(3, "chain");
  for (int t = 0; t < 50; ++t) {
    const std::size_t k = 2 + static_cast<std::size_t>(rng.Below(2));
    const Dataset x = SeparatedInstance(k, 4, 0.05 + 0.1 * rng.Uniform(), rng);
    for (Objective obj : {Objective::kMeans, Objective::kMedian}) {
      const OptimumEstimate opt = EstimateOptimum(x, k, obj, OracleMethod::kExact);
      const auto sep = SeparabilityRatio(x, k, obj, OracleMethod::kExact);
      const auto beta = CenterDeletionStability(x, opt, obj);
      const auto gamma = CenterSeparationStability(x, opt, obj);
      EXPECT_GE(beta.value, (1.0 / sep.ratio) * (1.0 - 1e-9));
      EXPECT_GE(gamma.value, (beta.value - 1.0) * (1.0 - 1e-9));
      if (obj == Objective::kMeans) {
        // For squared costs the shift identity makes the implication tight.
        EXPECT_NEAR(gamma.value, beta.value - 1.0, 1e-9 * beta.value);
      }
    }
  }
}

TEST(ApproxCenterTest, FrozenExamples) {
  const Dataset x = Line({0, 1, 10, 11});
  const OptimumEstimate opt = EstimateOptimum(x, 2, Objective::kMeans, OracleMethod::kExact);
  const auto same = CheckApproxCenterStability(x, opt, Objective::kMeans, opt.centers, 1.0);
  EXPECT_TRUE(same.match.matched);
  for (double d : same.match.distances) EXPECT_NEAR(d, 0.0, 1e-12);

  const auto near = CheckApproxCenterStability(x, opt, Objective::kMeans, Centers1D({0.6, 10.4}), 2.0);
  EXPECT_TRUE(near.match.matched);
  EXPECT_TRUE(near.within_cost_factor);
  for (double d : near.match.distances) EXPECT_NEAR(d, 0.1, 1e-12);

  const auto bad = CheckApproxCenterStability(x, opt, Objective::kMeans, Centers1D({5, 5}), 1000.0);
  EXPECT_FALSE(bad.match.matched);
  ASSERT_TRUE(bad.match.witness_center.has_value());
  EXPECT_GE(bad.match.witness_distance, 4.5);
}

TEST(ClosenessTest, LowCostCandidatesAreClose) {
  Rng rng(4, "closeness");
  int checked = 0;
  for (int t = 0; t < 60; ++t) {
    const std::size_t k = 3;
    const Dataset x = SeparatedInstance(k, 4, 0.01, rng);
    const OptimumEstimate opt = EstimateOptimum(x, k, Objective::kMeans, OracleMethod::kExact);
    const double opt_km1 = EstimateOptimum(x, k - 1, Objective::kMeans, OracleMethod::kExact).cost;
    // Candidates: optimal centers pushed by noise, then zero or one Lloyd step.
    for (int c = 0; c < 5; ++c) {
      std::vector<Point> cand = opt.centers.centers();
      const double scale = 0.02 * rng.Uniform();
      for (Point& p : cand) {
        for (double& v : p) v += rng.Normal(scale);
      }
      CenterSet candidate(cand);
      if (c % 2 == 1) candidate = LloydStep(x, candidate, Objective::kMeans);
      const auto r = CheckCloseness(x, opt, opt_km1, Objective::kMeans, candidate);
      if (!r.precondition) continue;
      ++checked;
      EXPECT_TRUE(r.match.matched);
    }
  }
  EXPECT_GT(checked, 100);
}

TEST(ClosenessTest, MedianVariant) {
  const Dataset x = Line({0, 0.01, 10, 10.01});
  const OptimumEstimate opt = EstimateOptimum(x, 2, Objective::kMedian, OracleMethod::kExact);
  const double km1 = EstimateOptimum(x, 1, Objective::kMedian, OracleMethod::kExact).cost;
  const auto r = CheckCloseness(x, opt, km1, Objective::kMedian, Centers1D({0.2, 9.9}));
  EXPECT_TRUE(r.precondition);
  EXPECT_TRUE(r.match.matched);
}

TEST(StabilityReportTest, JsonFields) {
  const StabilityReport r = AuditStability(Line({0, 1, 10, 11}), 2, Objective::kMeans, OracleMethod::kExact);
  EXPECT_NEAR(r.phi_p, 1.0 / 101.0, 1e-12);
  const auto j = r.ToJson();
  EXPECT_EQ(j["method"], "exact-oracle");
  EXPECT_EQ(j["per_center_D"].size(), 2u);
  const StabilityReport dup = AuditStability(Line({2, 2, 2}), 2, Objective::kMeans, OracleMethod::kExact);
  EXPECT_TRUE(dup.degenerate);
}

TEST(ApproxRuleTest, BothConstantsExposed) {
  EXPECT_DOUBLE_EQ(ApproxStabilityFromSeparation(80, Objective::kMeans, SeparationToApproxRule::kGammaOver8), 9.0);
  EXPECT_DOUBLE_EQ(ApproxStabilityFromSeparation(80, Objective::kMeans, SeparationToApproxRule::kGammaOver4p), 9.0);
  EXPECT_DOUBLE_EQ(ApproxStabilityFromSeparation(80, Objective::kMedian, SeparationToApproxRule::kGammaOver4p), 19.0);
}

}  // namespace
}  // namespace stabclust
