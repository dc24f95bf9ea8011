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

#include "stabclust/private_kmedian.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "oracles.hpp"

namespace stabclust {
namespace {

std::vector<std::size_t> All(const Dataset& x) {
  std::vector<std::size_t> idx(x.size());
  std::iota(idx.begin(), idx.end(), 0);
  return idx;
}

TEST(DpOneMedianTest, EmptyInputGivesOriginAndFlag) {
  Rng rng(1, "median-empty");
  const Dataset x(3, 1.0);
  const DPMedianResult r = DpOneMedian(x, {}, {}, rng);
  EXPECT_TRUE(r.empty_input);
  EXPECT_EQ(r.center, Point(3, 0.0));
}

TEST(DpOneMedianTest, IdenticalPointsNoiseless) {
  Rng rng(2, "median-identical");
  const Dataset x = Dataset::FromRows(std::vector<Point>(20, Point{0.3, -0.2}), 1.0);
  DPConvexConfig cfg;
  cfg.pp = PrivacyParams::Noiseless();
  const Point c = DpOneMedian(x, All(x), cfg, rng).center;
  EXPECT_LT(Distance(c, Point{0.3, -0.2}), 1e-3);
}

TEST(DpOneMedianTest, SkewedLineNoiseless) {
  Rng rng(3, "median-line");
  const Dataset x = Dataset::FromRows({{0.0}, {1.0}, {100.0}}, 100.0);
  DPConvexConfig cfg;
  cfg.pp = PrivacyParams::Noiseless();
  EXPECT_NEAR(DpOneMedian(x, All(x), cfg, rng).center[0], 1.0, 0.01 * 100.0);
  cfg.steps = 100000;
  EXPECT_NEAR(DpOneMedian(x, All(x), cfg, rng).center[0], 1.0, 1e-2);
}

TEST(DpOneMedianTest, NoiselessMatchesWeiszfeld) {
  Rng rng(4, "median-weiszfeld");
  DPConvexConfig cfg;
  cfg.pp = PrivacyParams::Noiseless();
  cfg.steps = 20000;
  for (int t = 0; t < 100; ++t) {
    const Dataset x = oracle::RandomDataset(30, 1 + t % 4, 1.0, rng);
    const Point got = DpOneMedian(x, All(x), cfg, rng).center;
    if (x.dim() == 1) {
      // Even count: every point between the two middle values is a median.
      std::vector<double> v(x.coords());
      std::sort(v.begin(), v.end());
      const double lo = v[v.size() / 2 - 1], hi = v[v.size() / 2];
      EXPECT_LT(std::max({0.0, lo - got[0], got[0] - hi}), 1e-3) << "instance " << t;
      continue;
    }
    EXPECT_LT(Distance(got, ClusterMedian(x, All(x))), 1e-3) << "instance " << t;
  }
}

TEST(DpOneMedianTest, ExcessCostShape) {
  const double n = 1e4, d = 2, beta = 0.05, delta = 1e-5, eps = 1.0;
  const double bound = 50.0 * std::sqrt(d) * std::pow(std::log(n / (beta * delta)), 2) / eps;
  int good = 0;
  for (int t = 0; t < 100; ++t) {
    Rng rng(static_cast<std::uint64_t>(t), "median-excess");
    Dataset x(2, 1.0);
    for (int i = 0; i < 10000; ++i) x.Add(ClampToBall(Point{-0.5 + rng.Normal(0.05), rng.Normal(0.05)}, 1.0));
    const auto idx = All(x);
    DPConvexConfig cfg;
    cfg.steps = 200;
    cfg.pp = {eps, delta};
    const Point got = DpOneMedian(x, idx, cfg, rng).center;
    const double excess = SumOfDistances(x, idx, got) - SumOfDistances(x, idx, ClusterMedian(x, idx));
    if (excess <= bound) ++good;
  }
  EXPECT_GE(good, 90);
}

TEST(DpOneMedianTest, NoiseCalibration) {
  Rng rng(5, "median-sigma");
  const Dataset x = oracle::RandomDataset(100, 2, 1.0, rng);
  DPConvexConfig cfg;
  cfg.steps = 50;
  cfg.pp = {1.0, 1e-5};
  const DPMedianResult r = DpOneMedian(x, All(x), cfg, rng);
  EXPECT_NEAR(r.step_delta, 1e-5 / 100.0, 1e-20);
  EXPECT_NEAR(ComposeAdvanced(50, r.step_epsilon, r.step_delta, 5e-6).epsilon, 1.0, 1e-9);
  EXPECT_NEAR(r.sigma, GaussianSigma(2.0 / 100.0, {r.step_epsilon, r.step_delta}), 1e-15);
}

TEST(DefaultStepsTest, FloorAndCaps) {
  EXPECT_EQ(DefaultConvexSteps(3), 1000u);
  EXPECT_EQ(DefaultConvexSteps(100), 10000u);
  EXPECT_EQ(DefaultConvexSteps(1000), 20000u);
  EXPECT_EQ(DefaultConvexSteps(100000), 200u);
}

TEST(PrivateKMedianTest, FrozenNoiselessCost) {
  Rng rng(6, "kmedian-frozen");
  const Dataset x = Dataset::FromRows({{0.0}, {1.0}, {10.0}, {11.0}}, 11.0);
  PrivateKMedianConfig cfg;
  cfg.pp = PrivacyParams::Noiseless();
  cfg.subroutine = FixedSubroutine(CenterSet(std::vector<Point>{{0.5}, {10.5}}));
  const ClusteringOutcome out = PrivateStableKMedian(x, 2, cfg, rng);
  EXPECT_NEAR(out.exact_cost_chosen, 2.0, 1e-9);
  EXPECT_NEAR(Cost(x, out.candidate_chat, Objective::kMedian), 2.0, 1e-6);
}

TEST(PrivateKMedianTest, NoiselessGivesPartMedians) {
  Rng rng(7, "kmedian-medians");
  const Dataset x = oracle::TwoBlobs(200, 1, 0.5, 0.05, rng);
  PrivateKMedianConfig cfg;
  cfg.pp = PrivacyParams::Noiseless();
  cfg.median_steps = 20000;
  const ClusteringOutcome out = PrivateStableKMedian(x, 2, cfg, rng);
  const Partition part = PartitionByNearest(x, out.candidate_b, Objective::kMedian);
  for (std::size_t i = 0; i < 2; ++i) {
    const double want = SumOfDistances(x, part.members[i], ClusterMedian(x, part.members[i]));
    const double got = SumOfDistances(x, part.members[i], out.candidate_chat[i]);
    EXPECT_LE(got, want + 1e-3);
  }
  EXPECT_EQ(out.ToJson()["objective"], "p=1");
}

TEST(PrivateKMedianTest, LedgerIsKPlusTwo) {
  Rng rng(8, "kmedian-ledger");
  const Dataset x = oracle::TwoBlobs(300, 2, 0.5, 0.02, rng);
  PrivateKMedianConfig cfg;
  cfg.pp = {0.5, 1e-6};
  cfg.median_steps = 100;
  for (std::size_t k : {2u, 3u}) {
    const ClusteringOutcome out = PrivateStableKMedian(x, k, cfg, rng);
    const Budget total = ComposeSimple(out.ledger);
    EXPECT_EQ(out.ledger.size(), k + 2);
    EXPECT_NEAR(total.epsilon, 0.5 * static_cast<double>(k + 2), 1e-12);
    EXPECT_NEAR(total.delta, 1e-6 * static_cast<double>(k + 2), 1e-18);
  }
}

}  // namespace
}  // namespace stabclust
