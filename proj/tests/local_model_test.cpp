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

#include "stabclust/local_model.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <sstream>
#include <vector>

#include "oracles.hpp"
#include "stabclust/private_kmeans.hpp"

namespace stabclust {
namespace {

TEST(FrequencyOracleTest, NoiselessIsExact) {
  Rng rng(1, "freq-exact");
  const std::vector<std::size_t> values{0, 1, 1, 4, 4, 4};
  const auto f = LdpFrequencyOracle(values, 5, kInfinity, rng);
  EXPECT_EQ(f, (std::vector<double>{1, 2, 0, 0, 3}));
}

TEST(FrequencyOracleTest, ErrorWithinBound) {
  const std::size_t n = 100000;
  const double bound = FrequencyErrorBound(n, 1.0, 0.01);
  std::vector<std::size_t> values(n);
  std::vector<double> truth(5, 0.0);
  for (std::size_t u = 0; u < n; ++u) {
    values[u] = (u * 7) % 5 == 0 ? 0 : u % 5;
    truth[values[u]] += 1.0;
  }
  int good = 0;
  for (int t = 0; t < 100; ++t) {
    Rng rng(static_cast<std::uint64_t>(t), "freq-bound");
    const auto f = LdpFrequencyOracle(values, 5, 1.0, rng);
    double worst = 0.0;
    for (std::size_t s = 0; s < 5; ++s) worst = std::max(worst, std::fabs(f[s] - truth[s]));
    if (worst <= bound) ++good;
  }
  EXPECT_GE(good, 95);
}

TEST(FrequencyOracleTest, UnusedSymbolsNearZero) {
  Rng rng(2, "freq-same");
  const std::size_t n = 20000;
  const std::vector<std::size_t> values(n, 2);
  const auto f = LdpFrequencyOracle(values, 4, 1.0, rng);
  for (std::size_t s : {0u, 1u, 3u}) EXPECT_LT(std::fabs(f[s]), FrequencyErrorBound(n, 1.0, 0.01));
  EXPECT_NEAR(f[2], static_cast<double>(n), FrequencyErrorBound(n, 1.0, 0.01));
}

TEST(FrequencyOracleTest, Unbiased) {
  const std::vector<std::size_t> values{0, 0, 0, 1, 2, 2, 2, 2, 2, 2};
  const int runs = 10000;
  std::vector<double> sum(3, 0.0), sum2(3, 0.0);
  Rng rng(3, "freq-unbiased");
  for (int r = 0; r < runs; ++r) {
    Rng run = rng.Fork(static_cast<std::uint64_t>(r));
    const auto f = LdpFrequencyOracle(values, 3, 1.0, run);
    for (std::size_t s = 0; s < 3; ++s) {
      sum[s] += f[s];
      sum2[s] += f[s] * f[s];
    }
  }
  const std::vector<double> truth{3, 1, 6};
  for (std::size_t s = 0; s < 3; ++s) {
    const double mean = sum[s] / runs;
    const double se = std::sqrt((sum2[s] / runs - mean * mean) / runs);
    EXPECT_LT(std::fabs(mean - truth[s]), 3.0 * se) << "symbol " << s;
  }
}

TEST(FrequencyOracleTest, RejectsEmptyDomain) {
  Rng rng(4, "freq-empty");
  EXPECT_THROW(LdpFrequencyOracle(std::vector<std::size_t>{}, 0, 1.0, rng), Error);
}

TEST(VectorSumTest, SingleUserNoiseless) {
  Rng rng(5, "sum-one");
  const Dataset x = Dataset::FromRows({{0.3, -0.4}}, 1.0);
  LocalPopulation users(x);
  EXPECT_EQ(LdpVectorSum(users, PrivacyParams::Noiseless(), rng), (Point{0.3, -0.4}));
}

TEST(VectorSumTest, ErrorWithinBound) {
  const std::size_t n = 10000;
  const Dataset x = Dataset::FromRows(std::vector<Point>(n, Point{0.3, 0.4}), 1.0);
  const PrivacyParams pp{1.0, 1e-5};
  const double bound = VectorSumErrorBound(n, 2, 1.0, pp, 0.05);
  int good = 0;
  for (int t = 0; t < 100; ++t) {
    Rng rng(static_cast<std::uint64_t>(t), "sum-bound");
    LocalPopulation users(x);
    const Point s = LdpVectorSum(users, pp, rng);
    if (Distance(s, Point{0.3 * n, 0.4 * n}) <= bound) ++good;
  }
  EXPECT_GE(good, 95);
}

TEST(VectorSumTest, UsersNoiseIndependent) {
  const Dataset x = Dataset::FromRows({{0.0}, {0.0}}, 1.0);
  const int trials = 10000;
  double sa = 0, sb = 0, sab = 0, saa = 0, sbb = 0;
  for (int t = 0; t < trials; ++t) {
    Rng rng(static_cast<std::uint64_t>(t), "sum-corr");
    LocalPopulation users(x);
    std::vector<double> v;
    users.Round(
        rng, [](std::size_t, std::span<const double> p, Rng& r) { return GaussianRandomize(p, 1.0, r); },
        [&](std::span<const UserMessage> batch) {
          for (const UserMessage& m : batch) v.push_back(m.payload[0]);
        });
    sa += v[0];
    sb += v[1];
    sab += v[0] * v[1];
    saa += v[0] * v[0];
    sbb += v[1] * v[1];
  }
  const double ma = sa / trials, mb = sb / trials;
  const double corr = (sab / trials - ma * mb) / std::sqrt((saa / trials - ma * ma) * (sbb / trials - mb * mb));
  EXPECT_LT(std::fabs(corr), 4.0 / std::sqrt(trials));
}

TEST(LdpAvgTest, SingleRegionNoiselessIsMean) {
  Rng rng(6, "avg-one");
  const Dataset x = oracle::RandomDataset(200, 3, 1.0, rng);
  LocalPopulation users(x);
  const auto r = LdpAvg(users, VoronoiRegions(CenterSet(std::vector<Point>{{0.0, 0.0, 0.0}})),
                        PrivacyParams::Noiseless(), rng);
  const Point mean = ClusterMean(x);
  for (std::size_t d = 0; d < 3; ++d) EXPECT_NEAR(r.estimates[0][d], mean[d], 1e-12);
  EXPECT_DOUBLE_EQ(r.noisy_counts[0], 200.0);
}

TEST(LdpAvgTest, EmptyRegionFlagged) {
  Rng rng(7, "avg-empty");
  const Dataset x = Dataset::FromRows(std::vector<Point>(50, Point{0.5, 0.0}), 1.0);
  LocalPopulation users(x);
  const CenterSet anchors(std::vector<Point>{{0.5, 0.0}, {-0.5, 0.0}});
  const auto r = LdpAvg(users, BallRegions(anchors, {0.1, 0.1}), PrivacyParams::Noiseless(), rng);
  EXPECT_FALSE(r.flagged[0]);
  EXPECT_TRUE(r.flagged[1]);
  EXPECT_EQ(r.estimates[1], anchors[1]);
}

TEST(LdpAvgTest, TwoRegionsWithinClaimBound) {
  const std::size_t n = 100000;
  Rng data_rng(8, "avg-data");
  const Dataset x = oracle::TwoBlobs(n / 2, 2, 0.5, 0.05, data_rng);
  const CenterSet anchors(std::vector<Point>{{-0.5, 0.0}, {0.5, 0.0}});
  const RegionPartition regions = VoronoiRegions(anchors);
  const Partition truth = PartitionByNearest(x, anchors, Objective::kMeans);
  const PrivacyParams pp{1.0, 1e-5};
  int good = 0;
  for (int t = 0; t < 100; ++t) {
    Rng rng(static_cast<std::uint64_t>(t), "avg-bound");
    LocalPopulation users(x);
    const auto r = LdpAvg(users, regions, pp, rng);
    bool ok = true;
    for (std::size_t i = 0; i < 2; ++i) {
      const double count = static_cast<double>(truth.members[i].size());
      ASSERT_GE(count, LdpAvgReliableCount(n, 2, pp.epsilon, 0.05));
      const double err = Distance(r.estimates[i], ClusterMean(x, truth.members[i]));
      ok = ok && err <= LdpAvgErrorBound(n, 2, 2, 1.0, pp, 0.05, count);
    }
    if (ok) ++good;
  }
  EXPECT_GE(good, 90);
}

TEST(LdpAvgTest, ErrorScalesInverselyWithRegionCount) {
  const std::size_t n = 100000;
  const PrivacyParams pp{8.0, 1e-5};
  std::vector<double> log_r, log_err;
  for (std::size_t r_t : {1000u, 10000u, 100000u}) {
    Dataset x(2, 1.0);
    for (std::size_t u = 0; u < n; ++u) x.Add(Point{u < r_t ? 0.5 : -0.5, 0.0});
    const RegionPartition regions = BallRegions(CenterSet(std::vector<Point>{{0.5, 0.0}}), {0.1});
    double total = 0.0;
    const int trials = 20;
    for (int t = 0; t < trials; ++t) {
      Rng rng(static_cast<std::uint64_t>(t), "avg-slope");
      LocalPopulation users(x);
      total += Distance(LdpAvg(users, regions, pp, rng).estimates[0], Point{0.5, 0.0});
    }
    log_r.push_back(std::log(static_cast<double>(r_t)));
    log_err.push_back(std::log(total / trials));
  }
  const double mr = (log_r[0] + log_r[1] + log_r[2]) / 3, me = (log_err[0] + log_err[1] + log_err[2]) / 3;
  double num = 0, den = 0;
  for (std::size_t i = 0; i < 3; ++i) {
    num += (log_r[i] - mr) * (log_err[i] - me);
    den += (log_r[i] - mr) * (log_r[i] - mr);
  }
  EXPECT_NEAR(num / den, -1.0, 0.2);
}

TEST(LdpKMeansTest, NoiselessMatchesCentralized) {
  Rng rng(9, "ldp-noiseless");
  const Dataset x = oracle::TwoBlobs(2000, 2, 0.5, 0.02, rng);
  const CenterSet b(std::vector<Point>{{-0.45, 0.02}, {0.52, -0.01}});
  LocalPopulation users(x);
  LdpKMeansConfig lcfg;
  lcfg.pp = PrivacyParams::Noiseless();
  lcfg.subroutine = [&](LocalPopulation&, std::size_t, const PrivacyParams&, Rng&) { return b; };
  const ClusteringOutcome local = LdpStableKMeans(users, 2, lcfg, rng);
  PrivateKMeansConfig ccfg;
  ccfg.pp = PrivacyParams::Noiseless();
  ccfg.subroutine = FixedSubroutine(b);
  const ClusteringOutcome central = PrivateStableKMeans(x, 2, ccfg, rng);
  for (std::size_t i = 0; i < 2; ++i) {
    for (std::size_t d = 0; d < 2; ++d) EXPECT_NEAR(local.chosen[i][d], central.chosen[i][d], 1e-9);
  }
}

TEST(LdpKMeansTest, GridSubroutineFindsBlobsNoiseless) {
  Rng rng(10, "ldp-grid");
  const Dataset x = oracle::TwoBlobs(2000, 2, 0.5, 0.01, rng);
  LocalPopulation users(x);
  const CenterSet c = LdpGridSubroutine(users, 2, PrivacyParams::Noiseless(), rng);
  const CenterSet want(std::vector<Point>{ClusterMean(x.Subset(std::vector<std::size_t>{0})), {0.5, 0.0}});
  EXPECT_LT(Wasserstein(c, CenterSet(std::vector<Point>{{-0.5, 0.0}, {0.5, 0.0}})), 0.05);
}

TEST(LdpKMeansTest, CostShapeAndLedger) {
  const std::size_t n = 100000;
  const double k = 2, d = 2, beta = 0.05, delta = 1e-5, eps = 1.0;
  const double additive =
      200.0 * k * std::sqrt(d * static_cast<double>(n)) * std::log(d * k / (beta * delta)) / eps;
  int good = 0;
  const int trials = 10;
  for (int t = 0; t < trials; ++t) {
    Rng rng(static_cast<std::uint64_t>(t), "ldp-shape");
    const Dataset x = oracle::TwoBlobs(n / 2, 2, 0.5, 0.01, rng);
    const double opt = Cost(x, KMeansPPLloyd(x, 2, Objective::kMeans, 5, t), Objective::kMeans);
    LocalPopulation users(x);
    LdpKMeansConfig cfg;
    cfg.pp = {eps, delta};
    const ClusteringOutcome out = LdpStableKMeans(users, 2, cfg, rng);
    if (out.exact_cost_chosen <= 1.05 * opt + additive) ++good;
    EXPECT_NEAR(ComposeSimple(out.ledger).epsilon, 4.0 * eps, 1e-12);
  }
  EXPECT_GE(good, 9);
}

TEST(LdpKMeansTest, TranscriptCoversEveryRound) {
  Rng rng(11, "ldp-transcript");
  const Dataset x = oracle::TwoBlobs(100, 2, 0.5, 0.01, rng);
  std::ostringstream jsonl;
  const TranscriptSink sink = JsonlTranscript(jsonl);
  LocalPopulation users(x, &sink);
  const ClusteringOutcome out = LdpStableKMeans(users, 2, {}, rng);
  const int rounds = out.extra["rounds"];
  std::istringstream in(jsonl.str());
  std::string line;
  std::vector<int> per_round(static_cast<std::size_t>(rounds), 0);
  while (std::getline(in, line)) {
    const auto j = nlohmann::json::parse(line);
    ++per_round[j["round"].get<std::size_t>()];
  }
  // Subroutine: cells + sums + counts; then sums + counts; then two costs.
  EXPECT_EQ(rounds, 7);
  for (int c : per_round) EXPECT_EQ(c, 200);
}

}  // namespace
}  // namespace stabclust
