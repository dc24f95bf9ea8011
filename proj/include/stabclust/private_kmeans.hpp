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

// Centralized private k-means for well separated data. A private k-means
// routine proposes centers B; each b_i keeps only the points within a third
// of the distance to its nearest other proposal, those sets are averaged
// with noise into C-hat, and noisy costs pick between B and C-hat.

#ifndef STABCLUST_PRIVATE_KMEANS_HPP_
#define STABCLUST_PRIVATE_KMEANS_HPP_

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "stabclust/convex.hpp"
#include "stabclust/error.hpp"
#include "stabclust/geometry.hpp"
#include "stabclust/mechanisms.hpp"
#include "stabclust/outcome.hpp"
#include "stabclust/rng.hpp"

namespace stabclust {

// A noisy histogram over the occupied cells of a randomly shifted grid.
struct GridHistogram {
  double width = 0.0;
  Point shift;
  std::vector<Point> cell_centers;  // released cells, heaviest first
  std::vector<double> noisy_counts;
};

// Releases occupied cells whose noisy count clears the threshold
// 1 + (2/eps) ln(2/delta); counts get Laplace(2/eps) noise (a replaced
// point moves two counts by one). Cells are visited in key order.
inline GridHistogram StableGridHistogram(const Dataset& data, double width, const PrivacyParams& pp,
                                         Rng& rng) {
  Require(width > 0.0, ErrorCode::kInvalidArgument, "grid width must be positive");
  const std::size_t dim = data.dim();
  GridHistogram h;
  h.width = width;
  h.shift.resize(dim);
  for (double& s : h.shift) s = rng.Uniform() * width;
  std::map<std::vector<long long>, std::size_t> counts;
  std::vector<long long> key(dim);
  for (std::size_t i = 0; i < data.size(); ++i) {
    const auto p = data.point(i);
    for (std::size_t d = 0; d < dim; ++d) key[d] = static_cast<long long>(std::floor((p[d] + h.shift[d]) / width));
    ++counts[key];
  }
  const double scale = LaplaceScale(2.0, pp);
  const double threshold =
      pp.noiseless() ? 1.0 : 1.0 + scale * std::log(2.0 / std::max(pp.delta, 1e-300));
  std::vector<std::pair<double, Point>> released;
  for (const auto& [cell, count] : counts) {
    const double noisy = static_cast<double>(count) + rng.Laplace(scale);
    if (noisy < threshold) continue;
    Point c(dim);
    for (std::size_t d = 0; d < dim; ++d) c[d] = (static_cast<double>(cell[d]) + 0.5) * width - h.shift[d];
    released.emplace_back(noisy, ClampToBall(c, data.radius()));
  }
  std::stable_sort(released.begin(), released.end(),
                   [](const auto& a, const auto& b) { return a.first > b.first; });
  for (auto& [count, c] : released) {
    h.noisy_counts.push_back(count);
    h.cell_centers.push_back(std::move(c));
  }
  return h;
}

// Weighted ++ seeding with weighted Lloyd over the heaviest released cells;
// pads with data-independent uniform points when fewer than k cells exist.
inline CenterSet SeedFromHistogram(const GridHistogram& h, std::size_t k, std::size_t dim,
                                   double radius, std::size_t max_cells, Rng& rng) {
  std::vector<Point> centers;
  const std::size_t m = std::min(max_cells, h.cell_centers.size());
  if (m > 0) {
    const std::vector<Point> cells(h.cell_centers.begin(), h.cell_centers.begin() + static_cast<long>(m));
    const std::vector<double> weights(h.noisy_counts.begin(), h.noisy_counts.begin() + static_cast<long>(m));
    Rng seeding = rng.Fork("seeding");
    centers = WeightedKMeansPP(Dataset::FromRows(dim, cells, radius * (1.0 + 1e-9)), weights, k, 10, seeding)
                  .centers();
  }
  Rng pad = rng.Fork("padding");
  while (centers.size() < k) {
    Point p(dim);
    for (double& v : p) v = (2.0 * pad.Uniform() - 1.0) * radius / std::sqrt(static_cast<double>(dim));
    centers.push_back(std::move(p));
  }
  return CenterSet(std::move(centers), k, "grid_seed");
}

struct NoisyLloydOptions {
  Objective obj = Objective::kMeans;
  double beta = 0.05;
  std::size_t median_steps = 256;  // p = 1 only
};

// Partition by nearest center, then recenter each cluster with a private
// mean (p = 2) or private 1-median (p = 1). Clusters are disjoint, so the
// whole step is one (eps, delta) application. Empty or too-small clusters
// keep their center.
inline CenterSet NoisyLloydStep(const Dataset& data, const CenterSet& centers, const PrivacyParams& pp,
                                Rng& rng, const NoisyLloydOptions& opt = {},
                                BudgetLedger* ledger = nullptr, const std::string& label = "noisy_lloyd") {
  const Partition part = PartitionByNearest(data, centers, opt.obj);
  std::vector<Point> next = centers.centers();
  for (std::size_t j = 0; j < centers.size(); ++j) {
    Rng local = rng.Fork(static_cast<std::uint64_t>(j));
    if (opt.obj == Objective::kMeans) {
      const NoisyAverageResult r = NoisyAverage(data, part.members[j], pp, local, {opt.beta, centers.size()});
      if (!r.small_cluster) next[j] = r.center;
    } else {
      if (part.members[j].empty()) continue;
      DPConvexConfig cfg;
      cfg.steps = opt.median_steps;
      cfg.pp = pp;
      cfg.beta = opt.beta / static_cast<double>(centers.size());
      next[j] = DpOneMedian(data, part.members[j], cfg, local).center;
    }
  }
  if (ledger) ledger->Record(label, pp, opt.obj == Objective::kMeans ? "gaussian+laplace" : "gaussian");
  return CenterSet(std::move(next), centers.k(), "noisy_lloyd_step");
}

inline constexpr int kBaselineLloydSteps = 5;

// Simple (eps, delta)-DP k-clustering: a stable grid histogram at
// (eps/2, delta/2), weighted ++ seeding over the k ceil(ln n) heaviest
// cells, then five noisy Lloyd steps at (eps/10, delta/10) each. Claims no
// worst-case approximation factor.
inline CenterSet DefaultPrivateBaseline(const Dataset& data, std::size_t k, const PrivacyParams& pp,
                                        Rng& rng, Objective obj = Objective::kMeans,
                                        BudgetLedger* ledger = nullptr) {
  Require(k >= 1, ErrorCode::kInvalidArgument, "k must be >= 1");
  const std::size_t n = std::max<std::size_t>(data.size(), 1);
  const std::size_t dim = data.dim();
  // n^(1/(2 max(d,2))) cells per radius: coarse enough that a cluster of
  // size ~n/k fills few cells above the release threshold.
  const double per_axis = std::ceil(
      std::pow(static_cast<double>(n), 1.0 / (2.0 * static_cast<double>(std::max<std::size_t>(dim, 2)))));
  const double width = data.radius() / std::max(per_axis, 1.0);

  const PrivacyParams hist_pp = pp.noiseless() ? pp : pp.Scaled(0.5);
  Rng hist_rng = rng.Fork("histogram");
  const GridHistogram h = StableGridHistogram(data, width, hist_pp, hist_rng);
  if (ledger) ledger->Record("baseline/histogram", hist_pp, "laplace-stability-histogram");

  const std::size_t max_cells =
      k * static_cast<std::size_t>(std::max(1.0, std::ceil(std::log(static_cast<double>(n)))));
  Rng seed_rng = rng.Fork("seed");
  CenterSet centers = SeedFromHistogram(h, k, dim, data.radius(), max_cells, seed_rng);

  const PrivacyParams step_pp = pp.noiseless() ? pp : pp.Scaled(1.0 / (2.0 * kBaselineLloydSteps));
  NoisyLloydOptions opt;
  opt.obj = obj;
  for (int s = 0; s < kBaselineLloydSteps; ++s) {
    Rng step_rng = rng.Fork("lloyd/" + std::to_string(s));
    centers = NoisyLloydStep(data, centers, step_pp, step_rng, opt, ledger,
                             "baseline/lloyd_" + std::to_string(s + 1));
  }
  centers.set_provenance(obj == Objective::kMeans ? "default_private_baseline"
                                                  : "default_private_baseline_p1");
  return centers;
}

inline PrivateSubroutine BaselineSubroutine(Objective obj = Objective::kMeans) {
  return [obj](const Dataset& data, std::size_t k, const PrivacyParams& pp, Rng& rng) {
    return DefaultPrivateBaseline(data, k, pp, rng, obj);
  };
}

// For tests: ignores the data and returns fixed centers.
inline PrivateSubroutine FixedSubroutine(CenterSet centers) {
  return [c = std::move(centers)](const Dataset&, std::size_t, const PrivacyParams&, Rng&) { return c; };
}

struct ConfidentSets {
  std::vector<double> d_hat;
  std::vector<std::vector<std::size_t>> members;
};

// X-hat_i = {x : ||x - b_i|| <= D-hat_i / 3}. The balls are disjoint, so a
// point can only belong to the set of its nearest proposal. A single
// proposal (k = 1) keeps every point; D-hat_i = 0 gives an empty set.
inline ConfidentSets ComputeConfidentSets(const Dataset& data, const CenterSet& b) {
  ConfidentSets out;
  out.d_hat = NearestOtherCenterDistances(b);
  out.members.assign(b.size(), {});
  for (std::size_t x = 0; x < data.size(); ++x) {
    const auto [i, sq] = NearestCenter(data.point(x), b);
    if (b.size() == 1) {
      out.members[0].push_back(x);
      continue;
    }
    const double limit = out.d_hat[i] / 3.0;
    if (out.d_hat[i] > 0.0 && std::sqrt(sq) <= limit) out.members[i].push_back(x);
  }
  return out;
}

struct PrivateKMeansConfig {
  PrivacyParams pp{1.0, 1e-5};  // spent by each of the four mechanisms
  double beta = 0.05;
  PrivateSubroutine subroutine;  // empty selects the default baseline
  bool do_final_noisy_lloyd = false;
};

// Selection: C-hat wins ties.
inline bool PreferChat(double noisy_chat, double noisy_b) { return noisy_chat <= noisy_b; }

inline ClusteringOutcome PrivateStableKMeans(const Dataset& data, std::size_t k,
                                             const PrivateKMeansConfig& cfg, Rng& rng) {
  Require(!data.empty(), ErrorCode::kEmptyInput, "private k-means needs n >= 1");
  Require(k >= 1, ErrorCode::kInvalidArgument, "k must be >= 1");
  ClusteringOutcome out;
  out.p = 2;

  const PrivateSubroutine sub = cfg.subroutine ? cfg.subroutine : BaselineSubroutine(Objective::kMeans);
  Rng sub_rng = rng.Fork("subroutine");
  try {
    out.candidate_b = sub(data, k, cfg.pp, sub_rng);
  } catch (const Error& e) {
    throw Error(e.code(), std::string("private k-means subroutine failed: ") + e.what());
  }
  Require(out.candidate_b.dim() == data.dim(), ErrorCode::kDimensionMismatch,
          "subroutine returned centers of the wrong dimension");
  out.ledger.Record("subroutine", cfg.pp, "subroutine");

  const ConfidentSets sets = ComputeConfidentSets(data, out.candidate_b);
  std::vector<Point> chat;
  Rng avg_rng = rng.Fork("averages");
  for (std::size_t i = 0; i < out.candidate_b.size(); ++i) {
    Rng local = avg_rng.Fork(static_cast<std::uint64_t>(i));
    const NoisyAverageResult r =
        NoisyAverage(data, sets.members[i], cfg.pp, local, {cfg.beta, out.candidate_b.size()});
    chat.push_back(r.small_cluster ? out.candidate_b[i] : r.center);
    out.diagnostics.push_back({sets.d_hat[i], sets.members[i].size(), r.small_cluster, r.noisy_count,
                               r.noise_norm});
  }
  out.ledger.Record("confident_averages", cfg.pp, "gaussian+laplace");
  out.candidate_chat = CenterSet(std::move(chat), k, "confident_averages");

  Rng cost_rng = rng.Fork("costs");
  const NoisyCostResult cost_chat =
      NoisyCost(data, out.candidate_chat, Objective::kMeans, cfg.pp, cost_rng, &out.ledger, "cost_C_hat");
  const NoisyCostResult cost_b =
      NoisyCost(data, out.candidate_b, Objective::kMeans, cfg.pp, cost_rng, &out.ledger, "cost_B");
  out.noisy_cost_chat = cost_chat.value;
  out.noisy_cost_b = cost_b.value;
  out.exact_cost_chat = cost_chat.exact;
  out.exact_cost_b = cost_b.exact;
  out.chose_chat = PreferChat(cost_chat.value, cost_b.value);
  out.chosen = out.chose_chat ? out.candidate_chat : out.candidate_b;

  if (cfg.do_final_noisy_lloyd) {
    Rng lloyd_rng = rng.Fork("final_lloyd");
    out.chosen = NoisyLloydStep(data, out.chosen, cfg.pp, lloyd_rng, {Objective::kMeans, cfg.beta}, &out.ledger,
                                "final_noisy_lloyd");
    out.final_lloyd_applied = true;
  }
  out.chosen.set_provenance(out.final_lloyd_applied ? "private_stable_kmeans+lloyd"
                                                    : (out.chose_chat ? "private_stable_kmeans/C_hat"
                                                                      : "private_stable_kmeans/B"));
  out.exact_cost_chosen = Cost(data, out.chosen, Objective::kMeans);
  out.ledger.Close();
  return out;
}

}  // namespace stabclust

#endif  // STABCLUST_PRIVATE_KMEANS_HPP_
