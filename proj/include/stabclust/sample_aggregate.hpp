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

// Sample-and-aggregate k-means: cluster T small subsamples non-privately,
// snap the k T proposed centers to a fine grid, privately peel off k dense
// balls from that candidate cloud, then average the confident sets.

#ifndef STABCLUST_SAMPLE_AGGREGATE_HPP_
#define STABCLUST_SAMPLE_AGGREGATE_HPP_

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <nlohmann/json.hpp>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "stabclust/error.hpp"
#include "stabclust/geometry.hpp"
#include "stabclust/mechanisms.hpp"
#include "stabclust/outcome.hpp"
#include "stabclust/private_kmeans.hpp"
#include "stabclust/rng.hpp"
#include "stabclust/stability.hpp"

namespace stabclust {

struct SampleAggregateConfig {
  std::size_t subsamples = 100;   // T
  std::size_t subsample_size = 0; // m; 0 selects n / (2T)
  double grid_step = 0.0;         // 0 selects radius / (n d)
  PrivacyParams pp{1.0, 1e-5};
  double beta = 0.05;
  double target_fraction = 0.9;   // each ball targets ceil(0.9 T) candidates
  int subsample_restarts = 3;
};

inline std::vector<Dataset> SubsampleWithReplacement(const Dataset& data, std::size_t count, std::size_t size,
                                                     Rng& rng) {
  Require(!data.empty(), ErrorCode::kEmptyInput, "cannot subsample an empty dataset");
  std::vector<Dataset> out;
  out.reserve(count);
  for (std::size_t t = 0; t < count; ++t) {
    Rng local = rng.Fork(static_cast<std::uint64_t>(t));
    Dataset s(data.dim(), data.radius());
    s.Reserve(size);
    for (std::size_t i = 0; i < size; ++i) s.Add(data.point(local.Below(data.size())));
    out.push_back(std::move(s));
  }
  return out;
}

// Nearest multiple of `step` per coordinate; exact halves go to the lower one.
inline double SnapCoordinate(double v, double step) {
  const double q = v / step;
  const double f = std::floor(q);
  return (q - f > 0.5 ? f + 1.0 : f) * step;
}

inline CenterSet SnapToGrid(const CenterSet& centers, double step) {
  Require(step > 0.0, ErrorCode::kInvalidArgument, "grid step must be positive");
  std::vector<Point> out = centers.centers();
  for (Point& c : out) {
    for (double& v : c) v = SnapCoordinate(v, step);
  }
  return CenterSet(std::move(out), centers.k(), "grid_snapped");
}

namespace sa_detail {

struct CellHash {
  std::size_t operator()(const std::vector<long long>& key) const {
    std::uint64_t h = 0x243f6a8885a308d3ULL;
    for (long long v : key) h = Mix64(h ^ static_cast<std::uint64_t>(v));
    return static_cast<std::size_t>(h);
  }
};

using CellMap = std::unordered_map<std::vector<long long>, std::vector<std::size_t>, CellHash>;

inline CellMap BucketByCell(const std::vector<Point>& pts, std::span<const std::size_t> live, double width,
                            const Point& shift) {
  CellMap cells;
  std::vector<long long> key(shift.size());
  for (std::size_t i : live) {
    for (std::size_t d = 0; d < key.size(); ++d) key[d] = static_cast<long long>(std::floor((pts[i][d] + shift[d]) / width));
    cells[key].push_back(i);
  }
  return cells;
}

}  // namespace sa_detail

struct OneClusterResult {
  bool found = false;
  Point center;
  double radius = 0.0;
  double covered = 0.0;      // noisy count of the selected cell
  double cell_width = 0.0;
  std::size_t level = 0;
  std::size_t levels = 0;
  double margin = 0.0;       // Delta_sub: accepted counts are >= t - margin w.h.p.

  nlohmann::json ToJson() const {
    return {{"found", found},   {"center", center}, {"radius", radius}, {"covered", covered},
            {"cell_width", cell_width}, {"level", level}, {"margin", margin}};
  }
};

// Substitute 1-cluster routine over candidate points (indices `live` into
// `pts`). Budget thirds: a sparse-vector sweep over cell widths
// radius 2^-j from the finest level up, stopping at the first level whose
// max cell count clears t - margin; a stability histogram at that level
// picks the heaviest cell; a Gaussian average of offsets from the cell center
// gives the ball center. Reported radius is 2 width sqrt(d). The sweep
// threshold is raised to the histogram's release level when that is larger.
inline OneClusterResult PrivateOneCluster(const std::vector<Point>& pts, std::span<const std::size_t> live,
                                          std::size_t dim, double radius, std::size_t target, double min_step,
                                          const PrivacyParams& pp, double beta, Rng& rng) {
  Require(target >= 1, ErrorCode::kInvalidArgument, "1-cluster target must be >= 1");
  Require(min_step > 0.0, ErrorCode::kInvalidArgument, "1-cluster grid step must be positive");
  OneClusterResult out;
  const double n = static_cast<double>(std::max<std::size_t>(live.size(), 1));
  out.levels = static_cast<std::size_t>(std::clamp(std::ceil(std::log2(n * radius / min_step)), 0.0, 60.0)) + 1;
  const bool exact = pp.noiseless();
  const double eps_sweep = pp.epsilon / 3.0;
  const PrivacyParams hist_pp = exact ? pp : PrivacyParams(pp.epsilon / 3.0, pp.delta / 2.0);
  const PrivacyParams avg_pp = hist_pp;
  // Sparse-vector accuracy over `levels` queries of sensitivity 1.
  out.margin = exact ? 0.0 : 8.0 * (std::log(static_cast<double>(out.levels)) + std::log(2.0 / beta)) / eps_sweep;
  // The accepted level must also carry a cell the histogram can release.
  const double hist_scale = LaplaceScale(2.0, hist_pp);
  const double release = exact ? 1.0 : 1.0 + hist_scale * std::log(2.0 / hist_pp.delta);
  const double threshold =
      std::max(static_cast<double>(target) - out.margin, exact ? 1.0 : release + hist_scale * std::log(2.0 / beta));
  Rng sweep_rng = rng.Fork("sweep");
  const double noisy_threshold = threshold + (exact ? 0.0 : sweep_rng.Laplace(2.0 / eps_sweep));

  std::optional<std::size_t> accepted;
  Point shift(dim);
  for (std::size_t step = 0; step < out.levels; ++step) {
    const std::size_t j = out.levels - 1 - step;  // finest first
    const double width = radius * std::ldexp(1.0, -static_cast<int>(j));
    Rng level_rng = rng.Fork(static_cast<std::uint64_t>(j));
    for (double& s : shift) s = level_rng.Uniform() * width;
    const sa_detail::CellMap cells = sa_detail::BucketByCell(pts, live, width, shift);
    std::size_t best = 0;
    for (const auto& [key, members] : cells) best = std::max(best, members.size());
    const double noisy = static_cast<double>(best) + (exact ? 0.0 : sweep_rng.Laplace(4.0 / eps_sweep));
    if (noisy >= noisy_threshold) {
      accepted = j;
      break;
    }
  }
  if (!accepted) return out;

  out.level = *accepted;
  out.cell_width = radius * std::ldexp(1.0, -static_cast<int>(out.level));
  Rng level_rng = rng.Fork(static_cast<std::uint64_t>(out.level));
  for (double& s : shift) s = level_rng.Uniform() * out.cell_width;
  const sa_detail::CellMap cells = sa_detail::BucketByCell(pts, live, out.cell_width, shift);

  Rng hist_rng = rng.Fork("histogram");
  std::vector<std::pair<std::vector<long long>, const std::vector<std::size_t>*>> ordered;
  for (const auto& [key, members] : cells) ordered.emplace_back(key, &members);
  std::sort(ordered.begin(), ordered.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  const std::vector<std::size_t>* chosen = nullptr;
  std::vector<long long> chosen_key;
  double chosen_count = -kInfinity;
  for (const auto& [key, members] : ordered) {
    const double noisy = static_cast<double>(members->size()) + (exact ? 0.0 : hist_rng.Laplace(hist_scale));
    if (noisy >= release && noisy > chosen_count) {
      chosen_count = noisy;
      chosen = members;
      chosen_key = key;
    }
  }
  if (!chosen) return out;

  Point cell_center(dim);
  for (std::size_t d = 0; d < dim; ++d) {
    cell_center[d] = (static_cast<double>(chosen_key[d]) + 0.5) * out.cell_width - shift[d];
  }
  // Offsets from the cell center have norm <= width sqrt(d) / 2, so
  // replacing one candidate moves the sum by at most width sqrt(d).
  const double sens = out.cell_width * std::sqrt(static_cast<double>(dim));
  Rng avg_rng = rng.Fork("average");
  const double sigma = GaussianSigma(sens, avg_pp);
  Point offset(dim, 0.0);
  for (std::size_t i : *chosen) {
    for (std::size_t d = 0; d < dim; ++d) offset[d] += pts[i][d] - cell_center[d];
  }
  for (double& v : offset) v = (v + avg_rng.Normal(sigma)) / std::max(chosen_count, 1.0);
  Point center(dim);
  for (std::size_t d = 0; d < dim; ++d) center[d] = cell_center[d] + offset[d];
  out.center = ClampToBall(center, radius);
  out.radius = 2.0 * sens;
  out.covered = chosen_count;
  out.found = true;
  return out;
}

// Budget of each 1-cluster call: (eps / (2k sqrt(2k ln(2/delta))),
// delta / (2 k^2 e^eps)).
inline PrivacyParams OneClusterCallBudget(const PrivacyParams& pp, std::size_t k) {
  if (pp.noiseless()) return pp;
  const double kk = static_cast<double>(k);
  return {pp.epsilon / (2.0 * kk * std::sqrt(2.0 * kk * std::log(2.0 / pp.delta))),
          pp.delta / (2.0 * kk * kk * std::exp(pp.epsilon))};
}

// k calls through advanced composition with delta' = delta / (2k e^eps),
// then group privacy over the k candidates one row can move.
inline Budget CandidateAggregationBudget(const PrivacyParams& pp, std::size_t k) {
  if (pp.noiseless()) return {kInfinity, 0.0};
  const PrivacyParams call = OneClusterCallBudget(pp, k);
  const double delta_prime = pp.delta / (2.0 * static_cast<double>(k) * std::exp(pp.epsilon));
  const Budget composed = ComposeAdvanced(k, call.epsilon, call.delta, delta_prime);
  return GroupPrivacy(composed, k);
}

struct PeelResult {
  CenterSet centers;
  std::vector<OneClusterResult> rounds;
  std::size_t deleted = 0;
  bool shortfall = false;
};

// k rounds of {1-cluster, delete the T closest live candidates}.
inline PeelResult PeelDenseBalls(const std::vector<Point>& candidates, std::size_t dim, double radius, std::size_t k,
                                 std::size_t per_round, std::size_t target, double min_step,
                                 const PrivacyParams& call_pp, double beta, Rng& rng) {
  PeelResult out;
  std::vector<std::size_t> live(candidates.size());
  std::iota(live.begin(), live.end(), 0);
  std::vector<Point> found;
  for (std::size_t j = 0; j < k; ++j) {
    Rng round_rng = rng.Fork(static_cast<std::uint64_t>(j));
    OneClusterResult r =
        PrivateOneCluster(candidates, live, dim, radius, target, min_step, call_pp, beta / static_cast<double>(k), round_rng);
    if (!r.found) {
      throw Error(ErrorCode::kAlgorithmFailure, "1-cluster search failed in round " + std::to_string(j + 1) + " of " +
                                                    std::to_string(k));
    }
    const std::size_t remove = std::min(per_round, live.size());
    if (remove < per_round) out.shortfall = true;
    std::vector<std::pair<double, std::size_t>> by_dist;
    by_dist.reserve(live.size());
    for (std::size_t i : live) by_dist.emplace_back(SquaredDistance(candidates[i], r.center), i);
    std::nth_element(by_dist.begin(), by_dist.begin() + static_cast<long>(remove), by_dist.end());
    std::vector<std::size_t> keep;
    for (std::size_t q = remove; q < by_dist.size(); ++q) keep.push_back(by_dist[q].second);
    std::sort(keep.begin(), keep.end());
    live = std::move(keep);
    out.deleted += remove;
    found.push_back(r.center);
    out.rounds.push_back(std::move(r));
  }
  out.centers = CenterSet(std::move(found), k, "dense_balls");
  return out;
}

// Non-private per-subsample clustering, snapped to the grid.
inline std::vector<CenterSet> SubsampleCandidates(const std::vector<Dataset>& subsamples, std::size_t k, double step,
                                                  int restarts, Rng& rng) {
  std::vector<CenterSet> out;
  out.reserve(subsamples.size());
  for (std::size_t t = 0; t < subsamples.size(); ++t) {
    Rng local = rng.Fork(static_cast<std::uint64_t>(t));
    out.push_back(SnapToGrid(KMeansPPLloyd(subsamples[t], k, Objective::kMeans, restarts, local()), step));
  }
  return out;
}

// Outputs C-hat directly (no selection against B). Ledger: the candidate
// aggregation phase (k 1-cluster calls, composed) and one entry for the
// confident averages.
inline ClusteringOutcome SampleAggregateKMeans(const Dataset& data, std::size_t k, const SampleAggregateConfig& cfg,
                                               Rng& rng) {
  Require(k >= 1, ErrorCode::kInvalidArgument, "k must be >= 1");
  Require(cfg.subsamples >= 1, ErrorCode::kInvalidArgument, "need T >= 1 subsamples");
  const std::size_t n = data.size();
  const std::size_t t_count = cfg.subsamples;
  const std::size_t m = cfg.subsample_size ? cfg.subsample_size : n / (2 * t_count);
  Require(m >= 1 && 2 * t_count * m <= n, ErrorCode::kInvalidArgument,
          "sample-aggregate needs T m <= n / 2 with m >= 1 (n = " + std::to_string(n) + ", T = " +
              std::to_string(t_count) + ", m = " + std::to_string(m) + ")");
  const double step = cfg.grid_step > 0.0 ? cfg.grid_step
                                          : data.radius() / (static_cast<double>(n) * static_cast<double>(data.dim()));

  ClusteringOutcome out;
  out.p = 2;
  out.has_selection = false;

  Rng sample_rng = rng.Fork("subsample");
  const std::vector<Dataset> subsamples = SubsampleWithReplacement(data, t_count, m, sample_rng);
  Rng cluster_rng = rng.Fork("cluster");
  const std::vector<CenterSet> per_sample =
      SubsampleCandidates(subsamples, k, step, cfg.subsample_restarts, cluster_rng);
  std::vector<Point> candidates;
  candidates.reserve(t_count * k);
  for (const CenterSet& c : per_sample) candidates.insert(candidates.end(), c.begin(), c.end());

  const PrivacyParams call_pp = OneClusterCallBudget(cfg.pp, k);
  const std::size_t target = static_cast<std::size_t>(std::ceil(cfg.target_fraction * static_cast<double>(t_count)));
  Rng peel_rng = rng.Fork("peel");
  PeelResult peel = PeelDenseBalls(candidates, data.dim(), data.radius(), k, t_count, target, step, call_pp,
                                   cfg.beta, peel_rng);
  out.candidate_b = peel.centers;

  const Budget aggregation = CandidateAggregationBudget(cfg.pp, k);
  out.ledger.Record("candidate_aggregation", aggregation.epsilon, aggregation.delta, "1-cluster x k (advanced+group)");

  const ConfidentSets sets = ComputeConfidentSets(data, out.candidate_b);
  std::vector<Point> chat;
  Rng avg_rng = rng.Fork("averages");
  for (std::size_t i = 0; i < out.candidate_b.size(); ++i) {
    Rng local = avg_rng.Fork(static_cast<std::uint64_t>(i));
    const NoisyAverageResult r =
        NoisyAverage(data, sets.members[i], cfg.pp, local, {cfg.beta, out.candidate_b.size()});
    chat.push_back(r.small_cluster ? out.candidate_b[i] : r.center);
    out.diagnostics.push_back({sets.d_hat[i], sets.members[i].size(), r.small_cluster, r.noisy_count, r.noise_norm});
  }
  out.ledger.Record("confident_averages", cfg.pp, "gaussian+laplace");
  out.candidate_chat = CenterSet(std::move(chat), k, "sample_aggregate");
  out.chosen = out.candidate_chat;
  out.chose_chat = true;
  out.exact_cost_b = Cost(data, out.candidate_b, Objective::kMeans);
  out.exact_cost_chat = Cost(data, out.candidate_chat, Objective::kMeans);
  out.exact_cost_chosen = out.exact_cost_chat;

  nlohmann::json rounds = nlohmann::json::array();
  for (const OneClusterResult& r : peel.rounds) rounds.push_back(r.ToJson());
  out.extra["one_cluster_rounds"] = rounds;
  out.extra["candidates"] = candidates.size();
  out.extra["deleted"] = peel.deleted;
  out.extra["shortfall"] = peel.shortfall;
  out.extra["T"] = t_count;
  out.extra["m"] = m;
  out.extra["call_budget"] = {{"epsilon", JsonNumber(call_pp.epsilon)}, {"delta", JsonNumber(call_pp.delta)}};
  const bool within = aggregation.epsilon <= cfg.pp.epsilon && aggregation.delta <= cfg.pp.delta;
  out.extra["aggregation_within_budget"] = within;
  if (!cfg.pp.noiseless() && aggregation.epsilon <= 1.0) {
    const Budget amplified = AmplifyBySampling(aggregation, t_count * m, n);
    out.extra["amplified_aggregation"] = {{"epsilon", amplified.epsilon}, {"delta", amplified.delta}};
  }
  out.ledger.Close();
  return out;
}

// ---- event checks for the subsampling analysis ----

struct EventReport {
  double e1_pass = 0.0;  // fraction of subsamples passing every probe
  double e2_pass = 0.0;
  double e3_pass = 0.0;
  bool precondition = false;  // OPT_k >= 100 (n/m) radius^2 k d ln(2ndT/beta)
  double opt_k = 0.0;
  double phi_p = 0.0;
  double worst_e1_ratio = 0.0;  // max |difference| / Delta(C)

  bool e1() const { return e1_pass == 1.0; }
  bool e2() const { return e2_pass == 1.0; }
  bool e3() const { return e3_pass == 1.0; }

  nlohmann::json ToJson() const {
    return {{"E1", e1_pass}, {"E2", e2_pass}, {"E3", e3_pass}, {"precondition", precondition},
            {"opt_k", opt_k}, {"phi_p", phi_p}, {"worst_E1_ratio", worst_e1_ratio}};
  }
};

// 5 sqrt(radius^2 k d / (n m) cost_X(C) ln(2ndT/beta)).
inline double SampleCostSlack(double cost, std::size_t n, std::size_t m, std::size_t k, std::size_t dim,
                              std::size_t t_count, double radius, double beta) {
  const double nn = static_cast<double>(n), mm = static_cast<double>(m);
  return 5.0 * std::sqrt(radius * radius * static_cast<double>(k * dim) / (nn * mm) * cost *
                         std::log(2.0 * nn * static_cast<double>(dim * t_count) / beta));
}

inline double SubsamplePrecondition(std::size_t n, std::size_t m, std::size_t k, std::size_t dim,
                                    std::size_t t_count, double radius, double beta) {
  const double nn = static_cast<double>(n);
  return 100.0 * nn / static_cast<double>(m) * radius * radius * static_cast<double>(k * dim) *
         std::log(2.0 * nn * static_cast<double>(dim * t_count) / beta);
}

// Probe menu for the "every C" quantifier: the reference centers, three
// perturbations of them, and three uniform random sets.
inline std::vector<CenterSet> ProbeMenu(const CenterSet& reference, double radius, Rng& rng) {
  std::vector<CenterSet> menu{reference};
  const std::size_t dim = reference.dim();
  for (double scale : {0.01, 0.1, 0.3}) {
    std::vector<Point> c = reference.centers();
    for (Point& p : c) {
      for (double& v : p) v += rng.Normal(scale * radius);
      p = ClampToBall(p, radius);
    }
    menu.emplace_back(std::move(c), reference.k(), "perturbed");
  }
  for (int r = 0; r < 3; ++r) {
    std::vector<Point> c;
    for (std::size_t j = 0; j < reference.size(); ++j) {
      Point p(dim);
      for (double& v : p) v = (2.0 * rng.Uniform() - 1.0) * radius / std::sqrt(static_cast<double>(dim));
      c.push_back(std::move(p));
    }
    menu.emplace_back(std::move(c), reference.k(), "random");
  }
  return menu;
}

// `reference` is the optimum estimate for the full data; `subsample_centers`
// are the per-subsample clusterings before or after snapping.
inline EventReport CheckSubsampleEvents(const Dataset& data, const OptimumEstimate& reference, double phi_p,
                                        const std::vector<Dataset>& subsamples,
                                        const std::vector<CenterSet>& subsample_centers,
                                        const std::vector<CenterSet>& probes, double beta, const OracleOptions& oracle = {}) {
  Require(!subsamples.empty() && subsamples.size() == subsample_centers.size(), ErrorCode::kInvalidArgument,
          "one center set per subsample");
  EventReport out;
  const std::size_t n = data.size(), m = subsamples.front().size(), k = reference.centers.size();
  const std::size_t t_count = subsamples.size(), dim = data.dim();
  out.opt_k = reference.cost;
  out.phi_p = phi_p;
  out.precondition = reference.cost >= SubsamplePrecondition(n, m, k, dim, t_count, data.radius(), beta);
  std::vector<double> probe_costs;
  for (const CenterSet& c : probes) probe_costs.push_back(Cost(data, c, Objective::kMeans));
  std::size_t e1 = 0, e2 = 0, e3 = 0;
  for (std::size_t t = 0; t < t_count; ++t) {
    bool ok = true;
    for (std::size_t q = 0; q < probes.size(); ++q) {
      const double diff = std::fabs(Cost(subsamples[t], probes[q], Objective::kMeans) / static_cast<double>(m) -
                                    probe_costs[q] / static_cast<double>(n));
      const double slack = SampleCostSlack(probe_costs[q], n, m, k, dim, t_count, data.radius(), beta);
      out.worst_e1_ratio = std::max(out.worst_e1_ratio, slack > 0.0 ? diff / slack : (diff > 0.0 ? kInfinity : 0.0));
      ok = ok && diff <= slack;
    }
    e1 += ok;
    if (k >= 2) {
      OracleOptions local = oracle;
      local.seed = oracle.seed + t;
      const double ratio = SeparabilityRatio(subsamples[t], k, Objective::kMeans, OracleMethod::kHeuristic, local).ratio;
      e2 += ratio <= 4.0 * phi_p;
    } else {
      ++e2;
    }
    e3 += Cost(data, subsample_centers[t], Objective::kMeans) <= 10.0 * reference.cost;
  }
  const double tt = static_cast<double>(t_count);
  out.e1_pass = static_cast<double>(e1) / tt;
  out.e2_pass = static_cast<double>(e2) / tt;
  out.e3_pass = static_cast<double>(e3) / tt;
  return out;
}

// sqrt(160 phi^2 / (1 - 4 phi^2)); `phi_sq` is the p = 2 separability ratio.
inline double RecoveryGamma(double phi_sq) {
  Require(phi_sq < 0.25, ErrorCode::kInvalidArgument, "recovery radius needs phi^2 < 1/4");
  return std::sqrt(160.0 * phi_sq / (1.0 - 4.0 * phi_sq));
}

// Every reference center has a distinct recovered center within
// factor * gamma * D_i.
inline CenterMatch CheckCenterRecovery(const CenterSet& reference, const CenterSet& recovered, double gamma,
                                       double factor = 1.0) {
  std::vector<double> radius = NearestOtherCenterDistances(reference);
  for (double& r : radius) r *= factor * gamma;
  return MatchWithinRadius(reference, recovered, radius, false);
}

}  // namespace stabclust

#endif  // STABCLUST_SAMPLE_AGGREGATE_HPP_
