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

// Stability measures of a clustering instance: the separability ratio
// OPT_k / OPT_{k-1}, center-deletion and center-separation parameters, the
// approximation-center matching predicate, and the closeness radius that a
// low-cost candidate must satisfy on a well separated instance.

#ifndef STABCLUST_STABILITY_HPP_
#define STABCLUST_STABILITY_HPP_

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <nlohmann/json.hpp>
#include <optional>
#include <string>
#include <vector>

#include "stabclust/error.hpp"
#include "stabclust/geometry.hpp"
#include "stabclust/mechanisms.hpp"

namespace stabclust {

enum class OracleMethod { kExact, kHeuristic };

inline const char* OracleMethodName(OracleMethod m) {
  return m == OracleMethod::kExact ? "exact-oracle" : "heuristic";
}

struct OracleOptions {
  int restarts = 50;
  std::uint64_t seed = 0;
};

struct OptimumEstimate {
  CenterSet centers;
  double cost = 0.0;
  OracleMethod method = OracleMethod::kExact;
};

// Exact subset enumeration (n <= 14) or best-of-restarts ++/Lloyd.
inline OptimumEstimate EstimateOptimum(const Dataset& data, std::size_t k, Objective obj,
                                       OracleMethod method, const OracleOptions& opt = {}) {
  if (method == OracleMethod::kExact) {
    OptResult r = BruteForceOpt(data, k, obj);
    return {std::move(r.centers), r.cost, OracleMethod::kExact};
  }
  CenterSet c = KMeansPPLloyd(data, k, obj, opt.restarts, opt.seed);
  const double cost = Cost(data, c, obj);
  return {std::move(c), cost, OracleMethod::kHeuristic};
}

inline OracleMethod DefaultMethod(const Dataset& data) {
  return data.size() <= kBruteForceMaxPoints ? OracleMethod::kExact : OracleMethod::kHeuristic;
}

struct SeparabilityResult {
  double ratio = 0.0;  // phi^p
  double opt_k = 0.0;
  double opt_k_minus_1 = 0.0;
  OracleMethod method = OracleMethod::kExact;
};

// OPT_k / OPT_{k-1}. The heuristic mode divides the best found costs at both
// levels and is only an estimate.
inline SeparabilityResult SeparabilityRatio(const Dataset& data, std::size_t k, Objective obj,
                                            OracleMethod method, const OracleOptions& opt = {}) {
  Require(k >= 2, ErrorCode::kInvalidArgument, "separability needs k >= 2");
  const OptimumEstimate hi = EstimateOptimum(data, k, obj, method, opt);
  const OptimumEstimate lo = EstimateOptimum(data, k - 1, obj, method, opt);
  Require(lo.cost > 0.0, ErrorCode::kDegenerate,
          "OPT_{k-1} is zero (all points coincide); the ratio is undefined");
  return {hi.cost / lo.cost, hi.cost, lo.cost, method};
}

struct StabilityValue {
  double value = 0.0;
  bool degenerate = false;  // OPT_k = 0: value is +infinity
};

namespace internal {

// Cost of the (k-1)-clustering obtained by moving every point of cluster i
// (under `centers`) onto center j.
inline double DeletionCost(const Dataset& data, const CenterSet& centers, const Partition& part,
                           std::size_t i, std::size_t j, Objective obj) {
  double total = 0.0;
  for (std::size_t x = 0; x < data.size(); ++x) {
    const std::size_t own = part.cluster_of[x];
    total += PowerDistance(obj, data.point(x), centers[own == i ? j : own]);
  }
  return total;
}

}  // namespace internal

// min over (i, j != i) of the reassignment cost divided by OPT_k, evaluated
// at the supplied optimal centers.
inline StabilityValue CenterDeletionStability(const Dataset& data, const OptimumEstimate& opt,
                                              Objective obj) {
  if (opt.cost <= 0.0) return {kInfinity, true};
  const CenterSet& c = opt.centers;
  const Partition part = PartitionByNearest(data, c, obj);
  double best = kInfinity;
  for (std::size_t i = 0; i < c.size(); ++i) {
    for (std::size_t j = 0; j < c.size(); ++j) {
      if (i != j) best = std::min(best, internal::DeletionCost(data, c, part, i, j, obj));
    }
  }
  return {best / opt.cost, false};
}

inline StabilityValue CenterDeletionStability(const Dataset& data, std::size_t k, Objective obj,
                                              OracleMethod method, const OracleOptions& o = {}) {
  return CenterDeletionStability(data, EstimateOptimum(data, k, obj, method, o), obj);
}

// min_i n_i D_i^p / OPT_k at the supplied optimal centers.
inline StabilityValue CenterSeparationStability(const Dataset& data, const OptimumEstimate& opt,
                                                Objective obj) {
  if (opt.cost <= 0.0) return {kInfinity, true};
  const Partition part = PartitionByNearest(data, opt.centers, obj);
  const std::vector<double> dists = NearestOtherCenterDistances(opt.centers);
  double best = kInfinity;
  for (std::size_t i = 0; i < opt.centers.size(); ++i) {
    const double dp = std::pow(dists[i], Exponent(obj));
    best = std::min(best, static_cast<double>(part.cluster_sizes[i]) * dp / opt.cost);
  }
  return {best, false};
}

inline StabilityValue CenterSeparationStability(const Dataset& data, std::size_t k, Objective obj,
                                                OracleMethod method, const OracleOptions& o = {}) {
  return CenterSeparationStability(data, EstimateOptimum(data, k, obj, method, o), obj);
}

// Approximation-stability parameter implied by a center-separation
// parameter. The two forms in circulation differ in the constant, so the
// caller chooses.
enum class SeparationToApproxRule { kGammaOver8, kGammaOver4p };

inline double ApproxStabilityFromSeparation(double gamma, Objective obj,
                                            SeparationToApproxRule rule) {
  return rule == SeparationToApproxRule::kGammaOver8 ? gamma / 8.0 - 1.0
                                                     : gamma / (4.0 * Exponent(obj)) - 1.0;
}

// Maximum bipartite matching (Kuhn) of left i to right j over allowed[i][j].
inline std::vector<int> MaxBipartiteMatching(const std::vector<std::vector<char>>& allowed) {
  const std::size_t left = allowed.size();
  const std::size_t right = left == 0 ? 0 : allowed.front().size();
  std::vector<int> match_right(right, -1);
  std::vector<char> seen;
  auto augment = [&](auto&& self, std::size_t i) -> bool {
    for (std::size_t j = 0; j < right; ++j) {
      if (!allowed[i][j] || seen[j]) continue;
      seen[j] = 1;
      if (match_right[j] < 0 || self(self, static_cast<std::size_t>(match_right[j]))) {
        match_right[j] = static_cast<int>(i);
        return true;
      }
    }
    return false;
  };
  for (std::size_t i = 0; i < left; ++i) {
    seen.assign(right, 0);
    augment(augment, i);
  }
  std::vector<int> match_left(left, -1);
  for (std::size_t j = 0; j < right; ++j) {
    if (match_right[j] >= 0) match_left[static_cast<std::size_t>(match_right[j])] = static_cast<int>(j);
  }
  return match_left;
}

struct CenterMatch {
  bool matched = false;
  std::vector<int> assignment;        // optimal i -> candidate index (or -1)
  std::vector<double> distances;      // ||c_i - candidate|| for matched pairs
  std::vector<double> allowed_radius; // per optimal center
  // When unmatched: an optimal center left without an admissible candidate
  // and its distance to the nearest candidate.
  std::optional<std::size_t> witness_center;
  double witness_distance = 0.0;
};

// Perfect matching of optimal centers to candidates with
// ||c_i - cand|| <= radius_i (or < when `strict`).
inline CenterMatch MatchWithinRadius(const CenterSet& optimal, const CenterSet& candidate,
                                     const std::vector<double>& radius, bool strict) {
  const std::size_t k = optimal.size();
  CenterMatch out;
  out.allowed_radius = radius;
  std::vector<std::vector<char>> allowed(k, std::vector<char>(candidate.size(), 0));
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = 0; j < candidate.size(); ++j) {
      const double d = Distance(optimal[i], candidate[j]);
      allowed[i][j] = strict ? (d < radius[i]) : (d <= radius[i]);
    }
  }
  out.assignment = MaxBipartiteMatching(allowed);
  out.matched = true;
  out.distances.assign(k, kInfinity);
  for (std::size_t i = 0; i < k; ++i) {
    if (out.assignment[i] < 0) {
      out.matched = false;
      if (!out.witness_center) {
        out.witness_center = i;
        double nearest = kInfinity;
        for (const Point& c : candidate) nearest = std::min(nearest, Distance(optimal[i], c));
        out.witness_distance = nearest;
      }
      continue;
    }
    out.distances[i] = Distance(optimal[i], candidate[static_cast<std::size_t>(out.assignment[i])]);
  }
  return out;
}

struct ApproxCenterResult {
  double candidate_cost = 0.0;
  double opt_k = 0.0;
  bool within_cost_factor = false;  // candidate cost <= delta_factor * OPT_k
  CenterMatch match;
};

// The (delta, q)-approximation-center predicate: match each optimal center
// to a distinct candidate with ||c_i - cand||^p < q D_i^p.
inline ApproxCenterResult CheckApproxCenterStability(const Dataset& data, const OptimumEstimate& opt,
                                                     Objective obj, const CenterSet& candidate,
                                                     double delta_factor, double q = 0.25) {
  Require(q > 0.0 && q < 1.0, ErrorCode::kInvalidArgument, "matching constant must be in (0, 1)");
  Require(candidate.size() == opt.centers.size(), ErrorCode::kInvalidArgument,
          "candidate must have k centers");
  ApproxCenterResult out;
  out.candidate_cost = Cost(data, candidate, obj);
  out.opt_k = opt.cost;
  out.within_cost_factor = out.candidate_cost <= delta_factor * opt.cost;
  const std::vector<double> dists = NearestOtherCenterDistances(opt.centers);
  std::vector<double> radius(dists.size());
  // ||.||^p < q D^p  <=>  ||.|| < q^{1/p} D.
  for (std::size_t i = 0; i < dists.size(); ++i) {
    radius[i] = std::pow(q, 1.0 / Exponent(obj)) * dists[i];
  }
  out.match = MatchWithinRadius(opt.centers, candidate, radius, /*strict=*/true);
  return out;
}

inline ApproxCenterResult CheckApproxCenterStability(const Dataset& data, std::size_t k,
                                                     Objective obj, const CenterSet& candidate,
                                                     double delta_factor, double q = 0.25) {
  return CheckApproxCenterStability(
      data, EstimateOptimum(data, k, obj, DefaultMethod(data)), obj, candidate, delta_factor, q);
}

struct ClosenessResult {
  double alpha = 0.0;        // candidate cost / OPT_{k-1}
  double ratio = 0.0;        // (alpha + phi^2)/(1 - phi^2), or (alpha + phi)/(1 - phi)
  bool precondition = false; // ratio < 1/16 (p = 2) or < 1/4 (p = 1)
  CenterMatch match;         // within 2 sqrt(ratio) D_i (p = 2) or 2 ratio D_i (p = 1)
};

// Closeness radius for a candidate of cost alpha OPT_{k-1} on an instance
// with separability ratio phi^p. `phi_p` is OPT_k / OPT_{k-1}.
inline double ClosenessFactor(double alpha, double phi_p, Objective obj) {
  if (obj == Objective::kMeans) return 2.0 * std::sqrt((alpha + phi_p) / (1.0 - phi_p));
  return 2.0 * (alpha + phi_p) / (1.0 - phi_p);
}

inline ClosenessResult CheckCloseness(const Dataset& data, const OptimumEstimate& opt_k,
                                      double opt_k_minus_1, Objective obj,
                                      const CenterSet& candidate) {
  Require(opt_k_minus_1 > 0.0, ErrorCode::kDegenerate, "OPT_{k-1} is zero");
  ClosenessResult out;
  const double phi_p = opt_k.cost / opt_k_minus_1;
  out.alpha = Cost(data, candidate, obj) / opt_k_minus_1;
  out.ratio = (out.alpha + phi_p) / (1.0 - phi_p);
  out.precondition = out.ratio < (obj == Objective::kMeans ? 1.0 / 16.0 : 1.0 / 4.0);
  const double factor = ClosenessFactor(out.alpha, phi_p, obj);
  std::vector<double> radius = NearestOtherCenterDistances(opt_k.centers);
  for (double& r : radius) r *= factor;
  out.match = MatchWithinRadius(opt_k.centers, candidate, radius, /*strict=*/false);
  return out;
}

struct StabilityReport {
  double phi_p = 0.0;
  double opt_k = 0.0;
  double opt_k_minus_1 = 0.0;
  StabilityValue beta_deletion;
  StabilityValue gamma_separation;
  std::vector<double> per_center_D;
  OracleMethod method = OracleMethod::kExact;
  int p = 2;
  bool degenerate = false;

  nlohmann::json ToJson() const {
    return {{"phi_p", JsonNumber(phi_p)},
            {"opt_k", opt_k},
            {"opt_k_minus_1", opt_k_minus_1},
            {"beta_deletion", JsonNumber(beta_deletion.value)},
            {"beta_degenerate", beta_deletion.degenerate},
            {"gamma_separation", JsonNumber(gamma_separation.value)},
            {"gamma_degenerate", gamma_separation.degenerate},
            {"per_center_D", per_center_D},
            {"method", OracleMethodName(method)},
            {"p", p},
            {"degenerate", degenerate}};
  }
};

// All stability measures for one instance. Degenerate levels produce flags,
// never exceptions.
inline StabilityReport AuditStability(const Dataset& data, std::size_t k, Objective obj,
                                      OracleMethod method, const OracleOptions& o = {}) {
  StabilityReport r;
  r.method = method;
  r.p = Exponent(obj);
  const OptimumEstimate hi = EstimateOptimum(data, k, obj, method, o);
  r.opt_k = hi.cost;
  r.per_center_D = NearestOtherCenterDistances(hi.centers);
  r.beta_deletion = CenterDeletionStability(data, hi, obj);
  r.gamma_separation = CenterSeparationStability(data, hi, obj);
  if (k >= 2) {
    r.opt_k_minus_1 = EstimateOptimum(data, k - 1, obj, method, o).cost;
    r.degenerate = r.opt_k_minus_1 <= 0.0;
    r.phi_p = r.degenerate ? kInfinity : r.opt_k / r.opt_k_minus_1;
  } else {
    r.degenerate = true;
    r.phi_p = kInfinity;
  }
  return r;
}

}  // namespace stabclust

#endif  // STABCLUST_STABILITY_HPP_
