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

// Calibrated Laplace / Gaussian noise, noisy counts, averages and costs, and
// privacy accounting (simple and advanced composition, group privacy,
// amplification by subsampling with replacement).
//
// An infinite epsilon is accepted everywhere and means "no noise"; it exists
// so tests can exercise the noiseless limit of every pipeline.

#ifndef STABCLUST_MECHANISMS_HPP_
#define STABCLUST_MECHANISMS_HPP_

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <nlohmann/json.hpp>
#include <span>
#include <string>
#include <vector>

#include "stabclust/error.hpp"
#include "stabclust/geometry.hpp"
#include "stabclust/rng.hpp"

namespace stabclust {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

struct PrivacyParams {
  double epsilon = 1.0;
  double delta = 0.0;

  PrivacyParams() = default;
  PrivacyParams(double eps, double del) : epsilon(eps), delta(del) {
    Require(eps > 0.0 && !std::isnan(eps), ErrorCode::kInvalidArgument,
            "epsilon must be positive, got " + std::to_string(eps));
    Require(del >= 0.0 && del < 1.0, ErrorCode::kInvalidArgument,
            "delta must lie in [0, 1), got " + std::to_string(del));
  }

  static PrivacyParams Noiseless() { return {kInfinity, 0.0}; }
  bool noiseless() const { return std::isinf(epsilon); }

  PrivacyParams Scaled(double factor) const { return {epsilon * factor, delta * factor}; }
};

// An (epsilon, delta) total produced by accounting; unlike PrivacyParams it
// may be zero.
struct Budget {
  double epsilon = 0.0;
  double delta = 0.0;
};

enum class SensitivityNorm { kL1, kL2 };

struct Sensitivity {
  double value = 0.0;
  SensitivityNorm norm = SensitivityNorm::kL1;

  static Sensitivity L1(double v) { return {v, SensitivityNorm::kL1}; }
  static Sensitivity L2(double v) { return {v, SensitivityNorm::kL2}; }
};

enum class Mechanism { kLaplace, kGaussian };

inline const char* MechanismName(Mechanism m) {
  return m == Mechanism::kLaplace ? "laplace" : "gaussian";
}

struct LedgerEntry {
  std::string label;
  double epsilon = 0.0;
  double delta = 0.0;
  std::string mechanism;
};

inline nlohmann::json JsonNumber(double v) {
  if (std::isfinite(v)) return v;
  return std::isnan(v) ? "nan" : (v > 0 ? "inf" : "-inf");
}

// Record of every privacy spend of one execution. Advisory: nothing is
// refused when a total is exceeded.
class BudgetLedger {
 public:
  void Record(std::string label, double epsilon, double delta, std::string mechanism) {
    Require(!closed_, ErrorCode::kInvalidArgument, "ledger is closed");
    entries_.push_back({std::move(label), epsilon, delta, std::move(mechanism)});
  }
  void Record(std::string label, const PrivacyParams& pp, std::string mechanism) {
    Record(std::move(label), pp.epsilon, pp.delta, std::move(mechanism));
  }

  // Appends another ledger's entries with a label prefix.
  void Absorb(const BudgetLedger& other, const std::string& prefix) {
    for (const LedgerEntry& e : other.entries_) Record(prefix + e.label, e.epsilon, e.delta, e.mechanism);
  }

  void Close() { closed_ = true; }
  bool closed() const { return closed_; }
  const std::vector<LedgerEntry>& entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }

  nlohmann::json ToJson() const {
    nlohmann::json out = nlohmann::json::array();
    for (const LedgerEntry& e : entries_) {
      out.push_back({{"label", e.label},
                     {"epsilon", JsonNumber(e.epsilon)},
                     {"delta", JsonNumber(e.delta)},
                     {"mechanism", e.mechanism}});
    }
    return out;
  }

 private:
  std::vector<LedgerEntry> entries_;
  bool closed_ = false;
};

// (sum of epsilons, sum of deltas).
inline Budget ComposeSimple(const BudgetLedger& ledger) {
  Budget total;
  for (const LedgerEntry& e : ledger.entries()) {
    total.epsilon += e.epsilon;
    total.delta += e.delta;
  }
  return total;
}

// k-fold adaptive composition of (epsilon, delta) mechanisms:
// epsilon' = sqrt(2 k ln(1/delta')) epsilon + k epsilon (e^epsilon - 1),
// delta_total = k delta + delta'.
inline Budget ComposeAdvanced(std::size_t k, double epsilon, double delta, double delta_prime) {
  Require(epsilon > 0.0 && epsilon <= 1.0, ErrorCode::kInvalidArgument,
          "advanced composition needs epsilon in (0, 1]");
  Require(delta_prime > 0.0 && delta_prime <= 1.0, ErrorCode::kInvalidArgument,
          "advanced composition needs delta' in (0, 1]");
  Require(delta >= 0.0 && delta <= 1.0, ErrorCode::kInvalidArgument,
          "advanced composition needs delta in [0, 1]");
  const double kk = static_cast<double>(k);
  return {std::sqrt(2.0 * kk * std::log(1.0 / delta_prime)) * epsilon +
              kk * epsilon * std::expm1(epsilon),
          kk * delta + delta_prime};
}

// Advanced-composition total of a ledger. Entries may differ; the largest
// epsilon and delta bound every entry, so the result is an upper bound.
inline Budget ComposeAdvanced(const BudgetLedger& ledger, double delta_prime) {
  if (ledger.empty()) return {0.0, delta_prime};
  double eps = 0.0, del = 0.0;
  for (const LedgerEntry& e : ledger.entries()) {
    eps = std::max(eps, e.epsilon);
    del = std::max(del, e.delta);
  }
  return ComposeAdvanced(ledger.size(), eps, del, delta_prime);
}

// A mechanism that is (eps, delta)-DP is (g eps, g e^{g eps} delta)-DP for
// datasets differing in g rows.
inline Budget GroupPrivacy(const Budget& b, std::size_t group_size) {
  const double g = static_cast<double>(group_size);
  return {g * b.epsilon, g * std::exp(g * b.epsilon) * b.delta};
}

// Running an (eps, delta)-DP algorithm on m rows sampled with replacement
// from n >= 2m rows gives (6 eps m / n, e^{6 eps m / n} (4m/n) delta).
inline Budget AmplifyBySampling(const Budget& b, std::size_t m, std::size_t n) {
  if (m == 0) return {0.0, 0.0};
  Require(b.epsilon <= 1.0, ErrorCode::kInvalidArgument,
          "sampling amplification needs epsilon <= 1");
  Require(n >= 2 * m, ErrorCode::kInvalidArgument,
          "sampling amplification needs n >= 2m (n = " + std::to_string(n) +
              ", m = " + std::to_string(m) + ")");
  const double ratio = static_cast<double>(m) / static_cast<double>(n);
  const double eps = 6.0 * b.epsilon * ratio;
  return {eps, std::exp(eps) * 4.0 * ratio * b.delta};
}

// Largest per-step epsilon whose `steps`-fold advanced composition (with
// the given delta') stays within `total_epsilon`; found by bisection.
inline double PerStepEpsilonForAdvanced(double total_epsilon, std::size_t steps,
                                        double delta_prime) {
  Require(steps >= 1, ErrorCode::kInvalidArgument, "steps must be >= 1");
  if (std::isinf(total_epsilon)) return kInfinity;
  double lo = 0.0, hi = std::min(1.0, total_epsilon);
  auto total = [&](double e) { return ComposeAdvanced(steps, e, 0.0, delta_prime).epsilon; };
  if (total(hi) <= total_epsilon) return hi;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    (total(mid) <= total_epsilon ? lo : hi) = mid;
  }
  return lo;
}

inline double LaplaceScale(double sensitivity, const PrivacyParams& pp) {
  return pp.noiseless() ? 0.0 : sensitivity / pp.epsilon;
}

// sigma = (lambda / epsilon) sqrt(2 ln(1.25 / delta)), with equality.
inline double GaussianSigma(double sensitivity, const PrivacyParams& pp) {
  if (pp.noiseless()) return 0.0;
  Require(pp.delta > 0.0, ErrorCode::kInvalidArgument, "gaussian mechanism needs delta > 0");
  return sensitivity / pp.epsilon * std::sqrt(2.0 * std::log(1.25 / pp.delta));
}

struct NoisyValue {
  std::vector<double> value;
  double scale = 0.0;
  Mechanism mechanism = Mechanism::kLaplace;
  // The Gaussian calibration is only cited for epsilon < 1.
  bool outside_cited_range = false;
};

inline NoisyValue LaplaceNoise(const Sensitivity& sens, const PrivacyParams& pp, std::size_t dim,
                               Rng& rng, BudgetLedger* ledger = nullptr,
                               const std::string& label = "laplace") {
  Require(sens.norm == SensitivityNorm::kL1, ErrorCode::kInvalidArgument,
          "laplace mechanism takes an L1 sensitivity");
  Require(sens.value >= 0.0, ErrorCode::kInvalidArgument, "sensitivity must be >= 0");
  NoisyValue out{std::vector<double>(dim, 0.0), LaplaceScale(sens.value, pp), Mechanism::kLaplace,
                 false};
  for (double& v : out.value) v = rng.Laplace(out.scale);
  if (ledger) ledger->Record(label, pp.epsilon, 0.0, "laplace");
  return out;
}

inline NoisyValue GaussianNoise(const Sensitivity& sens, const PrivacyParams& pp, std::size_t dim,
                                Rng& rng, BudgetLedger* ledger = nullptr,
                                const std::string& label = "gaussian") {
  Require(sens.norm == SensitivityNorm::kL2, ErrorCode::kInvalidArgument,
          "gaussian mechanism takes an L2 sensitivity");
  Require(sens.value >= 0.0, ErrorCode::kInvalidArgument, "sensitivity must be >= 0");
  Require(pp.delta > 0.0 || pp.noiseless(), ErrorCode::kInvalidArgument,
          "gaussian mechanism needs delta > 0");
  NoisyValue out{std::vector<double>(dim, 0.0), GaussianSigma(sens.value, pp), Mechanism::kGaussian,
                 !pp.noiseless() && pp.epsilon >= 1.0};
  for (double& v : out.value) v = rng.Normal(out.scale);
  if (ledger) ledger->Record(label, pp, "gaussian");
  return out;
}

// Sensitivity-1 count plus Laplace(1/epsilon).
inline double NoisyCount(double true_count, const PrivacyParams& pp, Rng& rng) {
  return true_count + rng.Laplace(LaplaceScale(1.0, pp));
}

struct NoisyAverageOptions {
  double beta = 0.05;
  std::size_t k = 1;  // number of parallel averages sharing the failure probability
};

struct NoisyAverageResult {
  Point center;
  bool small_cluster = false;
  std::size_t true_count = 0;
  double noisy_count = 0.0;
  double threshold = 0.0;
  double sum_sigma = 0.0;
  double count_scale = 0.0;
  double noise_norm = 0.0;  // norm of the noise added to the coordinate sum
};

// Count below which an average is considered unreliable:
// max(1, (16/epsilon) ln(4k / (beta delta))).
inline double SmallClusterThreshold(const PrivacyParams& pp, const NoisyAverageOptions& opt) {
  if (pp.noiseless()) return 1.0;
  const double del = pp.delta > 0.0 ? pp.delta : 1e-300;
  return std::max(1.0, 16.0 / pp.epsilon *
                           std::log(4.0 * static_cast<double>(opt.k) / (opt.beta * del)));
}

// Noisy sum over noisy count. The coordinate sum gets Gaussian noise with
// L2 sensitivity 2*radius at (eps/2, delta/2); the count gets Laplace noise
// with sensitivity 1 at eps/2. Too-small noisy counts return the origin
// with the small-cluster flag. The result is projected into the ball.
inline NoisyAverageResult NoisyAverage(const Dataset& data, std::span<const std::size_t> subset,
                                       const PrivacyParams& pp, Rng& rng,
                                       const NoisyAverageOptions& opt = {},
                                       BudgetLedger* ledger = nullptr,
                                       const std::string& label = "noisy_average") {
  const double radius = data.radius();
  const std::size_t dim = data.dim();
  const PrivacyParams half = pp.noiseless() ? pp : PrivacyParams(pp.epsilon / 2.0, pp.delta / 2.0);

  NoisyAverageResult out;
  out.true_count = subset.size();
  Point sum(dim, 0.0);
  for (std::size_t i : subset) {
    const auto p = data.point(i);
    for (std::size_t d = 0; d < dim; ++d) sum[d] += p[d];
  }
  out.sum_sigma = GaussianSigma(2.0 * radius, half);
  out.count_scale = LaplaceScale(1.0, half);
  double noise2 = 0.0;
  for (double& v : sum) {
    const double z = rng.Normal(out.sum_sigma);
    noise2 += z * z;
    v += z;
  }
  out.noise_norm = std::sqrt(noise2);
  out.noisy_count = static_cast<double>(subset.size()) + rng.Laplace(out.count_scale);
  out.threshold = SmallClusterThreshold(pp, opt);
  if (ledger) ledger->Record(label, pp, "gaussian+laplace");

  if (out.noisy_count < out.threshold) {
    out.small_cluster = true;
    out.center.assign(dim, 0.0);
    return out;
  }
  for (double& v : sum) v /= out.noisy_count;
  out.center = ClampToBall(sum, radius);
  return out;
}

struct NoisyCostResult {
  double value = 0.0;
  double exact = 0.0;
  double sigma = 0.0;
};

inline CenterSet ClampCenters(const CenterSet& c, double radius) {
  std::vector<Point> out;
  out.reserve(c.size());
  for (const Point& p : c) out.push_back(ClampToBall(p, radius));
  return CenterSet(std::move(out), c.k(), c.provenance());
}

// cost^p plus Gaussian noise with L2 sensitivity (2 radius)^p. Centers are
// projected into the ball first so that the sensitivity bound holds.
inline NoisyCostResult NoisyCost(const Dataset& data, const CenterSet& centers, Objective obj,
                                 const PrivacyParams& pp, Rng& rng, BudgetLedger* ledger = nullptr,
                                 const std::string& label = "noisy_cost") {
  const double sens = std::pow(2.0 * data.radius(), Exponent(obj));
  NoisyCostResult out;
  out.exact = Cost(data, ClampCenters(centers, data.radius()), obj);
  out.sigma = GaussianSigma(sens, pp);
  out.value = out.exact + rng.Normal(out.sigma);
  if (ledger) ledger->Record(label, pp, "gaussian");
  return out;
}

// Both costs released by a single Gaussian query on the 2-vector
// (cost(a), cost(b)); L2 sensitivity sqrt(2) (2 radius)^p.
inline std::pair<NoisyCostResult, NoisyCostResult> NoisyCostPair(
    const Dataset& data, const CenterSet& a, const CenterSet& b, Objective obj,
    const PrivacyParams& pp, Rng& rng, BudgetLedger* ledger = nullptr,
    const std::string& label = "noisy_cost_pair") {
  const double sens = std::sqrt(2.0) * std::pow(2.0 * data.radius(), Exponent(obj));
  const double sigma = GaussianSigma(sens, pp);
  NoisyCostResult ra{0.0, Cost(data, ClampCenters(a, data.radius()), obj), sigma};
  NoisyCostResult rb{0.0, Cost(data, ClampCenters(b, data.radius()), obj), sigma};
  ra.value = ra.exact + rng.Normal(sigma);
  rb.value = rb.exact + rng.Normal(sigma);
  if (ledger) ledger->Record(label, pp, "gaussian");
  return {ra, rb};
}

}  // namespace stabclust

#endif  // STABCLUST_MECHANISMS_HPP_
