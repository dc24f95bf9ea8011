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

// Differentially private 1-median by projected noisy subgradient descent on
// the mean loss (1/n) sum ||w - x_i|| over the ball B(0, radius).

#ifndef STABCLUST_CONVEX_HPP_
#define STABCLUST_CONVEX_HPP_

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

#include "stabclust/geometry.hpp"
#include "stabclust/mechanisms.hpp"
#include "stabclust/rng.hpp"

namespace stabclust {

struct DPConvexConfig {
  // 0 selects min(max(n^2, 1000), 10^6, 2*10^7 / n).
  std::size_t steps = 0;
  double clip = 1.0;  // per-point gradient norm bound; the loss is 1-Lipschitz
  PrivacyParams pp{1.0, 1e-5};
  double beta = 0.05;
};

inline constexpr std::size_t kMinConvexSteps = 1000;
inline constexpr std::size_t kMaxConvexSteps = 1000000;
inline constexpr std::size_t kConvexWorkBudget = 20000000;

inline std::size_t DefaultConvexSteps(std::size_t n) {
  const std::size_t squared =
      std::max<std::size_t>(kMinConvexSteps, n > kMaxConvexSteps ? kMaxConvexSteps : n * n);
  const std::size_t by_work = std::max<std::size_t>(1, kConvexWorkBudget / std::max<std::size_t>(n, 1));
  return std::max<std::size_t>(1, std::min({squared, kMaxConvexSteps, by_work}));
}

struct DPMedianResult {
  Point center;
  bool empty_input = false;
  std::size_t steps = 0;
  double step_epsilon = 0.0;  // per-iteration budget
  double step_delta = 0.0;
  double sigma = 0.0;         // per-coordinate noise on the mean gradient
};

// Full-batch subgradient of the mean loss, per-point terms clipped to
// `clip` (the term for x_i = w is taken as 0), Gaussian noise calibrated to
// the replace-one sensitivity 2 clip / n with a per-step budget chosen so
// that T-fold advanced composition (delta' = delta / 2, per-step delta
// delta / (2T)) totals (eps, delta). Step size radius / (clip sqrt(t)).
// Returns the average of the second half of the iterates, projected.
inline DPMedianResult DpOneMedian(const Dataset& data, std::span<const std::size_t> subset,
                                  const DPConvexConfig& cfg, Rng& rng) {
  const std::size_t dim = data.dim();
  const double radius = data.radius();
  DPMedianResult out;
  if (subset.empty()) {
    out.center.assign(dim, 0.0);
    out.empty_input = true;
    return out;
  }
  const std::size_t n = subset.size();
  const std::size_t steps = cfg.steps ? cfg.steps : DefaultConvexSteps(n);
  out.steps = steps;
  if (!cfg.pp.noiseless()) {
    Require(cfg.pp.delta > 0.0, ErrorCode::kInvalidArgument, "private 1-median needs delta > 0");
    out.step_delta = cfg.pp.delta / (2.0 * static_cast<double>(steps));
    out.step_epsilon = steps == 1 ? cfg.pp.epsilon
                                  : PerStepEpsilonForAdvanced(cfg.pp.epsilon, steps, cfg.pp.delta / 2.0);
    if (steps == 1) out.step_delta = cfg.pp.delta;
    const double sens = 2.0 * cfg.clip / static_cast<double>(n);
    out.sigma = GaussianSigma(sens, PrivacyParams(out.step_epsilon, out.step_delta));
  } else {
    out.step_epsilon = kInfinity;
  }

  // The start must not depend on the data; the origin is used.
  Point w(dim, 0.0), grad(dim), avg(dim, 0.0);
  std::size_t averaged = 0;
  const std::size_t burn_in = steps / 2;
  for (std::size_t t = 1; t <= steps; ++t) {
    std::fill(grad.begin(), grad.end(), 0.0);
    for (std::size_t i : subset) {
      const auto x = data.point(i);
      const double dist = Distance(w, x);
      if (dist <= 0.0) continue;
      const double scale = std::min(1.0, cfg.clip) / dist;
      for (std::size_t d = 0; d < dim; ++d) grad[d] += (w[d] - x[d]) * scale;
    }
    const double eta = radius / (cfg.clip * std::sqrt(static_cast<double>(t)));
    for (std::size_t d = 0; d < dim; ++d) {
      const double g = grad[d] / static_cast<double>(n) + rng.Normal(out.sigma);
      w[d] -= eta * g;
    }
    w = ClampToBall(w, radius);
    if (t > burn_in) {
      for (std::size_t d = 0; d < dim; ++d) avg[d] += w[d];
      ++averaged;
    }
  }
  for (double& v : avg) v /= static_cast<double>(averaged);
  out.center = ClampToBall(avg, radius);
  return out;
}

}  // namespace stabclust

#endif  // STABCLUST_CONVEX_HPP_
