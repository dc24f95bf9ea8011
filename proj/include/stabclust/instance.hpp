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

// Synthetic separated mixtures: spherical Gaussian blobs around placed
// centers, clipped to the ball, with realized stability measured.

#ifndef STABCLUST_INSTANCE_HPP_
#define STABCLUST_INSTANCE_HPP_

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <nlohmann/json.hpp>
#include <numbers>
#include <string>
#include <vector>

#include "stabclust/dataset_io.hpp"
#include "stabclust/error.hpp"
#include "stabclust/geometry.hpp"
#include "stabclust/rng.hpp"
#include "stabclust/stability.hpp"

namespace stabclust {

enum class Placement { kSimplex, kRing, kRandomMinSeparation };

inline const char* PlacementName(Placement p) {
  switch (p) {
    case Placement::kSimplex: return "simplex";
    case Placement::kRing: return "ring";
    case Placement::kRandomMinSeparation: return "random";
  }
  return "?";
}

inline Placement PlacementFromName(const std::string& s) {
  if (s == "simplex") return Placement::kSimplex;
  if (s == "ring") return Placement::kRing;
  if (s == "random") return Placement::kRandomMinSeparation;
  throw Error(ErrorCode::kInvalidArgument, "unknown placement '" + s + "' (simplex, ring, random)");
}

struct InstanceSpec {
  std::size_t k = 2;
  std::size_t dim = 2;
  std::size_t n = 10000;
  double radius = 1.0;
  std::vector<double> weights;  // empty means equal weights
  Placement placement = Placement::kSimplex;
  double scale = 0.5;           // norm of each placed center (ring, simplex) or placement ball radius
  double min_separation = 0.5;  // random placement only
  double sigma = 0.01;
  std::uint64_t seed = 1;
  int p = 2;
  double max_phi_p = kInfinity;  // resample while the realized ratio exceeds this
  int max_attempts = 10;
  int oracle_restarts = 50;

  nlohmann::json ToJson() const {
    return {{"k", k},         {"d", dim},         {"n", n},
            {"radius", radius}, {"weights", weights}, {"placement", PlacementName(placement)},
            {"scale", scale}, {"min_separation", min_separation}, {"sigma", sigma},
            {"seed", seed},   {"p", p},           {"max_phi_p", JsonNumber(max_phi_p)}};
  }
};

struct Instance {
  InstanceSpec spec;
  Dataset data{1, 1.0};
  std::vector<std::size_t> labels;  // generating cluster of each point
  CenterSet placed;                 // blob centers before noise
  CenterSet oracle;                 // realized per-cluster means (p = 2) or medians (p = 1)
  double oracle_cost = 0.0;
  StabilityReport stability;        // heuristic phi recorded, never assumed
  int attempts = 1;
  std::uint64_t hash = 0;

  nlohmann::json Summary() const {
    return {{"spec", spec.ToJson()},
            {"hash", hash},
            {"attempts", attempts},
            {"oracle_label", "realized cluster " + std::string(spec.p == 2 ? "means" : "medians")},
            {"oracle", CenterSetToJson(oracle)},
            {"oracle_cost", oracle_cost},
            {"stability", stability.ToJson()}};
  }
};

// Regular simplex vertices of norm `scale`, embedded in R^dim. Needs
// k <= dim + 1.
inline std::vector<Point> SimplexVertices(std::size_t k, std::size_t dim, double scale) {
  Require(k >= 1, ErrorCode::kInvalidArgument, "k must be >= 1");
  Require(k <= dim + 1, ErrorCode::kInvalidArgument,
          "simplex placement needs k <= d + 1 (k = " + std::to_string(k) + ", d = " + std::to_string(dim) + ")");
  if (k == 1) return {Point(dim, 0.0)};
  // Centered basis vectors of R^k, then coordinates in an orthonormal basis
  // of their (k-1)-dimensional span via Gram-Schmidt.
  const double kk = static_cast<double>(k);
  std::vector<Point> v(k, Point(k, -1.0 / kk));
  for (std::size_t i = 0; i < k; ++i) v[i][i] += 1.0;
  std::vector<Point> basis;
  for (std::size_t i = 0; i < k && basis.size() + 1 < k; ++i) {
    Point u = v[i];
    for (const Point& b : basis) {
      double dot = 0.0;
      for (std::size_t j = 0; j < k; ++j) dot += u[j] * b[j];
      for (std::size_t j = 0; j < k; ++j) u[j] -= dot * b[j];
    }
    const double norm = Norm(u);
    if (norm < 1e-12) continue;
    for (double& x : u) x /= norm;
    basis.push_back(std::move(u));
  }
  std::vector<Point> out(k, Point(dim, 0.0));
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t b = 0; b < basis.size(); ++b) {
      double dot = 0.0;
      for (std::size_t j = 0; j < k; ++j) dot += v[i][j] * basis[b][j];
      out[i][b] = dot;
    }
    const double norm = Norm(out[i]);
    for (double& x : out[i]) x *= scale / norm;
  }
  return out;
}

// Evenly spaced on a circle in the first two coordinates (a segment when
// dim = 1).
inline std::vector<Point> RingCenters(std::size_t k, std::size_t dim, double scale) {
  std::vector<Point> out(k, Point(dim, 0.0));
  for (std::size_t i = 0; i < k; ++i) {
    if (dim == 1) {
      out[i][0] = k == 1 ? 0.0 : -scale + 2.0 * scale * static_cast<double>(i) / static_cast<double>(k - 1);
      continue;
    }
    const double angle = 2.0 * std::numbers::pi * static_cast<double>(i) / static_cast<double>(k);
    out[i][0] = scale * std::cos(angle);
    out[i][1] = scale * std::sin(angle);
  }
  return out;
}

inline std::vector<Point> RandomSeparatedCenters(std::size_t k, std::size_t dim, double scale, double sep,
                                                 Rng& rng) {
  constexpr int kMaxTries = 100000;
  std::vector<Point> out;
  for (int tries = 0; out.size() < k; ++tries) {
    Require(tries < kMaxTries, ErrorCode::kDegenerate,
            "could not place " + std::to_string(k) + " centers at separation " + std::to_string(sep));
    Point c(dim);
    double norm2 = 0.0;
    for (double& v : c) {
      v = (2.0 * rng.Uniform() - 1.0) * scale;
      norm2 += v * v;
    }
    if (norm2 > scale * scale) continue;
    bool ok = true;
    for (const Point& o : out) ok = ok && Distance(o, c) >= sep;
    if (ok) out.push_back(std::move(c));
  }
  return out;
}

// Cluster sizes by largest remainder; ties go to the lower index.
inline std::vector<std::size_t> ClusterSizes(std::size_t n, std::size_t k, const std::vector<double>& weights) {
  std::vector<double> w = weights.empty() ? std::vector<double>(k, 1.0) : weights;
  Require(w.size() == k, ErrorCode::kDimensionMismatch, "need one weight per cluster");
  double total = 0.0;
  for (double v : w) {
    Require(v >= 0.0 && std::isfinite(v), ErrorCode::kInvalidArgument, "weights must be finite and >= 0");
    total += v;
  }
  Require(total > 0.0, ErrorCode::kInvalidArgument, "weights must not all be zero");
  std::vector<std::size_t> sizes(k);
  std::vector<std::pair<double, std::size_t>> rem;
  std::size_t used = 0;
  for (std::size_t i = 0; i < k; ++i) {
    const double exact = static_cast<double>(n) * w[i] / total;
    sizes[i] = static_cast<std::size_t>(std::floor(exact));
    used += sizes[i];
    rem.emplace_back(-(exact - std::floor(exact)), i);
  }
  std::sort(rem.begin(), rem.end());
  for (std::size_t j = 0; used < n; ++j, ++used) ++sizes[rem[j % k].second];
  return sizes;
}

inline Instance GenerateInstance(const InstanceSpec& spec) {
  Require(spec.k >= 1 && spec.dim >= 1 && spec.n >= spec.k, ErrorCode::kInvalidArgument,
          "instance needs k >= 1, d >= 1 and n >= k");
  Require(spec.radius > 0.0 && spec.sigma >= 0.0, ErrorCode::kInvalidArgument, "need radius > 0 and sigma >= 0");
  Require(spec.p == 1 || spec.p == 2, ErrorCode::kInvalidArgument, "p must be 1 or 2");
  Require(spec.max_attempts >= 1, ErrorCode::kInvalidArgument, "max_attempts must be >= 1");
  const Objective obj = ObjectiveFromExponent(spec.p);
  const Rng root(spec.seed, "instance");
  const std::vector<std::size_t> sizes = ClusterSizes(spec.n, spec.k, spec.weights);

  Instance out;
  out.spec = spec;
  for (int attempt = 1; attempt <= spec.max_attempts; ++attempt) {
    Rng rng = root.Fork(static_cast<std::uint64_t>(attempt));
    std::vector<Point> placed;
    switch (spec.placement) {
      case Placement::kSimplex: placed = SimplexVertices(spec.k, spec.dim, spec.scale); break;
      case Placement::kRing: placed = RingCenters(spec.k, spec.dim, spec.scale); break;
      case Placement::kRandomMinSeparation:
        placed = RandomSeparatedCenters(spec.k, spec.dim, spec.scale, spec.min_separation, rng);
        break;
    }
    Dataset data(spec.dim, spec.radius);
    data.Reserve(spec.n);
    std::vector<std::size_t> labels;
    labels.reserve(spec.n);
    std::vector<std::vector<std::size_t>> members(spec.k);
    for (std::size_t c = 0; c < spec.k; ++c) {
      for (std::size_t i = 0; i < sizes[c]; ++i) {
        Point p = placed[c];
        for (double& v : p) v += rng.Normal(spec.sigma);
        members[c].push_back(data.size());
        labels.push_back(c);
        data.Add(ClampToBall(p, spec.radius));
      }
    }
    std::vector<Point> oracle;
    for (std::size_t c = 0; c < spec.k; ++c) {
      if (members[c].empty()) {
        oracle.push_back(placed[c]);
        continue;
      }
      oracle.push_back(spec.p == 2 ? ClusterMean(data, members[c]) : ClusterMedian(data, members[c]));
    }
    out.data = std::move(data);
    out.labels = std::move(labels);
    out.placed = CenterSet(std::move(placed), spec.k, "placed");
    out.oracle = CenterSet(std::move(oracle), spec.k, "realized_oracle");
    out.oracle_cost = Cost(out.data, out.oracle, obj);
    out.stability = AuditStability(out.data, spec.k, obj, DefaultMethod(out.data),
                                   {spec.oracle_restarts, spec.seed});
    out.attempts = attempt;
    if (spec.k < 2 || out.stability.phi_p <= spec.max_phi_p) break;
    Require(attempt < spec.max_attempts, ErrorCode::kDegenerate,
            "realized separability ratio " + std::to_string(out.stability.phi_p) + " exceeds " +
                std::to_string(spec.max_phi_p) + " after " + std::to_string(attempt) + " attempts");
  }
  out.hash = DatasetHash(out.data);
  return out;
}

}  // namespace stabclust

#endif  // STABCLUST_INSTANCE_HPP_
