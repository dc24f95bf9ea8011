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

// Deterministic geometry and cost kernel: datasets, center sets, k-means /
// k-median costs, nearest-center partitions, means and geometric medians,
// Lloyd iterations, the exact small-n optimum, and Wasserstein matching.

#ifndef STABCLUST_GEOMETRY_HPP_
#define STABCLUST_GEOMETRY_HPP_

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <numeric>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "stabclust/error.hpp"
#include "stabclust/rng.hpp"

namespace stabclust {

using Point = std::vector<double>;

// The exponent p of the clustering objective: sum over points of
// min_c ||x - c||^p.
enum class Objective : int { kMedian = 1, kMeans = 2 };

inline int Exponent(Objective obj) { return static_cast<int>(obj); }

inline Objective ObjectiveFromExponent(int p) {
  Require(p == 1 || p == 2, ErrorCode::kInvalidArgument,
          "objective exponent must be 1 or 2, got " + std::to_string(p));
  return static_cast<Objective>(p);
}

inline double SquaredDistance(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double t = a[i] - b[i];
    s += t * t;
  }
  return s;
}

inline double Distance(std::span<const double> a, std::span<const double> b) {
  return std::sqrt(SquaredDistance(a, b));
}

inline double Norm(std::span<const double> a) {
  double s = 0.0;
  for (double v : a) s += v * v;
  return std::sqrt(s);
}

// ||a - b||^p.
inline double PowerDistance(Objective obj, std::span<const double> a,
                            std::span<const double> b) {
  const double sq = SquaredDistance(a, b);
  return obj == Objective::kMeans ? sq : std::sqrt(sq);
}

// Radial projection onto the closed ball B(0, radius).
inline Point ClampToBall(std::span<const double> p, double radius) {
  Point out(p.begin(), p.end());
  const double norm = Norm(p);
  if (norm > radius && norm > 0.0) {
    const double scale = radius / norm;
    for (double& v : out) v *= scale;
  }
  return out;
}

// Points are accepted when their norm is within this relative slack of the
// radius; clipping to the sphere can overshoot by a rounding error.
inline constexpr double kBallSlack = 1e-12;

// An ordered collection of points of a common dimension inside B(0, radius).
// Coordinates are stored row-major in one contiguous buffer.
class Dataset {
 public:
  Dataset(std::size_t dim, double radius) : dim_(dim), radius_(radius) {
    Require(dim >= 1, ErrorCode::kInvalidArgument, "dataset dimension must be >= 1");
    Require(radius > 0.0 && std::isfinite(radius), ErrorCode::kInvalidArgument,
            "dataset radius must be positive and finite");
  }

  static Dataset FromRows(const std::vector<Point>& rows, double radius) {
    Require(!rows.empty(), ErrorCode::kEmptyInput,
            "cannot infer dimension from an empty row list");
    Dataset out(rows.front().size(), radius);
    out.coords_.reserve(rows.size() * out.dim_);
    for (const Point& row : rows) out.Add(row);
    return out;
  }

  static Dataset FromRows(std::size_t dim, const std::vector<Point>& rows,
                          double radius) {
    Dataset out(dim, radius);
    for (const Point& row : rows) out.Add(row);
    return out;
  }

  // Appends a point; rejects wrong dimension, non-finite values and points
  // outside the ball.
  void Add(std::span<const double> p) {
    Require(p.size() == dim_, ErrorCode::kDimensionMismatch,
            "point has dimension " + std::to_string(p.size()) + ", dataset has " +
                std::to_string(dim_));
    for (double v : p) {
      Require(std::isfinite(v), ErrorCode::kInvalidArgument, "non-finite coordinate");
    }
    Require(Norm(p) <= radius_ * (1.0 + kBallSlack), ErrorCode::kOutOfBall,
            "point of norm " + std::to_string(Norm(p)) + " lies outside B(0, " +
                std::to_string(radius_) + ")");
    coords_.insert(coords_.end(), p.begin(), p.end());
  }

  std::size_t size() const { return dim_ == 0 ? 0 : coords_.size() / dim_; }
  bool empty() const { return coords_.empty(); }
  std::size_t dim() const { return dim_; }
  double radius() const { return radius_; }

  std::span<const double> point(std::size_t i) const {
    return {coords_.data() + i * dim_, dim_};
  }
  const std::vector<double>& coords() const { return coords_; }

  Dataset Subset(std::span<const std::size_t> indices) const {
    Dataset out(dim_, radius_);
    out.coords_.reserve(indices.size() * dim_);
    for (std::size_t i : indices) {
      const auto p = point(i);
      out.coords_.insert(out.coords_.end(), p.begin(), p.end());
    }
    return out;
  }

  void Reserve(std::size_t n) { coords_.reserve(n * dim_); }

 private:
  std::size_t dim_;
  double radius_;
  std::vector<double> coords_;
};

// Up to k centers of a common dimension, labelled with the step that
// produced them. Centers need not lie inside the data ball.
class CenterSet {
 public:
  CenterSet() = default;
  CenterSet(std::vector<Point> centers, std::string provenance = {})
      : CenterSet(std::move(centers), 0, std::move(provenance)) {}
  CenterSet(std::vector<Point> centers, std::size_t k, std::string provenance)
      : centers_(std::move(centers)),
        k_(k == 0 ? centers_.size() : k),
        provenance_(std::move(provenance)) {
    Require(!centers_.empty(), ErrorCode::kEmptyInput, "center set must be non-empty");
    const std::size_t d = centers_.front().size();
    Require(d >= 1, ErrorCode::kInvalidArgument, "centers must have dimension >= 1");
    for (const Point& c : centers_) {
      Require(c.size() == d, ErrorCode::kDimensionMismatch,
              "centers have inconsistent dimensions");
      for (double v : c) {
        Require(std::isfinite(v), ErrorCode::kInvalidArgument, "non-finite center");
      }
    }
  }

  std::size_t size() const { return centers_.size(); }
  bool empty() const { return centers_.empty(); }
  std::size_t k() const { return k_; }
  std::size_t dim() const { return centers_.empty() ? 0 : centers_.front().size(); }
  const Point& operator[](std::size_t i) const { return centers_[i]; }
  const std::vector<Point>& centers() const { return centers_; }
  const std::string& provenance() const { return provenance_; }
  void set_provenance(std::string p) { provenance_ = std::move(p); }

  auto begin() const { return centers_.begin(); }
  auto end() const { return centers_.end(); }

 private:
  std::vector<Point> centers_;
  std::size_t k_ = 0;
  std::string provenance_;
};

struct Partition {
  std::vector<std::size_t> cluster_of;     // per point, index into the center set
  std::vector<std::size_t> cluster_sizes;  // per center
  std::vector<std::vector<std::size_t>> members;
};

namespace internal {

inline void CheckDims(const Dataset& data, const CenterSet& centers) {
  Require(!centers.empty(), ErrorCode::kEmptyInput, "center set is empty");
  Require(centers.dim() == data.dim(), ErrorCode::kDimensionMismatch,
          "centers have dimension " + std::to_string(centers.dim()) +
              ", data has " + std::to_string(data.dim()));
}

}  // namespace internal

// Index of the nearest center (lowest index on ties) and ||x - c||^2.
inline std::pair<std::size_t, double> NearestCenter(std::span<const double> x,
                                                    const CenterSet& centers) {
  std::size_t best = 0;
  double best_sq = std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < centers.size(); ++j) {
    const double sq = SquaredDistance(x, centers[j]);
    if (sq < best_sq) {
      best_sq = sq;
      best = j;
    }
  }
  return {best, best_sq};
}

inline double Cost(const Dataset& data, const CenterSet& centers, Objective obj) {
  if (data.empty()) return 0.0;
  internal::CheckDims(data, centers);
  double total = 0.0;
  for (std::size_t i = 0; i < data.size(); ++i) {
    const double sq = NearestCenter(data.point(i), centers).second;
    total += obj == Objective::kMeans ? sq : std::sqrt(sq);
  }
  return total;
}

// Nearest center under the Euclidean metric; the argmin is the same for
// p = 1 and p = 2, the objective is accepted for interface symmetry.
inline Partition PartitionByNearest(const Dataset& data, const CenterSet& centers,
                                    Objective /*obj*/ = Objective::kMeans) {
  if (!data.empty()) internal::CheckDims(data, centers);
  Partition out;
  out.cluster_of.resize(data.size());
  out.cluster_sizes.assign(centers.size(), 0);
  out.members.assign(centers.size(), {});
  for (std::size_t i = 0; i < data.size(); ++i) {
    const std::size_t j = NearestCenter(data.point(i), centers).first;
    out.cluster_of[i] = j;
    ++out.cluster_sizes[j];
    out.members[j].push_back(i);
  }
  return out;
}

inline Point ClusterMean(const Dataset& data, std::span<const std::size_t> subset) {
  Require(!subset.empty(), ErrorCode::kEmptyInput, "mean of an empty subset");
  Point mean(data.dim(), 0.0);
  for (std::size_t i : subset) {
    const auto p = data.point(i);
    for (std::size_t d = 0; d < mean.size(); ++d) mean[d] += p[d];
  }
  for (double& v : mean) v /= static_cast<double>(subset.size());
  return mean;
}

inline Point ClusterMean(const Dataset& data) {
  std::vector<std::size_t> all(data.size());
  std::iota(all.begin(), all.end(), std::size_t{0});
  return ClusterMean(data, all);
}

inline double SumOfDistances(const Dataset& data, std::span<const std::size_t> subset,
                             std::span<const double> y) {
  double s = 0.0;
  for (std::size_t i : subset) s += Distance(data.point(i), y);
  return s;
}

inline constexpr double kDefaultMedianTolerance = 1e-10;

// Geometric median of the subset. In one dimension this is the exact
// coordinate median (midpoint of the two middle values for even counts).
// Otherwise Weiszfeld iteration with the Vardi-Zhang modification for
// iterates that land on data points, started from the mean, stopped when the
// relative improvement of the 1-median cost drops below `tol`.
inline Point ClusterMedian(const Dataset& data, std::span<const std::size_t> subset,
                           double tol = kDefaultMedianTolerance) {
  Require(!subset.empty(), ErrorCode::kEmptyInput, "median of an empty subset");
  Require(tol > 0.0, ErrorCode::kInvalidArgument, "median tolerance must be positive");
  const std::size_t dim = data.dim();
  if (dim == 1) {
    std::vector<double> v;
    v.reserve(subset.size());
    for (std::size_t i : subset) v.push_back(data.point(i)[0]);
    const std::size_t mid = v.size() / 2;
    std::nth_element(v.begin(), v.begin() + mid, v.end());
    double m = v[mid];
    if (v.size() % 2 == 0) {
      const double lower = *std::max_element(v.begin(), v.begin() + mid);
      m = 0.5 * (lower + m);
    }
    return {m};
  }

  Point y = ClusterMean(data, subset);
  double cost = SumOfDistances(data, subset, y);
  constexpr int kMaxIterations = 5000;
  Point weighted(dim), direction(dim), next(dim);
  for (int iter = 0; iter < kMaxIterations; ++iter) {
    std::fill(weighted.begin(), weighted.end(), 0.0);
    std::fill(direction.begin(), direction.end(), 0.0);
    double weight_sum = 0.0;
    std::size_t coincident = 0;
    for (std::size_t i : subset) {
      const auto x = data.point(i);
      const double dist = Distance(x, y);
      if (dist <= 1e-300) {
        ++coincident;
        continue;
      }
      const double w = 1.0 / dist;
      weight_sum += w;
      for (std::size_t d = 0; d < dim; ++d) {
        weighted[d] += w * x[d];
        direction[d] += w * (x[d] - y[d]);
      }
    }
    if (weight_sum == 0.0) break;  // every point coincides with y
    const double pull = Norm(direction);
    if (coincident == 0) {
      for (std::size_t d = 0; d < dim; ++d) next[d] = weighted[d] / weight_sum;
    } else {
      // Vardi-Zhang: y is optimal when the pull of the other points does not
      // exceed the multiplicity of y.
      const double ratio = static_cast<double>(coincident) / pull;
      if (ratio >= 1.0) break;
      for (std::size_t d = 0; d < dim; ++d) {
        next[d] = (1.0 - ratio) * (weighted[d] / weight_sum) + ratio * y[d];
      }
    }
    const double next_cost = SumOfDistances(data, subset, next);
    if (next_cost > cost) break;
    const double improvement = cost - next_cost;
    y.swap(next);
    if (improvement <= tol * std::max(cost, 1e-300)) {
      cost = next_cost;
      break;
    }
    cost = next_cost;
  }
  return y;
}

inline Point ClusterCenter(const Dataset& data, std::span<const std::size_t> subset,
                           Objective obj) {
  return obj == Objective::kMeans ? ClusterMean(data, subset) : ClusterMedian(data, subset);
}

// One non-private Lloyd step: reassign to the nearest center, then move each
// center to its cluster mean (p = 2) or geometric median (p = 1). Empty
// clusters keep their previous center.
inline CenterSet LloydStep(const Dataset& data, const CenterSet& centers, Objective obj) {
  const Partition part = PartitionByNearest(data, centers, obj);
  std::vector<Point> next = centers.centers();
  for (std::size_t j = 0; j < centers.size(); ++j) {
    if (!part.members[j].empty()) next[j] = ClusterCenter(data, part.members[j], obj);
  }
  return CenterSet(std::move(next), centers.k(), "lloyd_step");
}

struct LloydOptions {
  double relative_tolerance = 1e-9;
  int max_iterations = 300;
};

// Runs Lloyd steps until the relative cost improvement falls below the
// tolerance. Returns the final centers and their cost.
inline std::pair<CenterSet, double> LloydToConvergence(const Dataset& data,
                                                      CenterSet centers, Objective obj,
                                                      const LloydOptions& options = {}) {
  double cost = Cost(data, centers, obj);
  for (int iter = 0; iter < options.max_iterations; ++iter) {
    CenterSet next = LloydStep(data, centers, obj);
    const double next_cost = Cost(data, next, obj);
    if (next_cost > cost) break;
    const double improvement = cost - next_cost;
    centers = std::move(next);
    cost = next_cost;
    if (improvement <= options.relative_tolerance * cost) break;
  }
  return {std::move(centers), cost};
}

// k-means++ (p = 2, D^2 sampling) or k-median++ (p = 1, D sampling) seeding
// over a weighted point set. Weights may be empty (all ones).
inline std::vector<Point> PlusPlusSeeding(const Dataset& data,
                                          std::span<const double> weights, std::size_t k,
                                          Objective obj, Rng& rng) {
  const std::size_t n = data.size();
  auto weight = [&](std::size_t i) { return weights.empty() ? 1.0 : weights[i]; };
  std::vector<Point> seeds;
  std::vector<double> score(n, std::numeric_limits<double>::infinity());

  auto sample_index = [&](auto&& mass) {
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) total += mass(i);
    if (!(total > 0.0)) return static_cast<std::size_t>(rng.Below(n));
    double target = rng.Uniform() * total;
    for (std::size_t i = 0; i < n; ++i) {
      target -= mass(i);
      if (target <= 0.0 && mass(i) > 0.0) return i;
    }
    for (std::size_t i = n; i-- > 0;) {
      if (mass(i) > 0.0) return i;
    }
    return n - 1;
  };

  std::size_t first = sample_index([&](std::size_t i) { return weight(i); });
  seeds.emplace_back(data.point(first).begin(), data.point(first).end());
  while (seeds.size() < k) {
    const Point& last = seeds.back();
    for (std::size_t i = 0; i < n; ++i) {
      score[i] = std::min(score[i], PowerDistance(obj, data.point(i), last));
    }
    const std::size_t next = sample_index([&](std::size_t i) { return weight(i) * score[i]; });
    seeds.emplace_back(data.point(next).begin(), data.point(next).end());
  }
  return seeds;
}

// Best-of-restarts ++ seeding followed by Lloyd to convergence (relative
// improvement < 1e-9). Deterministic given the seed.
inline CenterSet KMeansPPLloyd(const Dataset& data, std::size_t k, Objective obj,
                               int restarts, std::uint64_t seed) {
  Require(k >= 1, ErrorCode::kInvalidArgument, "k must be >= 1");
  Require(k <= data.size(), ErrorCode::kInvalidArgument,
          "k = " + std::to_string(k) + " exceeds n = " + std::to_string(data.size()));
  Require(restarts >= 1, ErrorCode::kInvalidArgument, "restarts must be >= 1");
  Rng root(seed, "kmeanspp_lloyd");
  std::pair<CenterSet, double> best{CenterSet{}, std::numeric_limits<double>::infinity()};
  for (int r = 0; r < restarts; ++r) {
    Rng rng = root.Fork(static_cast<std::uint64_t>(r));
    CenterSet seeds(PlusPlusSeeding(data, {}, k, obj, rng), k, "kmeanspp_seed");
    auto result = LloydToConvergence(data, std::move(seeds), obj);
    if (result.second < best.second) best = std::move(result);
  }
  best.first.set_provenance(obj == Objective::kMeans ? "kmeanspp_lloyd" : "kmedianpp_lloyd");
  return std::move(best.first);
}

// Weighted Lloyd over a small weighted point set (e.g. histogram cells).
inline CenterSet WeightedKMeansPP(const Dataset& points, std::span<const double> weights,
                                  std::size_t k, int restarts, Rng& rng) {
  Require(!points.empty(), ErrorCode::kEmptyInput, "no weighted points");
  Require(weights.size() == points.size(), ErrorCode::kDimensionMismatch,
          "weights and points differ in length");
  const std::size_t n = points.size();
  auto weighted_cost = [&](const CenterSet& c) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += weights[i] * NearestCenter(points.point(i), c).second;
    return s;
  };
  const std::size_t kk = std::min(k, n);
  std::pair<CenterSet, double> best{CenterSet{}, std::numeric_limits<double>::infinity()};
  for (int r = 0; r < restarts; ++r) {
    Rng local = rng.Fork(static_cast<std::uint64_t>(r));
    CenterSet centers(PlusPlusSeeding(points, weights, kk, Objective::kMeans, local), k,
                      "weighted_kmeanspp");
    double cost = weighted_cost(centers);
    for (int iter = 0; iter < 100; ++iter) {
      std::vector<Point> sums(centers.size(), Point(points.dim(), 0.0));
      std::vector<double> mass(centers.size(), 0.0);
      for (std::size_t i = 0; i < n; ++i) {
        const std::size_t j = NearestCenter(points.point(i), centers).first;
        mass[j] += weights[i];
        const auto p = points.point(i);
        for (std::size_t d = 0; d < p.size(); ++d) sums[j][d] += weights[i] * p[d];
      }
      std::vector<Point> next = centers.centers();
      for (std::size_t j = 0; j < next.size(); ++j) {
        if (mass[j] > 0.0) {
          for (std::size_t d = 0; d < next[j].size(); ++d) next[j][d] = sums[j][d] / mass[j];
        }
      }
      CenterSet candidate(std::move(next), k, "weighted_lloyd");
      const double next_cost = weighted_cost(candidate);
      if (next_cost >= cost * (1.0 - 1e-12)) {
        if (next_cost < cost) {
          centers = std::move(candidate);
          cost = next_cost;
        }
        break;
      }
      centers = std::move(candidate);
      cost = next_cost;
    }
    if (cost < best.second) best = {std::move(centers), cost};
  }
  return std::move(best.first);
}

struct OptResult {
  CenterSet centers;
  double cost = 0.0;
};

inline constexpr std::size_t kBruteForceMaxPoints = 14;

// Exact OPT^p_k by minimizing over all partitions of the points into k
// non-empty blocks (dynamic programming over subsets, 3^n work). Each block is
// centered at its mean (p = 2) or geometric median (p = 1). Test oracle only:
// refuses n > 14.
inline OptResult BruteForceOpt(const Dataset& data, std::size_t k, Objective obj) {
  const std::size_t n = data.size();
  Require(n <= kBruteForceMaxPoints, ErrorCode::kTooLarge,
          "brute-force optimum is limited to n <= 14, got n = " + std::to_string(n));
  Require(n >= 1, ErrorCode::kEmptyInput, "brute-force optimum of an empty dataset");
  Require(k >= 1, ErrorCode::kInvalidArgument, "k must be >= 1");
  if (k >= n) {
    std::vector<Point> centers;
    for (std::size_t i = 0; i < n; ++i) centers.emplace_back(data.point(i).begin(), data.point(i).end());
    return {CenterSet(std::move(centers), k, "brute_force_opt"), 0.0};
  }

  const std::size_t full = (std::size_t{1} << n) - 1;
  std::vector<double> block_cost(full + 1, 0.0);
  std::vector<std::size_t> idx;
  for (std::size_t mask = 1; mask <= full; ++mask) {
    idx.clear();
    for (std::size_t i = 0; i < n; ++i) {
      if (mask >> i & 1U) idx.push_back(i);
    }
    const Point c = ClusterCenter(data, idx, obj);
    double s = 0.0;
    for (std::size_t i : idx) s += PowerDistance(obj, data.point(i), c);
    block_cost[mask] = s;
  }

  constexpr double kInf = std::numeric_limits<double>::infinity();
  // exact[j][mask]: best cost of splitting `mask` into exactly j+1 blocks.
  std::vector<std::vector<double>> exact(k, std::vector<double>(full + 1, kInf));
  std::vector<std::vector<std::size_t>> choice(k, std::vector<std::size_t>(full + 1, 0));
  for (std::size_t mask = 1; mask <= full; ++mask) {
    exact[0][mask] = block_cost[mask];
    choice[0][mask] = mask;
  }
  for (std::size_t j = 1; j < k; ++j) {
    for (std::size_t mask = 1; mask <= full; ++mask) {
      const std::size_t low = mask & (~mask + 1);
      const std::size_t rest = mask ^ low;
      // Blocks containing the lowest element: low | sub for sub a proper
      // subset of the remaining elements.
      for (std::size_t sub = rest;; sub = (sub - 1) & rest) {
        const std::size_t block = low | sub;
        if (block != mask) {
          const double c = block_cost[block] + exact[j - 1][mask ^ block];
          if (c < exact[j][mask]) {
            exact[j][mask] = c;
            choice[j][mask] = block;
          }
        }
        if (sub == 0) break;
      }
    }
  }

  std::vector<Point> centers;
  std::size_t mask = full;
  for (std::size_t j = k; j-- > 0;) {
    const std::size_t block = choice[j][mask];
    idx.clear();
    for (std::size_t i = 0; i < n; ++i) {
      if (block >> i & 1U) idx.push_back(i);
    }
    centers.push_back(ClusterCenter(data, idx, obj));
    mask ^= block;
  }
  return {CenterSet(std::move(centers), k, "brute_force_opt"), exact[k - 1][full]};
}

struct Matching {
  std::vector<std::size_t> assignment;  // assignment[i] = index into the second set
  double distance = 0.0;                // sqrt of the summed squared distances
};

inline void CheckSameShape(const CenterSet& a, const CenterSet& b) {
  Require(a.size() == b.size(), ErrorCode::kInvalidArgument,
          "wasserstein needs equal cardinalities, got " + std::to_string(a.size()) +
              " and " + std::to_string(b.size()));
  Require(a.dim() == b.dim(), ErrorCode::kDimensionMismatch,
          "center sets have different dimensions");
}

// Exhaustive minimum over all permutations; factorial time.
inline Matching WassersteinExhaustive(const CenterSet& a, const CenterSet& b) {
  CheckSameShape(a, b);
  const std::size_t k = a.size();
  std::vector<std::size_t> perm(k);
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  Matching best{perm, std::numeric_limits<double>::infinity()};
  do {
    double s = 0.0;
    for (std::size_t i = 0; i < k; ++i) s += SquaredDistance(a[i], b[perm[i]]);
    if (s < best.distance) best = {perm, s};
  } while (std::next_permutation(perm.begin(), perm.end()));
  best.distance = std::sqrt(best.distance);
  return best;
}

// Hungarian algorithm (shortest augmenting paths with potentials) on the
// squared-distance matrix; O(k^3).
inline Matching WassersteinHungarian(const CenterSet& a, const CenterSet& b) {
  CheckSameShape(a, b);
  const std::size_t k = a.size();
  constexpr double kInf = std::numeric_limits<double>::infinity();
  std::vector<double> u(k + 1, 0.0), v(k + 1, 0.0), minv(k + 1);
  std::vector<std::size_t> p(k + 1, 0), way(k + 1, 0);
  std::vector<char> used(k + 1);
  auto cost = [&](std::size_t i, std::size_t j) { return SquaredDistance(a[i - 1], b[j - 1]); };
  for (std::size_t i = 1; i <= k; ++i) {
    p[0] = i;
    std::size_t j0 = 0;
    std::fill(minv.begin(), minv.end(), kInf);
    std::fill(used.begin(), used.end(), 0);
    do {
      used[j0] = 1;
      const std::size_t i0 = p[j0];
      double delta = kInf;
      std::size_t j1 = 0;
      for (std::size_t j = 1; j <= k; ++j) {
        if (used[j]) continue;
        const double cur = cost(i0, j) - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (std::size_t j = 0; j <= k; ++j) {
        if (used[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      const std::size_t j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0 != 0);
  }
  Matching out;
  out.assignment.assign(k, 0);
  for (std::size_t j = 1; j <= k; ++j) out.assignment[p[j] - 1] = j - 1;
  double s = 0.0;
  for (std::size_t i = 0; i < k; ++i) s += SquaredDistance(a[i], b[out.assignment[i]]);
  out.distance = std::sqrt(s);
  return out;
}

inline constexpr std::size_t kExhaustiveMatchingLimit = 8;

inline Matching WassersteinMatching(const CenterSet& a, const CenterSet& b) {
  return a.size() <= kExhaustiveMatchingLimit ? WassersteinExhaustive(a, b)
                                              : WassersteinHungarian(a, b);
}

// min over permutations pi of sqrt(sum_i ||a_i - b_pi(i)||^2).
inline double Wasserstein(const CenterSet& a, const CenterSet& b) {
  return WassersteinMatching(a, b).distance;
}

// D_i = min_{j != i} ||c_i - c_j|| for each center (infinity when k = 1).
inline std::vector<double> NearestOtherCenterDistances(const CenterSet& centers) {
  std::vector<double> out(centers.size(), std::numeric_limits<double>::infinity());
  for (std::size_t i = 0; i < centers.size(); ++i) {
    for (std::size_t j = 0; j < centers.size(); ++j) {
      if (i != j) out[i] = std::min(out[i], Distance(centers[i], centers[j]));
    }
  }
  return out;
}

}  // namespace stabclust

#endif  // STABCLUST_GEOMETRY_HPP_
