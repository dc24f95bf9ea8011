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

// Independent reference computations used only by the tests. They are
// deliberately naive and share no code paths with the library beyond the
// Dataset / CenterSet containers.

#ifndef STABCLUST_TESTS_ORACLES_HPP_
#define STABCLUST_TESTS_ORACLES_HPP_

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numeric>
#include <vector>

#include "stabclust/geometry.hpp"
#include "stabclust/rng.hpp"

namespace stabclust::oracle {

inline double Sq(double v) { return v * v; }

inline double NaiveSqDist(const std::vector<double>& a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += Sq(a[i] - b[i]);
  return s;
}

inline double NaiveCost(const Dataset& data, const std::vector<Point>& centers, int p) {
  double total = 0.0;
  for (std::size_t i = 0; i < data.size(); ++i) {
    double best = std::numeric_limits<double>::infinity();
    for (const Point& c : centers) best = std::min(best, NaiveSqDist(c, data.point(i)));
    total += p == 2 ? best : std::sqrt(best);
  }
  return total;
}

// OPT^2_k by enumerating every labelling of the points with k labels
// (k^n labellings) and centering each block at its mean.
inline double EnumeratedKMeansOpt(const Dataset& data, std::size_t k) {
  const std::size_t n = data.size();
  const std::size_t dim = data.dim();
  std::vector<std::size_t> label(n, 0);
  double best = std::numeric_limits<double>::infinity();
  while (true) {
    std::vector<Point> sums(k, Point(dim, 0.0));
    std::vector<double> counts(k, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      counts[label[i]] += 1.0;
      for (std::size_t d = 0; d < dim; ++d) sums[label[i]][d] += data.point(i)[d];
    }
    double cost = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const std::size_t j = label[i];
      for (std::size_t d = 0; d < dim; ++d) cost += Sq(data.point(i)[d] - sums[j][d] / counts[j]);
    }
    best = std::min(best, cost);
    std::size_t pos = 0;
    while (pos < n && ++label[pos] == k) label[pos++] = 0;
    if (pos == n) break;
  }
  return best;
}

// Minimum over all k! permutations by recursive search.
inline double PermutationWasserstein(const CenterSet& a, const CenterSet& b) {
  const std::size_t k = a.size();
  std::vector<char> used(k, 0);
  double best = std::numeric_limits<double>::infinity();
  auto rec = [&](auto&& self, std::size_t i, double acc) -> void {
    if (i == k) {
      best = std::min(best, acc);
      return;
    }
    for (std::size_t j = 0; j < k; ++j) {
      if (used[j]) continue;
      used[j] = 1;
      self(self, i + 1, acc + NaiveSqDist(a[i], b[j]));
      used[j] = 0;
    }
  };
  rec(rec, 0, 0.0);
  return std::sqrt(best);
}

// Uniform point in the ball of the given radius (rejection from the cube).
inline Point UniformInBall(std::size_t dim, double radius, Rng& rng) {
  while (true) {
    Point p(dim);
    double norm2 = 0.0;
    for (double& v : p) {
      v = (2.0 * rng.Uniform() - 1.0) * radius;
      norm2 += v * v;
    }
    if (norm2 <= radius * radius) return p;
  }
}

inline Dataset RandomDataset(std::size_t n, std::size_t dim, double radius, Rng& rng) {
  Dataset data(dim, radius);
  for (std::size_t i = 0; i < n; ++i) data.Add(UniformInBall(dim, radius, rng));
  return data;
}

// Two well separated 1D or 2D blobs, points clipped to the ball.
inline Dataset TwoBlobs(std::size_t n_per_blob, std::size_t dim, double offset, double stddev,
                        Rng& rng) {
  Dataset data(dim, 1.0);
  for (int side : {-1, 1}) {
    for (std::size_t i = 0; i < n_per_blob; ++i) {
      Point p(dim, 0.0);
      p[0] = side * offset;
      for (double& v : p) v += rng.Normal(stddev);
      data.Add(ClampToBall(p, 1.0));
    }
  }
  return data;
}

}  // namespace stabclust::oracle

#endif  // STABCLUST_TESTS_ORACLES_HPP_
