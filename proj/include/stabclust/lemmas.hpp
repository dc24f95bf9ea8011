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

// Randomized numerical checks of the geometric facts the algorithms rely
// on: the mean-shift identity, the pairwise-distance identity, the
// subset-mean bound, the Markov far-point bound, the sum-of-squares bound,
// and two k-median reassignment inequalities.

#ifndef STABCLUST_LEMMAS_HPP_
#define STABCLUST_LEMMAS_HPP_

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <nlohmann/json.hpp>
#include <string>
#include <vector>

#include "stabclust/geometry.hpp"
#include "stabclust/rng.hpp"

namespace stabclust {

struct LemmaReport {
  std::string name;
  std::size_t instances = 0;
  std::size_t passed = 0;
  double worst_relative_gap = 0.0;  // largest violation seen, relative

  bool ok() const { return passed == instances; }
  nlohmann::json ToJson() const {
    return {{"name", name},
            {"instances", instances},
            {"passed", passed},
            {"worst_relative_gap", worst_relative_gap},
            {"ok", ok()}};
  }
};

struct LemmaOptions {
  std::size_t instances = 1000;
  std::size_t max_n = 200;
  std::size_t max_dim = 8;
  double tolerance = 1e-9;
  std::uint64_t seed = 1;
};

namespace lemma_detail {

struct Cloud {
  std::vector<Point> points;
  std::size_t dim = 1;
};

// n in [2, max_n], d in [1, max_dim]; coordinates from a Gaussian with a
// random offset and scale so that magnitudes vary across instances.
inline Cloud RandomCloud(Rng& rng, const LemmaOptions& opt) {
  Cloud c;
  const std::size_t n = 2 + rng.Below(opt.max_n - 1);
  c.dim = 1 + rng.Below(opt.max_dim);
  const double scale = std::exp(4.0 * rng.Uniform() - 2.0);
  Point offset(c.dim);
  for (double& v : offset) v = 3.0 * rng.Normal();
  c.points.resize(n, Point(c.dim));
  for (auto& p : c.points) {
    for (std::size_t d = 0; d < c.dim; ++d) p[d] = offset[d] + scale * rng.Normal();
  }
  return c;
}

inline Dataset ToDataset(const Cloud& c) {
  double r = 0.0;
  for (const Point& p : c.points) r = std::max(r, Norm(p));
  return Dataset::FromRows(c.dim, c.points, 2.0 * r + 1.0);
}

inline double SumSqTo(const std::vector<Point>& pts, const Point& c) {
  double s = 0.0;
  for (const Point& p : pts) s += SquaredDistance(p, c);
  return s;
}

inline Point MeanOf(const std::vector<Point>& pts) {
  std::vector<std::size_t> idx(pts.size());
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
  const Dataset d = ToDataset({pts, pts.front().size()});
  return ClusterMean(d, idx);
}

struct Tally {
  LemmaReport report;
  double tol;
  bool instance_ok = true;

  // lhs == rhs up to relative tolerance.
  void Equal(double lhs, double rhs) {
    const double scale = std::max({std::fabs(lhs), std::fabs(rhs), 1e-300});
    const double gap = std::fabs(lhs - rhs) / scale;
    report.worst_relative_gap = std::max(report.worst_relative_gap, gap);
    if (gap > tol) instance_ok = false;
  }
  // lhs <= rhs up to relative tolerance on the larger magnitude.
  void AtMost(double lhs, double rhs) {
    const double scale = std::max({std::fabs(lhs), std::fabs(rhs), 1e-300});
    const double gap = (lhs - rhs) / scale;
    report.worst_relative_gap = std::max(report.worst_relative_gap, gap);
    if (gap > tol) instance_ok = false;
  }
  void EndInstance() {
    ++report.instances;
    if (instance_ok) ++report.passed;
    instance_ok = true;
  }
};

}  // namespace lemma_detail

// sum ||x - y||^2 = n ||y - c||^2 + sum ||x - c||^2 for the mean c.
inline LemmaReport CheckMeanShiftIdentity(const LemmaOptions& opt) {
  using namespace lemma_detail;
  Rng rng(opt.seed, "lemma/mean-shift");
  Tally t{{"mean_shift_identity"}, opt.tolerance};
  for (std::size_t it = 0; it < opt.instances; ++it) {
    const Cloud c = RandomCloud(rng, opt);
    const Point mean = MeanOf(c.points);
    Point y(c.dim);
    for (double& v : y) v = 3.0 * rng.Normal();
    const double n = static_cast<double>(c.points.size());
    t.Equal(SumSqTo(c.points, y), n * SquaredDistance(y, mean) + SumSqTo(c.points, mean));
    t.EndInstance();
  }
  return t.report;
}

// sum over unordered pairs ||x1 - x2||^2 = n sum ||x - c||^2.
inline LemmaReport CheckPairwiseIdentity(const LemmaOptions& opt) {
  using namespace lemma_detail;
  Rng rng(opt.seed, "lemma/pairwise");
  Tally t{{"pairwise_identity"}, opt.tolerance};
  for (std::size_t it = 0; it < opt.instances; ++it) {
    const Cloud c = RandomCloud(rng, opt);
    double pairs = 0.0;
    for (std::size_t i = 0; i < c.points.size(); ++i) {
      for (std::size_t j = i + 1; j < c.points.size(); ++j) pairs += SquaredDistance(c.points[i], c.points[j]);
    }
    const double n = static_cast<double>(c.points.size());
    t.Equal(pairs, n * SumSqTo(c.points, MeanOf(c.points)));
    t.EndInstance();
  }
  return t.report;
}

// ||mean(S) - mean(X)||^2 <= (OPT_1(X)/|X|) (|X \ S| / |S|) for S != {}.
inline LemmaReport CheckSubsetMeanBound(const LemmaOptions& opt) {
  using namespace lemma_detail;
  Rng rng(opt.seed, "lemma/subset-mean");
  Tally t{{"subset_mean_bound"}, opt.tolerance};
  for (std::size_t it = 0; it < opt.instances; ++it) {
    const Cloud c = RandomCloud(rng, opt);
    const double keep = rng.Uniform();
    std::vector<Point> subset;
    for (const Point& p : c.points) {
      if (rng.Uniform() < keep) subset.push_back(p);
    }
    if (subset.empty()) subset.push_back(c.points[rng.Below(c.points.size())]);
    const Point mx = MeanOf(c.points);
    const double n = static_cast<double>(c.points.size());
    const double s = static_cast<double>(subset.size());
    t.AtMost(SquaredDistance(MeanOf(subset), mx), SumSqTo(c.points, mx) / n * ((n - s) / s));
    t.EndInstance();
  }
  return t.report;
}

// |{x : ||x - mu|| >= r / a}| <= a^2 n, r the root-mean-square radius, for
// a in {0.1, ..., 1.0}.
inline LemmaReport CheckMarkovFarPoints(const LemmaOptions& opt) {
  using namespace lemma_detail;
  Rng rng(opt.seed, "lemma/markov");
  Tally t{{"markov_far_points"}, opt.tolerance};
  for (std::size_t it = 0; it < opt.instances; ++it) {
    const Cloud c = RandomCloud(rng, opt);
    const Point mu = MeanOf(c.points);
    const double n = static_cast<double>(c.points.size());
    const double r = std::sqrt(SumSqTo(c.points, mu) / n);
    for (int step = 1; step <= 10; ++step) {
      const double a = 0.1 * step;
      double far = 0.0;
      for (const Point& p : c.points) {
        if (Distance(p, mu) >= r / a) far += 1.0;
      }
      t.AtMost(far, a * a * n);
    }
    t.EndInstance();
  }
  return t.report;
}

// ||x + y||^2 <= 2 (||x||^2 + ||y||^2).
inline LemmaReport CheckSumOfSquaresBound(const LemmaOptions& opt) {
  using namespace lemma_detail;
  Rng rng(opt.seed, "lemma/sos");
  Tally t{{"sum_of_squares_bound"}, opt.tolerance};
  for (std::size_t it = 0; it < opt.instances; ++it) {
    const std::size_t dim = 1 + rng.Below(opt.max_dim);
    Point x(dim), y(dim), s(dim);
    for (std::size_t d = 0; d < dim; ++d) {
      x[d] = rng.Normal();
      y[d] = (rng.Bernoulli(0.2) ? -x[d] : 0.0) + rng.Normal();
      s[d] = x[d] + y[d];
    }
    const double nx = Norm(x), ny = Norm(y), ns = Norm(s);
    t.AtMost(ns * ns, 2.0 * (nx * nx + ny * ny));
    t.EndInstance();
  }
  return t.report;
}

namespace lemma_detail {

inline std::size_t NearestIndex(const Point& x, const std::vector<Point>& centers) {
  std::size_t best = 0;
  for (std::size_t j = 1; j < centers.size(); ++j) {
    if (SquaredDistance(x, centers[j]) < SquaredDistance(x, centers[best])) best = j;
  }
  return best;
}

}  // namespace lemma_detail

// Assigning each point to the optimal center nearest its B-center never
// beats the nearest-optimal-center assignment (k-median, any centers).
inline LemmaReport CheckReassignmentInequality(const LemmaOptions& opt) {
  using namespace lemma_detail;
  Rng rng(opt.seed, "lemma/reassign");
  Tally t{{"median_reassignment_inequality"}, opt.tolerance};
  for (std::size_t it = 0; it < opt.instances; ++it) {
    const Cloud c = RandomCloud(rng, opt);
    const std::size_t k = 1 + rng.Below(5);
    std::vector<Point> copt, b;
    for (std::size_t j = 0; j < k; ++j) {
      copt.push_back(c.points[rng.Below(c.points.size())]);
      Point q = c.points[rng.Below(c.points.size())];
      for (double& v : q) v += 0.5 * rng.Normal();
      b.push_back(q);
    }
    double via_b = 0.0, direct = 0.0;
    for (const Point& x : c.points) {
      const Point& bx = b[NearestIndex(x, b)];
      via_b += Distance(x, copt[NearestIndex(bx, copt)]);
      direct += Distance(x, copt[NearestIndex(x, copt)]);
    }
    t.AtMost(direct, via_b);
    t.EndInstance();
  }
  return t.report;
}

// Pointwise chain, for x with C*(x) != C*(B(x)):
// ||x - C*(x)|| + ||C*(x) - B(C*(x))|| >= ||x - B(C*(x))|| >= ||x - B(x)||
//   >= ||x - C*(B(x))|| - ||B(x) - C*(B(x))||.
inline LemmaReport CheckMedianTriangleChain(const LemmaOptions& opt) {
  using namespace lemma_detail;
  Rng rng(opt.seed, "lemma/triangle-chain");
  Tally t{{"median_triangle_chain"}, opt.tolerance};
  for (std::size_t it = 0; it < opt.instances; ++it) {
    const Cloud c = RandomCloud(rng, opt);
    const std::size_t k = 2 + rng.Below(4);
    std::vector<Point> copt, b;
    for (std::size_t j = 0; j < k; ++j) {
      copt.push_back(c.points[rng.Below(c.points.size())]);
      b.push_back(c.points[rng.Below(c.points.size())]);
    }
    for (const Point& x : c.points) {
      const Point& cx = copt[NearestIndex(x, copt)];
      const Point& bx = b[NearestIndex(x, b)];
      const Point& cbx = copt[NearestIndex(bx, copt)];
      if (SquaredDistance(cx, cbx) == 0.0) continue;
      const Point& bcx = b[NearestIndex(cx, b)];
      const double a0 = Distance(x, cx) + Distance(cx, bcx);
      const double a1 = Distance(x, bcx);
      const double a2 = Distance(x, bx);
      const double a3 = Distance(x, cbx) - Distance(bx, cbx);
      t.AtMost(a1, a0);
      t.AtMost(a2, a1);
      t.AtMost(a3, a2);
    }
    t.EndInstance();
  }
  return t.report;
}

inline std::vector<LemmaReport> RunLemmaSuite(const LemmaOptions& opt = {}) {
  return {CheckMeanShiftIdentity(opt),      CheckPairwiseIdentity(opt),
          CheckSubsetMeanBound(opt),        CheckMarkovFarPoints(opt),
          CheckSumOfSquaresBound(opt),      CheckReassignmentInequality(opt),
          CheckMedianTriangleChain(opt)};
}

}  // namespace stabclust

#endif  // STABCLUST_LEMMAS_HPP_
