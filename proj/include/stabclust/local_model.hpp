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

// Simulated local-model protocols. Every user randomizes its own point and
// emits a UserMessage; server-side aggregators only ever receive spans of
// messages. LocalPopulation is the one place that holds raw points, and it
// hands each user nothing but that user's own row.

#ifndef STABCLUST_LOCAL_MODEL_HPP_
#define STABCLUST_LOCAL_MODEL_HPP_

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <map>
#include <nlohmann/json.hpp>
#include <ostream>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "stabclust/error.hpp"
#include "stabclust/geometry.hpp"
#include "stabclust/mechanisms.hpp"
#include "stabclust/outcome.hpp"
#include "stabclust/private_kmeans.hpp"
#include "stabclust/rng.hpp"

namespace stabclust {

struct UserMessage {
  std::size_t user_id = 0;
  int round = 0;
  std::string phase;
  std::vector<double> payload;          // real-valued report
  std::vector<std::uint32_t> set_bits;  // unary report: indices of the 1 bits
  double noise_scale = 0.0;             // Gaussian sigma or bit flip probability

  nlohmann::json ToJson() const {
    return {{"user", user_id}, {"round", round},   {"phase", phase},
            {"payload", payload}, {"bits", set_bits}, {"noise", noise_scale}};
  }
};

using TranscriptSink = std::function<void(const UserMessage&)>;

// Writes one JSON object per line.
inline TranscriptSink JsonlTranscript(std::ostream& out) {
  return [&out](const UserMessage& m) { out << m.ToJson().dump() << '\n'; };
}

// Owns the users. A round calls `randomize(user_id, own_point, user_rng)` once
// per user and feeds the resulting messages to `consume` in batches.
class LocalPopulation {
 public:
  explicit LocalPopulation(const Dataset& data, const TranscriptSink* sink = nullptr)
      : data_(data), sink_(sink) {}

  std::size_t size() const { return data_.size(); }
  std::size_t dim() const { return data_.dim(); }
  double radius() const { return data_.radius(); }

  template <class Randomize, class Consume>
  void Round(Rng& round_rng, Randomize&& randomize, Consume&& consume) {
    constexpr std::size_t kBatch = 4096;
    const int id = next_round_++;
    std::vector<UserMessage> batch;
    batch.reserve(std::min(kBatch, size()));
    for (std::size_t u = 0; u < size(); ++u) {
      Rng user_rng = round_rng.Fork(static_cast<std::uint64_t>(u));
      UserMessage m = randomize(u, data_.point(u), user_rng);
      m.user_id = u;
      m.round = id;
      if (sink_ && *sink_) (*sink_)(m);
      batch.push_back(std::move(m));
      if (batch.size() == kBatch) {
        consume(std::span<const UserMessage>(batch));
        batch.clear();
      }
    }
    if (!batch.empty()) consume(std::span<const UserMessage>(batch));
  }

  int rounds() const { return next_round_; }

  // Test-mode diagnostics only; protocol code must not call this.
  const Dataset& diagnostics_data() const { return data_; }

 private:
  const Dataset& data_;
  const TranscriptSink* sink_;
  int next_round_ = 0;
};

// ---- frequency oracle (unary encoding + randomized response) ----

inline double UnaryFlipProbability(double epsilon) {
  return std::isinf(epsilon) ? 0.0 : 1.0 / (1.0 + std::exp(epsilon / 2.0));
}

// One-hot encodes `value` over `domain` bits and flips each independently.
inline UserMessage UnaryRandomize(std::size_t value, std::size_t domain, double epsilon, Rng& rng,
                                  std::string phase = "frequency") {
  UserMessage m;
  m.phase = std::move(phase);
  m.noise_scale = UnaryFlipProbability(epsilon);
  for (std::size_t j = 0; j < domain; ++j) {
    const bool bit = (j == value) != rng.Bernoulli(m.noise_scale);
    if (bit) m.set_bits.push_back(static_cast<std::uint32_t>(j));
  }
  return m;
}

class FrequencyAggregator {
 public:
  FrequencyAggregator(std::size_t domain, double epsilon)
      : counts_(domain, 0.0), flip_(UnaryFlipProbability(epsilon)) {
    Require(domain >= 1, ErrorCode::kInvalidArgument, "frequency oracle needs a non-empty domain");
  }

  void Consume(std::span<const UserMessage> messages) {
    for (const UserMessage& m : messages) {
      for (std::uint32_t b : m.set_bits) {
        Require(b < counts_.size(), ErrorCode::kInvalidArgument, "report bit outside the domain");
        counts_[b] += 1.0;
      }
      ++n_;
    }
  }

  // (count - n q) / (1 - 2q), unbiased for the true frequency.
  std::vector<double> Estimates() const {
    std::vector<double> out(counts_.size());
    const double n = static_cast<double>(n_);
    for (std::size_t u = 0; u < counts_.size(); ++u) out[u] = (counts_[u] - n * flip_) / (1.0 - 2.0 * flip_);
    return out;
  }

 private:
  std::vector<double> counts_;
  double flip_;
  std::size_t n_ = 0;
};

// (3/eps) sqrt(n ln(4/beta)): per-symbol error that holds w.p. 1 - beta.
inline double FrequencyErrorBound(std::size_t n, double epsilon, double beta) {
  return 3.0 / epsilon * std::sqrt(static_cast<double>(n) * std::log(4.0 / beta));
}

// Each user holds values[u] in [0, domain). (eps, 0)-LDP per user.
inline std::vector<double> LdpFrequencyOracle(std::span<const std::size_t> values, std::size_t domain,
                                              double epsilon, Rng& rng, const TranscriptSink* sink = nullptr) {
  Require(domain >= 1, ErrorCode::kInvalidArgument, "frequency oracle needs a non-empty domain");
  FrequencyAggregator server(domain, epsilon);
  std::size_t u = 0;
  std::vector<UserMessage> batch;
  for (std::size_t value : values) {
    Require(value < domain, ErrorCode::kInvalidArgument, "value outside the domain");
    Rng user_rng = rng.Fork(static_cast<std::uint64_t>(u));
    UserMessage m = UnaryRandomize(value, domain, epsilon, user_rng);
    m.user_id = u++;
    if (sink && *sink) (*sink)(m);
    batch.push_back(std::move(m));
    if (batch.size() == 4096) {
      server.Consume(batch);
      batch.clear();
    }
  }
  server.Consume(batch);
  return server.Estimates();
}

// ---- vector sum ----

inline UserMessage GaussianRandomize(std::span<const double> value, double sigma, Rng& rng,
                                     std::string phase = "vector_sum") {
  UserMessage m;
  m.phase = std::move(phase);
  m.noise_scale = sigma;
  m.payload.assign(value.begin(), value.end());
  for (double& v : m.payload) v += rng.Normal(sigma);
  return m;
}

class VectorSumAggregator {
 public:
  explicit VectorSumAggregator(std::size_t dim) : sum_(dim, 0.0) {}
  void Consume(std::span<const UserMessage> messages) {
    for (const UserMessage& m : messages) {
      Require(m.payload.size() == sum_.size(), ErrorCode::kDimensionMismatch, "payload length mismatch");
      for (std::size_t d = 0; d < sum_.size(); ++d) sum_[d] += m.payload[d];
    }
  }
  const std::vector<double>& sum() const { return sum_; }

 private:
  std::vector<double> sum_;
};

// 2 radius sqrt(n d) ln(2/(beta delta)) / eps.
inline double VectorSumErrorBound(std::size_t n, std::size_t dim, double radius, const PrivacyParams& pp,
                                  double beta) {
  return 2.0 * radius * std::sqrt(static_cast<double>(n * dim)) * std::log(2.0 / (beta * pp.delta)) / pp.epsilon;
}

// Every user adds N(0, sigma^2) per coordinate, sigma = (2 radius / eps)
// sqrt(2 ln(1.25/delta)); the server sums.
inline Point LdpVectorSum(LocalPopulation& users, const PrivacyParams& pp, Rng& rng) {
  const double sigma = GaussianSigma(2.0 * users.radius(), pp);
  VectorSumAggregator server(users.dim());
  users.Round(
      rng, [&](std::size_t, std::span<const double> x, Rng& r) { return GaussianRandomize(x, sigma, r); },
      [&](std::span<const UserMessage> batch) { server.Consume(batch); });
  return server.sum();
}

// ---- regions and the averaging protocol ----

// T disjoint regions plus an implicit "outside" (index T). Anchors are the
// public points defining each region; they double as fallbacks.
struct RegionPartition {
  std::vector<Point> anchors;
  std::function<std::size_t(std::span<const double>)> membership;
  std::size_t size() const { return anchors.size(); }
};

// Balls of the given radii around the centers; a point in several balls
// goes to the lowest index.
inline RegionPartition BallRegions(const CenterSet& centers, std::vector<double> radii) {
  Require(radii.size() == centers.size(), ErrorCode::kDimensionMismatch, "one radius per center");
  RegionPartition r;
  r.anchors = centers.centers();
  r.membership = [anchors = r.anchors, radii = std::move(radii)](std::span<const double> x) {
    for (std::size_t t = 0; t < anchors.size(); ++t) {
      if (Distance(x, anchors[t]) <= radii[t]) return t;
    }
    return anchors.size();
  };
  return r;
}

// The D-hat_i / 3 balls around the proposals; a single proposal covers all.
inline RegionPartition ConfidentRegions(const CenterSet& proposals) {
  std::vector<double> radii = NearestOtherCenterDistances(proposals);
  for (double& r : radii) r = proposals.size() == 1 ? kInfinity : (r > 0.0 ? r / 3.0 : -1.0);
  return BallRegions(proposals, std::move(radii));
}

// Voronoi cells of the centers (every point belongs to some region).
inline RegionPartition VoronoiRegions(const CenterSet& centers) {
  RegionPartition r;
  r.anchors = centers.centers();
  r.membership = [c = centers](std::span<const double> x) { return NearestCenter(x, c).first; };
  return r;
}

struct LdpAvgResult {
  std::vector<Point> estimates;
  std::vector<double> noisy_counts;
  std::vector<bool> flagged;  // noisy count <= 0; estimate is the anchor
  double sigma = 0.0;
  double flip_probability = 0.0;
};

// (12/eps) sqrt(n ln(4T/beta)): counts above this are estimated reliably.
inline double LdpAvgReliableCount(std::size_t n, std::size_t regions, double epsilon, double beta) {
  return 12.0 / epsilon * std::sqrt(static_cast<double>(n) * std::log(4.0 * static_cast<double>(regions) / beta));
}

// 48 sqrt(d n) radius ln(8dT/(beta delta)) / (eps r_t).
inline double LdpAvgErrorBound(std::size_t n, std::size_t dim, std::size_t regions, double radius,
                               const PrivacyParams& pp, double beta, double count) {
  const double d = static_cast<double>(dim);
  return 48.0 * std::sqrt(d * static_cast<double>(n)) * radius *
         std::log(8.0 * d * static_cast<double>(regions) / (beta * pp.delta)) / (pp.epsilon * count);
}

// Round 1: each user sends a T-block vector that is N(0, sigma^2) everywhere,
// sigma = (8 radius / eps) sqrt(ln(1.25/delta)), plus its point in its own
// region's block. Round 2: region counts through the frequency oracle at
// eps/2. Estimates are block sums over noisy counts, not projected.
inline LdpAvgResult LdpAvg(LocalPopulation& users, const RegionPartition& regions, const PrivacyParams& pp,
                           Rng& rng) {
  const std::size_t t_count = regions.size();
  const std::size_t dim = users.dim();
  Require(t_count >= 1, ErrorCode::kInvalidArgument, "averaging protocol needs T >= 1");
  LdpAvgResult out;
  out.sigma = pp.noiseless() ? 0.0 : 8.0 * users.radius() / pp.epsilon * std::sqrt(std::log(1.25 / pp.delta));
  const double count_epsilon = pp.epsilon / 2.0;
  out.flip_probability = UnaryFlipProbability(count_epsilon);

  VectorSumAggregator sums(t_count * dim);
  Rng sum_rng = rng.Fork("sums");
  users.Round(
      sum_rng,
      [&](std::size_t, std::span<const double> x, Rng& r) {
        std::vector<double> block(t_count * dim, 0.0);
        const std::size_t t = regions.membership(x);
        if (t < t_count) std::copy(x.begin(), x.end(), block.begin() + static_cast<long>(t * dim));
        return GaussianRandomize(block, out.sigma, r, "region_sums");
      },
      [&](std::span<const UserMessage> batch) { sums.Consume(batch); });

  FrequencyAggregator counts(t_count + 1, count_epsilon);
  Rng count_rng = rng.Fork("counts");
  users.Round(
      count_rng,
      [&](std::size_t, std::span<const double> x, Rng& r) {
        return UnaryRandomize(std::min(regions.membership(x), t_count), t_count + 1, count_epsilon, r,
                              "region_counts");
      },
      [&](std::span<const UserMessage> batch) { counts.Consume(batch); });

  const std::vector<double> est = counts.Estimates();
  for (std::size_t t = 0; t < t_count; ++t) {
    out.noisy_counts.push_back(est[t]);
    if (est[t] <= 0.0) {
      out.flagged.push_back(true);
      out.estimates.push_back(regions.anchors[t]);
      continue;
    }
    Point a(dim);
    for (std::size_t d = 0; d < dim; ++d) a[d] = sums.sum()[t * dim + d] / est[t];
    out.flagged.push_back(false);
    out.estimates.push_back(std::move(a));
  }
  return out;
}

// Sum over users of min(dist^p(x, centers), (2 radius)^p) plus per-user
// Gaussian noise with sensitivity (2 radius)^p.
inline NoisyCostResult LdpNoisyCost(LocalPopulation& users, const CenterSet& centers, Objective obj,
                                    const PrivacyParams& pp, Rng& rng, const std::string& phase) {
  const CenterSet clamped = ClampCenters(centers, users.radius());
  const double cap = std::pow(2.0 * users.radius(), Exponent(obj));
  NoisyCostResult out;
  out.sigma = GaussianSigma(cap, pp);
  VectorSumAggregator server(1);
  users.Round(
      rng,
      [&](std::size_t, std::span<const double> x, Rng& r) {
        const double own = std::min(PowerDistance(obj, x, clamped[NearestCenter(x, clamped).first]), cap);
        return GaussianRandomize(std::vector<double>{own}, out.sigma, r, phase);
      },
      [&](std::span<const UserMessage> batch) { server.Consume(batch); });
  out.value = server.sum()[0];
  out.exact = Cost(users.diagnostics_data(), clamped, obj);
  return out;
}

// ---- LDP k-means ----

using LdpSubroutine =
    std::function<CenterSet(LocalPopulation&, std::size_t, const PrivacyParams&, Rng&)>;

inline constexpr std::size_t kLdpGridCells = 256;

// Heavy cells of a randomly shifted public grid through the frequency oracle
// at eps/2, their centroids through the averaging protocol at (eps/2, delta)
// projected back onto the cell, then weighted ++ seeding over the centroids.
inline CenterSet LdpGridSubroutine(LocalPopulation& users, std::size_t k, const PrivacyParams& pp, Rng& rng) {
  const std::size_t dim = users.dim();
  const double radius = users.radius();
  const std::size_t n = users.size();
  const double root = std::floor(std::pow(static_cast<double>(kLdpGridCells), 1.0 / static_cast<double>(dim)) + 1e-9);
  const std::size_t per_axis = static_cast<std::size_t>(std::max(1.0, root - 1.0));  // cells before the shift
  const std::size_t side = per_axis + 1;
  const double width = 2.0 * radius / static_cast<double>(per_axis);
  Rng shift_rng = rng.Fork("shift");
  Point shift(dim);
  for (double& s : shift) s = shift_rng.Uniform() * width;
  std::size_t domain = 1;
  for (std::size_t d = 0; d < dim; ++d) domain *= side;

  auto cell_of = [=](std::span<const double> x) {
    std::size_t id = 0;
    for (std::size_t d = 0; d < dim; ++d) {
      const double c = std::floor((x[d] + radius + shift[d]) / width);
      id = id * side + static_cast<std::size_t>(std::clamp(c, 0.0, static_cast<double>(side - 1)));
    }
    return id;
  };
  auto cell_center = [=](std::size_t id) {
    Point c(dim);
    for (std::size_t d = dim; d-- > 0;) {
      c[d] = (static_cast<double>(id % side) + 0.5) * width - radius - shift[d];
      id /= side;
    }
    return ClampToBall(c, radius);
  };

  const PrivacyParams half = pp.noiseless() ? pp : PrivacyParams(pp.epsilon / 2.0, pp.delta);
  FrequencyAggregator freq(domain, half.epsilon);
  Rng freq_rng = rng.Fork("cells");
  users.Round(
      freq_rng,
      [&](std::size_t, std::span<const double> x, Rng& r) {
        return UnaryRandomize(cell_of(x), domain, half.epsilon, r, "grid_cells");
      },
      [&](std::span<const UserMessage> batch) { freq.Consume(batch); });
  const std::vector<double> est = freq.Estimates();

  std::vector<std::size_t> order(domain);
  for (std::size_t i = 0; i < domain; ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return est[a] > est[b]; });
  const double threshold = pp.noiseless() ? 0.5 : FrequencyErrorBound(n, half.epsilon, 0.05);
  const std::size_t max_cells =
      k * static_cast<std::size_t>(std::max(1.0, std::ceil(std::log(static_cast<double>(std::max<std::size_t>(n, 2))))));
  std::vector<std::size_t> heavy;
  for (std::size_t id : order) {
    if (heavy.size() >= max_cells) break;
    if (est[id] >= threshold || heavy.size() < k) heavy.push_back(id);
  }
  std::map<std::size_t, std::size_t> slot;
  RegionPartition regions;
  for (std::size_t id : heavy) {
    slot[id] = regions.anchors.size();
    regions.anchors.push_back(cell_center(id));
  }
  regions.membership = [&slot, cell_of, t = heavy.size()](std::span<const double> x) {
    const auto it = slot.find(cell_of(x));
    return it == slot.end() ? t : it->second;
  };
  Rng avg_rng = rng.Fork("centroids");
  const LdpAvgResult avg = LdpAvg(users, regions, half, avg_rng);

  std::vector<Point> pts;
  std::vector<double> weights;
  for (std::size_t t = 0; t < avg.estimates.size(); ++t) {
    if (avg.flagged[t]) continue;
    // Members of a cell have their centroid inside it, so projecting the
    // noisy average onto the cell box only moves it closer.
    Point e = avg.estimates[t];
    std::size_t id = heavy[t];
    for (std::size_t d = dim; d-- > 0;) {
      const double lo = static_cast<double>(id % side) * width - radius - shift[d];
      e[d] = std::clamp(e[d], lo, lo + width);
      id /= side;
    }
    pts.push_back(ClampToBall(e, radius));
    weights.push_back(avg.noisy_counts[t]);
  }
  std::vector<Point> centers;
  if (!pts.empty()) {
    Rng seed_rng = rng.Fork("seeding");
    centers = WeightedKMeansPP(Dataset::FromRows(dim, pts, radius * (1.0 + 1e-9)), weights, k, 10, seed_rng).centers();
  }
  for (std::size_t t = 0; centers.size() < k && t < regions.anchors.size(); ++t) centers.push_back(regions.anchors[t]);
  Rng pad = rng.Fork("padding");
  while (centers.size() < k) {
    Point p(dim);
    for (double& v : p) v = (2.0 * pad.Uniform() - 1.0) * radius / std::sqrt(static_cast<double>(dim));
    centers.push_back(std::move(p));
  }
  return CenterSet(std::move(centers), k, "ldp_grid");
}

struct LdpKMeansConfig {
  PrivacyParams pp{1.0, 1e-5};  // per protocol phase, four phases per user
  double beta = 0.05;
  LdpSubroutine subroutine;  // empty selects LdpGridSubroutine
  bool do_final_noisy_lloyd = false;
};

// The centralized algorithm with local primitives: proposals, D-hat/3
// regions, region averages through the averaging protocol (regions below the
// reliable count fall back to the proposal), and two noisy cost sums.
inline ClusteringOutcome LdpStableKMeans(LocalPopulation& users, std::size_t k, const LdpKMeansConfig& cfg,
                                         Rng& rng) {
  Require(users.size() >= 1, ErrorCode::kEmptyInput, "LDP k-means needs n >= 1");
  Require(k >= 1, ErrorCode::kInvalidArgument, "k must be >= 1");
  ClusteringOutcome out;
  out.p = 2;
  const LdpSubroutine sub = cfg.subroutine ? cfg.subroutine : LdpSubroutine(LdpGridSubroutine);
  Rng sub_rng = rng.Fork("subroutine");
  try {
    out.candidate_b = sub(users, k, cfg.pp, sub_rng);
  } catch (const Error& e) {
    throw Error(e.code(), std::string("LDP subroutine failed: ") + e.what());
  }
  out.ledger.Record("subroutine", cfg.pp, "local");

  const RegionPartition regions = ConfidentRegions(out.candidate_b);
  Rng avg_rng = rng.Fork("averages");
  const LdpAvgResult avg = LdpAvg(users, regions, cfg.pp, avg_rng);
  out.ledger.Record("confident_averages", cfg.pp, "local-gaussian+unary");
  const double reliable =
      cfg.pp.noiseless() ? 0.0 : LdpAvgReliableCount(users.size(), regions.size(), cfg.pp.epsilon, cfg.beta);
  const std::vector<double> d_hat = NearestOtherCenterDistances(out.candidate_b);
  std::vector<Point> chat;
  for (std::size_t t = 0; t < regions.size(); ++t) {
    const bool small = avg.flagged[t] || avg.noisy_counts[t] < reliable;
    chat.push_back(small ? out.candidate_b[t] : ClampToBall(avg.estimates[t], users.radius()));
    out.diagnostics.push_back({d_hat[t], 0, small, avg.noisy_counts[t], 0.0});
  }
  out.candidate_chat = CenterSet(std::move(chat), k, "ldp_confident_averages");

  Rng cost_rng = rng.Fork("costs");
  Rng chat_rng = cost_rng.Fork("C_hat");
  Rng b_rng = cost_rng.Fork("B");
  const NoisyCostResult cost_chat = LdpNoisyCost(users, out.candidate_chat, Objective::kMeans, cfg.pp, chat_rng, "cost_C_hat");
  out.ledger.Record("cost_C_hat", cfg.pp, "local-gaussian");
  const NoisyCostResult cost_b = LdpNoisyCost(users, out.candidate_b, Objective::kMeans, cfg.pp, b_rng, "cost_B");
  out.ledger.Record("cost_B", cfg.pp, "local-gaussian");
  out.noisy_cost_chat = cost_chat.value;
  out.noisy_cost_b = cost_b.value;
  out.exact_cost_chat = cost_chat.exact;
  out.exact_cost_b = cost_b.exact;
  out.chose_chat = PreferChat(cost_chat.value, cost_b.value);
  out.chosen = out.chose_chat ? out.candidate_chat : out.candidate_b;

  if (cfg.do_final_noisy_lloyd) {
    Rng lloyd_rng = rng.Fork("final_lloyd");
    const LdpAvgResult step = LdpAvg(users, VoronoiRegions(out.chosen), cfg.pp, lloyd_rng);
    std::vector<Point> next;
    for (std::size_t t = 0; t < step.estimates.size(); ++t) {
      const bool small = step.flagged[t] || step.noisy_counts[t] < reliable;
      next.push_back(small ? out.chosen[t] : ClampToBall(step.estimates[t], users.radius()));
    }
    out.chosen = CenterSet(std::move(next), k, "ldp_lloyd");
    out.ledger.Record("final_noisy_lloyd", cfg.pp, "local-gaussian+unary");
    out.final_lloyd_applied = true;
  }
  out.chosen.set_provenance(out.final_lloyd_applied ? "ldp_stable_kmeans+lloyd"
                                                    : (out.chose_chat ? "ldp_stable_kmeans/C_hat" : "ldp_stable_kmeans/B"));
  out.exact_cost_chosen = Cost(users.diagnostics_data(), out.chosen, Objective::kMeans);
  out.extra["rounds"] = users.rounds();
  out.ledger.Close();
  return out;
}

}  // namespace stabclust

#endif  // STABCLUST_LOCAL_MODEL_HPP_
