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

// Centralized private k-median for well separated data: partition by the
// proposals of a private routine, run a private 1-median on every part, and
// keep whichever of the two center sets has the lower noisy cost.

#ifndef STABCLUST_PRIVATE_KMEDIAN_HPP_
#define STABCLUST_PRIVATE_KMEDIAN_HPP_

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "stabclust/convex.hpp"
#include "stabclust/error.hpp"
#include "stabclust/geometry.hpp"
#include "stabclust/mechanisms.hpp"
#include "stabclust/outcome.hpp"
#include "stabclust/private_kmeans.hpp"
#include "stabclust/rng.hpp"

namespace stabclust {

struct PrivateKMedianConfig {
  PrivacyParams pp{1.0, 1e-5};  // per mechanism
  double beta = 0.05;
  PrivateSubroutine subroutine;  // empty selects the p = 1 baseline
  std::size_t median_steps = 0;  // 0 selects DefaultConvexSteps per part
};

// Ledger: one entry for the subroutine, one per part, one for the joint
// cost query, (k + 2) (eps, delta) in total under basic composition.
inline ClusteringOutcome PrivateStableKMedian(const Dataset& data, std::size_t k,
                                              const PrivateKMedianConfig& cfg, Rng& rng) {
  Require(!data.empty(), ErrorCode::kEmptyInput, "private k-median needs n >= 1");
  Require(k >= 1, ErrorCode::kInvalidArgument, "k must be >= 1");
  ClusteringOutcome out;
  out.p = 1;

  const PrivateSubroutine sub = cfg.subroutine ? cfg.subroutine : BaselineSubroutine(Objective::kMedian);
  Rng sub_rng = rng.Fork("subroutine");
  try {
    out.candidate_b = sub(data, k, cfg.pp, sub_rng);
  } catch (const Error& e) {
    throw Error(e.code(), std::string("private k-median subroutine failed: ") + e.what());
  }
  Require(out.candidate_b.dim() == data.dim(), ErrorCode::kDimensionMismatch,
          "subroutine returned centers of the wrong dimension");
  out.ledger.Record("subroutine", cfg.pp, "subroutine");

  const Partition part = PartitionByNearest(data, out.candidate_b, Objective::kMedian);
  const std::vector<double> d_hat = NearestOtherCenterDistances(out.candidate_b);
  std::vector<Point> chat;
  Rng med_rng = rng.Fork("medians");
  for (std::size_t i = 0; i < out.candidate_b.size(); ++i) {
    Rng local = med_rng.Fork(static_cast<std::uint64_t>(i));
    DPConvexConfig mc;
    mc.steps = cfg.median_steps;
    mc.pp = cfg.pp;
    mc.beta = cfg.beta / static_cast<double>(out.candidate_b.size());
    const DPMedianResult r = DpOneMedian(data, part.members[i], mc, local);
    chat.push_back(r.center);
    out.diagnostics.push_back({d_hat[i], part.members[i].size(), r.empty_input, 0.0, 0.0});
    out.ledger.Record("median_" + std::to_string(i), cfg.pp, "gaussian-subgradient");
  }
  out.candidate_chat = CenterSet(std::move(chat), k, "private_medians");

  Rng cost_rng = rng.Fork("costs");
  const auto [cost_chat, cost_b] = NoisyCostPair(data, out.candidate_chat, out.candidate_b, Objective::kMedian,
                                                 cfg.pp, cost_rng, &out.ledger, "cost_pair");
  out.noisy_cost_chat = cost_chat.value;
  out.noisy_cost_b = cost_b.value;
  out.exact_cost_chat = cost_chat.exact;
  out.exact_cost_b = cost_b.exact;
  out.chose_chat = PreferChat(cost_chat.value, cost_b.value);
  out.chosen = out.chose_chat ? out.candidate_chat : out.candidate_b;
  out.chosen.set_provenance(out.chose_chat ? "private_stable_kmedian/C_hat" : "private_stable_kmedian/B");
  out.exact_cost_chosen = Cost(data, out.chosen, Objective::kMedian);
  out.ledger.Close();
  return out;
}

}  // namespace stabclust

#endif  // STABCLUST_PRIVATE_KMEDIAN_HPP_
