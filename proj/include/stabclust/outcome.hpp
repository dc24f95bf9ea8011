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

#ifndef STABCLUST_OUTCOME_HPP_
#define STABCLUST_OUTCOME_HPP_

#include <cstddef>
#include <functional>
#include <nlohmann/json.hpp>
#include <string>
#include <vector>

#include "stabclust/dataset_io.hpp"
#include "stabclust/geometry.hpp"
#include "stabclust/mechanisms.hpp"
#include "stabclust/rng.hpp"

namespace stabclust {

// Any (eps, delta)-DP k-clustering routine: returns at most k centers in the
// data ball. Privacy is part of the contract, not checked.
using PrivateSubroutine =
    std::function<CenterSet(const Dataset&, std::size_t, const PrivacyParams&, Rng&)>;

struct ClusterDiagnostics {
  double d_hat = 0.0;          // distance from b_i to the nearest other b_j
  std::size_t set_size = 0;    // points averaged for this center
  bool small_cluster = false;  // fell back to b_i
  double noisy_count = 0.0;
  double noise_norm = 0.0;
};

struct ClusteringOutcome {
  CenterSet chosen;
  CenterSet candidate_b;
  CenterSet candidate_chat;
  bool chose_chat = true;
  bool has_selection = true;  // false when the pipeline outputs C-hat directly
  double noisy_cost_b = 0.0;
  double noisy_cost_chat = 0.0;
  double exact_cost_b = 0.0;     // test-mode diagnostics, never used by the algorithm
  double exact_cost_chat = 0.0;
  double exact_cost_chosen = 0.0;
  int p = 2;
  bool final_lloyd_applied = false;
  std::vector<ClusterDiagnostics> diagnostics;
  BudgetLedger ledger;
  nlohmann::json extra = nlohmann::json::object();

  nlohmann::json ToJson() const {
    nlohmann::json diag = nlohmann::json::array();
    for (const ClusterDiagnostics& d : diagnostics) {
      diag.push_back({{"d_hat", JsonNumber(d.d_hat)},
                      {"set_size", d.set_size},
                      {"small_cluster", d.small_cluster},
                      {"noisy_count", d.noisy_count},
                      {"noise_norm", d.noise_norm}});
    }
    const Budget total = ComposeSimple(ledger);
    nlohmann::json j = {
        {"objective", p == 2 ? "p=2" : "p=1"},
        {"chosen", CenterSetToJson(chosen)},
        {"candidates", {{"B", CenterSetToJson(candidate_b)}, {"C_hat", CenterSetToJson(candidate_chat)}}},
        {"chose", has_selection ? (chose_chat ? "C_hat" : "B") : "C_hat (no selection step)"},
        {"noisy_costs", {{"B", noisy_cost_b}, {"C_hat", noisy_cost_chat}}},
        {"exact_costs", {{"B", exact_cost_b}, {"C_hat", exact_cost_chat}, {"chosen", exact_cost_chosen}}},
        {"final_noisy_lloyd", final_lloyd_applied},
        {"diagnostics", diag},
        {"ledger", ledger.ToJson()},
        {"ledger_total", {{"epsilon", JsonNumber(total.epsilon)}, {"delta", JsonNumber(total.delta)}}}};
    if (!extra.empty()) j["extra"] = extra;
    return j;
  }
};

}  // namespace stabclust

#endif  // STABCLUST_OUTCOME_HPP_
