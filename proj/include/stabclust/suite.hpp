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

// Experiment orchestration: a flat key = value config with optional
// [experiment] sections, pipelines x trials in a worker pool, one CSV row
// per (trial, pipeline) and a JSON summary.

#ifndef STABCLUST_SUITE_HPP_
#define STABCLUST_SUITE_HPP_

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <exception>
#include <istream>
#include <map>
#include <mutex>
#include <nlohmann/json.hpp>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "stabclust/dataset_io.hpp"
#include "stabclust/error.hpp"
#include "stabclust/instance.hpp"
#include "stabclust/local_model.hpp"
#include "stabclust/private_kmeans.hpp"
#include "stabclust/private_kmedian.hpp"
#include "stabclust/sample_aggregate.hpp"

namespace stabclust {

inline const std::vector<std::string>& PipelineNames() {
  static const std::vector<std::string> names{"central-kmeans", "central-kmedian", "ldp-kmeans", "sample-aggregate"};
  return names;
}

inline bool IsPipelineName(const std::string& s) {
  const auto& names = PipelineNames();
  return std::find(names.begin(), names.end(), s) != names.end();
}

// ---- config ----

struct ConfigValue {
  std::string text;
  int line = 0;
};

// One section of raw key/value pairs, in file order of first appearance.
struct RawSection {
  std::string name;
  int line = 0;
  std::map<std::string, ConfigValue> values;
};

inline std::string Trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

// Grammar, one item per line:
//   # comment            (also after a value)
//   [name]               starts an experiment section
//   key = value          value: number, bare word, "quoted", or a comma list
// Keys before the first section are defaults for every section.
inline std::vector<RawSection> ParseConfigText(std::istream& in) {
  std::vector<RawSection> out(1);
  out[0].name = "";
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    std::string s;
    bool quoted = false;
    for (char ch : raw) {
      if (ch == '"') quoted = !quoted;
      if (ch == '#' && !quoted) break;
      s.push_back(ch);
    }
    Require(!quoted, ErrorCode::kParse, "line " + std::to_string(line) + ": unterminated quote");
    s = Trim(s);
    if (s.empty()) continue;
    if (s.front() == '[') {
      Require(s.back() == ']' && s.size() > 2, ErrorCode::kParse,
              "line " + std::to_string(line) + ": malformed section header '" + s + "'");
      const std::string name = Trim(s.substr(1, s.size() - 2));
      Require(!name.empty(), ErrorCode::kParse, "line " + std::to_string(line) + ": empty section name");
      for (const RawSection& sec : out) {
        Require(sec.name != name, ErrorCode::kParse,
                "line " + std::to_string(line) + ": duplicate section [" + name + "]");
      }
      out.push_back({name, line, {}});
      continue;
    }
    const auto eq = s.find('=');
    Require(eq != std::string::npos, ErrorCode::kParse,
            "line " + std::to_string(line) + ": expected 'key = value', got '" + s + "'");
    const std::string key = Trim(s.substr(0, eq));
    std::string value = Trim(s.substr(eq + 1));
    Require(!key.empty(), ErrorCode::kParse, "line " + std::to_string(line) + ": missing key");
    Require(key.find_first_of(" \t\"") == std::string::npos, ErrorCode::kParse,
            "line " + std::to_string(line) + ": bad key '" + key + "'");
    if (value.size() >= 2 && value.front() == '"' && value.back() == '"') value = value.substr(1, value.size() - 2);
    auto& values = out.back().values;
    Require(!values.count(key), ErrorCode::kParse,
            "line " + std::to_string(line) + ": duplicate key '" + key + "'");
    values[key] = {value, line};
  }
  return out;
}

struct ExperimentConfig {
  std::string name = "default";
  std::vector<std::string> pipelines;
  std::size_t trials = 10;
  std::uint64_t seed = 1;
  bool fixed_instance = false;  // one instance, trials vary only the algorithm seed
  InstanceSpec instance;
  PrivacyParams pp{1.0, 1e-5};
  double beta = 0.05;
  bool final_lloyd = false;
  std::size_t median_steps = 0;
  std::size_t sa_subsamples = 100;
  std::size_t sa_subsample_size = 0;
  double sa_grid_step = 0.0;
  // Pass rule per trial: cost <= (1 + bound_mult phi^p) OPT_est + additive,
  // with the pipeline's additive shape scaled by bound_add.
  std::optional<double> bound_mult;
  std::optional<double> bound_add;
  double wasserstein_max = kInfinity;  // in units of the radius
  double recovery_factor = 1.0;        // sample-aggregate: match within factor gamma D_i
  std::map<std::string, double> min_pass;  // pipeline -> required pass fraction

  nlohmann::json ToJson() const {
    nlohmann::json mp = nlohmann::json::object();
    for (const auto& [k, v] : min_pass) mp[k] = v;
    return {{"name", name},
            {"pipelines", pipelines},
            {"trials", trials},
            {"seed", seed},
            {"fixed_instance", fixed_instance},
            {"instance", instance.ToJson()},
            {"epsilon", JsonNumber(pp.epsilon)},
            {"delta", pp.delta},
            {"beta", beta},
            {"final_lloyd", final_lloyd},
            {"min_pass", mp}};
  }
};

struct SuiteConfig {
  std::size_t workers = 0;  // 0 selects the hardware concurrency
  std::vector<ExperimentConfig> experiments;
};

// Command-line overrides applied on top of every experiment.
struct SuiteOverrides {
  std::optional<std::uint64_t> seed;
  std::optional<double> epsilon;
  std::optional<double> delta;
  std::optional<double> beta;
  std::optional<std::string> pipeline;
};

namespace suite_detail {

[[noreturn]] inline void Bad(const ConfigValue& v, const std::string& key, const std::string& what) {
  throw Error(ErrorCode::kParse, "line " + std::to_string(v.line) + ": " + key + ": " + what + " (got '" + v.text + "')");
}

inline double AsDouble(const ConfigValue& v, const std::string& key) {
  try {
    std::size_t used = 0;
    const double d = std::stod(v.text, &used);
    if (used != v.text.size()) Bad(v, key, "expected a number");
    return d;
  } catch (const std::logic_error&) {
    if (v.text == "inf") return kInfinity;
    Bad(v, key, "expected a number");
  }
}

inline std::uint64_t AsUint(const ConfigValue& v, const std::string& key) {
  if (v.text.empty() || v.text.find_first_not_of("0123456789") != std::string::npos) {
    Bad(v, key, "expected a non-negative integer");
  }
  try {
    return std::stoull(v.text);
  } catch (const std::logic_error&) {
    Bad(v, key, "integer out of range");
  }
}

inline bool AsBool(const ConfigValue& v, const std::string& key) {
  if (v.text == "true" || v.text == "1") return true;
  if (v.text == "false" || v.text == "0") return false;
  Bad(v, key, "expected true or false");
}

inline std::vector<std::string> AsList(const ConfigValue& v) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream ss(v.text);
  while (std::getline(ss, item, ',')) {
    item = Trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

inline void Apply(ExperimentConfig& e, std::size_t& workers, const std::string& key, const ConfigValue& v) {
  if (key == "pipelines") {
    e.pipelines = AsList(v);
    for (const std::string& p : e.pipelines) {
      if (!IsPipelineName(p)) Bad(v, key, "unknown pipeline '" + p + "'");
    }
  } else if (key == "trials") {
    e.trials = AsUint(v, key);
  } else if (key == "seed") {
    e.seed = AsUint(v, key);
  } else if (key == "workers") {
    workers = AsUint(v, key);
  } else if (key == "fixed_instance") {
    e.fixed_instance = AsBool(v, key);
  } else if (key == "k") {
    e.instance.k = AsUint(v, key);
  } else if (key == "d") {
    e.instance.dim = AsUint(v, key);
  } else if (key == "n") {
    e.instance.n = AsUint(v, key);
  } else if (key == "radius") {
    e.instance.radius = AsDouble(v, key);
  } else if (key == "placement") {
    try {
      e.instance.placement = PlacementFromName(v.text);
    } catch (const Error&) {
      Bad(v, key, "expected simplex, ring or random");
    }
  } else if (key == "scale") {
    e.instance.scale = AsDouble(v, key);
  } else if (key == "min_separation") {
    e.instance.min_separation = AsDouble(v, key);
  } else if (key == "sigma") {
    e.instance.sigma = AsDouble(v, key);
  } else if (key == "weights") {
    e.instance.weights.clear();
    for (const std::string& w : AsList(v)) e.instance.weights.push_back(AsDouble({w, v.line}, key));
  } else if (key == "p") {
    const std::uint64_t p = AsUint(v, key);
    if (p != 1 && p != 2) Bad(v, key, "expected 1 or 2");
    e.instance.p = static_cast<int>(p);
  } else if (key == "max_phi") {
    e.instance.max_phi_p = AsDouble(v, key);
  } else if (key == "oracle_restarts") {
    e.instance.oracle_restarts = static_cast<int>(AsUint(v, key));
  } else if (key == "epsilon") {
    e.pp.epsilon = AsDouble(v, key);
  } else if (key == "delta") {
    e.pp.delta = AsDouble(v, key);
  } else if (key == "beta") {
    e.beta = AsDouble(v, key);
  } else if (key == "final_lloyd") {
    e.final_lloyd = AsBool(v, key);
  } else if (key == "median_steps") {
    e.median_steps = AsUint(v, key);
  } else if (key == "sa_subsamples") {
    e.sa_subsamples = AsUint(v, key);
  } else if (key == "sa_subsample_size") {
    e.sa_subsample_size = AsUint(v, key);
  } else if (key == "sa_grid_step") {
    e.sa_grid_step = AsDouble(v, key);
  } else if (key == "bound_mult") {
    e.bound_mult = AsDouble(v, key);
  } else if (key == "bound_add") {
    e.bound_add = AsDouble(v, key);
  } else if (key == "wasserstein_max") {
    e.wasserstein_max = AsDouble(v, key);
  } else if (key == "recovery_factor") {
    e.recovery_factor = AsDouble(v, key);
  } else if (key.rfind("min_pass.", 0) == 0) {
    const std::string p = key.substr(9);
    if (!IsPipelineName(p)) Bad(v, key, "unknown pipeline '" + p + "'");
    e.min_pass[p] = AsDouble(v, key);
  } else {
    throw Error(ErrorCode::kParse, "line " + std::to_string(v.line) + ": unknown key '" + key + "'");
  }
}

}  // namespace suite_detail

inline SuiteConfig ParseSuiteConfig(std::istream& in) {
  const std::vector<RawSection> sections = ParseConfigText(in);
  SuiteConfig out;
  const RawSection& globals = sections.front();
  auto build = [&](const RawSection* sec) {
    ExperimentConfig e;
    std::size_t workers = out.workers;
    for (const auto& [key, v] : globals.values) suite_detail::Apply(e, workers, key, v);
    out.workers = workers;
    if (sec) {
      e.name = sec->name;
      for (const auto& [key, v] : sec->values) {
        if (key == "workers") {
          throw Error(ErrorCode::kParse, "line " + std::to_string(v.line) + ": workers is a global key");
        }
        suite_detail::Apply(e, workers, key, v);
      }
    }
    return e;
  };
  if (sections.size() == 1) {
    out.experiments.push_back(build(nullptr));
  } else {
    for (std::size_t s = 1; s < sections.size(); ++s) out.experiments.push_back(build(&sections[s]));
  }
  return out;
}

inline SuiteConfig ParseSuiteConfigString(const std::string& text) {
  std::istringstream in(text);
  return ParseSuiteConfig(in);
}

inline void ApplyOverrides(SuiteConfig& cfg, const SuiteOverrides& o) {
  for (ExperimentConfig& e : cfg.experiments) {
    if (o.seed) e.seed = *o.seed;
    if (o.epsilon) e.pp.epsilon = *o.epsilon;
    if (o.delta) e.pp.delta = *o.delta;
    if (o.beta) e.beta = *o.beta;
    if (o.pipeline) {
      Require(IsPipelineName(*o.pipeline), ErrorCode::kInvalidArgument, "unknown pipeline '" + *o.pipeline + "'");
      e.pipelines = {*o.pipeline};
    }
  }
}

// ---- pipelines and pass rules ----

inline ClusteringOutcome RunPipeline(const std::string& pipeline, const Dataset& data, const ExperimentConfig& e,
                                     Rng& rng) {
  const std::size_t k = e.instance.k;
  if (pipeline == "central-kmeans") {
    PrivateKMeansConfig cfg;
    cfg.pp = e.pp;
    cfg.beta = e.beta;
    cfg.do_final_noisy_lloyd = e.final_lloyd;
    return PrivateStableKMeans(data, k, cfg, rng);
  }
  if (pipeline == "central-kmedian") {
    PrivateKMedianConfig cfg;
    cfg.pp = e.pp;
    cfg.beta = e.beta;
    cfg.median_steps = e.median_steps;
    return PrivateStableKMedian(data, k, cfg, rng);
  }
  if (pipeline == "ldp-kmeans") {
    LocalPopulation users(data);
    LdpKMeansConfig cfg;
    cfg.pp = e.pp;
    cfg.beta = e.beta;
    cfg.do_final_noisy_lloyd = e.final_lloyd;
    return LdpStableKMeans(users, k, cfg, rng);
  }
  if (pipeline == "sample-aggregate") {
    SampleAggregateConfig cfg;
    cfg.pp = e.pp;
    cfg.beta = e.beta;
    cfg.subsamples = e.sa_subsamples;
    cfg.subsample_size = e.sa_subsample_size;
    cfg.grid_step = e.sa_grid_step;
    return SampleAggregateKMeans(data, k, cfg, rng);
  }
  throw Error(ErrorCode::kInvalidArgument, "unknown pipeline '" + pipeline + "'");
}

// Default multiplicative constant on phi^p and additive term of each
// pipeline's guarantee shape.
inline double DefaultBoundMult(const std::string& pipeline) {
  return pipeline == "central-kmedian" ? 30.0 : 50.0;
}

inline double DefaultBoundAdd(const std::string& pipeline) {
  return pipeline == "central-kmedian" ? 50.0 : 200.0;
}

inline double AdditiveShape(const std::string& pipeline, const ExperimentConfig& e, double scale) {
  const double k = static_cast<double>(e.instance.k), d = static_cast<double>(e.instance.dim);
  const double n = static_cast<double>(e.instance.n), r = e.instance.radius;
  const double eps = e.pp.epsilon, delta = e.pp.delta, beta = e.beta;
  if (pipeline == "central-kmedian") {
    const double l = std::log(n / (beta * delta));
    return scale * k * r * std::sqrt(d) * l * l / eps;
  }
  const double base = scale * k * r * r * std::sqrt(d) * std::log(d * k / (beta * delta)) / eps;
  return pipeline == "ldp-kmeans" ? base * std::sqrt(n) : base;
}

struct TrialRow {
  std::string experiment;
  std::size_t trial = 0;
  std::uint64_t seed = 0;
  std::string pipeline;
  std::string status = "ok";
  std::uint64_t instance_hash = 0;
  double phi_p = 0.0;
  std::string oracle_label;
  double opt_est = 0.0;
  double cost = 0.0;
  double cost_ratio = 0.0;
  double wasserstein = 0.0;
  double bound = 0.0;
  double additive_residual = 0.0;  // cost - (1 + mult phi^p) OPT_est
  bool pass = false;
  double ledger_epsilon = 0.0;
  double ledger_delta = 0.0;
  double runtime_seconds = 0.0;  // reported in the summary only
};

inline const char* kCsvHeader =
    "experiment,trial,seed,pipeline,status,instance_hash,phi_p,oracle,opt_est,cost,cost_ratio,wasserstein,"
    "bound,additive_residual,pass,ledger_epsilon,ledger_delta";

inline void WriteCsvRow(const TrialRow& r, std::ostream& out) {
  out << r.experiment << ',' << r.trial << ',' << r.seed << ',' << r.pipeline << ',' << r.status << ','
      << r.instance_hash << ',' << FormatDouble(r.phi_p) << ',' << r.oracle_label << ',' << FormatDouble(r.opt_est)
      << ',' << FormatDouble(r.cost) << ',' << FormatDouble(r.cost_ratio) << ',' << FormatDouble(r.wasserstein)
      << ',' << FormatDouble(r.bound) << ',' << FormatDouble(r.additive_residual) << ',' << (r.pass ? 1 : 0) << ','
      << FormatDouble(r.ledger_epsilon) << ',' << FormatDouble(r.ledger_delta) << '\n';
}

inline std::string OracleLabel(const Instance& inst) {
  if (inst.stability.method == OracleMethod::kExact) return "brute_force";
  return "best_of_" + std::to_string(inst.spec.oracle_restarts) + (inst.spec.p == 2 ? "_lloyd" : "_weiszfeld_lloyd");
}

inline TrialRow EvaluateTrial(const std::string& pipeline, const Instance& inst, const ExperimentConfig& e,
                              std::size_t trial, std::uint64_t seed) {
  TrialRow row;
  row.experiment = e.name;
  row.trial = trial;
  row.seed = seed;
  row.pipeline = pipeline;
  row.instance_hash = inst.hash;
  row.phi_p = inst.stability.phi_p;
  row.oracle_label = OracleLabel(inst);
  row.opt_est = inst.stability.opt_k;
  const auto start = std::chrono::steady_clock::now();
  Rng rng(seed, "pipeline:" + pipeline);
  try {
    const ClusteringOutcome out = RunPipeline(pipeline, inst.data, e, rng);
    const double mult = e.bound_mult.value_or(DefaultBoundMult(pipeline));
    const double add = AdditiveShape(pipeline, e, e.bound_add.value_or(DefaultBoundAdd(pipeline)));
    row.cost = out.exact_cost_chosen;
    row.cost_ratio = row.opt_est > 0.0 ? row.cost / row.opt_est : (row.cost > 0.0 ? kInfinity : 1.0);
    row.wasserstein = Wasserstein(out.chosen, inst.oracle);
    const double phi = std::isfinite(row.phi_p) ? row.phi_p : 0.0;
    row.bound = (1.0 + mult * phi) * row.opt_est + add;
    row.additive_residual = row.cost - (1.0 + mult * phi) * row.opt_est;
    row.pass = row.cost <= row.bound && row.wasserstein <= e.wasserstein_max * e.instance.radius;
    if (pipeline == "sample-aggregate" && inst.spec.k >= 2 && phi < 0.25) {
      row.pass = row.pass && CheckCenterRecovery(inst.oracle, out.chosen, RecoveryGamma(phi), e.recovery_factor).matched;
    }
    const Budget total = ComposeSimple(out.ledger);
    row.ledger_epsilon = total.epsilon;
    row.ledger_delta = total.delta;
  } catch (const Error& err) {
    row.status = "failed:" + std::string(ErrorCodeName(err.code()));
    row.pass = false;
  }
  row.runtime_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return row;
}

// ---- running ----

struct PipelineSummary {
  std::string experiment;
  std::string pipeline;
  std::size_t trials = 0;
  std::size_t passes = 0;
  std::size_t failures = 0;
  std::optional<double> min_pass;
  double runtime_seconds = 0.0;
  std::vector<double> cost_ratios;
  std::vector<double> wassersteins;

  double pass_fraction() const { return trials ? static_cast<double>(passes) / static_cast<double>(trials) : 1.0; }
  bool ok() const { return !min_pass || pass_fraction() >= *min_pass; }
};

inline double Quantile(std::vector<double> v, double q) {
  if (v.empty()) return 0.0;
  std::sort(v.begin(), v.end());
  const std::size_t idx = static_cast<std::size_t>(std::ceil(q * static_cast<double>(v.size())));
  return v[std::min(v.size() - 1, idx == 0 ? 0 : idx - 1)];
}

struct SuiteResult {
  std::vector<TrialRow> rows;
  std::vector<PipelineSummary> summaries;
  std::vector<nlohmann::json> instances;  // one summary per distinct instance (first trial when varying)

  bool ok() const {
    return std::all_of(summaries.begin(), summaries.end(), [](const PipelineSummary& s) { return s.ok(); });
  }

  void WriteCsv(std::ostream& out) const {
    out << kCsvHeader << '\n';
    for (const TrialRow& r : rows) WriteCsvRow(r, out);
  }

  nlohmann::json SummaryJson() const {
    nlohmann::json pipes = nlohmann::json::array();
    for (const PipelineSummary& s : summaries) {
      pipes.push_back({{"experiment", s.experiment},
                       {"pipeline", s.pipeline},
                       {"trials", s.trials},
                       {"passes", s.passes},
                       {"failures", s.failures},
                       {"pass_fraction", s.pass_fraction()},
                       {"min_pass", s.min_pass ? nlohmann::json(*s.min_pass) : nlohmann::json(nullptr)},
                       {"ok", s.ok()},
                       {"cost_ratio", {{"p10", Quantile(s.cost_ratios, 0.1)},
                                       {"p50", Quantile(s.cost_ratios, 0.5)},
                                       {"p90", Quantile(s.cost_ratios, 0.9)}}},
                       {"wasserstein", {{"p50", Quantile(s.wassersteins, 0.5)}, {"p90", Quantile(s.wassersteins, 0.9)}}},
                       {"runtime_seconds", s.runtime_seconds}});
    }
    return {{"ok", ok()}, {"pipelines", pipes}, {"instances", instances}};
  }
};

// Runs fn(i) for i in [0, count) on `workers` threads. Exceptions are
// rethrown after all workers finish (first by index).
template <typename Fn>
void ParallelFor(std::size_t count, std::size_t workers, Fn&& fn) {
  if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
  workers = std::min(workers, std::max<std::size_t>(count, 1));
  std::vector<std::exception_ptr> errors(count);
  std::atomic<std::size_t> next{0};
  auto body = [&] {
    for (std::size_t i = next++; i < count; i = next++) {
      try {
        fn(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  if (workers <= 1) {
    body();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(body);
    for (std::thread& t : pool) t.join();
  }
  for (const std::exception_ptr& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

inline std::uint64_t TrialSeed(const ExperimentConfig& e, std::size_t trial) {
  return e.seed + static_cast<std::uint64_t>(trial);
}

inline SuiteResult RunSuite(const SuiteConfig& cfg) {
  SuiteResult out;
  for (const ExperimentConfig& e : cfg.experiments) {
    if (e.pipelines.empty() || e.trials == 0) continue;
    std::optional<Instance> shared;
    if (e.fixed_instance) {
      InstanceSpec spec = e.instance;
      spec.seed = e.seed;
      shared = GenerateInstance(spec);
      out.instances.push_back(shared->Summary());
    }
    const std::size_t width = e.pipelines.size();
    std::vector<TrialRow> rows(e.trials * width);
    std::vector<nlohmann::json> first_instance(1);
    ParallelFor(e.trials, cfg.workers, [&](std::size_t t) {
      const std::uint64_t seed = TrialSeed(e, t);
      std::optional<Instance> own;
      if (!shared) {
        InstanceSpec spec = e.instance;
        spec.seed = seed;
        own = GenerateInstance(spec);
        if (t == 0) first_instance[0] = own->Summary();
      }
      const Instance& inst = shared ? *shared : *own;
      for (std::size_t p = 0; p < width; ++p) rows[t * width + p] = EvaluateTrial(e.pipelines[p], inst, e, t, seed);
    });
    if (!shared) out.instances.push_back(first_instance[0]);
    for (std::size_t p = 0; p < width; ++p) {
      PipelineSummary s;
      s.experiment = e.name;
      s.pipeline = e.pipelines[p];
      if (auto it = e.min_pass.find(s.pipeline); it != e.min_pass.end()) s.min_pass = it->second;
      for (std::size_t t = 0; t < e.trials; ++t) {
        const TrialRow& r = rows[t * width + p];
        ++s.trials;
        s.passes += r.pass;
        s.failures += r.status != "ok";
        s.runtime_seconds += r.runtime_seconds;
        if (r.status == "ok") {
          s.cost_ratios.push_back(r.cost_ratio);
          s.wassersteins.push_back(r.wasserstein);
        }
      }
      out.summaries.push_back(std::move(s));
    }
    out.rows.insert(out.rows.end(), rows.begin(), rows.end());
  }
  return out;
}

}  // namespace stabclust

#endif  // STABCLUST_SUITE_HPP_
