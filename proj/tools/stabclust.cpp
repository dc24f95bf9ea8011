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

// stabclust command line: gen, run, audit, verify-lemmas.

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <nlohmann/json.hpp>
#include <optional>
#include <string>

#include "stabclust/stabclust.hpp"

namespace fs = std::filesystem;
using stabclust::Error;
using stabclust::ErrorCode;

namespace {

constexpr int kExitFail = 1;
constexpr int kExitUsage = 2;

struct CommonFlags {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::string out_dir = ".";
  std::optional<std::string> pipeline;
  std::optional<double> epsilon;
  std::optional<double> delta;
  std::optional<double> beta;
};

void AddCommon(CLI::App* app, CommonFlags& f) {
  app->add_option("--config", f.config, "key = value config file");
  app->add_option("--seed", f.seed, "base seed (overrides the config)");
  app->add_option("--out-dir", f.out_dir, "output directory");
  app->add_option("--pipeline", f.pipeline, "restrict to one pipeline")
      ->check(CLI::IsMember({"central-kmeans", "central-kmedian", "ldp-kmeans", "sample-aggregate"}));
  app->add_option("--epsilon", f.epsilon, "privacy epsilon per mechanism");
  app->add_option("--delta", f.delta, "privacy delta per mechanism");
  app->add_option("--beta", f.beta, "failure probability");
}

stabclust::SuiteConfig LoadConfig(const CommonFlags& f) {
  stabclust::SuiteConfig cfg;
  if (f.config.empty()) {
    cfg.experiments.emplace_back();
  } else {
    std::ifstream in(f.config);
    stabclust::Require(static_cast<bool>(in), ErrorCode::kInvalidArgument, "cannot open config '" + f.config + "'");
    cfg = stabclust::ParseSuiteConfig(in);
  }
  stabclust::SuiteOverrides o;
  o.seed = f.seed;
  o.epsilon = f.epsilon;
  o.delta = f.delta;
  o.beta = f.beta;
  o.pipeline = f.pipeline;
  stabclust::ApplyOverrides(cfg, o);
  return cfg;
}

void WriteText(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  stabclust::Require(static_cast<bool>(out), ErrorCode::kInvalidArgument, "cannot write '" + path.string() + "'");
  out << text;
}

int Gen(const CommonFlags& f, const std::string& experiment) {
  const stabclust::SuiteConfig cfg = LoadConfig(f);
  const stabclust::ExperimentConfig* e = &cfg.experiments.front();
  for (const auto& x : cfg.experiments) {
    if (x.name == experiment) e = &x;
  }
  stabclust::InstanceSpec spec = e->instance;
  spec.seed = e->seed;
  const stabclust::Instance inst = stabclust::GenerateInstance(spec);
  fs::create_directories(f.out_dir);
  const fs::path data = fs::path(f.out_dir) / "instance.csv";
  stabclust::SaveDataset(inst.data, data.string());
  WriteText(fs::path(f.out_dir) / "instance.json", inst.Summary().dump(2) + "\n");
  std::printf("wrote %s (n=%zu d=%zu hash=%016llx phi_p=%.6g)\n", data.string().c_str(), inst.data.size(),
              inst.data.dim(), static_cast<unsigned long long>(inst.hash), inst.stability.phi_p);
  return 0;
}

int Run(const CommonFlags& f) {
  const stabclust::SuiteConfig cfg = LoadConfig(f);
  const stabclust::SuiteResult r = stabclust::RunSuite(cfg);
  fs::create_directories(f.out_dir);
  std::ofstream csv(fs::path(f.out_dir) / "results.csv", std::ios::binary);
  r.WriteCsv(csv);
  nlohmann::json summary = r.SummaryJson();
  nlohmann::json experiments = nlohmann::json::array();
  for (const auto& e : cfg.experiments) experiments.push_back(e.ToJson());
  summary["config"] = experiments;
  WriteText(fs::path(f.out_dir) / "summary.json", summary.dump(2) + "\n");
  for (const stabclust::PipelineSummary& s : r.summaries) {
    std::printf("%-24s %-18s %3zu/%-3zu pass", s.experiment.c_str(), s.pipeline.c_str(), s.passes, s.trials);
    if (s.min_pass) std::printf("  (need %.2f) %s", *s.min_pass, s.ok() ? "OK" : "FAIL");
    std::printf("\n");
  }
  return r.ok() ? 0 : kExitFail;
}

int Audit(const CommonFlags& f, const std::string& data_path, std::size_t k, int p, int restarts) {
  stabclust::Dataset data(1, 1.0);
  if (!data_path.empty()) {
    data = stabclust::LoadDataset(data_path);
  } else {
    const stabclust::SuiteConfig cfg = LoadConfig(f);
    stabclust::InstanceSpec spec = cfg.experiments.front().instance;
    spec.seed = cfg.experiments.front().seed;
    data = stabclust::GenerateInstance(spec).data;
    if (k == 0) k = spec.k;
  }
  stabclust::Require(k >= 1, ErrorCode::kInvalidArgument, "--k is required with --data");
  const stabclust::Objective obj = stabclust::ObjectiveFromExponent(p);
  const stabclust::StabilityReport report = stabclust::AuditStability(
      data, k, obj, stabclust::DefaultMethod(data), {restarts, f.seed.value_or(0)});
  const std::string text = report.ToJson().dump(2) + "\n";
  std::fputs(text.c_str(), stdout);
  if (!f.out_dir.empty() && f.out_dir != ".") {
    fs::create_directories(f.out_dir);
    WriteText(fs::path(f.out_dir) / "audit.json", text);
  }
  return 0;
}

int VerifyLemmas(const CommonFlags& f, std::size_t instances) {
  stabclust::LemmaOptions opt;
  opt.instances = instances;
  opt.seed = f.seed.value_or(opt.seed);
  bool all = true;
  nlohmann::json j = nlohmann::json::array();
  for (const stabclust::LemmaReport& r : stabclust::RunLemmaSuite(opt)) {
    std::printf("%-32s %zu/%zu  worst gap %.3g  %s\n", r.name.c_str(), r.passed, r.instances,
                r.worst_relative_gap, r.ok() ? "PASS" : "FAIL");
    all = all && r.ok();
    j.push_back(r.ToJson());
  }
  if (!f.out_dir.empty() && f.out_dir != ".") {
    fs::create_directories(f.out_dir);
    WriteText(fs::path(f.out_dir) / "lemmas.json", j.dump(2) + "\n");
  }
  return all ? 0 : kExitFail;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Private stability-based clustering toolkit"};
  app.require_subcommand(1);

  CommonFlags gen_flags, run_flags, audit_flags, lemma_flags;
  std::string experiment;
  auto* gen = app.add_subcommand("gen", "generate a separated mixture instance");
  AddCommon(gen, gen_flags);
  gen->add_option("--experiment", experiment, "config section to take the instance from");

  auto* run = app.add_subcommand("run", "run the pipelines x trials of a config");
  AddCommon(run, run_flags);

  std::string data_path;
  std::size_t k = 0;
  int p = 2;
  int restarts = 50;
  auto* audit = app.add_subcommand("audit", "measure separability and stability of a dataset");
  AddCommon(audit, audit_flags);
  audit->add_option("--data", data_path, "dataset file (.csv or .json); default generates from the config");
  audit->add_option("--k", k, "number of clusters");
  audit->add_option("--p", p, "1 (k-median) or 2 (k-means)")->check(CLI::IsMember({1, 2}));
  audit->add_option("--restarts", restarts, "restarts of the heuristic oracle")->check(CLI::PositiveNumber);

  std::size_t instances = 1000;
  auto* lemmas = app.add_subcommand("verify-lemmas", "check the geometric inequalities on random instances");
  AddCommon(lemmas, lemma_flags);
  lemmas->add_option("--instances", instances, "random instances per inequality");

  CLI11_PARSE(app, argc, argv);
  try {
    if (gen->parsed()) return Gen(gen_flags, experiment);
    if (run->parsed()) return Run(run_flags);
    if (audit->parsed()) return Audit(audit_flags, data_path, k, p, restarts);
    if (lemmas->parsed()) return VerifyLemmas(lemma_flags, instances);
  } catch (const Error& e) {
    std::fprintf(stderr, "%s: %s\n", e.code() == ErrorCode::kParse ? "usage error" : "error", e.what());
    return e.code() == ErrorCode::kParse || e.code() == ErrorCode::kInvalidArgument ? kExitUsage : kExitFail;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitFail;
  }
  return kExitUsage;
}
