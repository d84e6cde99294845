// Copyright 2026 The trajkit Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// trajkit: run named scenarios, check configs, run the enumeration oracles.

#include <CLI11.hpp>

#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include "trajkit/harness.hpp"
#include "trajkit/statekit.hpp"

namespace {

// key=value overrides of physical parameters.
void apply_sets(trajkit::RunConfig& c, const std::vector<std::string>& sets) {
  for (const auto& s : sets) {
    const auto eq = s.find('=');
    if (eq == std::string::npos) throw trajkit::Error("--set expects key=value, got '" + s + "'");
    c.params[s.substr(0, eq)] = std::stod(s.substr(eq + 1));
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"trajkit: conditional-state simulation with ostensible ensembles"};
  app.require_subcommand(1);

  trajkit::RunConfig cfg;
  double dt = 0.0, t_final = 0.0, lambda = 0.0, mu = 0.0;
  std::string scheme = "likelihood";
  std::string config_file;
  std::vector<std::string> sets;
  auto* run = app.add_subcommand("run", "Run a scenario and write CSVs");
  const auto names = trajkit::scenario_names();
  run->add_option("scenario", cfg.scenario, "Scenario name")->check(CLI::IsMember(names));
  run->add_option("--config", config_file, "Flat key = value config; flags override it");
  auto* o_dt = run->add_option("--dt", dt, "Time step");
  auto* o_tf = run->add_option("--t-final", t_final, "Final time");
  auto* o_seed = run->add_option("--seed", cfg.seed, "Top-level seed");
  auto* o_n = run->add_option("--n", cfg.n, "Ensemble size (repeatable)");
  auto* o_lam = run->add_option("--lambda", lambda, "Static real-channel mean");
  auto* o_mu = run->add_option("--mu", mu, "Static fictitious-channel mean");
  auto* o_ad = run->add_flag("--adaptive", cfg.adaptive, "State-dependent fictitious mean");
  auto* o_sch = run->add_option("--scheme", scheme, "likelihood | ito")->check(CLI::IsMember({"likelihood", "ito"}));
  auto* o_rep = run->add_option("--replicates", cfg.replicates, "Independent ensembles per n");
  auto* o_out = run->add_option("--out", cfg.out, "Output directory");
  auto* o_thr = run->add_option("--threads", cfg.threads, "Worker threads (0 = default)");
  run->add_option("--set", sets, "Physical parameter override key=value (repeatable)");

  std::string validate_file;
  auto* val = app.add_subcommand("validate", "Check a config file and print warnings");
  val->add_option("config", validate_file, "Config file")->required()->check(CLI::ExistingFile);

  auto* orc = app.add_subcommand("oracle", "Run the exact enumeration oracles");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) {
      trajkit::RunConfig merged = cfg;
      if (!config_file.empty()) {
        merged = trajkit::load_config(config_file);
        if (!cfg.scenario.empty()) merged.scenario = cfg.scenario;
        if (*o_seed) merged.seed = cfg.seed;
        if (*o_n) merged.n = cfg.n;
        if (*o_ad) merged.adaptive = cfg.adaptive;
        if (*o_rep) merged.replicates = cfg.replicates;
        if (*o_out) merged.out = cfg.out;
        if (*o_thr) merged.threads = cfg.threads;
        for (const auto& [k, v] : cfg.params) merged.params[k] = v;
      }
      if (merged.scenario.empty()) throw trajkit::Error("no scenario given");
      if (*o_dt) merged.dt = dt;
      if (*o_tf) merged.t_final = t_final;
      if (*o_lam) merged.lambda = lambda;
      if (*o_mu) merged.mu = mu;
      if (*o_sch) merged.scheme = trajkit::scheme_from_string(scheme);
      apply_sets(merged, sets);
      for (const auto& w : trajkit::validate(merged)) std::cerr << "warning: " << w << '\n';
      const auto res = trajkit::run(merged);
      for (const auto& f : res.files) std::cout << f.string() << '\n';
      std::cout << "content_hash " << res.content_hash << '\n';
      std::printf("wall_seconds %.3f\n", res.wall_seconds);
      return 0;
    }
    if (*val) {
      const auto msgs = trajkit::validate(trajkit::load_config(validate_file));
      for (const auto& m : msgs) std::cout << "warning: " << m << '\n';
      if (msgs.empty()) std::cout << "ok\n";
      return 0;
    }
    if (*orc) {
      bool all = true;
      for (const auto& line : trajkit::run_oracles()) {
        std::cout << (line.passed ? "PASS " : "FAIL ") << line.name << "  " << line.detail << '\n';
        all = all && line.passed;
      }
      return all ? 0 : 1;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
