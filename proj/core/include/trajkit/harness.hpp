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

#pragma once

// Named scenarios, run configuration and CSV output.
//
// Config files are flat `key = value` text; `#` starts a comment. Keys:
//   scenario      one of scenario_names()
//   dt, t_final   step and horizon (scenario defaults if absent)
//   seed          top-level seed, every random draw derives from it
//   n             comma-separated ensemble sizes
//   lambda, mu    static means of the ostensible laws
//   adaptive      true/false, state-dependent fictitious mean
//   scheme        likelihood | ito
//   replicates    independent ensembles per n (fig5-fidelity,
//                 hybrid-ostensible, appendix-bg)
//   threads       worker threads, 0 = runtime default
//   out           output directory
// Any other key is a physical parameter of the scenario (for example
// gamma1, omega, eta); see scenario_parameters().

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "trajkit/stochproc.hpp"

namespace trajkit {

struct RunConfig {
  std::string scenario;
  std::optional<double> dt;
  std::optional<double> t_final;
  std::uint64_t seed = 1;
  std::vector<std::size_t> n;  // empty: scenario default
  std::optional<double> lambda;
  std::optional<double> mu;
  bool adaptive = false;
  Scheme scheme = Scheme::likelihood;
  std::size_t replicates = 1;
  int threads = 0;
  std::filesystem::path out = "out";
  std::map<std::string, double> params;
};

RunConfig parse_config(std::istream& in);
RunConfig load_config(const std::filesystem::path& path);
/// Canonical key = value text of everything that affects results (not
/// threads or out). parse_config reads it back.
std::string config_text(const RunConfig& c);

std::vector<std::string> scenario_names();
/// Physical parameter keys a scenario accepts, with their defaults.
std::map<std::string, double> scenario_parameters(const std::string& scenario);

struct RunResult {
  std::vector<std::filesystem::path> files;  // CSVs and records, in write order
  std::string content_hash;
  double wall_seconds = 0.0;
};

/// Runs a scenario and writes its CSVs, record files and manifest.txt into
/// config.out. Throws Error on invalid configs and solver aborts.
RunResult run(const RunConfig& config);

/// Non-fatal diagnostics: dt against rate scales, CFL margins and weight
/// underflow risk. Invalid values come back as messages too.
std::vector<std::string> validate(const RunConfig& config);

struct OracleLine {
  std::string name;
  bool passed = false;
  std::string detail;
};

/// Exact enumeration oracles for the quantum, classical, hybrid and appendix
/// solvers.
std::vector<OracleLine> run_oracles();

}  // namespace trajkit
