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

#include <filesystem>
#include <initializer_list>
#include <map>
#include <string>
#include <vector>

#include "trajkit/harness.hpp"
#include "trajkit/stochproc.hpp"

namespace trajkit::detail {

/// Collects the files of one run. Everything is written from one thread.
class Output {
 public:
  explicit Output(std::filesystem::path dir);

  void csv(const std::string& name, const std::string& header, const std::string& body);
  void record(const std::string& name, const Record& r);

  const std::vector<std::filesystem::path>& files() const { return files_; }
  const std::filesystem::path& dir() const { return dir_; }

 private:
  std::filesystem::path dir_;
  std::vector<std::filesystem::path> files_;
};

/// Comma-joined full-precision values followed by a newline.
std::string csv_row(std::initializer_list<double> values);

/// Hash of the canonical config text, stamped into record headers.
std::string config_hash(const RunConfig& c);

struct ScenarioEntry {
  std::string name;
  std::map<std::string, double> params;  // physical keys and defaults
  void (*run)(const RunConfig&, Output&);
  std::vector<std::string> (*warnings)(const RunConfig&);
};

const std::vector<ScenarioEntry>& registry();
const ScenarioEntry& find_scenario(const std::string& name);

/// config.params[key] if present, else the scenario default.
double param(const RunConfig& c, const std::string& key);

}  // namespace trajkit::detail
