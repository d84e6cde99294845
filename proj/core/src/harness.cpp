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

#include "trajkit/harness.hpp"

#include <omp.h>

#include <algorithm>
#include <chrono>
#include <fstream>
#include <sstream>

#include "harness_detail.hpp"
#include "trajkit/bg_appendix.hpp"
#include "trajkit/classical_filter.hpp"
#include "trajkit/hybrid_skse.hpp"
#include "trajkit/quantum_traj.hpp"

namespace trajkit {

namespace detail {

Output::Output(std::filesystem::path dir) : dir_(std::move(dir)) {
  std::error_code ec;
  std::filesystem::create_directories(dir_, ec);
  if (ec || !std::filesystem::is_directory(dir_)) {
    throw Error("cannot create output directory " + dir_.string());
  }
}

void Output::csv(const std::string& name, const std::string& header, const std::string& body) {
  const auto path = dir_ / name;
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error("cannot write " + path.string());
  f << header << '\n' << body;
  if (!f) throw Error("write failed: " + path.string());
  files_.push_back(path);
}

void Output::record(const std::string& name, const Record& r) {
  const auto path = dir_ / name;
  write_record(path, r);
  files_.push_back(path);
}

std::string csv_row(std::initializer_list<double> values) {
  std::string s;
  bool first = true;
  for (double v : values) {
    if (!first) s += ',';
    s += format_double(v);
    first = false;
  }
  s += '\n';
  return s;
}

std::string config_hash(const RunConfig& c) { return hex64(fnv1a(config_text(c))); }

const ScenarioEntry& find_scenario(const std::string& name) {
  for (const auto& e : registry()) {
    if (e.name == name) return e;
  }
  throw Error("unknown scenario '" + name + "'");
}

double param(const RunConfig& c, const std::string& key) {
  if (auto it = c.params.find(key); it != c.params.end()) return it->second;
  const auto& defaults = find_scenario(c.scenario).params;
  if (auto it = defaults.find(key); it != defaults.end()) return it->second;
  throw Error("scenario " + c.scenario + " has no parameter '" + key + "'");
}

}  // namespace detail

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  return s.substr(b, s.find_last_not_of(" \t\r") - b + 1);
}

double to_double(const std::string& key, const std::string& v) {
  std::size_t used = 0;
  double d = 0.0;
  try {
    d = std::stod(v, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != v.size() || v.empty()) throw Error("config: '" + key + "' expects a number, got '" + v + "'");
  return d;
}

std::uint64_t to_uint(const std::string& key, const std::string& v) {
  std::size_t used = 0;
  unsigned long long u = 0;
  try {
    u = std::stoull(v, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != v.size() || v.empty() || v[0] == '-') {
    throw Error("config: '" + key + "' expects a non-negative integer, got '" + v + "'");
  }
  return u;
}

bool to_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw Error("config: '" + key + "' expects true or false, got '" + v + "'");
}

void check_params(const RunConfig& c) {
  const auto& known = detail::find_scenario(c.scenario).params;
  for (const auto& [k, v] : c.params) {
    if (!known.count(k)) throw Error("scenario " + c.scenario + " has no parameter '" + k + "'");
  }
  if (c.n.end() != std::find(c.n.begin(), c.n.end(), std::size_t{0})) throw Error("ensemble size n must be >= 1");
  if (c.replicates == 0) throw Error("replicates must be >= 1");
  if (c.threads < 0) throw Error("threads must be >= 0");
}

}  // namespace

RunConfig parse_config(std::istream& in) {
  RunConfig c;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto h = line.find('#'); h != std::string::npos) line.erase(h);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw Error("config line " + std::to_string(lineno) + ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string val = trim(line.substr(eq + 1));
    if (key == "scenario") {
      c.scenario = val;
    } else if (key == "dt") {
      c.dt = to_double(key, val);
    } else if (key == "t_final") {
      c.t_final = to_double(key, val);
    } else if (key == "seed") {
      c.seed = to_uint(key, val);
    } else if (key == "n") {
      c.n.clear();
      std::stringstream ss(val);
      for (std::string item; std::getline(ss, item, ',');) c.n.push_back(to_uint(key, trim(item)));
    } else if (key == "lambda") {
      c.lambda = to_double(key, val);
    } else if (key == "mu") {
      c.mu = to_double(key, val);
    } else if (key == "adaptive") {
      c.adaptive = to_bool(key, val);
    } else if (key == "scheme") {
      c.scheme = scheme_from_string(val);
    } else if (key == "replicates") {
      c.replicates = to_uint(key, val);
    } else if (key == "threads") {
      c.threads = static_cast<int>(to_uint(key, val));
    } else if (key == "out") {
      c.out = val;
    } else if (key.empty()) {
      throw Error("config line " + std::to_string(lineno) + ": empty key");
    } else {
      c.params[key] = to_double(key, val);
    }
  }
  return c;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream f(path);
  if (!f) throw Error("cannot read config " + path.string());
  return parse_config(f);
}

std::string config_text(const RunConfig& c) {
  std::ostringstream o;
  o << "scenario = " << c.scenario << '\n';
  if (c.dt) o << "dt = " << format_double(*c.dt) << '\n';
  if (c.t_final) o << "t_final = " << format_double(*c.t_final) << '\n';
  o << "seed = " << c.seed << '\n';
  if (!c.n.empty()) {
    o << "n = ";
    for (std::size_t i = 0; i < c.n.size(); ++i) o << (i ? "," : "") << c.n[i];
    o << '\n';
  }
  if (c.lambda) o << "lambda = " << format_double(*c.lambda) << '\n';
  if (c.mu) o << "mu = " << format_double(*c.mu) << '\n';
  o << "adaptive = " << (c.adaptive ? "true" : "false") << '\n';
  o << "scheme = " << to_string(c.scheme) << '\n';
  o << "replicates = " << c.replicates << '\n';
  for (const auto& [k, v] : c.params) o << k << " = " << format_double(v) << '\n';
  // threads and out do not change results and stay out of the hash.
  return o.str();
}

std::vector<std::string> scenario_names() {
  std::vector<std::string> names;
  for (const auto& e : detail::registry()) names.push_back(e.name);
  return names;
}

std::map<std::string, double> scenario_parameters(const std::string& scenario) {
  return detail::find_scenario(scenario).params;
}

RunResult run(const RunConfig& config) {
  const auto& entry = detail::find_scenario(config.scenario);
  check_params(config);
  if (config.threads > 0) omp_set_num_threads(config.threads);

  const auto start = std::chrono::steady_clock::now();
  detail::Output out(config.out);
  entry.run(config, out);
  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  RunResult res;
  res.files = out.files();
  res.wall_seconds = wall;
  std::uint64_t h = fnv1a("");
  std::ostringstream listing;
  for (const auto& p : res.files) {
    std::ifstream f(p, std::ios::binary);
    std::ostringstream buf;
    buf << f.rdbuf();
    const std::string name = p.filename().string();
    h = fnv1a(name, h);
    h = fnv1a(buf.str(), h);
    listing << "file = " << name << ' ' << hex64(fnv1a(buf.str())) << '\n';
  }
  res.content_hash = hex64(h);

  std::ofstream m(out.dir() / "manifest.txt");
  if (!m) throw Error("cannot write manifest in " + out.dir().string());
  m << "# trajkit run manifest\n"
    << config_text(config) << listing.str() << "content_hash = " << res.content_hash << '\n'
    << "wall_seconds = " << format_double(wall) << '\n';
  return res;
}

std::vector<std::string> validate(const RunConfig& config) {
  std::vector<std::string> msgs;
  try {
    const auto& entry = detail::find_scenario(config.scenario);
    check_params(config);
    msgs = entry.warnings(config);
  } catch (const Error& e) {
    msgs.push_back(std::string("invalid: ") + e.what());
    return msgs;
  }
  if (config.dt && config.t_final && *config.dt > *config.t_final) msgs.push_back("dt exceeds t_final");
  // A static mean far from the signal spreads log weights by about t (lambda^2 + mu^2) / 2.
  const double t = config.t_final.value_or(5.0);
  const double lam = config.lambda.value_or(0.0);
  const double mu = config.adaptive ? 0.0 : config.mu.value_or(0.0);
  const double spread = 0.5 * t * (lam * lam + mu * mu);
  if (spread > 30.0) msgs.push_back("weight degeneracy likely: t_final*(lambda^2+mu^2)/2 = " + format_double(spread));
  return msgs;
}

std::vector<OracleLine> run_oracles() {
  std::vector<OracleLine> lines;
  auto detail_of = [](std::initializer_list<std::pair<const char*, double>> kv) {
    std::string s;
    for (const auto& [k, v] : kv) s += std::string(s.empty() ? "" : " ") + k + "=" + format_double(v);
    return s;
  };
  {
    const auto r = two_step_oracle(ThreeLevelScenario::fig2(), 0.01);
    lines.push_back({"quantum two-step", r.passed(),
                     detail_of({{"norm_error", r.norm_identity_error},
                                {"state_error", r.state_error},
                                {"nonlinear_discrepancy", r.bg_discrepancy}})});
  }
  {
    const auto r = classical_one_step_oracle(ClassicalScenario{}, 0.01);
    lines.push_back({"classical one-step", r.passed(), detail_of({{"max_error", r.max_error}})});
  }
  {
    const auto r = hybrid_one_step_oracle(HybridScenario{}, 0.01);
    lines.push_back({"hybrid one-step", r.passed(),
                     detail_of({{"exact_error", r.exact_error},
                                {"error_dt", r.error_dt},
                                {"error_half", r.error_half},
                                {"order_ratio", r.order_ratio()},
                                {"joint_order_ratio", r.joint_order_ratio()}})});
  }
  {
    BGScenario sc;
    sc.dt = 0.01;
    sc.omega = 1.0;
    sc.initial = Ket<2>(0.8, cplx(0.0, 0.6));
    const auto r = bg_two_step_oracle(sc);
    lines.push_back({"appendix two-step", r.passed(),
                     detail_of({{"ours_error", r.ours_error}, {"bg_discrepancy", r.bg_discrepancy}})});
  }
  return lines;
}

}  // namespace trajkit
