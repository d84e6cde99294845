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

// End-to-end acceptance checks. Each criterion runs the named scenarios
// through the harness, reads back the CSVs it wrote and prints one line:
//   A<k> PASS|FAIL <seconds>s <details>
// The same lines go to <out>/acceptance.txt.
// Exit status is 0 only if every selected criterion passes.
//
// usage: trajkit_acceptance [--out DIR] [--allow-fail A6,...] [A1 A4 ...]
//
// --allow-fail names criteria whose failure is known and analysed; they
// still print FAIL but do not change the exit status.

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "support/oracles.hpp"
#include "trajkit/bg_appendix.hpp"
#include "trajkit/classical_filter.hpp"
#include "trajkit/harness.hpp"
#include "trajkit/hybrid_skse.hpp"
#include "trajkit/quantum_traj.hpp"

namespace fs = std::filesystem;
using namespace trajkit;

namespace {

fs::path g_out = "acceptance_out";

struct Table {
  std::vector<std::string> cols;
  std::vector<std::vector<double>> rows;

  std::size_t col(const std::string& name) const {
    const auto it = std::find(cols.begin(), cols.end(), name);
    if (it == cols.end()) throw Error("csv has no column " + name);
    return static_cast<std::size_t>(it - cols.begin());
  }
  double at(std::size_t row, const std::string& name) const { return rows[row][col(name)]; }
};

Table read_csv(const fs::path& p) {
  std::ifstream f(p);
  if (!f) throw Error("cannot read " + p.string());
  Table t;
  std::string line;
  std::getline(f, line);
  std::stringstream hs(line);
  for (std::string c; std::getline(hs, c, ',');) t.cols.push_back(c);
  while (std::getline(f, line)) {
    std::vector<double> row;
    std::stringstream ls(line);
    for (std::string c; std::getline(ls, c, ',');) row.push_back(std::stod(c));
    t.rows.push_back(std::move(row));
  }
  return t;
}

double median(std::vector<double> v) {
  if (v.empty()) return std::nan("");
  std::sort(v.begin(), v.end());
  const std::size_t m = v.size() / 2;
  return v.size() % 2 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

double mean(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

RunResult go(RunConfig c, const std::string& dir) {
  c.out = g_out / dir;
  return run(c);
}

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    pass = pass && ok;
    detail += (detail.empty() ? "" : "; ") + what + (ok ? "" : " [x]");
  }
  void note(const std::string& what) { detail += (detail.empty() ? "" : "; ") + what; }
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// ---------------------------------------------------------------------------

Outcome a1() {
  Outcome o;
  RunConfig c;
  c.scenario = "fig2";
  c.dt = 1e-4;
  c.t_final = 4.0;
  const auto res = go(c, "A1");
  const Table t = read_csv(g_out / "A1" / "fig2.csv");
  const auto sc = ThreeLevelScenario::fig2();
  double worst = 0.0, rho12 = 0.0;
  double purity_err = 0.0;
  for (std::size_t i = 0; i < t.rows.size(); ++i) {
    const Mat<3> a = testing::me_analytic(sc, t.at(i, "t"));
    const double d[] = {t.at(i, "rho11") - a(0, 0).real(),      t.at(i, "rho22") - a(1, 1).real(),
                        t.at(i, "rho33") - a(2, 2).real(),      t.at(i, "re_rho12") - a(0, 1).real(),
                        t.at(i, "im_rho12") - a(0, 1).imag(),   t.at(i, "re_rho31") - a(2, 0).real(),
                        t.at(i, "im_rho31") - a(2, 0).imag(),   t.at(i, "re_rho32") - a(2, 1).real(),
                        t.at(i, "im_rho32") - a(2, 1).imag()};
    for (double x : d) worst = std::max(worst, std::abs(x));
    rho12 = std::max({rho12, std::abs(t.at(i, "re_rho12") - t.at(0, "re_rho12")),
                      std::abs(t.at(i, "im_rho12") - t.at(0, "im_rho12"))});
    purity_err = std::max(purity_err, std::abs(t.at(i, "purity") - (a * a).trace().real()));
  }
  const double p0 = t.at(0, "purity");
  const double pend = t.rows.back()[t.col("purity")];
  o.require(worst <= 1e-3, "max |num-analytic| " + fmt("%.2e", worst));
  o.require(rho12 <= 1e-10, "rho12 drift " + fmt("%.1e", rho12));
  // Purity dips slightly below its asymptote before settling, so no
  // monotonicity check; it must track the closed form instead.
  o.require(std::abs(p0 - 1.0) < 1e-12 && purity_err <= 1e-3 && std::abs(pend - testing::frozen::kPurityInf) < 0.01,
            "purity 1 -> " + fmt("%.6f", pend) + " tracks closed form to " + fmt("%.1e", purity_err) + " (asymptote " + fmt("%.6f", testing::frozen::kPurityInf) +
                ", populations alone " + fmt("%.6f", testing::frozen::kPurityDiagonalOnly) + ")");
  o.require(res.wall_seconds < 5.0, "run " + fmt("%.2f", res.wall_seconds) + "s");
  return o;
}

Outcome a2() {
  Outcome o;
  const auto sc = ThreeLevelScenario::fig2();
  const std::size_t records = 500;
  const double times[] = {1.0, 2.0, 4.0};
  std::vector<std::size_t> steps;
  for (double t : times) steps.push_back(static_cast<std::size_t>(std::llround(t / sc.dt)));
  // Running sums of each real matrix entry and its square.
  std::vector<std::array<double, 18>> sum(3), sum2(3);
  for (auto& a : sum) a.fill(0.0);
  for (auto& a : sum2) a.fill(0.0);
  for (std::size_t r = 0; r < records; ++r) {
    const SmeRun run = sme_run(sc, 1, r);
    for (std::size_t j = 0; j < steps.size(); ++j) {
      const Mat<3>& rho = run.rho[steps[j]];
      for (int e = 0; e < 9; ++e) {
        const cplx z = rho(e / 3, e % 3);
        sum[j][2 * e] += z.real();
        sum[j][2 * e + 1] += z.imag();
        sum2[j][2 * e] += z.real() * z.real();
        sum2[j][2 * e + 1] += z.imag() * z.imag();
      }
    }
  }
  const double n = static_cast<double>(records);
  double worst_z = 0.0;
  for (std::size_t j = 0; j < steps.size(); ++j) {
    const Mat<3> a = testing::me_analytic(sc, static_cast<double>(steps[j]) * sc.dt);
    for (int k = 0; k < 18; ++k) {
      const cplx ae = a(k / 6, (k / 2) % 3);
      const double target = k % 2 ? ae.imag() : ae.real();
      const double m = sum[j][k] / n;
      const double var = std::max(sum2[j][k] / n - m * m, 0.0) * n / (n - 1.0);
      const double se = std::sqrt(var / n);
      const double diff = std::abs(m - target);
      const double z = se > 1e-12 ? diff / se : (diff < 1e-9 ? 0.0 : 1e9);
      worst_z = std::max(worst_z, z);
    }
  }
  o.require(worst_z <= 3.0, "max |mean-ME|/SE over 9 entries x 3 times " + fmt("%.2f", worst_z));
  return o;
}

Outcome a3() {
  Outcome o;
  for (const auto& line : run_oracles()) o.require(line.passed, line.name + " " + line.detail);
  // Each oracle alone, timed.
  const auto time_it = [](const std::function<void()>& f) {
    const auto t0 = std::chrono::steady_clock::now();
    f();
    return seconds_since(t0);
  };
  const double tq = time_it([] { two_step_oracle(ThreeLevelScenario::fig2(), 0.01); });
  const double tc = time_it([] { classical_one_step_oracle(ClassicalScenario{}, 0.01); });
  const double th = time_it([] { hybrid_one_step_oracle(HybridScenario{}, 0.01); });
  o.require(std::max({tq, tc, th}) < 1.0, "slowest " + fmt("%.3f", std::max({tq, tc, th})) + "s");
  return o;
}

// Median over t of `value` for rows matching n, adaptive and replicate.
double median_where(const Table& t, const std::string& value, double n, double adaptive, double rep) {
  std::vector<double> v;
  const bool has_rep = std::find(t.cols.begin(), t.cols.end(), "replicate") != t.cols.end();
  for (std::size_t i = 0; i < t.rows.size(); ++i) {
    if (t.at(i, "n") != n || t.at(i, "adaptive") != adaptive) continue;
    if (has_rep && t.at(i, "replicate") != rep) continue;
    v.push_back(t.at(i, value));
  }
  return median(v);
}

// Mean over replicates of the time-median infidelity at ensemble size n.
double mean_median_infidelity(const Table& t, const std::string& value, double n, double adaptive,
                              std::size_t reps) {
  std::vector<double> m;
  for (std::size_t r = 0; r < reps; ++r) m.push_back(1.0 - median_where(t, value, n, adaptive, static_cast<double>(r)));
  return mean(m);
}

// Independent fictitious-noise ensembles on the same record for the
// adaptive vs static comparison at n = 100; one ensemble is too noisy.
constexpr std::size_t kComparisonReplicates = 32;

Outcome a4() {
  Outcome o;
  RunConfig c;
  c.scenario = "fig5-fidelity";
  c.dt = 1e-3;
  c.t_final = 4.0;
  c.n = {10, 1000, 10000};
  const auto r1 = go(c, "A4");
  const Table t = read_csv(g_out / "A4" / "fidelity.csv");
  const double m10 = median_where(t, "fidelity", 10, 0, 0);
  const double m1000 = median_where(t, "fidelity", 1000, 0, 0);
  const double m10000 = median_where(t, "fidelity", 10000, 0, 0);
  o.require(m1000 > m10, "median F n=10 " + fmt("%.5f", m10) + " < n=1000 " + fmt("%.5f", m1000));
  o.require(m10000 >= 0.98, "n=10000 " + fmt("%.5f", m10000));
  o.note("adaptive n=10/1000/10000 " + fmt("%.5f", median_where(t, "fidelity", 10, 1, 0)) + "/" +
         fmt("%.5f", median_where(t, "fidelity", 1000, 1, 0)) + "/" +
         fmt("%.5f", median_where(t, "fidelity", 10000, 1, 0)));

  c.n = {100};
  c.replicates = kComparisonReplicates;
  const auto r2 = go(c, "A4_n100");
  const Table u = read_csv(g_out / "A4_n100" / "fidelity.csv");
  const double st = mean_median_infidelity(u, "fidelity", 100, 0, kComparisonReplicates);
  const double ad = mean_median_infidelity(u, "fidelity", 100, 1, kComparisonReplicates);
  o.require(ad <= st, "n=100 median infidelity over " + std::to_string(kComparisonReplicates) +
                          " ensembles: adaptive " + fmt("%.5f", ad) + " vs static " + fmt("%.5f", st));
  o.note("single ensemble: adaptive " + fmt("%.5f", 1.0 - median_where(u, "fidelity", 100, 1, 0)) + " vs static " +
         fmt("%.5f", 1.0 - median_where(u, "fidelity", 100, 0, 0)));
  const double wall = r1.wall_seconds + r2.wall_seconds;
  o.require(wall < 180.0, "runs " + fmt("%.1f", wall) + "s");
  return o;
}

Outcome a5() {
  Outcome o;
  const double nu = steady_state_variance(ClassicalScenario{});
  RunConfig ce;
  ce.scenario = "classical-exact";
  const auto r0 = go(ce, "A5_exact");
  const Table ex = read_csv(g_out / "A5_exact" / "classical_exact.csv");
  const double nu_t = ex.rows.back()[ex.col("var_exact")];
  o.require(std::abs(nu - (std::sqrt(2.0) - 1.0)) <= 1e-6 && std::abs(nu_t - (std::sqrt(2.0) - 1.0)) <= 1e-6,
            "nu(t=" + fmt("%g", ex.rows.back()[0]) + ") " + fmt("%.9f", nu_t));

  RunConfig c;
  c.scenario = "classical-ostensible";
  c.n = {100, 10000};
  const auto r1 = go(c, "A5");
  const Table t = read_csv(g_out / "A5" / "classical_ostensible.csv");
  double zm = 0.0, zv = 0.0, fmin = 1.0, e100 = 0.0, e10000 = 0.0;
  std::size_t k100 = 0, k10000 = 0;
  for (std::size_t i = 0; i < t.rows.size(); ++i) {
    const double dm = t.at(i, "mean_ost") - t.at(i, "mean_exact");
    if (t.at(i, "n") == 100) {
      e100 += dm * dm;
      ++k100;
      continue;
    }
    e10000 += dm * dm;
    ++k10000;
    zm = std::max(zm, std::abs(dm) / t.at(i, "se_mean"));
    zv = std::max(zv, std::abs(t.at(i, "var_ost") - t.at(i, "var_exact")) / t.at(i, "se_var"));
    fmin = std::min(fmin, t.at(i, "fidelity"));
  }
  const double ratio = std::sqrt(e100 / static_cast<double>(k100)) / std::sqrt(e10000 / static_cast<double>(k10000));
  o.require(zm <= 3.0 && zv <= 3.0, "n=10000 max z mean " + fmt("%.2f", zm) + ", var " + fmt("%.2f", zv));
  o.require(fmin >= 0.995, "min fidelity " + fmt("%.5f", fmin));
  o.require(ratio >= 5.0 && ratio <= 15.0, "RMS ratio n=100/n=10000 " + fmt("%.2f", ratio));
  const double wall = r0.wall_seconds + r1.wall_seconds;
  o.require(wall < 60.0, "runs " + fmt("%.1f", wall) + "s");
  return o;
}

Outcome a6() {
  Outcome o;
  RunConfig c;
  c.scenario = "hybrid-ostensible";
  c.n = {10000};
  c.params["bootstrap"] = 200;
  const auto r1 = go(c, "A6");
  const Table t = read_csv(g_out / "A6" / "hybrid_ostensible.csv");
  const double fq = median_where(t, "quantum_fidelity", 10000, 0, 0);
  double zm = 0.0;
  for (std::size_t i = 0; i < t.rows.size(); ++i) {
    if (t.at(i, "adaptive") != 0) continue;
    zm = std::max(zm, std::abs(t.at(i, "mean_ost") - t.at(i, "mean_ref")) / t.at(i, "se_mean"));
  }
  o.require(fq >= 0.98, "n=10000 median quantum F " + fmt("%.5f", fq));
  o.require(zm <= 3.0, "max |mean-grid|/SE " + fmt("%.2f", zm));
  o.note("adaptive n=10000 median F " + fmt("%.5f", median_where(t, "quantum_fidelity", 10000, 1, 0)));

  c.n = {100};
  c.params["bootstrap"] = 0;
  c.replicates = kComparisonReplicates;
  const auto r2 = go(c, "A6_n100");
  const Table u = read_csv(g_out / "A6_n100" / "hybrid_ostensible.csv");
  const double st = mean_median_infidelity(u, "quantum_fidelity", 100, 0, kComparisonReplicates);
  const double ad = mean_median_infidelity(u, "quantum_fidelity", 100, 1, kComparisonReplicates);
  o.require(ad < st, "n=100 median infidelity over " + std::to_string(kComparisonReplicates) +
                         " ensembles: adaptive " + fmt("%.5f", ad) + " vs static " + fmt("%.5f", st));
  o.note("classical: adaptive " + fmt("%.5f", mean_median_infidelity(u, "classical_fidelity", 100, 1, kComparisonReplicates)) +
         " vs static " + fmt("%.5f", mean_median_infidelity(u, "classical_fidelity", 100, 0, kComparisonReplicates)));

  RunConfig g;
  g.scenario = "hybrid-reference";
  go(g, "A6_grid");
  const double marg = hybrid_marginalization_error(HybridScenario{});
  o.require(marg <= 1e-3, "marginalization " + fmt("%.2e", marg));
  const double wall = r1.wall_seconds + r2.wall_seconds;
  o.require(wall < 300.0, "runs " + fmt("%.1f", wall) + "s");
  return o;
}

constexpr std::size_t kAppendixReplicates = 3;

Outcome a7() {
  Outcome o;
  RunConfig c;
  c.scenario = "appendix-bg";
  c.n = {1000, 10000};
  c.replicates = kAppendixReplicates;
  const auto r1 = go(c, "A7");
  const Table t = read_csv(g_out / "A7" / "appendix_rms.csv");
  const double bg1 = t.at(0, "rms_bg"), bg2 = t.at(1, "rms_bg");
  const double us1 = t.at(0, "rms_ours"), us2 = t.at(1, "rms_ours");
  const double s10 = std::sqrt(10.0);
  o.require(us1 / us2 >= 0.5 * s10 && us1 / us2 <= 1.5 * s10, "ours RMS ratio " + fmt("%.2f", us1 / us2));
  o.require(bg1 / bg2 >= 0.5 && bg1 / bg2 <= 2.0, "BG ratio " + fmt("%.2f", bg1 / bg2));
  o.require(bg2 >= 3.0 * us2, "BG/ours at n=10000 " + fmt("%.1f", bg2 / us2));
  o.note("RMS n=10000 BG " + fmt("%.4f", bg2) + " ours " + fmt("%.5f", us2));

  c.params["eta"] = 1.0;
  c.n = {1000};
  c.replicates = 1;
  const auto r2 = go(c, "A7_eta1");
  const Table u = read_csv(g_out / "A7_eta1" / "appendix_rms.csv");
  o.require(u.at(0, "rms_bg") <= 1e-6 && u.at(0, "rms_ours") <= 1e-6,
            "eta=1 RMS BG " + fmt("%.1e", u.at(0, "rms_bg")) + " ours " + fmt("%.1e", u.at(0, "rms_ours")));
  const double wall = r1.wall_seconds + r2.wall_seconds;
  o.require(wall < 120.0, "runs " + fmt("%.1f", wall) + "s");
  return o;
}

Outcome a8() {
  Outcome o;
  std::vector<RunConfig> cfgs;
  for (const auto& name : scenario_names()) {
    RunConfig c;
    c.scenario = name;
    c.seed = 7;
    c.t_final = 0.5;
    if (name == "fig5-fidelity") c.n = {50};
    if (name == "classical-ostensible") c.n = {200};
    if (name == "hybrid-ostensible") c.n = {100};
    if (name == "appendix-bg") c.n = {100};
    cfgs.push_back(c);
  }
  std::size_t same = 0;
  for (auto c : cfgs) {
    std::vector<std::string> hashes;
    for (int threads : {1, 4, 4}) {
      c.threads = threads;
      hashes.push_back(go(c, "A8/" + c.scenario + "_" + std::to_string(hashes.size())).content_hash);
    }
    const bool ok = hashes[0] == hashes[1] && hashes[1] == hashes[2];
    same += ok;
    if (!ok) o.require(false, c.scenario + " differs across runs");
  }
  o.require(same == cfgs.size(), std::to_string(same) + "/" + std::to_string(cfgs.size()) +
                                     " scenarios byte-identical at 1 and 4 threads");
  return o;
}

}  // namespace

int main(int argc, char** argv) {
  std::set<std::string> only, allowed;
  for (int i = 1; i < argc; ++i) {
    const std::string a = argv[i];
    if (a == "--out" && i + 1 < argc) {
      g_out = argv[++i];
    } else if (a == "--allow-fail" && i + 1 < argc) {
      std::stringstream ss(argv[++i]);
      for (std::string item; std::getline(ss, item, ',');) allowed.insert(item);
    } else {
      only.insert(a);
    }
  }
  const std::vector<std::pair<std::string, std::function<Outcome()>>> all = {
      {"A1", a1}, {"A2", a2}, {"A3", a3}, {"A4", a4}, {"A5", a5}, {"A6", a6}, {"A7", a7}, {"A8", a8}};
  fs::create_directories(g_out);
  std::ofstream log(g_out / "acceptance.txt");
  bool ok = true;
  for (const auto& [name, fn] : all) {
    if (!only.empty() && !only.count(name)) continue;
    const auto t0 = std::chrono::steady_clock::now();
    Outcome r;
    try {
      r = fn();
    } catch (const std::exception& e) {
      r.pass = false;
      r.detail = std::string("error: ") + e.what();
    }
    const bool known = !r.pass && allowed.count(name);
    char head[64];
    std::snprintf(head, sizeof head, "%s %s %.1fs ", name.c_str(), r.pass ? "PASS" : "FAIL", seconds_since(t0));
    const std::string line = head + std::string(known ? "(known failure) " : "") + r.detail;
    std::printf("%s\n", line.c_str());
    std::fflush(stdout);
    log << line << '\n' << std::flush;
    ok = ok && (r.pass || known);
  }
  return ok ? 0 : 1;
}
