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

#include <algorithm>
#include <cmath>
#include <sstream>

#include "harness_detail.hpp"
#include "trajkit/bg_appendix.hpp"
#include "trajkit/classical_filter.hpp"
#include "trajkit/hybrid_skse.hpp"
#include "trajkit/quantum_traj.hpp"

namespace trajkit::detail {

namespace {

std::vector<std::size_t> sizes(const RunConfig& c, std::vector<std::size_t> fallback) {
  return c.n.empty() ? fallback : c.n;
}

// Output stride giving roughly `spacing` time units between rows.
std::size_t stride(double dt, double spacing) {
  return std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(spacing / dt)));
}

// ---- three-level atom ------------------------------------------------------

ThreeLevelScenario three_level(const RunConfig& c) {
  ThreeLevelScenario sc = ThreeLevelScenario::fig2();
  sc.gamma1 = param(c, "gamma1");
  sc.gamma2 = param(c, "gamma2");
  if (c.dt) sc.dt = *c.dt;
  if (c.t_final) sc.t_final = *c.t_final;
  sc.validate();
  return sc;
}

const char* kRhoHeader =
    "t,rho11,rho22,rho33,re_rho12,im_rho12,re_rho31,im_rho31,re_rho32,im_rho32,purity";

std::string rho_row(double t, const Mat<3>& r) {
  return csv_row({t, r(0, 0).real(), r(1, 1).real(), r(2, 2).real(), r(0, 1).real(), r(0, 1).imag(),
                  r(2, 0).real(), r(2, 0).imag(), r(2, 1).real(), r(2, 1).imag(), (r * r).trace().real()});
}

void run_fig2(const RunConfig& c, Output& out) {
  const ThreeLevelScenario sc = three_level(c);
  const auto rho = me_solve(sc);
  const std::size_t every = stride(sc.dt, 0.01);
  std::string body;
  for (std::size_t k = 0; k < rho.size(); k += every) body += rho_row(static_cast<double>(k) * sc.dt, rho[k]);
  out.csv("fig2.csv", kRhoHeader, body);
}

void run_fig4(const RunConfig& c, Output& out) {
  const ThreeLevelScenario sc = three_level(c);
  SmeRun ref = sme_run(sc, c.seed, 0, c.scheme);
  ref.record.scenario_hash = config_hash(c);
  out.record("record_real.csv", ref.record);
  const std::size_t every = stride(sc.dt, 0.01);
  std::string body;
  for (std::size_t k = 0; k < ref.rho.size(); k += every) {
    body += rho_row(static_cast<double>(k) * sc.dt, ref.rho[k]);
  }
  out.csv("fig4.csv", kRhoHeader, body);
}

// Both ostensible laws are always emitted: static mu (part A) and adaptive
// mu (part B).
void run_fig5(const RunConfig& c, Output& out) {
  const ThreeLevelScenario sc = three_level(c);
  SmeRun ref = sme_run(sc, c.seed, 0, c.scheme);
  ref.record.scenario_hash = config_hash(c);
  out.record("record_real.csv", ref.record);
  std::string body;
  for (int adaptive = 0; adaptive < 2; ++adaptive) {
    for (std::size_t n : sizes(c, {10, 1000})) {
      for (std::size_t rep = 0; rep < c.replicates; ++rep) {
        QuantumEnsembleConfig cfg;
        cfg.n = n;
        cfg.lambda = c.lambda.value_or(0.0);
        cfg.mu = adaptive ? OstensibleDistribution::adapting() : OstensibleDistribution::fixed(c.mu.value_or(0.0));
        cfg.scheme = c.scheme;
        cfg.seed = c.seed;
        cfg.replicate = rep;
        cfg.sample_every = stride(sc.dt, 0.01);
        const auto res = run_quantum_ensemble(sc, ref.record, ref.rho, cfg);
        for (std::size_t i = 0; i < res.t.size(); ++i) {
          body += csv_row({res.t[i], res.fidelity[i], static_cast<double>(n), static_cast<double>(adaptive),
                           static_cast<double>(rep)});
        }
      }
    }
  }
  out.csv("fidelity.csv", "t,fidelity,n,adaptive,replicate", body);
}

std::vector<std::string> warn_three_level(const RunConfig& c) { return three_level(c).warnings(); }

// ---- classical OU filter ---------------------------------------------------

ClassicalScenario classical(const RunConfig& c) {
  ClassicalScenario sc;
  sc.k = param(c, "k");
  sc.l = param(c, "l");
  sc.b = param(c, "b");
  sc.beta = param(c, "beta");
  sc.m = param(c, "m");
  sc.initial = {param(c, "initial_mean"), param(c, "initial_variance")};
  if (c.dt) sc.dt = *c.dt;
  if (c.t_final) sc.t_final = *c.t_final;
  sc.validate();
  return sc;
}

Grid grid_of(const RunConfig& c) {
  Grid g;
  g.lo = param(c, "grid_lo");
  g.hi = param(c, "grid_hi");
  g.points = static_cast<std::size_t>(param(c, "grid_points"));
  if (!(g.hi > g.lo) || g.points < 3) throw Error("grid: need grid_hi > grid_lo and at least 3 points");
  return g;
}

void run_classical_exact(const RunConfig& c, Output& out) {
  const ClassicalScenario sc = classical(c);
  ClassicalReference ref = classical_reference_run(sc, c.seed);
  ref.record.scenario_hash = config_hash(c);
  out.record("record_real.csv", ref.record);
  const auto grid = classical_grid_run(sc, ref.record, grid_of(c));
  const std::size_t every = stride(sc.dt, 0.01);
  std::string body;
  for (std::size_t k = 0; k < ref.exact.size(); k += every) {
    body += csv_row({static_cast<double>(k) * sc.dt, ref.exact[k].mean, ref.exact[k].variance, grid[k].mean,
                     grid[k].variance});
  }
  out.csv("classical_exact.csv", "t,mean_exact,var_exact,mean_grid,var_grid", body);
}

void run_classical_ostensible(const RunConfig& c, Output& out) {
  const ClassicalScenario sc = classical(c);
  ClassicalReference ref = classical_reference_run(sc, c.seed);
  ref.record.scenario_hash = config_hash(c);
  out.record("record_real.csv", ref.record);
  std::string body;
  for (std::size_t n : sizes(c, {100, 10000})) {
    ClassicalEnsembleConfig cfg;
    cfg.n = n;
    cfg.lambda = c.lambda.value_or(0.0);
    cfg.mu = c.adaptive ? OstensibleDistribution::adapting() : OstensibleDistribution::fixed(c.mu.value_or(0.0));
    cfg.scheme = c.scheme;
    cfg.seed = c.seed;
    cfg.sample_every = stride(sc.dt, 0.05);
    cfg.bootstrap = static_cast<std::size_t>(param(c, "bootstrap"));
    const auto res = run_classical_ensemble(sc, ref.record, cfg);
    for (std::size_t i = 0; i < res.t.size(); ++i) {
      const auto& ex = ref.exact[res.step[i]];
      const auto& est = res.estimate[i];
      const double fid = classical_fidelity(Gaussian{ex.mean, ex.variance}, Gaussian{est.mean, est.variance});
      const double se_m = res.standard_error.empty() ? 0.0 : res.standard_error[i].mean;
      const double se_v = res.standard_error.empty() ? 0.0 : res.standard_error[i].variance;
      body += csv_row({res.t[i], ex.mean, ex.variance, est.mean, est.variance, fid, static_cast<double>(n), se_m,
                       se_v, res.ess[i]});
    }
  }
  out.csv("classical_ostensible.csv", "t,mean_exact,var_exact,mean_ost,var_ost,fidelity,n,se_mean,se_var,ess",
          body);
}

std::vector<std::string> warn_classical(const RunConfig& c) {
  auto w = classical(c).warnings();
  const Grid g = grid_of(c);
  const ClassicalScenario sc = classical(c);
  if (sc.dt * sc.b * sc.b > g.dx() * g.dx()) w.push_back("CFL violated for the grid reference: dt > dx^2/b^2");
  return w;
}

// ---- hybrid atom + detector ------------------------------------------------

HybridScenario hybrid(const RunConfig& c) {
  HybridScenario sc;
  sc.omega = param(c, "omega");
  sc.gamma = param(c, "gamma");
  sc.bandwidth = param(c, "bandwidth");
  sc.beta = param(c, "beta");
  sc.initial_x = {param(c, "initial_mean"), param(c, "initial_variance")};
  if (c.dt) sc.dt = *c.dt;
  if (c.t_final) sc.t_final = *c.t_final;
  sc.validate();
  return sc;
}

void run_hybrid_reference(const RunConfig& c, Output& out) {
  const HybridScenario sc = hybrid(c);
  HybridReference ref = hybrid_reference_run(sc, c.seed, 0, grid_of(c));
  ref.record.scenario_hash = config_hash(c);
  out.record("record_real.csv", ref.record);
  const std::size_t every = stride(sc.dt, 0.01);
  std::string body;
  for (std::size_t k = 0; k < ref.marginals.size(); k += every) {
    const auto& m = ref.marginals[k];
    body += csv_row({static_cast<double>(k) * sc.dt, m.mean, m.variance, m.bloch.x, m.bloch.y, m.bloch.z});
  }
  out.csv("hybrid_reference.csv", "t,mean,variance,x,y,z", body);
}

// Static mu (part A) and adaptive mu (part B) rows are both emitted.
void run_hybrid_ostensible(const RunConfig& c, Output& out) {
  const HybridScenario sc = hybrid(c);
  HybridReference ref = hybrid_reference_run(sc, c.seed, 0, grid_of(c));
  ref.record.scenario_hash = config_hash(c);
  out.record("record_real.csv", ref.record);
  std::string body;
  for (int adaptive = 0; adaptive < 2; ++adaptive) {
    for (std::size_t n : sizes(c, {100, 10000})) {
      for (std::size_t rep = 0; rep < c.replicates; ++rep) {
        HybridEnsembleConfig cfg;
        cfg.n = n;
        cfg.lambda = c.lambda.value_or(0.0);
        cfg.mu = adaptive ? OstensibleDistribution::adapting() : OstensibleDistribution::fixed(c.mu.value_or(0.0));
        cfg.scheme = c.scheme;
        cfg.seed = c.seed;
        cfg.replicate = rep;
        cfg.sample_every = stride(sc.dt, 0.01);
        cfg.bootstrap = static_cast<std::size_t>(param(c, "bootstrap"));
        const auto res = run_hybrid_ensemble(sc, ref.record, cfg);
        for (std::size_t i = 0; i < res.t.size(); ++i) {
          const auto& r = ref.marginals[res.step[i]];
          const auto& e = res.estimate[i];
          const double fq = quantum_fidelity<2>(bloch_compose(r.bloch), bloch_compose(e.bloch));
          const double fc = classical_fidelity(Gaussian{r.mean, r.variance}, Gaussian{e.mean, e.variance});
          const double se = res.mean_se.empty() ? 0.0 : res.mean_se[i];
          body += csv_row({res.t[i], r.mean, r.variance, r.bloch.x, r.bloch.y, r.bloch.z, e.mean, e.variance,
                           e.bloch.x, e.bloch.y, e.bloch.z, fq, fc, static_cast<double>(n),
                           static_cast<double>(adaptive), se, static_cast<double>(rep)});
        }
      }
    }
  }
  out.csv("hybrid_ostensible.csv",
          "t,mean_ref,var_ref,x_ref,y_ref,z_ref,mean_ost,var_ost,x_ost,y_ost,z_ost,quantum_fidelity,"
          "classical_fidelity,n,adaptive,se_mean,replicate",
          body);
}

std::vector<std::string> warn_hybrid(const RunConfig& c) { return hybrid(c).warnings(grid_of(c)); }

// ---- appendix: inefficient detection ---------------------------------------

BGScenario appendix(const RunConfig& c) {
  BGScenario sc;
  sc.gamma = param(c, "gamma");
  sc.eta = param(c, "eta");
  sc.omega = param(c, "omega");
  if (c.dt) sc.dt = *c.dt;
  if (c.t_final) sc.t_final = *c.t_final;
  sc.validate();
  return sc;
}

void run_appendix(const RunConfig& c, Output& out) {
  const BGScenario sc = appendix(c);
  BGRecord rec = sme_eta_run(sc, c.seed, 0, c.scheme);
  rec.record.scenario_hash = config_hash(c);
  out.record("record_real.csv", rec.record);
  Record dw{sc.dt, rec.dw, Channel::real, rec.record.scenario_hash};
  out.record("record_dw.csv", dw);

  BGEnsembleConfig base;
  base.lambda = c.lambda.value_or(0.0);
  base.mu = c.mu.value_or(0.0);
  base.adaptive_lambda = c.adaptive;
  base.scheme = c.scheme;
  base.seed = c.seed;
  base.sample_every = stride(sc.dt, 0.01);

  std::string series, summary;
  for (std::size_t n : sizes(c, {1000, 10000})) {
    double rms_bg = 0.0, rms_ours = 0.0;
    for (std::size_t rep = 0; rep < c.replicates; ++rep) {
      BGEnsembleConfig cfg = base;
      cfg.n = n;
      cfg.replicate = rep;
      const BGSeries s = run_bg_comparison(sc, rec, cfg);
      rms_bg += bloch_rms(s.bg, s.exact);
      rms_ours += bloch_rms(s.ours, s.exact);
      if (rep != 0) continue;
      for (std::size_t i = 0; i < s.t.size(); ++i) {
        series += csv_row({s.t[i], static_cast<double>(n), s.exact[i].x, s.exact[i].y, s.exact[i].z, s.bg[i].x,
                           s.bg[i].y, s.bg[i].z, s.ours[i].x, s.ours[i].y, s.ours[i].z});
      }
    }
    const double reps = static_cast<double>(c.replicates);
    summary += csv_row({static_cast<double>(n), rms_bg / reps, rms_ours / reps, reps});
  }
  out.csv("appendix_series.csv", "t,n,x_exact,y_exact,z_exact,x_bg,y_bg,z_bg,x_ours,y_ours,z_ours", series);
  out.csv("appendix_rms.csv", "n,rms_bg,rms_ours,replicates", summary);
}

std::vector<std::string> warn_appendix(const RunConfig& c) { return appendix(c).warnings(); }

const std::map<std::string, double> kThreeLevel{{"gamma1", 0.5}, {"gamma2", 1.0}};
const std::map<std::string, double> kClassical{
    {"k", 1.0},       {"l", 1.0},           {"b", 1.0},          {"beta", 1.0},        {"m", 0.0},
    {"initial_mean", 0.0}, {"initial_variance", 0.1}, {"grid_lo", -6.0}, {"grid_hi", 6.0},
    {"grid_points", 241.0}, {"bootstrap", 200.0}};
const std::map<std::string, double> kHybrid{
    {"omega", 5.0},   {"gamma", 1.0},   {"bandwidth", 2.0},     {"beta", 0.5},   {"initial_mean", 0.0},
    {"initial_variance", 0.1}, {"grid_lo", -6.0}, {"grid_hi", 6.0}, {"grid_points", 241.0}, {"bootstrap", 0.0}};
const std::map<std::string, double> kAppendix{{"gamma", 1.0}, {"eta", 0.4}, {"omega", 0.0}};

}  // namespace

const std::vector<ScenarioEntry>& registry() {
  static const std::vector<ScenarioEntry> entries{
      {"fig2", kThreeLevel, run_fig2, warn_three_level},
      {"fig4", kThreeLevel, run_fig4, warn_three_level},
      {"fig5-fidelity", kThreeLevel, run_fig5, warn_three_level},
      {"classical-exact", kClassical, run_classical_exact, warn_classical},
      {"classical-ostensible", kClassical, run_classical_ostensible, warn_classical},
      {"hybrid-reference", kHybrid, run_hybrid_reference, warn_hybrid},
      {"hybrid-ostensible", kHybrid, run_hybrid_ostensible, warn_hybrid},
      {"appendix-bg", kAppendix, run_appendix, warn_appendix},
  };
  return entries;
}

}  // namespace trajkit::detail
