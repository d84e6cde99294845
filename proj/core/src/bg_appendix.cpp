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

#include "trajkit/bg_appendix.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "ensemble.hpp"

namespace trajkit {

std::size_t BGScenario::steps() const { return static_cast<std::size_t>(std::llround(t_final / dt)); }

void BGScenario::validate() const {
  if (!(eta > 0.0) || eta > 1.0) throw Error("bg scenario: eta must lie in (0, 1]");
  if (!(gamma > 0.0) || !(omega >= 0.0)) throw Error("bg scenario: gamma must be positive, omega non-negative");
  if (!(dt > 0.0) || !(t_final > 0.0)) throw Error("bg scenario: dt and t_final must be positive");
  if (!(initial.squaredNorm() > 0.0)) throw Error("bg scenario: zero initial state");
}

std::vector<std::string> BGScenario::warnings() const {
  std::vector<std::string> w;
  if (dt * std::max(gamma, omega) > 0.01) w.push_back("dt is large against gamma or omega");
  return w;
}

namespace {

Mat<2> lowering(const BGScenario& sc) { return std::sqrt(sc.gamma) * tla::sigma_minus(); }

Mat<2> hamiltonian(const BGScenario& sc) { return 0.5 * sc.omega * tla::sigma_x(); }

Mat<2> liouvillian(const Mat<2>& rho, const BGScenario& sc) {
  return commutator_term<2>(hamiltonian(sc), rho) + lindblad_dissipator<2>(lowering(sc), rho);
}

// 1 - i H dt + sqrt(eta) r dt A + sqrt(1 - eta) f dt A - dt A^+A / 2 with A = sqrt(gamma) sigma.
Mat<2> step_operator(double r, double f, const BGScenario& sc) {
  const Mat<2> a = lowering(sc);
  return Mat<2>::Identity() - cplx(0.0, sc.dt) * hamiltonian(sc) + std::sqrt(sc.eta) * r * sc.dt * a +
         std::sqrt(1.0 - sc.eta) * f * sc.dt * a - 0.5 * sc.dt * a.adjoint() * a;
}

double sx_mean(const Mat<2>& rho) { return expectation<2>(tla::sigma_x(), rho) / rho.trace().real(); }

Mat<2> normalized(const Mat<2>& m, const char* who) {
  const Mat<2> h = hermitian_part<2>(m);
  const double tr = h.trace().real();
  if (!(tr > 0.0) || !h.allFinite()) throw Error(std::string(who) + ": degenerate state");
  return h / tr;
}

}  // namespace

Mat<2> h_bar(const Mat<2>& a, const Mat<2>& rho, double chi) { return a * rho + rho * a.adjoint() - chi * rho; }

BGStep sme_eta_step(const Mat<2>& rho, double dw, const BGScenario& sc, Scheme scheme) {
  const double r = dw / sc.dt + std::sqrt(sc.eta * sc.gamma) * sx_mean(rho);
  Mat<2> next;
  if (scheme == Scheme::ito) {
    next = rho + sc.dt * liouvillian(rho, sc) + std::sqrt(sc.eta) * h_superop<2>(lowering(sc), rho) * dw;
  } else {
    // Lost fraction of the signal integrated over its Gaussian outcome law.
    const Mat<2> m = step_operator(r, 0.0, sc);
    const Mat<2> a = lowering(sc);
    next = m * rho * m.adjoint() + (1.0 - sc.eta) * sc.dt * a * rho * a.adjoint();
  }
  return {normalized(next, "sme_eta_step"), r};
}

BGRecord sme_eta_run(const BGScenario& sc, std::uint64_t seed, std::uint64_t record_index, Scheme scheme) {
  sc.validate();
  const std::size_t n = sc.steps();
  BGRecord rec;
  rec.record.dt = sc.dt;
  rec.record.values.reserve(n);
  rec.dw.reserve(n);
  rec.exact.reserve(n + 1);
  const Ket<2> psi = sc.initial.normalized();
  rec.exact.push_back(psi * psi.adjoint());
  NoiseStream stream(seed, streams::kRecord + record_index);
  for (std::size_t k = 0; k < n; ++k) {
    const double dw = wiener_increment(stream, sc.dt);
    const BGStep s = sme_eta_step(rec.exact.back(), dw, sc, scheme);
    rec.dw.push_back(dw);
    rec.record.values.push_back(s.r);
    rec.exact.push_back(s.rho);
  }
  return rec;
}

Mat<2> bg_step(const Mat<2>& rho, double dw, double dcal_w, const BGScenario& sc, Scheme scheme) {
  Mat<2> next;
  if (scheme == Scheme::ito) {
    const Mat<2> h = h_superop<2>(lowering(sc), rho);
    next = rho + sc.dt * liouvillian(rho, sc) + std::sqrt(sc.eta) * h * dw + std::sqrt(1.0 - sc.eta) * h * dcal_w;
  } else {
    // Both channels carry the mean signal of this trajectory's own state.
    const double sx = sx_mean(rho);
    const double r = dw / sc.dt + std::sqrt(sc.eta * sc.gamma) * sx;
    const double f = dcal_w / sc.dt + std::sqrt((1.0 - sc.eta) * sc.gamma) * sx;
    const Mat<2> k = step_operator(r, f, sc);
    next = k * rho * k.adjoint();
  }
  return normalized(next, "bg_step");
}

LinearState ours_linear_step(const LinearState& s, double r, double f, double lambda, double mu,
                             const BGScenario& sc, Scheme scheme) {
  Mat<2> next;
  double log_scale = 0.0;
  if (scheme == Scheme::ito) {
    const Mat<2> a = lowering(sc);
    next = s.rho + sc.dt * liouvillian(s.rho, sc) +
           std::sqrt(sc.eta) * h_bar(a, s.rho, lambda) * (r - lambda) * sc.dt +
           std::sqrt(1.0 - sc.eta) * h_bar(a, s.rho, mu) * (f - mu) * sc.dt;
  } else {
    const Mat<2> k = step_operator(r, f, sc);
    next = k * s.rho * k.adjoint();
    log_scale = -(r * lambda + f * mu) * sc.dt + 0.5 * (lambda * lambda + mu * mu) * sc.dt;
  }
  next = hermitian_part<2>(next);
  const double tr = next.trace().real();
  if (!std::isfinite(tr) || !next.allFinite()) throw Error("ours_linear_step: non-finite state");
  if (!(tr > 0.0)) throw Error("ours_linear_step: trace vanished");
  return {next / tr, LogWeight{s.weight.log_p + std::log(tr) + log_scale}};
}

BGSeries run_bg_comparison(const BGScenario& sc, const BGRecord& rec, const BGEnsembleConfig& cfg) {
  sc.validate();
  if (cfg.n == 0) throw Error("bg comparison: n must be at least 1");
  const std::size_t steps = rec.dw.size();
  if (rec.exact.size() != steps + 1 || rec.record.size() != steps) throw Error("bg comparison: malformed record");
  const std::size_t every = std::max<std::size_t>(cfg.sample_every, 1);

  const Ket<2> psi = sc.initial.normalized();
  const Mat<2> rho0 = psi * psi.adjoint();
  std::vector<Mat<2>> bg(cfg.n, rho0);
  std::vector<LinearState> ours(cfg.n, LinearState{rho0, LogWeight{}});
  auto noise_bg = make_streams(cfg.seed, streams::kFictitious, 2 * cfg.replicate, cfg.n);
  auto noise_ours = make_streams(cfg.seed, streams::kFictitious, 2 * cfg.replicate + 1, cfg.n);

  BGSeries out;
  auto sample = [&](std::size_t k) {
    out.t.push_back(static_cast<double>(k) * sc.dt);
    out.exact.push_back(bloch_decompose(rec.exact[k]));
    Mat<2> acc = Mat<2>::Zero();
    for (const auto& m : bg) acc += m;
    out.bg.push_back(bloch_decompose(acc / static_cast<double>(cfg.n)));
    std::vector<double> lw(cfg.n);
    for (std::size_t i = 0; i < cfg.n; ++i) lw[i] = ours[i].weight.log_p;
    const auto w = relative_weights(lw);
    Mat<2> acc2 = Mat<2>::Zero();
    double total = 0.0;
    for (std::size_t i = 0; i < cfg.n; ++i) {
      acc2 += w[i] * ours[i].rho;
      total += w[i];
    }
    out.ours.push_back(bloch_decompose(acc2 / total));
  };
  sample(0);
  const double sq = std::sqrt(sc.dt);
  for (std::size_t k = 0; k < steps; ++k) {
    const double dw = rec.dw[k];
    const double r = rec.record.values[k];
    parallel_for(cfg.n, [&](std::size_t i) {
      bg[i] = bg_step(bg[i], dw, sq * noise_bg[i].normal(), sc, cfg.scheme);
      const double lam =
          cfg.adaptive_lambda ? std::sqrt(sc.eta * sc.gamma) * sx_mean(ours[i].rho) : cfg.lambda;
      const double f = sq * noise_ours[i].normal() / sc.dt + cfg.mu;
      ours[i] = ours_linear_step(ours[i], r, f, lam, cfg.mu, sc, cfg.scheme);
    });
    if ((k + 1) % every == 0 || k + 1 == steps) sample(k + 1);
  }
  return out;
}

double bloch_rms(const std::vector<BlochVector>& est, const std::vector<BlochVector>& exact) {
  if (est.size() != exact.size() || est.empty()) throw Error("bloch_rms: series length mismatch");
  double acc = 0.0;
  for (std::size_t i = 0; i < est.size(); ++i) {
    const double dx = est[i].x - exact[i].x, dy = est[i].y - exact[i].y, dz = est[i].z - exact[i].z;
    acc += dx * dx + dy * dy + dz * dz;
  }
  return std::sqrt(acc / (3.0 * static_cast<double>(est.size())));
}

std::vector<ErrorVsEnsembleRow> error_vs_ensemble(const BGScenario& sc, const BGRecord& rec,
                                                  const std::vector<std::size_t>& n_list, std::size_t replicates,
                                                  const BGEnsembleConfig& base) {
  if (replicates == 0) throw Error("error_vs_ensemble: need at least one replicate");
  std::vector<ErrorVsEnsembleRow> rows;
  for (std::size_t n : n_list) {
    ErrorVsEnsembleRow row;
    row.n = n;
    for (std::size_t rep = 0; rep < replicates; ++rep) {
      BGEnsembleConfig cfg = base;
      cfg.n = n;
      cfg.replicate = base.replicate + rep;
      const BGSeries s = run_bg_comparison(sc, rec, cfg);
      row.rms_bg += bloch_rms(s.bg, s.exact);
      row.rms_ours += bloch_rms(s.ours, s.exact);
    }
    row.rms_bg /= static_cast<double>(replicates);
    row.rms_ours /= static_cast<double>(replicates);
    rows.push_back(row);
  }
  return rows;
}

BGOracleReport bg_two_step_oracle(const BGScenario& sc) {
  const double a = 1.0 / std::sqrt(sc.dt);
  const std::array<double, 2> pts{a, -a};
  const Ket<2> psi = sc.initial.normalized();
  const Mat<2> rho0 = psi * psi.adjoint();
  BGOracleReport rep;
  for (double r1 : pts) {
    for (double r2 : pts) {
      // Exact conditional state, via the exact step on the recorded results.
      const double dw1 = r1 * sc.dt - std::sqrt(sc.eta * sc.gamma) * sx_mean(rho0) * sc.dt;
      const Mat<2> e1 = sme_eta_step(rho0, dw1, sc).rho;
      const double dw2 = r2 * sc.dt - std::sqrt(sc.eta * sc.gamma) * sx_mean(e1) * sc.dt;
      const Mat<2> e2 = sme_eta_step(e1, dw2, sc).rho;

      Mat<2> ours = Mat<2>::Zero(), bg = Mat<2>::Zero();
      for (double f1 : pts) {
        const LinearState s1 = ours_linear_step({rho0, {}}, r1, f1, 0.0, 0.0, sc);
        const Mat<2> b1 = bg_step(rho0, dw1, f1 * sc.dt, sc);
        for (double f2 : pts) {
          const LinearState s2 = ours_linear_step(s1, r2, f2, 0.0, 0.0, sc);
          ours += 0.25 * std::exp(s2.weight.log_p) * s2.rho;
          bg += 0.25 * bg_step(b1, dw2, f2 * sc.dt, sc);
        }
      }
      ours /= ours.trace().real();
      rep.ours_error = std::max(rep.ours_error, (ours - e2).cwiseAbs().maxCoeff());
      rep.bg_discrepancy = std::max(rep.bg_discrepancy, (bg - e2).cwiseAbs().maxCoeff());
    }
  }
  return rep;
}

}  // namespace trajkit
