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

#include "trajkit/quantum_traj.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "ensemble.hpp"

namespace trajkit {

Ket<3> fig2_initial_amplitudes() { return Ket<3>(0.4123, 0.1, cplx(0.9, 0.1)); }

ThreeLevelScenario ThreeLevelScenario::fig2() {
  ThreeLevelScenario sc;
  sc.initial = PureState<3>::from_amplitudes(fig2_initial_amplitudes(), true);
  return sc;
}

std::size_t ThreeLevelScenario::steps() const {
  return static_cast<std::size_t>(std::llround(t_final / dt));
}

void ThreeLevelScenario::validate() const {
  if (!(gamma1 >= 0.0) || !(gamma2 >= 0.0)) throw Error("three-level scenario: rates must be non-negative");
  if (!(dt > 0.0)) throw Error("three-level scenario: dt must be positive");
  if (!(t_final > 0.0)) throw Error("three-level scenario: t_final must be positive");
  if (!initial.amplitudes.allFinite() || !(initial.norm_squared() > 0.0)) {
    throw Error("three-level scenario: invalid initial state");
  }
}

std::vector<std::string> ThreeLevelScenario::warnings() const {
  std::vector<std::string> w;
  if (dt * (gamma1 + gamma2) > 0.01) {
    w.push_back("dt*(gamma1+gamma2) = " + format_double(dt * (gamma1 + gamma2)) + " exceeds 0.01");
  }
  if (std::abs(initial.norm_squared() - 1.0) > 1e-10) w.push_back("initial state is not normalized");
  return w;
}

namespace three_level {

Mat<3> L1() {
  Mat<3> m = Mat<3>::Zero();
  m(0, 2) = 1.0;
  return m;
}

Mat<3> L2() {
  Mat<3> m = Mat<3>::Zero();
  m(1, 2) = 1.0;
  return m;
}

Mat<3> x1() {
  const Mat<3> l = L1();
  return l + l.adjoint();
}

}  // namespace three_level

namespace {

Mat<3> decay_generator(const ThreeLevelScenario& sc) {
  const Mat<3> l1 = three_level::L1(), l2 = three_level::L2();
  return sc.gamma1 * l1.adjoint() * l1 + sc.gamma2 * l2.adjoint() * l2;
}

}  // namespace

Mat<3> me_step(const Mat<3>& rho, double dt, const ThreeLevelScenario& sc) {
  return rho + dt * (sc.gamma1 * lindblad_dissipator<3>(three_level::L1(), rho) +
                     sc.gamma2 * lindblad_dissipator<3>(three_level::L2(), rho));
}

std::vector<Mat<3>> me_solve(const ThreeLevelScenario& sc) {
  sc.validate();
  const std::size_t n = sc.steps();
  std::vector<Mat<3>> out;
  out.reserve(n + 1);
  out.push_back(dm_from_pure(sc.initial).elements);
  const double tr0 = out.front().trace().real();
  for (std::size_t k = 0; k < n; ++k) {
    out.push_back(me_step(out.back(), sc.dt, sc));
    if (std::abs(out.back().trace().real() - tr0) > 1e-6) {
      throw Error("me_solve: trace drift above 1e-6, dt too large");
    }
  }
  return out;
}

Mat<3> homodyne_operator(double r, double f, double dt, const ThreeLevelScenario& sc) {
  return Mat<3>::Identity() + std::sqrt(sc.gamma1) * r * dt * three_level::L1() +
         std::sqrt(sc.gamma2) * f * dt * three_level::L2() - 0.5 * dt * decay_generator(sc);
}

Ket<3> kraus_homodyne_step(const Ket<3>& psi, double r, double f, double dt,
                           const ThreeLevelScenario& sc) {
  return homodyne_operator(r, f, dt, sc) * psi;
}

Mat<3> sme_condition(const Mat<3>& rho, double r, double dt, const ThreeLevelScenario& sc,
                     Scheme scheme) {
  const Mat<3> l1 = three_level::L1(), l2 = three_level::L2();
  Mat<3> next;
  if (scheme == Scheme::ito) {
    const double dw = r * dt - dt * std::sqrt(sc.gamma1) * expectation<3>(three_level::x1(), rho);
    next = me_step(rho, dt, sc) + dw * std::sqrt(sc.gamma1) * h_superop<3>(l1, rho);
  } else {
    // Operation-sum form with the unobserved channel integrated over its
    // Gaussian outcome law.
    const Mat<3> m = homodyne_operator(r, 0.0, dt, sc);
    next = m * rho * m.adjoint() + sc.gamma2 * dt * l2 * rho * l2.adjoint();
  }
  next = hermitian_part<3>(next);
  const double tr = next.trace().real();
  if (!(tr > 0.0) || !next.allFinite()) throw Error("sme_step: degenerate conditional state");
  next /= tr;
  if (scheme == Scheme::ito && min_eigenvalue<3>(next) < -1e-4) {
    throw Error("sme_step: positivity violated (min eigenvalue " + format_double(min_eigenvalue<3>(next)) +
                "), dt too large");
  }
  return next;
}

SmeStep sme_step(const Mat<3>& rho, double dt, const ThreeLevelScenario& sc, NoiseStream& stream,
                 Scheme scheme) {
  const double mean = std::sqrt(sc.gamma1) * expectation<3>(three_level::x1(), rho);
  const double r = sample_real_record_quantum(mean, dt, stream);
  return {sme_condition(rho, r, dt, sc, scheme), r};
}

SmeRun sme_run(const ThreeLevelScenario& sc, std::uint64_t seed, std::uint64_t record_index,
               Scheme scheme) {
  sc.validate();
  const std::size_t n = sc.steps();
  SmeRun run;
  run.record.dt = sc.dt;
  run.record.channel = Channel::real;
  run.record.values.reserve(n);
  run.rho.reserve(n + 1);
  run.rho.push_back(dm_from_pure(sc.initial).elements);
  NoiseStream stream(seed, streams::kRecord + record_index);
  for (std::size_t k = 0; k < n; ++k) {
    auto step = sme_step(run.rho.back(), sc.dt, sc, stream, scheme);
    run.record.values.push_back(step.r);
    run.rho.push_back(step.rho);
  }
  return run;
}

double adaptive_mu(const Ket<3>& psi, const ThreeLevelScenario& sc) {
  const double n2 = psi.squaredNorm();
  if (!(n2 > 0.0)) throw Error("adaptive_mu: zero-norm state");
  const Mat<3> l2 = three_level::L2();
  return std::sqrt(sc.gamma2) * expectation<3>(Mat<3>(l2 + l2.adjoint()), psi) / n2;
}

OstensibleState OstensibleState::from_ket(const Ket<3>& psi) {
  const double n2 = psi.squaredNorm();
  if (!(n2 > 0.0) || !std::isfinite(n2)) throw Error("ostensible state: zero or non-finite norm");
  return {psi / std::sqrt(n2), LogWeight{std::log(n2)}};
}

Ket<3> OstensibleState::ket() const { return direction * std::exp(0.5 * weight.log_p); }

OstensibleState ossse_step(const OstensibleState& s, double r, double f, double dt,
                           const ThreeLevelScenario& sc, const OssseParams& p) {
  const double lam = p.lambda, mu = p.mu;
  Ket<3> next;
  double log_scale = 0.0;
  if (p.scheme == Scheme::ito) {
    const Mat<3> l1 = three_level::L1(), l2 = three_level::L2();
    const double g1 = std::sqrt(sc.gamma1), g2 = std::sqrt(sc.gamma2);
    const Mat<3> id = Mat<3>::Identity();
    const Mat<3> gen = (r - lam) * (g1 * l1 - 0.5 * lam * id) + (f - mu) * (g2 * l2 - 0.5 * mu * id) -
                       0.5 * (decay_generator(sc) - g1 * lam * l1 - g2 * mu * l2 +
                              0.25 * (lam * lam + mu * mu) * id);
    next = s.direction + dt * (gen * s.direction);
  } else {
    next = kraus_homodyne_step(s.direction, r, f, dt, sc);
    // Square of exp(-(r lam + f mu) dt / 2 + (lam^2 + mu^2) dt / 4).
    log_scale = -(r * lam + f * mu) * dt + 0.5 * (lam * lam + mu * mu) * dt;
  }
  const double n2 = next.squaredNorm();
  if (!std::isfinite(n2)) throw Error("ossse_step: non-finite amplitudes");
  if (!(n2 > 0.0)) throw Error("ossse_step: trajectory norm vanished");
  OstensibleState out;
  out.direction = next / std::sqrt(n2);
  out.weight.log_p = s.weight.log_p + std::log(n2) + log_scale;
  return out;
}

Ket<3> ossse_components_step(const Ket<3>& c, double r, double f, double dt,
                             const ThreeLevelScenario& sc, double lambda, double mu) {
  const double g1 = std::sqrt(sc.gamma1), g2 = std::sqrt(sc.gamma2);
  const double s = -0.5 * (r - lambda) * lambda * dt - 0.5 * (f - mu) * mu * dt -
                   0.125 * (lambda * lambda + mu * mu) * dt;
  Ket<3> d;
  d(0) = dt * (g1 * (r - lambda) + 0.5 * g1 * lambda) * c(2) + s * c(0);
  d(1) = dt * (g2 * (f - mu) + 0.5 * g2 * mu) * c(2) + s * c(1);
  d(2) = s * c(2) - 0.5 * dt * (sc.gamma1 + sc.gamma2) * c(2);
  return c + d;
}

Mat<3> estimate_rho_R(const std::vector<OstensibleState>& ensemble) {
  if (ensemble.empty()) throw Error("estimate_rho_R: empty ensemble");
  std::vector<double> lw(ensemble.size());
  for (std::size_t i = 0; i < ensemble.size(); ++i) lw[i] = ensemble[i].weight.log_p;
  const auto w = relative_weights(lw);
  Mat<3> acc = Mat<3>::Zero();
  double total = 0.0;
  for (std::size_t i = 0; i < ensemble.size(); ++i) {
    const Ket<3>& u = ensemble[i].direction;
    acc += w[i] * (u * u.adjoint());
    total += w[i] * u.squaredNorm();
  }
  if (!(total > 0.0)) throw Error("estimate_rho_R: all weights vanish");
  return hermitian_part<3>(Mat<3>(acc / total));
}

QuantumEnsembleResult run_quantum_ensemble(const ThreeLevelScenario& sc, const Record& record,
                                           const std::vector<Mat<3>>& reference,
                                           const QuantumEnsembleConfig& cfg) {
  sc.validate();
  cfg.mu.validate();
  if (cfg.n == 0) throw Error("quantum ensemble: n must be at least 1");
  if (record.dt != sc.dt) throw Error("quantum ensemble: record dt does not match scenario dt");
  const std::size_t steps = record.size();
  if (!reference.empty() && reference.size() != steps + 1) {
    throw Error("quantum ensemble: reference length does not match record");
  }
  const std::size_t every = std::max<std::size_t>(cfg.sample_every, 1);

  std::vector<OstensibleState> ens(cfg.n, OstensibleState::from_ket(sc.initial.amplitudes));
  for (auto& e : ens) e.weight.log_p = 0.0;
  std::vector<NoiseStream> noise = make_streams(cfg.seed, streams::kFictitious, cfg.replicate, cfg.n);

  QuantumEnsembleResult res;
  auto sample = [&](std::size_t k) {
    res.t.push_back(static_cast<double>(k) * sc.dt);
    res.estimate.push_back(estimate_rho_R(ens));
    if (!reference.empty()) res.fidelity.push_back(quantum_fidelity<3>(reference[k], res.estimate.back()));
  };
  sample(0);
  for (std::size_t k = 0; k < steps; ++k) {
    const double r = record.values[k];
    parallel_for(cfg.n, [&](std::size_t i) {
      OssseParams p{cfg.lambda, 0.0, cfg.scheme};
      p.mu = resolve_mean(cfg.mu, [&] { return adaptive_mu(ens[i].direction, sc); });
      const double f = sample_fictitious(cfg.mu, p.mu, sc.dt, noise[i]);
      ens[i] = ossse_step(ens[i], r, f, sc.dt, sc, p);
    });
    if ((k + 1) % every == 0 || k + 1 == steps) sample(k + 1);
  }
  std::vector<double> lw(cfg.n);
  for (std::size_t i = 0; i < cfg.n; ++i) lw[i] = ens[i].weight.log_p;
  res.final_ess = effective_sample_size(lw);
  return res;
}

TwoStepOracleReport two_step_oracle(const ThreeLevelScenario& sc, double dt) {
  const double a = 1.0 / std::sqrt(dt);
  const std::array<double, 2> pts{a, -a};
  constexpr double kLam = 0.5;  // ostensible probability of each outcome
  const Ket<3> psi0 = sc.initial.amplitudes;
  const Mat<3> rho0 = psi0 * psi0.adjoint();
  // True discrete operation for outcome (r, f); the outcome laws at
  // lambda = mu = 0 are the ostensible ones, so the operator carries 1/2.
  auto op = [&](double r, double f) -> Mat<3> { return 0.5 * homodyne_operator(r, f, dt, sc); };

  TwoStepOracleReport rep;
  const OssseParams p{0.0, 0.0, Scheme::ito};
  for (double r1 : pts) {
    for (double r2 : pts) {
      // Direct mixed-state update: sum over the unobserved outcomes.
      Mat<3> rho1 = Mat<3>::Zero();
      for (double f1 : pts) rho1 += op(r1, f1) * rho0 * op(r1, f1).adjoint();
      Mat<3> rho2 = Mat<3>::Zero();
      for (double f2 : pts) rho2 += op(r2, f2) * rho1 * op(r2, f2).adjoint();
      const double prob_r = rho2.trace().real();
      const Mat<3> rho_direct = rho2 / prob_r;

      // Ostensible decomposition over all fictitious paths.
      double norm_sum = 0.0;
      Mat<3> ost = Mat<3>::Zero();
      // BG-style decomposition: normalized states, fictitious outcomes drawn
      // from their causal conditional law.
      Mat<3> bg = Mat<3>::Zero();
      const OstensibleState s0 = OstensibleState::from_ket(psi0);
      double p_f1_norm = 0.0;
      for (double f1 : pts) p_f1_norm += (op(r1, f1) * psi0).squaredNorm();
      for (double f1 : pts) {
        const OstensibleState s1 = ossse_step(s0, r1, f1, dt, sc, p);
        const Ket<3> psi1 = op(r1, f1) * psi0;
        const double p_f1 = psi1.squaredNorm() / p_f1_norm;
        double p_f2_norm = 0.0;
        for (double f2 : pts) p_f2_norm += (op(r2, f2) * psi1).squaredNorm();
        for (double f2 : pts) {
          const OstensibleState s2 = ossse_step(s1, r2, f2, dt, sc, p);
          const double lam = kLam * kLam * kLam * kLam;
          const Ket<3> k = s2.ket();
          norm_sum += k.squaredNorm() * lam;
          ost += k * k.adjoint() * lam;
          const Ket<3> psi2 = op(r2, f2) * psi1;
          const double p_f2 = psi2.squaredNorm() / p_f2_norm;
          const Ket<3> u = psi2.normalized();
          bg += p_f1 * p_f2 * (u * u.adjoint());
        }
      }
      rep.norm_identity_error = std::max(rep.norm_identity_error, std::abs(norm_sum - prob_r));
      rep.state_error = std::max(rep.state_error, (ost / prob_r - rho_direct).cwiseAbs().maxCoeff());
      rep.bg_discrepancy = std::max(rep.bg_discrepancy, (bg - rho_direct).cwiseAbs().maxCoeff());
    }
  }
  return rep;
}

}  // namespace trajkit
