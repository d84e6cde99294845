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

#include "trajkit/hybrid_skse.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <map>

#include <unsupported/Eigen/MatrixFunctions>

#include "ensemble.hpp"

namespace trajkit {

std::size_t HybridScenario::steps() const { return static_cast<std::size_t>(std::llround(t_final / dt)); }

void HybridScenario::validate() const {
  if (!(omega >= 0.0) || !(gamma > 0.0) || !(bandwidth > 0.0) || !(beta > 0.0)) {
    throw Error("hybrid scenario: rates, bandwidth and beta must be positive");
  }
  if (!(dt > 0.0) || !(t_final > 0.0)) throw Error("hybrid scenario: dt and t_final must be positive");
  if (!(initial_x.variance > 0.0)) throw Error("hybrid scenario: initial variance must be positive");
  if (!(initial_atom.squaredNorm() > 0.0)) throw Error("hybrid scenario: zero initial atomic state");
}

std::vector<std::string> HybridScenario::warnings(const Grid& grid) const {
  std::vector<std::string> w;
  const double dx = grid.dx();
  if (dt * bandwidth * bandwidth > dx * dx) w.push_back("CFL violated: dt > dx^2/B^2");
  if (dt * std::max({omega, gamma, bandwidth}) > 0.01) w.push_back("dt is large against the fastest rate");
  // Stationary detector variance is about B/2; keep 5 sigma inside the grid.
  if (5.0 * std::sqrt(0.5 * bandwidth) > std::min(-grid.lo, grid.hi)) {
    w.push_back("grid may be too narrow for the detector distribution");
  }
  return w;
}

Mat<2> HybridScenario::hamiltonian() const { return 0.5 * omega * tla::sigma_x(); }

namespace {

// Bloch components of S = sigma rho + rho sigma^+ for rho = (P, X, Y, Z).
struct Coupled {
  double p, x, y, z;
};
inline Coupled coupling_source(double P, double X, double, double Z) { return {X, P + Z, 0.0, -X}; }

// exp(dt A) for the local Rabi and decay generator acting on (P, X, Y, Z).
Eigen::Matrix4d local_propagator(const HybridScenario& sc, double dt) {
  Eigen::Matrix4d a = Eigen::Matrix4d::Zero();
  a(1, 1) = -0.5 * sc.gamma;
  a(2, 2) = -0.5 * sc.gamma;
  a(2, 3) = -sc.omega;
  a(3, 0) = -sc.gamma;
  a(3, 3) = -sc.gamma;
  a(3, 2) = sc.omega;
  return (dt * a).exp();
}

}  // namespace

HybridGridState hybrid_initial_grid(const HybridScenario& sc, const Grid& grid) {
  const auto p = grid_density(sc.initial_x, grid);
  const Ket<2> a = sc.initial_atom.normalized();
  const BlochVector b = bloch_decompose(a * a.adjoint());
  HybridGridState s;
  s.P = p;
  s.X.resize(p.size());
  s.Y.resize(p.size());
  s.Z.resize(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) {
    s.X[i] = b.x * p[i];
    s.Y[i] = b.y * p[i];
    s.Z[i] = b.z * p[i];
  }
  return s;
}

HybridGridState skse_rhs(const HybridGridState& s, const HybridScenario& sc, const Grid& grid,
                         const SkseTerms& terms) {
  const std::size_t n = s.size();
  const double dx = grid.dx();
  const double bw = sc.bandwidth, sg = std::sqrt(sc.gamma);
  const double diff = 0.5 * bw * bw;
  std::array<const std::vector<double>*, 4> comp{&s.P, &s.X, &s.Y, &s.Z};

  HybridGridState out;
  out.P.assign(n, 0.0);
  out.X.assign(n, 0.0);
  out.Y.assign(n, 0.0);
  out.Z.assign(n, 0.0);
  std::array<std::vector<double>*, 4> dst{&out.P, &out.X, &out.Y, &out.Z};

  // Face fluxes J = -B x C + sqrt(gamma) B S(C) - (B^2/2) dC/dx, zero at ends.
  std::array<double, 4> flux_lo{0.0, 0.0, 0.0, 0.0};
  for (std::size_t i = 0; i < n; ++i) {
    std::array<double, 4> flux_hi{0.0, 0.0, 0.0, 0.0};
    if (i + 1 < n) {
      const double xf = 0.5 * (grid.x(i) + grid.x(i + 1));
      std::array<double, 4> avg;
      for (int c = 0; c < 4; ++c) avg[c] = 0.5 * ((*comp[c])[i] + (*comp[c])[i + 1]);
      const Coupled src = coupling_source(avg[0], avg[1], avg[2], avg[3]);
      const std::array<double, 4> sv{src.p, src.x, src.y, src.z};
      for (int c = 0; c < 4; ++c) {
        double j = 0.0;
        if (terms.drift) j += -bw * xf * avg[c];
        if (terms.coupling) j += sg * bw * sv[c];
        if (terms.diffusion) j -= diff * ((*comp[c])[i + 1] - (*comp[c])[i]) / dx;
        flux_hi[c] = j;
      }
    }
    for (int c = 0; c < 4; ++c) (*dst[c])[i] = -(flux_hi[c] - flux_lo[c]) / dx;
    flux_lo = flux_hi;
    if (terms.quantum) {
      out.X[i] += -0.5 * sc.gamma * s.X[i];
      out.Y[i] += -0.5 * sc.gamma * s.Y[i] - sc.omega * s.Z[i];
      out.Z[i] += -sc.gamma * (s.P[i] + s.Z[i]) + sc.omega * s.Y[i];
    }
  }
  return out;
}

std::vector<Mat<2>> to_matrices(const HybridGridState& s) {
  std::vector<Mat<2>> out(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) out[i] = bloch_compose({s.X[i], s.Y[i], s.Z[i], s.P[i]});
  return out;
}

HybridGridState from_matrices(const std::vector<Mat<2>>& rho) {
  HybridGridState s;
  for (const auto& m : rho) {
    const BlochVector b = bloch_decompose(m);
    s.P.push_back(b.norm_weight);
    s.X.push_back(b.x);
    s.Y.push_back(b.y);
    s.Z.push_back(b.z);
  }
  return s;
}

std::vector<Mat<2>> skse_operator_rhs(const std::vector<Mat<2>>& rho, const HybridScenario& sc, const Grid& grid,
                                      const SkseTerms& terms) {
  const std::size_t n = rho.size();
  const double dx = grid.dx();
  const double bw = sc.bandwidth;
  const Mat<2> sig = std::sqrt(sc.gamma) * tla::sigma_minus();
  const Mat<2> h = sc.hamiltonian();
  std::vector<Mat<2>> flux(n + 1, Mat<2>::Zero());
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const double xf = 0.5 * (grid.x(i) + grid.x(i + 1));
    const Mat<2> avg = 0.5 * (rho[i] + rho[i + 1]);
    Mat<2> j = Mat<2>::Zero();
    if (terms.drift) j += -bw * xf * avg;
    if (terms.coupling) j += bw * (sig * avg + avg * sig.adjoint());
    if (terms.diffusion) j -= 0.5 * bw * bw * (rho[i + 1] - rho[i]) / dx;
    flux[i + 1] = j;
  }
  std::vector<Mat<2>> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    out[i] = -(flux[i + 1] - flux[i]) / dx;
    if (terms.quantum) {
      out[i] += commutator_term<2>(h, rho[i]) + lindblad_dissipator<2>(sig, rho[i]);
    }
  }
  return out;
}

HybridEstimate grid_marginals(const HybridGridState& s, const Grid& grid) {
  double p = 0.0, x = 0.0, y = 0.0, z = 0.0, m1 = 0.0, m2 = 0.0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    const double xi = grid.x(i);
    p += s.P[i];
    x += s.X[i];
    y += s.Y[i];
    z += s.Z[i];
    m1 += xi * s.P[i];
    m2 += xi * xi * s.P[i];
  }
  if (!(p > 0.0)) throw Error("grid_marginals: zero mass");
  HybridEstimate e;
  e.bloch = {x / p, y / p, z / p, 1.0};
  e.mean = m1 / p;
  e.variance = m2 / p - e.mean * e.mean;
  return e;
}

double physicality_violation(const HybridGridState& s, double rel_tol) {
  double worst = 0.0, pmax = 0.0;
  for (double v : s.P) pmax = std::max(pmax, std::abs(v));
  // Absolute floor for the far tails, where P itself is at rounding level.
  const double floor = 1e-12 * pmax * pmax;
  for (std::size_t i = 0; i < s.size(); ++i) {
    const double len2 = s.X[i] * s.X[i] + s.Y[i] * s.Y[i] + s.Z[i] * s.Z[i];
    worst = std::max(worst, len2 - s.P[i] * s.P[i] * (1.0 + rel_tol) - floor);
  }
  return std::max(worst, 0.0);
}

double boundary_mass(const HybridGridState& s, const Grid& grid) {
  const std::size_t n = s.size();
  if (n < 4) return 1.0;
  return (s.P[0] + s.P[1] + s.P[n - 2] + s.P[n - 1]) * grid.dx();
}

void skse_grid_step(HybridGridState& s, double r, double dt, const HybridScenario& sc, const Grid& grid,
                    const SkseTerms& terms) {
  const std::size_t n = grid.points;
  if (s.size() != n) throw Error("skse_grid_step: state size does not match grid");
  const double dx = grid.dx();
  if (dt * sc.bandwidth * sc.bandwidth > dx * dx) throw Error("skse_grid_step: CFL violated (dt > dx^2/B^2)");

  const HybridEstimate before = grid_marginals(s, grid);
  // The local quantum part is advanced by its exact propagator; an Euler
  // Rabi step pushes pure states outside the Bloch ball by O(dt^2).
  SkseTerms transport = terms;
  transport.quantum = false;
  const HybridGridState rhs = skse_rhs(s, sc, grid, transport);
  const Eigen::Matrix4d prop = terms.quantum ? local_propagator(sc, dt) : Eigen::Matrix4d::Identity();
  double mass = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double factor = 1.0;
    double add = 0.0;
    if (terms.innovation) {
      const double x = grid.x(i);
      if (terms.innovation_form == Innovation::linear) {
        add = dt * (x - before.mean) * (r - before.mean) / sc.beta;
      } else {
        factor = std::exp(-((r - x) * (r - x) - (r - before.mean) * (r - before.mean)) * dt / (2.0 * sc.beta));
      }
    }
    // Transport and innovation first, then the local propagator: a pure state
    // with an x-independent Bloch direction stays exactly on the sphere.
    const Eigen::Vector4d c0(s.P[i], s.X[i], s.Y[i], s.Z[i]);
    const Eigen::Vector4d d(rhs.P[i], rhs.X[i], rhs.Y[i], rhs.Z[i]);
    const Eigen::Vector4d q = factor * (prop * (c0 + dt * d + add * c0));
    s.P[i] = q[0];
    s.X[i] = q[1];
    s.Y[i] = q[2];
    s.Z[i] = q[3];
    mass += s.P[i];
  }
  mass *= dx;
  if (!(mass > 0.0) || !std::isfinite(mass)) throw Error("skse_grid_step: state collapsed");
  for (std::size_t i = 0; i < n; ++i) {
    s.P[i] /= mass;
    s.X[i] /= mass;
    s.Y[i] /= mass;
    s.Z[i] /= mass;
  }
  const double bad = physicality_violation(s, 1e-6);
  if (bad > 0.0) {
    throw Error("skse_grid_step: physicality violated by " + format_double(bad) + ", reduce dt or refine the grid");
  }
}

DriftDiffusion drift_from_bandwidth(const HybridScenario& sc, const Mat<2>& rho) {
  if (!(sc.bandwidth > 0.0)) throw Error("drift_from_bandwidth: bandwidth must be positive");
  const Mat<2> s = tla::sigma_minus();
  const double m = std::sqrt(sc.gamma) * (Mat<2>(s + s.adjoint()) * rho).trace().real();
  return {-sc.bandwidth, sc.bandwidth * m, sc.bandwidth};
}

Mat<2> hybrid_measurement_op(double f, double dt, const HybridScenario& sc) {
  const Mat<2> s = tla::sigma_minus();
  return Mat<2>::Identity() - dt * (cplx(0.0, 1.0) * sc.hamiltonian() - std::sqrt(sc.gamma) * f * s +
                                    0.5 * sc.gamma * s.adjoint() * s);
}

double hybrid_adaptive_mu(const HybridTrajectory& t, const HybridScenario& sc) {
  const double n2 = t.direction.squaredNorm();
  if (!(n2 > 0.0)) throw Error("hybrid_adaptive_mu: zero-norm state");
  return std::sqrt(sc.gamma) * expectation<2>(tla::sigma_x(), t.direction) / n2;
}

HybridTrajectory hybrid_ostensible_step(const HybridTrajectory& t, double r, double f, double dt,
                                        const HybridScenario& sc, const HybridStepParams& p) {
  HybridTrajectory out = t;
  const double lam = p.lambda, mu = p.mu;
  const double c = t.x - lam;
  Ket<2> next;
  double log_scale = 0.0;
  if (p.scheme == Scheme::ito) {
    out.classical = log_weight_update(t.classical, 1.0 + dt * c * (r - lam) / sc.beta);
    const Mat<2> s = tla::sigma_minus(), id = Mat<2>::Identity();
    const double sg = std::sqrt(sc.gamma);
    const Mat<2> gen = cplx(0.0, -1.0) * sc.hamiltonian() + (f - mu) * (sg * s - 0.5 * mu * id) -
                       0.5 * (sc.gamma * s.adjoint() * s - sg * mu * s + 0.25 * mu * mu * id);
    next = t.direction + dt * (gen * t.direction);
  } else {
    out.classical.log_p += dt * (c * (r - lam) - 0.5 * c * c) / sc.beta;
    next = hybrid_measurement_op(f, dt, sc) * t.direction;
    log_scale = -f * mu * dt + 0.5 * mu * mu * dt;
  }
  const double n2 = next.squaredNorm();
  if (!std::isfinite(n2)) throw Error("hybrid_ostensible_step: non-finite amplitudes");
  if (!(n2 > 0.0)) throw Error("hybrid_ostensible_step: trajectory norm vanished");
  out.direction = next / std::sqrt(n2);
  out.quantum.log_p = t.quantum.log_p + std::log(n2) + log_scale;
  out.x = t.x + dt * (-sc.bandwidth * t.x + sc.bandwidth * f);
  return out;
}

HybridEstimate estimate_hybrid(const std::vector<HybridTrajectory>& ensemble) {
  if (ensemble.empty()) throw Error("estimate_hybrid: empty ensemble");
  std::vector<double> lw(ensemble.size());
  for (std::size_t i = 0; i < ensemble.size(); ++i) lw[i] = ensemble[i].log_weight();
  const auto w = relative_weights(lw);
  const Mat<2> sx = tla::sigma_x(), sy = tla::sigma_y(), sz = tla::sigma_z();
  double total = 0.0, bx = 0.0, by = 0.0, bz = 0.0, m1 = 0.0;
  for (std::size_t i = 0; i < ensemble.size(); ++i) {
    const auto& t = ensemble[i];
    const double n2 = t.direction.squaredNorm();
    total += w[i] * n2;
    bx += w[i] * expectation<2>(sx, t.direction);
    by += w[i] * expectation<2>(sy, t.direction);
    bz += w[i] * expectation<2>(sz, t.direction);
    m1 += w[i] * n2 * t.x;
  }
  if (!(total > 0.0)) throw Error("estimate_hybrid: all weights vanish");
  HybridEstimate e;
  e.bloch = {bx / total, by / total, bz / total, 1.0};
  e.mean = m1 / total;
  double m2 = 0.0;
  for (std::size_t i = 0; i < ensemble.size(); ++i) {
    const double d = ensemble[i].x - e.mean;
    m2 += w[i] * ensemble[i].direction.squaredNorm() * d * d;
  }
  e.variance = m2 / total;
  return e;
}

HybridReference hybrid_reference_run(const HybridScenario& sc, std::uint64_t seed, std::uint64_t record_index,
                                     const Grid& grid, const SkseTerms& terms) {
  sc.validate();
  const std::size_t n = sc.steps();
  HybridGridState s = hybrid_initial_grid(sc, grid);
  HybridReference ref;
  ref.record.dt = sc.dt;
  ref.record.values.reserve(n);
  ref.marginals.reserve(n + 1);
  ref.marginals.push_back(grid_marginals(s, grid));
  NoiseStream stream(seed, streams::kRecord + record_index);
  for (std::size_t k = 0; k < n; ++k) {
    const double r = sample_real_record_classical(ref.marginals.back().mean, sc.beta, sc.dt, stream);
    skse_grid_step(s, r, sc.dt, sc, grid, terms);
    ref.record.values.push_back(r);
    ref.marginals.push_back(grid_marginals(s, grid));
  }
  if (boundary_mass(s, grid) > 1e-6) throw Error("hybrid reference: probability leaked to the grid boundary");
  return ref;
}

HybridEnsembleResult run_hybrid_ensemble(const HybridScenario& sc, const Record& record,
                                         const HybridEnsembleConfig& cfg) {
  sc.validate();
  cfg.mu.validate();
  if (cfg.n == 0) throw Error("hybrid ensemble: n must be at least 1");
  if (record.dt != sc.dt) throw Error("hybrid ensemble: record dt does not match scenario dt");
  const std::size_t steps = record.size();
  const std::size_t every = std::max<std::size_t>(cfg.sample_every, 1);

  NoiseStream init(cfg.seed, streams::kInitial + (cfg.replicate << 32));
  std::vector<HybridTrajectory> ens(cfg.n);
  const Ket<2> a = sc.initial_atom.normalized();
  for (auto& t : ens) {
    t.direction = a;
    t.x = sc.initial_x.mean + std::sqrt(sc.initial_x.variance) * init.normal();
  }
  auto noise = make_streams(cfg.seed, streams::kFictitious, cfg.replicate, cfg.n);
  NoiseStream boot(cfg.seed, streams::kBootstrap + (cfg.replicate << 32));

  HybridEnsembleResult res;
  auto sample = [&](std::size_t k) {
    res.step.push_back(k);
    res.t.push_back(static_cast<double>(k) * sc.dt);
    res.estimate.push_back(estimate_hybrid(ens));
    if (cfg.bootstrap > 1 && cfg.n > 1) {
      std::vector<WeightedParticle> pts(cfg.n);
      for (std::size_t i = 0; i < cfg.n; ++i) pts[i] = {ens[i].x, LogWeight{ens[i].log_weight()}};
      res.mean_se.push_back(bootstrap_standard_errors(pts, cfg.bootstrap, boot).mean);
    }
  };
  sample(0);
  for (std::size_t k = 0; k < steps; ++k) {
    const double r = record.values[k];
    parallel_for(cfg.n, [&](std::size_t i) {
      HybridStepParams p{cfg.lambda, 0.0, cfg.scheme};
      p.mu = resolve_mean(cfg.mu, [&] { return hybrid_adaptive_mu(ens[i], sc); });
      const double f = sample_fictitious(cfg.mu, p.mu, sc.dt, noise[i]);
      ens[i] = hybrid_ostensible_step(ens[i], r, f, sc.dt, sc, p);
    });
    if ((k + 1) % every == 0 || k + 1 == steps) sample(k + 1);
  }
  return res;
}

double hybrid_marginalization_error(const HybridScenario& sc, const Grid& grid) {
  sc.validate();
  SkseTerms terms;
  terms.innovation = false;
  HybridGridState s = hybrid_initial_grid(sc, grid);
  const Ket<2> a = sc.initial_atom.normalized();
  Mat<2> rho = a * a.adjoint();
  const Mat<2> sig = std::sqrt(sc.gamma) * tla::sigma_minus();
  const Mat<2> h = sc.hamiltonian();
  constexpr int kSub = 10;  // the reference ME runs on a finer step
  double worst = 0.0;
  for (std::size_t k = 0; k < sc.steps(); ++k) {
    skse_grid_step(s, 0.0, sc.dt, sc, grid, terms);
    for (int j = 0; j < kSub; ++j) {
      rho += (sc.dt / kSub) * (commutator_term<2>(h, rho) + lindblad_dissipator<2>(sig, rho));
    }
    const BlochVector g = grid_marginals(s, grid).bloch;
    const BlochVector m = bloch_decompose(rho);
    worst = std::max({worst, std::abs(g.x - m.x), std::abs(g.y - m.y), std::abs(g.z - m.z)});
  }
  return worst;
}

namespace {

struct EnumerationError {
  double joint = 0.0;     // per (x', r) joint-state entries
  double estimate = 0.0;  // Bloch vector, detector mean and variance
};

// Discrepancy between the direct joint update and the ostensible
// decomposition, both normalized by P(r).
EnumerationError hybrid_enumeration_error(const HybridScenario& sc, double dt, bool adaptive) {
  const std::array<double, 2> xs{-0.4, 0.3};
  const std::array<double, 2> mass{0.6, 0.4};
  const std::array<Ket<2>, 2> atoms{Ket<2>(0.6, 0.8), Ket<2>(1.0, cplx(0.5, 0.5)).normalized()};
  const std::array<double, 2> signs{1.0, -1.0};
  const double af = 1.0 / std::sqrt(dt);
  const double ar = std::sqrt(sc.beta / dt);

  // Bloch vector and x moments of a discrete joint state {x: rho(x)}.
  auto marginal = [](const std::map<double, Mat<2>>& joint, double total) {
    Mat<2> q = Mat<2>::Zero();
    double m1 = 0.0, m2 = 0.0;
    for (const auto& [x, rho] : joint) {
      q += rho;
      const double p = rho.trace().real();
      m1 += p * x;
      m2 += p * x * x;
    }
    const BlochVector b = bloch_decompose(q / total);
    m1 /= total;
    return std::array<double, 5>{b.x, b.y, b.z, m1, m2 / total - m1 * m1};
  };

  EnumerationError err;
  for (double sr : signs) {
    const double r = sr * ar;
    std::map<double, Mat<2>> direct, ost;
    double direct_total = 0.0, ost_total = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      const Mat<2> rho = atoms[i] * atoms[i].adjoint();
      const double p_r = 0.5 * (1.0 + xs[i] * r * dt / sc.beta);
      HybridTrajectory t0;
      t0.direction = atoms[i];
      t0.x = xs[i];
      t0.classical.log_p = std::log(mass[i]);
      const double mu = adaptive ? hybrid_adaptive_mu(t0, sc) : 0.0;
      for (double sf : signs) {
        const double f = sf * af;
        // Direct: the true two-point operation carries the outcome factor 1/2.
        const Mat<2> m = hybrid_measurement_op(f, dt, sc);
        const Mat<2> d = mass[i] * p_r * 0.5 * (m * rho * m.adjoint());
        const double xn = xs[i] + dt * (-sc.bandwidth * xs[i] + sc.bandwidth * f);
        direct[xn] += d;
        direct_total += d.trace().real();
        // Ostensible: two-point law of mean mu for f, 1/2 for r.
        const double lam_f = 0.5 * (1.0 + mu * f * dt);
        const HybridTrajectory t1 = hybrid_ostensible_step(t0, r, f, dt, sc, {0.0, mu, Scheme::ito});
        const Ket<2> k = t1.direction;
        const Mat<2> o = lam_f * 0.5 * std::exp(t1.log_weight()) * (k * k.adjoint());
        ost[t1.x] += o;
        ost_total += o.trace().real();
      }
    }
    if (direct.size() != ost.size()) return {1.0, 1.0};
    for (auto it = direct.begin(), jt = ost.begin(); it != direct.end(); ++it, ++jt) {
      err.joint = std::max(err.joint, std::abs(it->first - jt->first));
      err.joint = std::max(err.joint, (it->second / direct_total - jt->second / ost_total).cwiseAbs().maxCoeff());
    }
    const auto a = marginal(direct, direct_total);
    const auto b = marginal(ost, ost_total);
    for (std::size_t j = 0; j < a.size(); ++j) err.estimate = std::max(err.estimate, std::abs(a[j] - b[j]));
  }
  return err;
}

}  // namespace

HybridOracleReport hybrid_one_step_oracle(const HybridScenario& sc, double dt) {
  HybridOracleReport rep;
  const EnumerationError exact = hybrid_enumeration_error(sc, dt, false);
  const EnumerationError full = hybrid_enumeration_error(sc, dt, true);
  const EnumerationError half = hybrid_enumeration_error(sc, 0.5 * dt, true);
  rep.exact_error = std::max(exact.joint, exact.estimate);
  rep.error_dt = full.estimate;
  rep.error_half = half.estimate;
  rep.joint_error_dt = full.joint;
  rep.joint_error_half = half.joint;
  return rep;
}

}  // namespace trajkit
