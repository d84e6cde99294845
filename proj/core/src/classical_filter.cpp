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

#include "trajkit/classical_filter.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <numbers>

#include "ensemble.hpp"

namespace trajkit {

std::size_t ClassicalScenario::steps() const { return static_cast<std::size_t>(std::llround(t_final / dt)); }

void ClassicalScenario::validate() const {
  if (!(beta > 0.0)) throw Error("classical scenario: beta must be positive");
  if (!(b >= 0.0)) throw Error("classical scenario: b must be non-negative");
  if (!(dt > 0.0) || !(t_final > 0.0)) throw Error("classical scenario: dt and t_final must be positive");
  if (!point_mass && !(initial.variance > 0.0)) throw Error("classical scenario: initial variance must be positive");
}

std::vector<std::string> ClassicalScenario::warnings() const {
  std::vector<std::string> w;
  if (dt * std::abs(k) > 0.01) w.push_back("dt*k exceeds 0.01");
  // Log-weight spread grows roughly like t * Var(x) / beta.
  const double spread = t_final * steady_state_variance(*this) / beta;
  if (spread > 20.0) w.push_back("weight degeneracy likely: t_final*var/beta = " + format_double(spread));
  return w;
}

double linear_sde_step(double x, double f, double m, double dt, const ClassicalScenario& sc) {
  return x + dt * sc.drift(x) + dt * (f - m) * sc.b;
}

GaussianFilterState kalman_exact_step(const GaussianFilterState& s, double r, double dt,
                                      const ClassicalScenario& sc) {
  GaussianFilterState out;
  out.mean = s.mean + dt * (s.variance * (r - s.mean) / sc.beta - sc.k * s.mean + sc.l);
  out.variance = s.variance + dt * (-s.variance * s.variance / sc.beta - 2.0 * sc.k * s.variance + sc.b * sc.b);
  return out;
}

double steady_state_variance(const ClassicalScenario& sc) {
  const double kb = sc.k * sc.beta;
  return -kb + std::sqrt(kb * kb + sc.beta * sc.b * sc.b);
}

std::vector<double> grid_density(const Gaussian& g, const Grid& grid) {
  if (!(g.variance > 0.0)) throw Error("grid_density: variance must be positive");
  std::vector<double> p(grid.points);
  double total = 0.0;
  for (std::size_t i = 0; i < grid.points; ++i) {
    const double d = grid.x(i) - g.mean;
    p[i] = std::exp(-d * d / (2.0 * g.variance));
    total += p[i];
  }
  for (double& v : p) v /= total * grid.dx();
  return p;
}

GaussianFilterState grid_moments(const std::vector<double>& p, const Grid& grid) {
  double s0 = 0.0, s1 = 0.0, s2 = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double x = grid.x(i);
    s0 += p[i];
    s1 += p[i] * x;
    s2 += p[i] * x * x;
  }
  if (!(s0 > 0.0)) throw Error("grid_moments: zero mass");
  const double mean = s1 / s0;
  return {mean, s2 / s0 - mean * mean};
}

void kse_grid_step(std::vector<double>& p, double r, double dt, const ClassicalScenario& sc, const Grid& grid,
                   Innovation innovation) {
  const std::size_t n = grid.points;
  if (p.size() != n) throw Error("kse_grid_step: density size does not match grid");
  const double dx = grid.dx();
  if (dt * sc.b * sc.b > dx * dx) throw Error("kse_grid_step: CFL violated (dt > dx^2/b^2)");

  // Flux form: dP/dt = -(J_{i+1/2} - J_{i-1/2}) / dx with
  // J = A P - (b^2/2) dP/dx at the cell faces and J = 0 at both ends.
  std::vector<double> flux(n + 1, 0.0);
  const double d = 0.5 * sc.b * sc.b;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const double xf = 0.5 * (grid.x(i) + grid.x(i + 1));
    flux[i + 1] = sc.drift(xf) * 0.5 * (p[i] + p[i + 1]) - d * (p[i + 1] - p[i]) / dx;
  }
  const auto mom = grid_moments(p, grid);
  std::vector<double> next(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double x = grid.x(i);
    double v = p[i] - dt * (flux[i + 1] - flux[i]) / dx;
    if (innovation == Innovation::linear) {
      v += dt * (x - mom.mean) * (r - mom.mean) / sc.beta * p[i];
    } else {
      v *= std::exp(-(r - x) * (r - x) * dt / (2.0 * sc.beta) + (r - mom.mean) * (r - mom.mean) * dt / (2.0 * sc.beta));
    }
    next[i] = std::max(v, 0.0);
  }
  double total = 0.0;
  for (double v : next) total += v;
  if (!(total > 0.0) || !std::isfinite(total)) throw Error("kse_grid_step: density collapsed");
  for (double& v : next) v /= total * dx;
  p.swap(next);
}

LogWeight particle_weight_step(LogWeight w, double x, double f, double r, double dt, const ClassicalScenario& sc,
                               double lambda, double mu, Scheme scheme) {
  const double a = sc.m - mu, c = x - lambda;
  if (scheme == Scheme::ito) {
    w = log_weight_update(w, 1.0 + dt * a * (f - mu));
    return log_weight_update(w, 1.0 + dt * c * (r - lambda) / sc.beta);
  }
  w.log_p += dt * (a * (f - mu) - 0.5 * a * a) + dt * (c * (r - lambda) - 0.5 * c * c) / sc.beta;
  return w;
}

ClassicalMoments estimate_classical_moments(const std::vector<WeightedParticle>& particles) {
  if (particles.empty()) throw Error("estimate_classical_moments: empty ensemble");
  std::vector<double> lw(particles.size());
  for (std::size_t i = 0; i < particles.size(); ++i) lw[i] = particles[i].w.log_p;
  const auto w = relative_weights(lw);
  double s0 = 0.0, s1 = 0.0;
  for (std::size_t i = 0; i < particles.size(); ++i) {
    s0 += w[i];
    s1 += w[i] * particles[i].x;
  }
  if (!(s0 > 0.0)) throw Error("estimate_classical_moments: all weights vanish");
  const double mean = s1 / s0;
  double s2 = 0.0;
  for (std::size_t i = 0; i < particles.size(); ++i) {
    const double d = particles[i].x - mean;
    s2 += w[i] * d * d;
  }
  return {mean, s2 / s0};
}

ClassicalMoments bootstrap_standard_errors(const std::vector<WeightedParticle>& particles, std::size_t resamples,
                                           NoiseStream& stream) {
  const std::size_t n = particles.size();
  if (n < 2 || resamples < 2) throw Error("bootstrap: need at least two particles and two resamples");
  std::vector<WeightedParticle> draw(n);
  double m1 = 0.0, m2 = 0.0, v1 = 0.0, v2 = 0.0;
  for (std::size_t b = 0; b < resamples; ++b) {
    for (std::size_t i = 0; i < n; ++i) {
      const auto j = static_cast<std::size_t>(stream.uniform() * static_cast<double>(n));
      draw[i] = particles[std::min(j, n - 1)];
    }
    const auto est = estimate_classical_moments(draw);
    m1 += est.mean;
    m2 += est.mean * est.mean;
    v1 += est.variance;
    v2 += est.variance * est.variance;
  }
  const double nb = static_cast<double>(resamples);
  auto sd = [nb](double s, double s2) { return std::sqrt(std::max(s2 / nb - (s / nb) * (s / nb), 0.0) * nb / (nb - 1.0)); };
  return {sd(m1, m2), sd(v1, v2)};
}

std::vector<WeightedParticle> sample_initial_particles(const ClassicalScenario& sc, std::size_t n,
                                                       NoiseStream& stream) {
  if (n == 0) throw Error("sample_initial_particles: n must be at least 1");
  std::vector<WeightedParticle> out(n);
  for (auto& p : out) {
    p.x = sc.point_mass ? sc.initial.mean : sc.initial.mean + std::sqrt(sc.initial.variance) * stream.normal();
  }
  return out;
}

ClassicalReference classical_reference_run(const ClassicalScenario& sc, std::uint64_t seed,
                                           std::uint64_t record_index) {
  sc.validate();
  const std::size_t n = sc.steps();
  ClassicalReference ref;
  ref.record.dt = sc.dt;
  ref.record.values.reserve(n);
  ref.exact.reserve(n + 1);
  ref.exact.push_back({sc.initial.mean, sc.point_mass ? 0.0 : sc.initial.variance});
  NoiseStream stream(seed, streams::kRecord + record_index);
  for (std::size_t k = 0; k < n; ++k) {
    const double r = sample_real_record_classical(ref.exact.back().mean, sc.beta, sc.dt, stream);
    ref.record.values.push_back(r);
    ref.exact.push_back(kalman_exact_step(ref.exact.back(), r, sc.dt, sc));
  }
  return ref;
}

std::vector<GaussianFilterState> classical_grid_run(const ClassicalScenario& sc, const Record& record,
                                                    const Grid& grid, Innovation innovation) {
  sc.validate();
  std::vector<double> p = grid_density(sc.initial, grid);
  std::vector<GaussianFilterState> out;
  out.reserve(record.size() + 1);
  out.push_back(grid_moments(p, grid));
  for (double r : record.values) {
    kse_grid_step(p, r, record.dt, sc, grid, innovation);
    out.push_back(grid_moments(p, grid));
  }
  return out;
}

ClassicalEnsembleResult run_classical_ensemble(const ClassicalScenario& sc, const Record& record,
                                               const ClassicalEnsembleConfig& cfg) {
  sc.validate();
  cfg.mu.validate();
  if (cfg.n == 0) throw Error("classical ensemble: n must be at least 1");
  if (record.dt != sc.dt) throw Error("classical ensemble: record dt does not match scenario dt");
  const std::size_t steps = record.size();
  const std::size_t every = std::max<std::size_t>(cfg.sample_every, 1);

  NoiseStream init(cfg.seed, streams::kInitial + (cfg.replicate << 32));
  auto particles = sample_initial_particles(sc, cfg.n, init);
  auto noise = make_streams(cfg.seed, streams::kFictitious, cfg.replicate, cfg.n);
  NoiseStream boot(cfg.seed, streams::kBootstrap + (cfg.replicate << 32));

  ClassicalEnsembleResult res;
  auto sample = [&](std::size_t k) {
    res.step.push_back(k);
    res.t.push_back(static_cast<double>(k) * sc.dt);
    res.estimate.push_back(estimate_classical_moments(particles));
    if (cfg.bootstrap > 0 && cfg.n >= 2) res.standard_error.push_back(bootstrap_standard_errors(particles, cfg.bootstrap, boot));
    std::vector<double> lw(cfg.n);
    for (std::size_t i = 0; i < cfg.n; ++i) lw[i] = particles[i].w.log_p;
    res.ess.push_back(effective_sample_size(lw));
  };
  sample(0);
  for (std::size_t k = 0; k < steps; ++k) {
    const double r = record.values[k];
    parallel_for(cfg.n, [&](std::size_t i) {
      auto& p = particles[i];
      // The only state-dependent guess for f is the true internal-noise mean.
      const double mu = resolve_mean(cfg.mu, [&] { return sc.m; });
      const double f = sample_fictitious(cfg.mu, mu, sc.dt, noise[i]);
      p.w = particle_weight_step(p.w, p.x, f, r, sc.dt, sc, cfg.lambda, mu, cfg.scheme);
      p.x = linear_sde_step(p.x, f, sc.m, sc.dt, sc);
    });
    if ((k + 1) % every == 0 || k + 1 == steps) sample(k + 1);
  }
  return res;
}

ClassicalOracleReport classical_one_step_oracle(const ClassicalScenario& sc_in, double dt) {
  ClassicalScenario sc = sc_in;
  sc.m = 0.3;  // non-trivial internal-noise mean
  const std::array<double, 3> xs{-0.5, 0.2, 1.1};
  const std::array<double, 3> mass{0.2, 0.5, 0.3};
  const double af = 1.0 / std::sqrt(dt);
  const double ar = std::sqrt(sc.beta / dt);
  const std::array<double, 2> signs{1.0, -1.0};

  ClassicalOracleReport rep;
  for (double sr : signs) {
    const double r = sr * ar;
    // Direct Bayes: joint law of (x', r) summed over the hidden noise.
    std::map<double, double> direct, ost;
    double direct_total = 0.0, ost_total = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      const double p_r = 0.5 * (1.0 + xs[i] * r * dt / sc.beta);
      for (double sf : signs) {
        const double f = sf * af;
        const double p_f = 0.5 * (1.0 + sc.m * f * dt);
        const double xn = xs[i] + dt * sc.drift(xs[i]) + dt * (f - sc.m) * sc.b;
        direct[xn] += mass[i] * p_f * p_r;
        direct_total += mass[i] * p_f * p_r;
        // Ostensible particle (x_i, f) drawn with Lambda(f) = Lambda(r) = 1/2.
        const LogWeight w = particle_weight_step(LogWeight{std::log(mass[i])}, xs[i], f, r, dt, sc, 0.0, 0.0,
                                                 Scheme::ito);
        const double contrib = 0.5 * 0.5 * std::exp(w.log_p);
        ost[linear_sde_step(xs[i], f, sc.m, dt, sc)] += contrib;
        ost_total += contrib;
      }
    }
    rep.max_error = std::max(rep.max_error, std::abs(direct_total - ost_total));
    if (direct.size() != ost.size()) {
      rep.max_error = std::max(rep.max_error, 1.0);
      continue;
    }
    for (auto it = direct.begin(), jt = ost.begin(); it != direct.end(); ++it, ++jt) {
      rep.max_error = std::max(rep.max_error, std::abs(it->first - jt->first));
      rep.max_error = std::max(rep.max_error, std::abs(it->second / direct_total - jt->second / ost_total));
    }
  }
  return rep;
}

}  // namespace trajkit
