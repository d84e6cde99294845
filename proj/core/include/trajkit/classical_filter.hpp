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

// Linear classical system dx = (-k x + l) dt + b dV, where dV = (f - m) dt is
// unobserved white noise, read out as r = x + sqrt(beta) dW / dt.

#include <cstdint>
#include <string>
#include <vector>

#include "trajkit/statekit.hpp"
#include "trajkit/stochproc.hpp"

namespace trajkit {

struct ClassicalScenario {
  double k = 1.0;
  double l = 1.0;
  double b = 1.0;
  double beta = 1.0;
  double m = 0.0;
  double dt = 1e-3;
  double t_final = 5.0;
  Gaussian initial{0.0, 0.1};
  /// If set, every particle starts at initial.mean.
  bool point_mass = false;

  double drift(double x) const { return -k * x + l; }
  std::size_t steps() const;
  void validate() const;
  std::vector<std::string> warnings() const;
};

struct GaussianFilterState {
  double mean = 0.0;
  double variance = 1.0;
};

/// x + dt A(x) + dt (f - m) b.
double linear_sde_step(double x, double f, double m, double dt, const ClassicalScenario& sc);

/// One Euler step of the Kalman-Bucy mean/variance equations.
GaussianFilterState kalman_exact_step(const GaussianFilterState& s, double r, double dt,
                                      const ClassicalScenario& sc);

/// Positive fixed point -k beta + sqrt(k^2 beta^2 + beta b^2) of the variance equation.
double steady_state_variance(const ClassicalScenario& sc);

struct Grid {
  double lo = -6.0;
  double hi = 6.0;
  std::size_t points = 241;

  double dx() const { return (hi - lo) / static_cast<double>(points - 1); }
  double x(std::size_t i) const { return lo + dx() * static_cast<double>(i); }
};

/// Innovation update of a grid density. `bayes` multiplies by the Gaussian
/// likelihood of r and renormalizes; `linear` adds the first-order term
/// (x - <x>)(r - <x>) dt / beta P.
enum class Innovation { bayes, linear };

std::vector<double> grid_density(const Gaussian& g, const Grid& grid);
/// Mean and variance of a grid density (Riemann sums).
GaussianFilterState grid_moments(const std::vector<double>& p, const Grid& grid);

/// Advances P by one step of the filtering equation (drift, diffusion and
/// innovation, central differences, zero-flux boundaries), then renormalizes.
/// Throws if dt > dx^2 / b^2.
void kse_grid_step(std::vector<double>& p, double r, double dt, const ClassicalScenario& sc, const Grid& grid,
                   Innovation innovation = Innovation::bayes);

struct WeightedParticle {
  double x = 0.0;
  LogWeight w;
};

/// Weight update for one step. The Ito scheme multiplies by
/// (1 + dt (m - mu)(f - mu)) (1 + dt (x - lambda)(r - lambda) / beta); the
/// likelihood scheme uses the exact Gaussian ratios.
LogWeight particle_weight_step(LogWeight w, double x, double f, double r, double dt, const ClassicalScenario& sc,
                               double lambda, double mu, Scheme scheme = Scheme::likelihood);

struct ClassicalMoments {
  double mean = 0.0;
  double variance = 0.0;
};

ClassicalMoments estimate_classical_moments(const std::vector<WeightedParticle>& particles);

/// Bootstrap standard errors of the weighted mean and variance.
ClassicalMoments bootstrap_standard_errors(const std::vector<WeightedParticle>& particles, std::size_t resamples,
                                           NoiseStream& stream);

std::vector<WeightedParticle> sample_initial_particles(const ClassicalScenario& sc, std::size_t n,
                                                       NoiseStream& stream);

struct ClassicalReference {
  Record record;
  std::vector<GaussianFilterState> exact;  // steps + 1 states
};

/// Record r = <x> + sqrt(beta) dW/dt generated from the exact filter mean.
ClassicalReference classical_reference_run(const ClassicalScenario& sc, std::uint64_t seed,
                                           std::uint64_t record_index = 0);

/// Grid filter driven by a stored record; element k holds the moments at k dt.
std::vector<GaussianFilterState> classical_grid_run(const ClassicalScenario& sc, const Record& record,
                                                    const Grid& grid = {},
                                                    Innovation innovation = Innovation::bayes);

struct ClassicalEnsembleConfig {
  std::size_t n = 1000;
  double lambda = 0.0;
  OstensibleDistribution mu = OstensibleDistribution::fixed(0.0);
  Scheme scheme = Scheme::likelihood;
  std::uint64_t seed = 1;
  std::uint64_t replicate = 0;
  std::size_t sample_every = 100;
  /// Bootstrap resamples per sample time; 0 disables the standard errors.
  std::size_t bootstrap = 0;
};

struct ClassicalEnsembleResult {
  std::vector<std::size_t> step;
  std::vector<double> t;
  std::vector<ClassicalMoments> estimate;
  std::vector<ClassicalMoments> standard_error;
  std::vector<double> ess;
};

ClassicalEnsembleResult run_classical_ensemble(const ClassicalScenario& sc, const Record& record,
                                               const ClassicalEnsembleConfig& cfg);

struct ClassicalOracleReport {
  double max_error = 0.0;  // largest posterior-mass discrepancy
  bool passed(double tol = 1e-12) const { return max_error <= tol; }
};

/// One-step exhaustive enumeration: discrete initial masses, two-point f and
/// r with ostensible probability 1/2 and lambda = mu = 0, compared against
/// the direct Bayesian update.
ClassicalOracleReport classical_one_step_oracle(const ClassicalScenario& sc, double dt);

}  // namespace trajkit
