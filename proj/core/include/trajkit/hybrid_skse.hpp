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

// Driven two-level atom whose homodyne-x signal f feeds a finite-bandwidth
// detector dx = B (f - x) dt, which is read out as r = x + sqrt(beta) dW/dt.
// The joint state rho(x) = (P + X sx + Y sy + Z sz) / 2 lives on an x grid
// (reference) or as weighted (x, psi) particles (ostensible).

#include <cstdint>
#include <string>
#include <vector>

#include "trajkit/classical_filter.hpp"
#include "trajkit/statekit.hpp"
#include "trajkit/stochproc.hpp"

namespace trajkit {

struct HybridScenario {
  double omega = 5.0;
  double gamma = 1.0;
  double bandwidth = 2.0;
  double beta = 0.5;
  double dt = 2.5e-4;
  double t_final = 4.0;
  Gaussian initial_x{0.0, 0.1};
  /// Initial atomic state (pure); defaults to |g>.
  Ket<2> initial_atom = Ket<2>(0.0, 1.0);

  std::size_t steps() const;
  void validate() const;
  std::vector<std::string> warnings(const Grid& grid = {}) const;
  /// Omega sx / 2.
  Mat<2> hamiltonian() const;
};

struct HybridGridState {
  std::vector<double> P, X, Y, Z;

  std::size_t size() const { return P.size(); }
};

/// Pieces of the hybrid filtering equation; each can be switched off.
struct SkseTerms {
  bool quantum = true;     // Rabi drive and damping
  bool drift = true;       // B d/dx (x rho)
  bool diffusion = true;   // B^2/2 d^2/dx^2 rho
  bool coupling = true;    // -sqrt(gamma) B d/dx (sigma rho + rho sigma^+)
  bool innovation = true;  // conditioning on r
  Innovation innovation_form = Innovation::bayes;
};

HybridGridState hybrid_initial_grid(const HybridScenario& sc, const Grid& grid);

/// Right-hand side of the component equations (P, X, Y, Z) without the
/// innovation term, in flux form with zero-flux ends.
HybridGridState skse_rhs(const HybridGridState& s, const HybridScenario& sc, const Grid& grid,
                         const SkseTerms& terms = {});

/// The same right-hand side evaluated with 2x2 matrices rho(x) directly from
/// the operator form, for cross-checking the component equations.
std::vector<Mat<2>> skse_operator_rhs(const std::vector<Mat<2>>& rho, const HybridScenario& sc, const Grid& grid,
                                      const SkseTerms& terms = {});

std::vector<Mat<2>> to_matrices(const HybridGridState& s);
HybridGridState from_matrices(const std::vector<Mat<2>>& rho);

/// One Euler step conditioned on r; renormalizes int P dx to one. Throws on
/// CFL violation (dt > dx^2 / B^2).
void skse_grid_step(HybridGridState& s, double r, double dt, const HybridScenario& sc, const Grid& grid,
                    const SkseTerms& terms = {});

/// Marginals of the grid state: atom Bloch vector and detector mean/variance.
struct HybridEstimate {
  BlochVector bloch;
  double mean = 0.0;
  double variance = 0.0;
};

HybridEstimate grid_marginals(const HybridGridState& s, const Grid& grid);

/// Largest violation max(X^2 + Y^2 + Z^2 - P^2 (1 + rel_tol), 0) over the grid.
double physicality_violation(const HybridGridState& s, double rel_tol = 1e-6);

/// Mass in the two outermost cells at each end, a leakage monitor.
double boundary_mass(const HybridGridState& s, const Grid& grid);

/// A(x) = -B x + B m and D = B with m = sqrt(gamma) Tr[(sigma + sigma^+) rho].
struct DriftDiffusion {
  double a_slope = 0.0;  // coefficient of x
  double a_offset = 0.0;
  double d = 0.0;
  double operator()(double x) const { return a_slope * x + a_offset; }
};

DriftDiffusion drift_from_bandwidth(const HybridScenario& sc, const Mat<2>& rho);

/// 1 - dt (i H - sqrt(gamma) f sigma + gamma sigma^+ sigma / 2), H = Omega sx / 2.
Mat<2> hybrid_measurement_op(double f, double dt, const HybridScenario& sc);

struct HybridTrajectory {
  Ket<2> direction = Ket<2>::Zero();  // unit vector along psi-bar
  double x = 0.0;
  LogWeight classical;  // ln p
  LogWeight quantum;    // ln <psi-bar|psi-bar>

  double log_weight() const { return classical.log_p + quantum.log_p; }
};

struct HybridStepParams {
  double lambda = 0.0;
  double mu = 0.0;  // resolved mean of the fictitious law for this step
  Scheme scheme = Scheme::likelihood;
};

/// sqrt(gamma) <sigma + sigma^+> of the trajectory.
double hybrid_adaptive_mu(const HybridTrajectory& t, const HybridScenario& sc);

/// Advances one particle: weight from r, linear TLA SSE driven by f, and
/// detector position driven by f.
HybridTrajectory hybrid_ostensible_step(const HybridTrajectory& t, double r, double f, double dt,
                                        const HybridScenario& sc, const HybridStepParams& p);

HybridEstimate estimate_hybrid(const std::vector<HybridTrajectory>& ensemble);

struct HybridReference {
  Record record;
  std::vector<HybridEstimate> marginals;  // steps + 1
};

/// Grid reference run; r dt = <x_R> dt + sqrt(beta) dW drawn from
/// stream (seed, streams::kRecord + record_index).
HybridReference hybrid_reference_run(const HybridScenario& sc, std::uint64_t seed, std::uint64_t record_index = 0,
                                     const Grid& grid = {}, const SkseTerms& terms = {});

struct HybridEnsembleConfig {
  std::size_t n = 1000;
  double lambda = 0.0;
  OstensibleDistribution mu = OstensibleDistribution::fixed(0.0);
  Scheme scheme = Scheme::likelihood;
  std::uint64_t seed = 1;
  std::uint64_t replicate = 0;
  std::size_t sample_every = 40;
  std::size_t bootstrap = 0;
};

struct HybridEnsembleResult {
  std::vector<std::size_t> step;
  std::vector<double> t;
  std::vector<HybridEstimate> estimate;
  std::vector<double> mean_se;  // bootstrap SE of the detector mean, if requested
};

HybridEnsembleResult run_hybrid_ensemble(const HybridScenario& sc, const Record& record,
                                         const HybridEnsembleConfig& cfg);

/// Marginalization check: unconditioned grid run (innovation off, coupling
/// on) against the TLA master equation integrated on a ten times finer step.
/// Returns the largest Bloch-component error over the run.
double hybrid_marginalization_error(const HybridScenario& sc, const Grid& grid = {});

struct HybridOracleReport {
  double exact_error = 0.0;  // lambda = mu = 0, must vanish to rounding
  // Adaptive mu, error of the estimate (Bloch vector, detector mean and
  // variance) at dt and dt / 2.
  double error_dt = 0.0;
  double error_half = 0.0;
  // Same, per joint outcome. Odd-in-f terms survive here, so this shrinks
  // only like dt^1.5.
  double joint_error_dt = 0.0;
  double joint_error_half = 0.0;
  double order_ratio() const { return error_half > 0.0 ? error_dt / error_half : 0.0; }
  double joint_order_ratio() const { return joint_error_half > 0.0 ? joint_error_dt / joint_error_half : 0.0; }
  bool passed(double tol = 1e-12) const {
    const double q = order_ratio();
    return exact_error <= tol && q >= 3.0 && q <= 5.5;
  }
};

/// One-step exhaustive enumeration over two-point f and r for a mixture of
/// particles carrying pure atomic states, against the direct joint update.
HybridOracleReport hybrid_one_step_oracle(const HybridScenario& sc, double dt);

}  // namespace trajkit
