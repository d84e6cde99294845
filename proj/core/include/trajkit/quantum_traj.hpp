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

// Three-level atom with two decay channels |3> -> |1> (rate gamma1, observed
// by homodyne-x detection) and |3> -> |2> (rate gamma2, unobserved). Basis
// index k holds level |k+1>.

#include <cstdint>
#include <string>
#include <vector>

#include "trajkit/statekit.hpp"
#include "trajkit/stochproc.hpp"

namespace trajkit {

struct ThreeLevelScenario {
  double gamma1 = 0.5;
  double gamma2 = 1.0;
  PureState<3> initial;
  double dt = 1e-3;
  double t_final = 4.0;

  /// gamma1 = 0.5, gamma2 = 1 and the renormalized fixed initial superposition.
  static ThreeLevelScenario fig2();

  std::size_t steps() const;
  /// Throws on negative rates or non-positive dt / t_final.
  void validate() const;
  /// Non-fatal diagnostics, e.g. dt (gamma1 + gamma2) > 0.01.
  std::vector<std::string> warnings() const;
};

/// 0.4123|1> + 0.1|2> + (0.9 + 0.1i)|3>, as printed (norm^2 = 0.99999129).
Ket<3> fig2_initial_amplitudes();

namespace three_level {
/// |1><3|.
Mat<3> L1();
/// |2><3|.
Mat<3> L2();
/// L1 + L1^+.
Mat<3> x1();
}  // namespace three_level

Mat<3> me_step(const Mat<3>& rho, double dt, const ThreeLevelScenario& sc);

/// Euler solution on the scenario grid; element k is rho(k dt). Throws if
/// the trace drifts by more than 1e-6.
std::vector<Mat<3>> me_solve(const ThreeLevelScenario& sc);

/// Conditions rho on the homodyne result r (r dt = dW + dt sqrt(g1)<x1>) and
/// renormalizes. The Ito scheme aborts if an eigenvalue drops below -1e-4.
Mat<3> sme_condition(const Mat<3>& rho, double r, double dt, const ThreeLevelScenario& sc,
                     Scheme scheme = Scheme::likelihood);

struct SmeStep {
  Mat<3> rho;
  double r = 0.0;
};

/// Draws dW from `stream`, forms r and conditions rho on it.
SmeStep sme_step(const Mat<3>& rho, double dt, const ThreeLevelScenario& sc, NoiseStream& stream,
                 Scheme scheme = Scheme::likelihood);

struct SmeRun {
  Record record;
  std::vector<Mat<3>> rho;  // steps + 1 states
};

/// Reference run from the scenario initial state; the record is drawn from
/// stream (seed, streams::kRecord + record_index).
SmeRun sme_run(const ThreeLevelScenario& sc, std::uint64_t seed, std::uint64_t record_index = 0,
               Scheme scheme = Scheme::likelihood);

/// 1 + sqrt(g1) r dt L1 + sqrt(g2) f dt L2 - dt (g1 L1^+L1 + g2 L2^+L2)/2.
Mat<3> homodyne_operator(double r, double f, double dt, const ThreeLevelScenario& sc);

Ket<3> kraus_homodyne_step(const Ket<3>& psi, double r, double f, double dt,
                           const ThreeLevelScenario& sc);

/// sqrt(g2) <L2 + L2^+> / <psi|psi>.
double adaptive_mu(const Ket<3>& psi, const ThreeLevelScenario& sc);

/// Unnormalized ostensible state, stored as a unit direction plus
/// ln <psi|psi> so that long runs do not underflow.
struct OstensibleState {
  Ket<3> direction = Ket<3>::Zero();
  LogWeight weight;

  static OstensibleState from_ket(const Ket<3>& psi);
  Ket<3> ket() const;
};

struct OssseParams {
  double lambda = 0.0;
  double mu = 0.0;  // resolved mean of the fictitious law for this step
  Scheme scheme = Scheme::likelihood;
};

/// One step of the linear ostensible SSE given the real result r and the
/// fictitious result f. No renormalization; the norm goes to the weight.
OstensibleState ossse_step(const OstensibleState& s, double r, double f, double dt,
                           const ThreeLevelScenario& sc, const OssseParams& p);

/// The same Ito step written per amplitude (c1, c2, c3). Kept separate from
/// the operator form so the two can be cross-checked.
Ket<3> ossse_components_step(const Ket<3>& c, double r, double f, double dt,
                             const ThreeLevelScenario& sc, double lambda, double mu);

/// Weighted ensemble estimate sum w |u><u| / sum w with stabilized weights.
Mat<3> estimate_rho_R(const std::vector<OstensibleState>& ensemble);

struct QuantumEnsembleConfig {
  std::size_t n = 1000;
  double lambda = 0.0;
  OstensibleDistribution mu = OstensibleDistribution::fixed(0.0);
  Scheme scheme = Scheme::likelihood;
  std::uint64_t seed = 1;
  std::uint64_t replicate = 0;
  std::size_t sample_every = 10;
};

struct QuantumEnsembleResult {
  std::vector<double> t;
  std::vector<Mat<3>> estimate;
  std::vector<double> fidelity;  // against the reference, if supplied
  double final_ess = 0.0;
};

/// Replays `record` through n ostensible trajectories. `reference` (may be
/// empty) holds the reference state at every step for fidelity output.
QuantumEnsembleResult run_quantum_ensemble(const ThreeLevelScenario& sc, const Record& record,
                                           const std::vector<Mat<3>>& reference,
                                           const QuantumEnsembleConfig& cfg);

struct TwoStepOracleReport {
  double norm_identity_error = 0.0;  // (a) max over R
  double state_error = 0.0;          // (b) max over R, elementwise
  double bg_discrepancy = 0.0;       // (c) max over R, elementwise
  bool passed(double tol = 1e-12) const {
    return norm_identity_error <= tol && state_error <= tol;
  }
};

/// Exhaustive two-step enumeration with both channels discretized to
/// +-1/sqrt(dt), ostensible probability 1/2 each and lambda = mu = 0.
TwoStepOracleReport two_step_oracle(const ThreeLevelScenario& sc, double dt);

}  // namespace trajkit
