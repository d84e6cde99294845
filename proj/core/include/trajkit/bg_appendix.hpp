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

// Damped two-level atom under homodyne-x detection of efficiency eta. Three
// solvers share one stored record: the exact conditional state, the
// normalized Brun-Goan extension with a fictitious channel for the lost
// fraction, and the linear ostensible method.

#include <cstdint>
#include <string>
#include <vector>

#include "trajkit/statekit.hpp"
#include "trajkit/stochproc.hpp"

namespace trajkit {

struct BGScenario {
  double gamma = 1.0;
  double eta = 0.4;
  double omega = 0.0;
  double dt = 1e-3;
  double t_final = 4.0;
  Ket<2> initial = Ket<2>(1.0, 0.0);  // |e>

  std::size_t steps() const;
  void validate() const;
  std::vector<std::string> warnings() const;
};

/// The stored real channel: dW per step plus the record r built from it.
struct BGRecord {
  Record record;           // r values
  std::vector<double> dw;  // innovations that generated r
  std::vector<Mat<2>> exact;  // reference state at each step, steps + 1
};

/// One step of the exact SME: conditions rho on dW, returning rho' and r with
/// r dt = dW + dt sqrt(eta gamma) <sigma_x>.
struct BGStep {
  Mat<2> rho;
  double r = 0.0;
};

BGStep sme_eta_step(const Mat<2>& rho, double dw, const BGScenario& sc, Scheme scheme = Scheme::likelihood);

/// Reference run; dW drawn from stream (seed, streams::kRecord + record_index).
BGRecord sme_eta_run(const BGScenario& sc, std::uint64_t seed, std::uint64_t record_index = 0,
                     Scheme scheme = Scheme::likelihood);

/// Brun-Goan extension: normalized update driven by the stored dW on the
/// real channel and d calW on the fictitious one.
Mat<2> bg_step(const Mat<2>& rho, double dw, double dcal_w, const BGScenario& sc,
               Scheme scheme = Scheme::likelihood);

/// Unnormalized state of the linear method, stored as a unit-trace matrix and
/// ln Tr.
struct LinearState {
  Mat<2> rho = Mat<2>::Zero();
  LogWeight weight;
};

/// H-bar_chi[A] rho = A rho + rho A^+ - chi rho.
Mat<2> h_bar(const Mat<2>& a, const Mat<2>& rho, double chi);

/// One step of the linear method given the real result r and the fictitious
/// result f (f dt = d calW + mu dt).
LinearState ours_linear_step(const LinearState& s, double r, double f, double lambda, double mu,
                             const BGScenario& sc, Scheme scheme = Scheme::likelihood);

struct BGEnsembleConfig {
  std::size_t n = 1000;
  double lambda = 0.0;
  double mu = 0.0;
  /// Real-channel mean taken from the trajectory state each step.
  bool adaptive_lambda = false;
  Scheme scheme = Scheme::likelihood;
  std::uint64_t seed = 1;
  std::uint64_t replicate = 0;
  std::size_t sample_every = 10;
};

struct BGSeries {
  std::vector<double> t;
  std::vector<BlochVector> exact, bg, ours;
};

/// Runs both ensembles on the stored record and samples the Bloch vectors.
BGSeries run_bg_comparison(const BGScenario& sc, const BGRecord& rec, const BGEnsembleConfig& cfg);

/// sqrt(mean over samples and x, y, z of (estimate - exact)^2).
double bloch_rms(const std::vector<BlochVector>& est, const std::vector<BlochVector>& exact);

struct ErrorVsEnsembleRow {
  std::size_t n = 0;
  double rms_bg = 0.0;
  double rms_ours = 0.0;
};

/// Replicate-averaged RMS error per ensemble size.
std::vector<ErrorVsEnsembleRow> error_vs_ensemble(const BGScenario& sc, const BGRecord& rec,
                                                  const std::vector<std::size_t>& n_list, std::size_t replicates,
                                                  const BGEnsembleConfig& base);

struct BGOracleReport {
  double ours_error = 0.0;      // linear method vs exact, two-step enumeration
  double bg_discrepancy = 0.0;  // BG average vs exact
  bool passed(double tol = 1e-12) const { return ours_error <= tol; }
};

/// Two steps, every channel discretized to +-1/sqrt(dt), lambda = mu = 0.
BGOracleReport bg_two_step_oracle(const BGScenario& sc);

}  // namespace trajkit
