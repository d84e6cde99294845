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

#include "trajkit/statekit.hpp"

#include <algorithm>

namespace trajkit {

double purity(const Eigen::MatrixXcd& rho) {
  if (rho.rows() != rho.cols()) throw Error("purity: matrix is not square");
  return (rho * rho).trace().real();
}

double quantum_fidelity(const Eigen::MatrixXcd& rho1, const Eigen::MatrixXcd& rho2) {
  if (rho1.rows() != rho1.cols() || rho2.rows() != rho2.cols() || rho1.rows() != rho2.rows()) {
    throw Error("quantum_fidelity: dimension mismatch");
  }
  auto sqrt_psd = [](const Eigen::MatrixXcd& m) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(0.5 * (m + m.adjoint()));
    Eigen::VectorXd ev = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
    return Eigen::MatrixXcd(es.eigenvectors() * ev.asDiagonal() * es.eigenvectors().adjoint());
  };
  const Eigen::MatrixXcd s = sqrt_psd(rho1);
  const Eigen::MatrixXcd inner = s * rho2 * s;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(0.5 * (inner + inner.adjoint()),
                                                     Eigen::EigenvaluesOnly);
  return es.eigenvalues().cwiseMax(0.0).cwiseSqrt().sum();
}

namespace tla {

Mat<2> sigma_x() {
  Mat<2> m;
  m << 0.0, 1.0, 1.0, 0.0;
  return m;
}

Mat<2> sigma_y() {
  Mat<2> m;
  m << 0.0, cplx(0.0, -1.0), cplx(0.0, 1.0), 0.0;
  return m;
}

Mat<2> sigma_z() {
  Mat<2> m;
  m << 1.0, 0.0, 0.0, -1.0;
  return m;
}

Mat<2> sigma_minus() {
  Mat<2> m;
  m << 0.0, 0.0, 1.0, 0.0;
  return m;
}

Ket<2> excited() { return Ket<2>(1.0, 0.0); }
Ket<2> ground() { return Ket<2>(0.0, 1.0); }

}  // namespace tla

BlochVector bloch_decompose(const Mat<2>& rho) {
  BlochVector b;
  b.norm_weight = (rho(0, 0) + rho(1, 1)).real();
  b.x = (rho(0, 1) + rho(1, 0)).real();
  b.y = (cplx(0.0, 1.0) * (rho(0, 1) - rho(1, 0))).real();
  b.z = (rho(0, 0) - rho(1, 1)).real();
  return b;
}

Mat<2> bloch_compose(const BlochVector& b) {
  Mat<2> m;
  m << 0.5 * (b.norm_weight + b.z), 0.5 * cplx(b.x, -b.y),
      0.5 * cplx(b.x, b.y), 0.5 * (b.norm_weight - b.z);
  return m;
}

double classical_fidelity(const Gaussian& p1, const Gaussian& p2) {
  if (!(p1.variance > 0.0) || !(p2.variance > 0.0)) {
    throw Error("classical_fidelity: variances must be positive");
  }
  const double vs = p1.variance + p2.variance;
  const double dm = p1.mean - p2.mean;
  return std::sqrt(2.0 * std::sqrt(p1.variance * p2.variance) / vs) * std::exp(-dm * dm / (4.0 * vs));
}

double classical_fidelity(std::span<const double> p1, std::span<const double> p2, double dx) {
  if (p1.size() != p2.size()) throw Error("classical_fidelity: grid size mismatch");
  double acc = 0.0;
  for (std::size_t i = 0; i < p1.size(); ++i) {
    acc += std::sqrt(std::max(p1[i], 0.0) * std::max(p2[i], 0.0));
  }
  return acc * dx;
}

}  // namespace trajkit
