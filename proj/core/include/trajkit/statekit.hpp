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

// Dense linear algebra for 2- and 3-level systems: state types, the Lindblad
// and measurement superoperators, Bloch decomposition and fidelities.
//
// Two-level convention: basis index 0 is |e>, index 1 is |g>, so that
// sigma_z |e> = +|e>, sigma_z = diag(1, -1) and the lowering operator
// sigma = |g><e| = (sigma_x - i sigma_y) / 2.

#include <cmath>
#include <complex>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>

#include <Eigen/Dense>

namespace trajkit {

using cplx = std::complex<double>;

template <int D>
using Ket = Eigen::Matrix<cplx, D, 1>;
template <int D>
using Mat = Eigen::Matrix<cplx, D, D>;

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Numerical tolerances used by the state validators. All are overridable.
struct Tolerances {
  double norm = 1e-10;
  double hermitian = 1e-10;
  double trace = 1e-8;
  double positivity = 1e-8;
};

template <int D>
struct PureState {
  Ket<D> amplitudes = Ket<D>::Zero();
  // Ostensible states are deliberately left unnormalized.
  bool normalized = true;

  static PureState from_amplitudes(const Ket<D>& amps, bool normalize = true) {
    PureState s;
    s.amplitudes = amps;
    s.normalized = normalize;
    if (normalize) {
      const double n = amps.norm();
      if (!(n > 0.0) || !std::isfinite(n)) throw Error("PureState: zero or non-finite norm");
      s.amplitudes /= n;
    }
    return s;
  }

  double norm_squared() const { return amplitudes.squaredNorm(); }
};

template <int D>
struct DensityMatrix {
  Mat<D> elements = Mat<D>::Zero();

  cplx operator()(int i, int j) const { return elements(i, j); }
  double trace() const { return elements.trace().real(); }
};

template <int D>
struct SystemOperator {
  Mat<D> elements = Mat<D>::Zero();
  std::string label;
};

/// X, Y, Z plus the P (trace) component of rho = (P 1 + X sx + Y sy + Z sz) / 2.
struct BlochVector {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;
  double norm_weight = 1.0;

  double length() const { return std::sqrt(x * x + y * y + z * z); }
};

template <int D>
DensityMatrix<D> dm_from_pure(const PureState<D>& psi) {
  if (!psi.amplitudes.allFinite()) throw Error("dm_from_pure: non-finite amplitudes");
  return {psi.amplitudes * psi.amplitudes.adjoint()};
}

/// Largest element-wise deviation from Hermiticity.
template <int D>
double hermiticity_error(const Mat<D>& m) {
  return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

template <int D>
Mat<D> hermitian_part(const Mat<D>& m) {
  return 0.5 * (m + m.adjoint());
}

template <int D>
double min_eigenvalue(const Mat<D>& m) {
  Eigen::SelfAdjointEigenSolver<Mat<D>> es(hermitian_part<D>(m), Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

/// Throws if rho is not a valid (normalized) density matrix within `tol`.
template <int D>
void validate(const DensityMatrix<D>& rho, const Tolerances& tol = {}) {
  if (!rho.elements.allFinite()) throw Error("density matrix has non-finite entries");
  if (hermiticity_error<D>(rho.elements) > tol.hermitian) throw Error("density matrix is not Hermitian");
  if (std::abs(rho.trace() - 1.0) > tol.trace) throw Error("density matrix trace differs from one");
  if (min_eigenvalue<D>(rho.elements) < -tol.positivity) throw Error("density matrix is not positive");
}

/// Tr[rho^2].
template <int D>
double purity(const DensityMatrix<D>& rho) {
  return (rho.elements * rho.elements).trace().real();
}

/// Runtime-sized overload; rejects non-square input.
double purity(const Eigen::MatrixXcd& rho);

/// Square root of a positive semidefinite Hermitian matrix. Eigenvalues are
/// clipped at zero first so Monte-Carlo estimates with small negative
/// eigenvalues are handled.
template <int D>
Mat<D> psd_sqrt(const Mat<D>& m) {
  Eigen::SelfAdjointEigenSolver<Mat<D>> es(hermitian_part<D>(m));
  Eigen::Matrix<double, D, 1> ev = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  return es.eigenvectors() * ev.asDiagonal() * es.eigenvectors().adjoint();
}

/// Uhlmann fidelity Tr sqrt( sqrt(rho1) rho2 sqrt(rho1) ).
template <int D>
double quantum_fidelity(const Mat<D>& rho1, const Mat<D>& rho2) {
  const Mat<D> s = psd_sqrt<D>(rho1);
  const Mat<D> inner = hermitian_part<D>(Mat<D>(s * rho2 * s));
  Eigen::SelfAdjointEigenSolver<Mat<D>> es(inner, Eigen::EigenvaluesOnly);
  return es.eigenvalues().cwiseMax(0.0).cwiseSqrt().sum();
}

template <int D>
double quantum_fidelity(const DensityMatrix<D>& rho1, const DensityMatrix<D>& rho2) {
  return quantum_fidelity<D>(rho1.elements, rho2.elements);
}

/// Runtime-sized overload; throws on dimension mismatch.
double quantum_fidelity(const Eigen::MatrixXcd& rho1, const Eigen::MatrixXcd& rho2);

/// D[A] rho = A rho A^+ - A^+A rho / 2 - rho A^+A / 2.
template <int D>
Mat<D> lindblad_dissipator(const Mat<D>& a, const Mat<D>& rho) {
  const Mat<D> ada = a.adjoint() * a;
  return a * rho * a.adjoint() - 0.5 * (ada * rho + rho * ada);
}

template <int D>
Mat<D> lindblad_dissipator(const SystemOperator<D>& a, const DensityMatrix<D>& rho) {
  return lindblad_dissipator<D>(a.elements, rho.elements);
}

/// H[A] rho = A rho + rho A^+ - Tr[A rho + rho A^+] rho.
template <int D>
Mat<D> h_superop(const Mat<D>& a, const Mat<D>& rho) {
  const Mat<D> s = a * rho + rho * a.adjoint();
  return s - s.trace() * rho;
}

template <int D>
Mat<D> h_superop(const SystemOperator<D>& a, const DensityMatrix<D>& rho) {
  return h_superop<D>(a.elements, rho.elements);
}

/// -i [H, rho].
template <int D>
Mat<D> commutator_term(const Mat<D>& h, const Mat<D>& rho) {
  return cplx(0.0, -1.0) * (h * rho - rho * h);
}

template <int D>
double expectation(const Mat<D>& op, const Mat<D>& rho) {
  return (op * rho).trace().real();
}

template <int D>
double expectation(const Mat<D>& op, const Ket<D>& psi) {
  return (psi.adjoint() * op * psi)(0, 0).real();
}

// Two-level operators in the (|e>, |g>) basis.
namespace tla {
Mat<2> sigma_x();
Mat<2> sigma_y();
Mat<2> sigma_z();
/// |g><e|.
Mat<2> sigma_minus();
Ket<2> excited();
Ket<2> ground();
}  // namespace tla

BlochVector bloch_decompose(const Mat<2>& rho);
Mat<2> bloch_compose(const BlochVector& b);

/// Gaussian law for the classical fidelity.
struct Gaussian {
  double mean = 0.0;
  double variance = 1.0;
};

/// Closed form of int sqrt(P1 P2) dx for two Gaussians.
double classical_fidelity(const Gaussian& p1, const Gaussian& p2);

/// Riemann sum of sqrt(P1 P2) dx for densities sampled on the same uniform grid.
double classical_fidelity(std::span<const double> p1, std::span<const double> p2, double dx);

}  // namespace trajkit
