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

#include "support/oracles.hpp"

#include <cmath>

namespace trajkit::testing {

Mat<3> me_analytic(const ThreeLevelScenario& sc, double t) {
  const Ket<3> psi = sc.initial.amplitudes / sc.initial.amplitudes.norm();
  const Mat<3> r0 = psi * psi.adjoint();
  const double g = sc.gamma1 + sc.gamma2;
  const double decay = std::exp(-g * t);
  const double half = std::exp(-0.5 * g * t);
  const double moved = r0(2, 2).real() * (1.0 - decay);
  Mat<3> r = Mat<3>::Zero();
  r(0, 0) = r0(0, 0) + sc.gamma1 / g * moved;
  r(1, 1) = r0(1, 1) + sc.gamma2 / g * moved;
  r(2, 2) = r0(2, 2) * decay;
  r(0, 1) = r0(0, 1);
  r(1, 0) = r0(1, 0);
  r(0, 2) = r0(0, 2) * half;
  r(2, 0) = r0(2, 0) * half;
  r(1, 2) = r0(1, 2) * half;
  r(2, 1) = r0(2, 1) * half;
  return r;
}

double kalman_variance_reference(double k, double b, double beta, double v0, double dt, double t) {
  const long steps = std::lround(t / dt);
  double v = v0;
  for (long i = 0; i < steps; ++i) v += dt * (-v * v / beta - 2.0 * k * v + b * b);
  return v;
}

}  // namespace trajkit::testing
