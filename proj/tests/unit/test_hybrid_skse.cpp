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

#include <doctest.h>

#include <cmath>

#include "trajkit/hybrid_skse.hpp"

using namespace trajkit;

namespace {

// A generic mixed joint state: position-dependent Bloch vector inside the ball.
HybridGridState wiggly_state(const Grid& g) {
  HybridGridState s;
  const auto p = grid_density(Gaussian{0.2, 0.8}, g);
  for (std::size_t i = 0; i < g.points; ++i) {
    const double x = g.x(i);
    s.P.push_back(p[i]);
    s.X.push_back(0.5 * std::sin(x) * p[i]);
    s.Y.push_back(0.3 * std::cos(2.0 * x) * p[i]);
    s.Z.push_back(-0.6 * std::tanh(x) * p[i]);
  }
  return s;
}

double max_diff(const HybridGridState& a, const HybridGridState& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    m = std::max({m, std::abs(a.P[i] - b.P[i]), std::abs(a.X[i] - b.X[i]), std::abs(a.Y[i] - b.Y[i]),
                  std::abs(a.Z[i] - b.Z[i])});
  }
  return m;
}

}  // namespace

TEST_CASE("component right-hand side matches the operator form") {
  HybridScenario sc;
  Grid g;
  const HybridGridState s = wiggly_state(g);
  const auto mats = to_matrices(s);
  CHECK(max_diff(from_matrices(mats), s) < 1e-15);
  SkseTerms all;
  CHECK(max_diff(skse_rhs(s, sc, g, all), from_matrices(skse_operator_rhs(mats, sc, g, all))) < 1e-10);
  for (int k = 0; k < 4; ++k) {
    SkseTerms one{false, false, false, false, false};
    (k == 0 ? one.quantum : k == 1 ? one.drift : k == 2 ? one.diffusion : one.coupling) = true;
    CHECK(max_diff(skse_rhs(s, sc, g, one), from_matrices(skse_operator_rhs(mats, sc, g, one))) < 1e-10);
  }
}

TEST_CASE("coupling and transport conserve the x-integral of the Bloch components") {
  HybridScenario sc;
  Grid g;
  const HybridGridState s = wiggly_state(g);
  const SkseTerms transport{false, true, true, true, false};
  const auto d = skse_rhs(s, sc, g, transport);
  double p = 0.0, x = 0.0, z = 0.0;
  for (std::size_t i = 0; i < g.points; ++i) {
    p += d.P[i];
    x += d.X[i];
    z += d.Z[i];
  }
  CHECK(std::abs(p) < 1e-10);
  CHECK(std::abs(x) < 1e-10);
  CHECK(std::abs(z) < 1e-10);
}

TEST_CASE("detector relaxes to the OU stationary law") {
  HybridScenario sc;
  sc.gamma = 1e-12;
  sc.omega = 0.0;
  Grid g;
  HybridGridState s = hybrid_initial_grid(sc, g);
  const SkseTerms terms{false, true, true, false, false};
  for (int k = 0; k < 20000; ++k) skse_grid_step(s, 0.0, sc.dt, sc, g, terms);
  const auto m = grid_marginals(s, g);
  CHECK(m.mean == doctest::Approx(0.0).epsilon(1e-6));
  CHECK(m.variance == doctest::Approx(1.0).epsilon(5e-3));
}

TEST_CASE("Rabi rotation without decay") {
  HybridScenario sc;
  sc.gamma = 1e-300;
  Grid g;
  HybridGridState s = hybrid_initial_grid(sc, g);
  const SkseTerms terms{true, true, true, false, false};
  const double t = 0.3;
  const auto steps = static_cast<int>(std::lround(t / sc.dt));
  for (int k = 0; k < steps; ++k) skse_grid_step(s, 0.0, sc.dt, sc, g, terms);
  const auto m = grid_marginals(s, g);
  CHECK(m.bloch.y == doctest::Approx(std::sin(sc.omega * t)).epsilon(1e-9));
  CHECK(m.bloch.z == doctest::Approx(-std::cos(sc.omega * t)).epsilon(1e-9));
  CHECK(m.bloch.length() == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("marginalization matches the atomic master equation") {
  HybridScenario sc;
  sc.t_final = 2.0;
  CHECK(hybrid_marginalization_error(sc) < 1e-3);
}

TEST_CASE("grid step guards and invariants") {
  HybridScenario sc;
  Grid g;
  HybridGridState s = hybrid_initial_grid(sc, g);
  CHECK_THROWS_AS(skse_grid_step(s, 0.0, 1e-2, sc, g), Error);  // CFL
  for (int k = 0; k < 400; ++k) skse_grid_step(s, 0.5, sc.dt, sc, g);
  double mass = 0.0;
  for (double p : s.P) mass += p * g.dx();
  CHECK(mass == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(physicality_violation(s) == 0.0);
  CHECK(boundary_mass(s, g) < 1e-6);

  HybridGridState bad = s;
  bad.Z[120] = 2.0 * bad.P[120];
  CHECK(physicality_violation(bad) > 0.0);
  HybridGridState wrong;
  CHECK_THROWS_AS(skse_grid_step(wrong, 0.0, sc.dt, sc, g), Error);
}

TEST_CASE("drift from bandwidth") {
  HybridScenario sc;
  const Mat<2> g = tla::ground() * tla::ground().adjoint();
  const auto dg = drift_from_bandwidth(sc, g);
  CHECK(dg.a_offset == 0.0);
  CHECK(dg.a_slope == -2.0);
  CHECK(dg.d == 2.0);
  const Ket<2> plus = (tla::excited() + tla::ground()) / std::sqrt(2.0);
  CHECK(drift_from_bandwidth(sc, plus * plus.adjoint()).a_offset == doctest::Approx(2.0));
  CHECK(dg(1.5) == doctest::Approx(-3.0));
}

TEST_CASE("measurement operator") {
  HybridScenario sc;
  sc.omega = 0.0;
  const Mat<2> m = hybrid_measurement_op(0.0, 0.01, sc);
  const Mat<2> s = tla::sigma_minus();
  CHECK((m - (Mat<2>::Identity() - 0.005 * sc.gamma * s.adjoint() * s)).cwiseAbs().maxCoeff() < 1e-16);
}

TEST_CASE("ostensible particle step") {
  HybridScenario sc;
  sc.gamma = 1e-300;
  HybridTrajectory t;
  t.direction = tla::ground();
  CHECK(hybrid_adaptive_mu(t, sc) == 0.0);
  const double dt = 1e-4;
  const auto next = hybrid_ostensible_step(t, 0.0, 3.0, dt, sc, {0.0, 0.0, Scheme::ito});
  // Pure rotation: the norm changes only at O(dt^2).
  CHECK(std::abs(next.quantum.log_p) < 2.0 * sc.omega * sc.omega * dt * dt);
  CHECK(next.x == doctest::Approx(dt * sc.bandwidth * 3.0));
  // Ito and likelihood forms agree to first order.
  HybridScenario full;
  t.direction = Ket<2>(0.6, 0.8);
  const auto a = hybrid_ostensible_step(t, 1.0, 2.0, dt, full, {0.3, 0.5, Scheme::ito});
  const auto b = hybrid_ostensible_step(t, 1.0, 2.0, dt, full, {0.3, 0.5, Scheme::likelihood});
  CHECK(std::abs(a.log_weight() - b.log_weight()) < 10.0 * dt);
  CHECK((a.direction - b.direction).norm() < 10.0 * dt);
}

TEST_CASE("estimator") {
  HybridTrajectory t;
  t.direction = Ket<2>(0.6, 0.8);
  t.x = 0.7;
  const auto e = estimate_hybrid({t});
  CHECK(e.mean == doctest::Approx(0.7));
  CHECK(e.variance == doctest::Approx(0.0));
  CHECK(e.bloch.z == doctest::Approx(0.36 - 0.64));
  CHECK_THROWS_AS(estimate_hybrid({}), Error);
}

TEST_CASE("one-step enumeration oracle") {
  const auto rep = hybrid_one_step_oracle(HybridScenario{}, 0.01);
  CHECK(rep.exact_error < 1e-12);
  CHECK(rep.order_ratio() > 3.0);
  CHECK(rep.order_ratio() < 5.5);
  CHECK(rep.joint_order_ratio() == doctest::Approx(std::pow(2.0, 1.5)).epsilon(0.05));
  CHECK(rep.passed());
}

TEST_CASE("initial estimate and reproducibility") {
  HybridScenario sc;
  sc.t_final = 0.05;
  const auto ref = hybrid_reference_run(sc, 3);
  CHECK(ref.marginals.front().bloch.z == doctest::Approx(-1.0));
  CHECK(ref.marginals.front().variance == doctest::Approx(0.1).epsilon(1e-6));
  HybridEnsembleConfig cfg;
  cfg.n = 100;
  cfg.sample_every = 50;
  cfg.bootstrap = 10;
  const auto a = run_hybrid_ensemble(sc, ref.record, cfg);
  const auto b = run_hybrid_ensemble(sc, ref.record, cfg);
  REQUIRE(a.estimate.size() == b.estimate.size());
  for (std::size_t i = 0; i < a.estimate.size(); ++i) {
    CHECK(a.estimate[i].mean == b.estimate[i].mean);
    CHECK(a.estimate[i].bloch.x == b.estimate[i].bloch.x);
  }
  CHECK(a.mean_se.size() == a.estimate.size());
}

TEST_CASE("scenario warnings") {
  HybridScenario sc;
  CHECK(sc.warnings().empty());
  sc.dt = 1e-3;
  CHECK_FALSE(sc.warnings().empty());
  HybridScenario bad;
  bad.bandwidth = 0.0;
  CHECK_THROWS_AS(bad.validate(), Error);
}
