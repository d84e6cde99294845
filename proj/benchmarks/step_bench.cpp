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

// Per-step costs of the solvers, plus one small ensemble per module.

#include <benchmark/benchmark.h>

#include <cmath>

#include "trajkit/bg_appendix.hpp"
#include "trajkit/classical_filter.hpp"
#include "trajkit/hybrid_skse.hpp"
#include "trajkit/quantum_traj.hpp"

namespace {

using namespace trajkit;

void BM_MeStep(benchmark::State& state) {
  const auto sc = ThreeLevelScenario::fig2();
  Mat<3> rho = dm_from_pure(sc.initial).elements;
  for (auto _ : state) {
    rho = me_step(rho, sc.dt, sc);
    benchmark::DoNotOptimize(rho);
  }
}
BENCHMARK(BM_MeStep);

void BM_OstensibleStep(benchmark::State& state) {
  const auto sc = ThreeLevelScenario::fig2();
  OstensibleState s = OstensibleState::from_ket(sc.initial.amplitudes);
  OssseParams p;
  p.scheme = state.range(0) ? Scheme::likelihood : Scheme::ito;
  for (auto _ : state) {
    s = ossse_step(s, 0.4, -0.7, sc.dt, sc, p);
    benchmark::DoNotOptimize(s);
  }
}
BENCHMARK(BM_OstensibleStep)->Arg(0)->Arg(1);

void BM_ClassicalGridStep(benchmark::State& state) {
  ClassicalScenario sc;
  Grid g;
  g.points = static_cast<std::size_t>(state.range(0));
  sc.dt = 0.5 * g.dx() * g.dx();
  std::vector<double> p = grid_density(sc.initial, g);
  for (auto _ : state) {
    kse_grid_step(p, 0.1, sc.dt, sc, g);
    benchmark::DoNotOptimize(p.data());
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_ClassicalGridStep)->Arg(121)->Arg(241)->Arg(481);

void BM_ClassicalWeightStep(benchmark::State& state) {
  ClassicalScenario sc;
  LogWeight w;
  for (auto _ : state) {
    w = particle_weight_step(w, 0.3, 0.2, 0.1, sc.dt, sc, 0.0, 0.0);
    benchmark::DoNotOptimize(w);
  }
}
BENCHMARK(BM_ClassicalWeightStep);

void BM_HybridGridStep(benchmark::State& state) {
  HybridScenario sc;
  Grid g;
  HybridGridState s = hybrid_initial_grid(sc, g);
  for (auto _ : state) {
    skse_grid_step(s, 0.2, sc.dt, sc, g);
    benchmark::DoNotOptimize(s.P.data());
  }
}
BENCHMARK(BM_HybridGridStep);

void BM_HybridParticleStep(benchmark::State& state) {
  HybridScenario sc;
  HybridTrajectory t;
  t.direction = tla::ground();
  const HybridStepParams p{0.0, 0.0, Scheme::likelihood};
  for (auto _ : state) {
    t = hybrid_ostensible_step(t, 0.2, 0.5, sc.dt, sc, p);
    benchmark::DoNotOptimize(t);
  }
}
BENCHMARK(BM_HybridParticleStep);

void BM_AppendixSteps(benchmark::State& state) {
  BGScenario sc;
  const Mat<2> rho0 = tla::excited() * tla::excited().adjoint();
  Mat<2> bg = rho0;
  LinearState ours{rho0, {}};
  for (auto _ : state) {
    bg = bg_step(bg, 0.01, -0.02, sc);
    ours = ours_linear_step(ours, 0.3, -0.4, 0.0, 0.0, sc);
    benchmark::DoNotOptimize(bg);
    benchmark::DoNotOptimize(ours);
  }
}
BENCHMARK(BM_AppendixSteps);

void BM_QuantumEnsemble(benchmark::State& state) {
  auto sc = ThreeLevelScenario::fig2();
  sc.t_final = 0.5;
  const SmeRun ref = sme_run(sc, 1);
  QuantumEnsembleConfig cfg;
  cfg.n = static_cast<std::size_t>(state.range(0));
  cfg.sample_every = 100;
  for (auto _ : state) benchmark::DoNotOptimize(run_quantum_ensemble(sc, ref.record, ref.rho, cfg));
  state.SetItemsProcessed(state.iterations() * state.range(0) * static_cast<std::int64_t>(sc.steps()));
}
BENCHMARK(BM_QuantumEnsemble)->Arg(100)->Arg(1000)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
