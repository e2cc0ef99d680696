// Copyright 2026 The hermflow Authors.
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

#include <benchmark/benchmark.h>

#include "hermflow/flow.hpp"
#include "hermflow/hermite.hpp"
#include "hermflow/operators.hpp"
#include "hermflow/residuals.hpp"
#include "hermflow/rng.hpp"
#include "hermflow/semigroup.hpp"
#include "hermflow/solutions.hpp"

namespace {

using namespace hermflow;

void BM_HermiteEval(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  double x = 0.3;
  for (auto _ : state) {
    benchmark::DoNotOptimize(hermite_eval_1d(n, x));
    x += 1e-9;
  }
  state.SetItemsProcessed(state.iterations() * (n + 1));
}
BENCHMARK(BM_HermiteEval)->Arg(40)->Arg(400)->Arg(4000);

void BM_BasisValues2d(benchmark::State& state) {
  const MultiIndexSet set(2, static_cast<int>(state.range(0)));
  Point x(2);
  x << 0.3, -0.7;
  for (auto _ : state) benchmark::DoNotOptimize(basis_values(set, x));
}
BENCHMARK(BM_BasisValues2d)->Arg(10)->Arg(30);

void BM_GaussHermiteRule(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(gauss_hermite_rule(static_cast<int>(state.range(0))));
}
BENCHMARK(BM_GaussHermiteRule)->Arg(60)->Arg(200);

void BM_GalerkinGenerator(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const SdeModel model = trig_model();
  const QuadratureRule rule = gauss_hermite_rule(n + 20);
  for (auto _ : state) {
    benchmark::DoNotOptimize(assemble_galerkin(OperatorTag::Generator, 0, model, n, rule));
  }
}
BENCHMARK(BM_GalerkinGenerator)->Arg(20)->Arg(60)->Unit(benchmark::kMicrosecond);

void BM_NormalStream(benchmark::State& state) {
  const NormalStream s(1, 2);
  std::uint64_t i = 0;
  for (auto _ : state) benchmark::DoNotOptimize(s.normal(i++));
}
BENCHMARK(BM_NormalStream);

void BM_SimulateFlow(benchmark::State& state) {
  const SdeModel model = trig_model();
  std::vector<Point> nodes;
  for (int j = 0; j < state.range(0); ++j) nodes.push_back(point1(-1.0 + 2.0 * j / state.range(0)));
  std::uint64_t id = 0;
  for (auto _ : state) benchmark::DoNotOptimize(simulate_flow(model, nodes, 0.5, 1e-3, 7, id++));
  state.SetItemsProcessed(state.iterations() * state.range(0) * 500);
}
BENCHMARK(BM_SimulateFlow)->Arg(1)->Arg(64)->Unit(benchmark::kMillisecond);

void BM_PairingCoefficients(benchmark::State& state) {
  const InitialCondition psi = bump_initial(1.0, 0.0, 1.0);
  const FlowEnsemble e = simulate_flow(trig_model(), psi.ensemble_nodes(), 0.1, 1e-3, 3, 0);
  const FlowPairing pairing(psi, e);
  for (auto _ : state) benchmark::DoNotOptimize(pairing.coeffs(100, static_cast<int>(state.range(0))));
}
BENCHMARK(BM_PairingCoefficients)->Arg(20)->Arg(60);

void BM_GaussianSemigroup(benchmark::State& state) {
  const GaussianTransitionSemigroup sg(ou_model(0.8, 0.5));
  const TestFunction f = bump_function(1.0, 0.0, 1.5);
  for (auto _ : state) benchmark::DoNotOptimize(sg.pair_value(f, 0.3, {point1(0.2)}, {1.0}, 0));
}
BENCHMARK(BM_GaussianSemigroup);

void BM_StrongResidual(benchmark::State& state) {
  const InitialCondition psi = delta_initial(point1(0.3));
  const FlowEnsemble e = simulate_flow(trig_model(), psi.ensemble_nodes(), 0.5, 1e-3, 3, 0);
  const TestFunction h0 = hermite_test_function(MultiIndex{0});
  for (auto _ : state) benchmark::DoNotOptimize(strong_residual(psi, h0, e));
}
BENCHMARK(BM_StrongResidual)->Unit(benchmark::kMicrosecond);

}  // namespace
BENCHMARK_MAIN();
