// Copyright 2026 The cqad Authors
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

#include <cmath>

#include <benchmark/benchmark.h>

#include "cqad/experiments.hpp"

namespace {

using namespace cqad;

DensityState plus_vacuum(const HilbertSpace& space) {
  const double h = 1.0 / std::sqrt(2.0);
  return product_state(space, qubit_pure_state(h, h), fock_projector(space.cutoff_a(), 0),
                       fock_projector(space.cutoff_b(), 0));
}

// One master-equation right-hand side; arg is the per-mode cutoff.
void BM_MasterRhsFull(benchmark::State& state) {
  const Index n = state.range(0);
  const HilbertSpace space(n, n);
  const auto params = desk_scale_params(Profile::kCiFast).params;
  const auto eq = MasterEquation::build(params, space, ModelKind::kFull);
  const DenseMatrix rho = plus_vacuum(space).matrix();
  DenseMatrix out;
  DenseMatrix scratch;
  double t = 0.0;
  for (auto _ : state) {
    eq.rhs(t, rho, out, scratch);
    t += 1e-3;
    benchmark::DoNotOptimize(out.data());
  }
  state.counters["dim"] = static_cast<double>(space.dim());
}
BENCHMARK(BM_MasterRhsFull)->Arg(6)->Arg(8)->Arg(12);

// Fixed-step evolution over one output interval of the ci_fast full model.
void BM_EvolveFullCiFast(benchmark::State& state) {
  const DeskScale desk = desk_scale_params(Profile::kCiFast);
  const HilbertSpace space(desk.cutoffs.a, desk.cutoffs.b);
  const auto eq = MasterEquation::build(desk.params, space, ModelKind::kFull);
  const auto rho0 = plus_vacuum(space);
  StepperConfig config;
  config.output_interval = 0.1;
  config.leakage_bound = desk.leakage_bound;
  config.check_positivity = false;
  for (auto _ : state) {
    const auto report = evolve(eq, rho0, 0.1, config);
    benchmark::DoNotOptimize(report.steps);
    state.counters["steps"] = static_cast<double>(report.steps);
  }
}
BENCHMARK(BM_EvolveFullCiFast)->Unit(benchmark::kMillisecond);

// Lyapunov integration of the published parameters over 100 us.
void BM_LyapunovPaper(benchmark::State& state) {
  const auto model = GaussianModel::from_params(paper_parameters());
  for (auto _ : state) {
    auto states = lyapunov_evolve(model, CovarianceState::vacuum(), 100.0, 1.0);
    benchmark::DoNotOptimize(states.back().sigma.data());
  }
}
BENCHMARK(BM_LyapunovPaper)->Unit(benchmark::kMicrosecond);

void BM_ExtractCovariance(benchmark::State& state) {
  const Index n = state.range(0);
  const HilbertSpace space(n, n);
  const auto modes = partial_trace_qubit(plus_vacuum(space));
  for (auto _ : state) {
    const auto cov = extract_covariance(modes);
    benchmark::DoNotOptimize(cov.sigma.data());
  }
}
BENCHMARK(BM_ExtractCovariance)->Arg(8)->Arg(14)->Arg(30);

void BM_LogNegativity(benchmark::State& state) {
  auto cov = CovarianceState::thermal(0.1, 0.2);
  cov.sigma(0, 3) = cov.sigma(3, 0) = -0.3;
  cov.sigma(1, 2) = cov.sigma(2, 1) = -0.3;
  for (auto _ : state) benchmark::DoNotOptimize(log_negativity(cov).log_negativity);
}
BENCHMARK(BM_LogNegativity);

}  // namespace

BENCHMARK_MAIN();
