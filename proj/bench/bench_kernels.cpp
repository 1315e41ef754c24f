// Copyright 2026 The BubbleCut Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


// Serial reference loops against their OpenMP variants for the per-node
// kernels, plus the sequential distance and max-flow stages for scale.
// Thread count: OMP_NUM_THREADS, capped by BUBBLECUT_THREADS.

#include <benchmark/benchmark.h>

#include <cmath>

#include "bubblecut/convexify.hpp"
#include "bubblecut/cut.hpp"
#include "bubblecut/geometry.hpp"
#include "bubblecut/metrics.hpp"

namespace {

using namespace bubblecut;

MetricGrid bench_grid(int n) { return poincare_disk(n, 0.8, 0.75); }

ScalarField bowl(const MetricGrid& grid) {
  ScalarField f(grid.nx(), grid.ny());
  for (NodeId k = 0; k < grid.size(); ++k) {
    if (!grid.in_domain(k)) continue;
    const double x = grid.x(grid.col(k));
    const double y = grid.y(grid.row(k));
    f.set(k, x * x + 2.0 * y * y + 0.3 * std::sin(3.0 * x));
  }
  return f;
}

Exec exec_of(const benchmark::State& state) {
  return state.range(1) == 0 ? Exec::serial : Exec::parallel;
}

void label(benchmark::State& state) {
  state.SetLabel(state.range(1) == 0 ? "serial" : "parallel");
  state.counters["nodes"] = static_cast<double>(state.range(0) * state.range(0));
}

void BM_CutGraph(benchmark::State& state) {
  const MetricGrid grid = bench_grid(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(build_cut_graph(grid, exec_of(state)));
  label(state);
}

void BM_LevelCurvature(benchmark::State& state) {
  const MetricGrid grid = bench_grid(static_cast<int>(state.range(0)));
  const ScalarField f = bowl(grid);
  const double floor = default_grad_floor(grid, f);
  for (auto _ : state) benchmark::DoNotOptimize(level_mean_curvature(grid, f, floor, exec_of(state)));
  label(state);
}

void BM_Mollify(benchmark::State& state) {
  const MetricGrid grid = bench_grid(static_cast<int>(state.range(0)));
  const ScalarField f = bowl(grid);
  const double eps = 6.0 * 2.0 * grid.h();
  for (auto _ : state) benchmark::DoNotOptimize(mollify(grid, f, eps, exec_of(state)));
  label(state);
}

void BM_Verify(benchmark::State& state) {
  const MetricGrid grid = bench_grid(static_cast<int>(state.range(0)));
  const ScalarField f = bowl(grid);
  const ScalarField phi = ScalarField::constant(grid, 0.0);
  const double floor = default_grad_floor(grid, f);
  for (auto _ : state) {
    benchmark::DoNotOptimize(verify_mean_convex(grid, f, phi, floor, exec_of(state)));
  }
  label(state);
}

void BM_Distance(benchmark::State& state) {
  const MetricGrid grid = bench_grid(static_cast<int>(state.range(0)));
  const Region source = disk_region(grid, 0.0, 0.0, 0.05);
  for (auto _ : state) benchmark::DoNotOptimize(distance_transform(grid, source));
  state.counters["nodes"] = static_cast<double>(state.range(0) * state.range(0));
}

void BM_MinCut(benchmark::State& state) {
  const MetricGrid grid = bench_grid(static_cast<int>(state.range(0)));
  const CutGraph graph = build_cut_graph(grid);
  CutProblem problem;
  problem.graph = &graph;
  problem.phi = ScalarField::constant(grid, 2.5);
  problem.must_include = Region::empty_like(grid);
  problem.must_exclude = boundary_layer(grid, Region::domain_of(grid));
  for (auto _ : state) benchmark::DoNotOptimize(minimize_phi_area(problem));
  state.counters["nodes"] = static_cast<double>(state.range(0) * state.range(0));
}

void kernel_args(benchmark::internal::Benchmark* b) {
  for (int n : {128, 256}) {
    for (int parallel : {0, 1}) b->Args({n, parallel});
  }
  b->Unit(benchmark::kMillisecond);
}

BENCHMARK(BM_CutGraph)->Apply(kernel_args);
BENCHMARK(BM_LevelCurvature)->Apply(kernel_args);
BENCHMARK(BM_Mollify)->Apply(kernel_args);
BENCHMARK(BM_Verify)->Apply(kernel_args);
BENCHMARK(BM_Distance)->Arg(128)->Arg(256)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_MinCut)->Arg(128)->Arg(256)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
