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

#include <algorithm>
#include <cmath>
#include <limits>

#include "bubblecut/cut.hpp"
#include "bubblecut/error.hpp"
#include "bubblecut/geometry.hpp"
#include "bubblecut/maxflow.hpp"

namespace bubblecut {

namespace {

constexpr std::string_view kModule = "cut-solver";

void check_problem(const CutProblem& p) {
  if (p.graph == nullptr) fail(kModule, "missing graph");
  const CutGraph& g = *p.graph;
  auto same = [&](int nx, int ny) { return nx == g.nx() && ny == g.ny(); };
  if (!same(p.phi.nx(), p.phi.ny()) || !same(p.must_include.nx(), p.must_include.ny()) ||
      !same(p.must_exclude.nx(), p.must_exclude.ny())) {
    fail(kModule, "shape mismatch");
  }
  for (NodeId n = 0; n < g.size(); ++n) {
    if (p.must_include.contains(n) && (p.must_exclude.contains(n) || !g.in_domain(n))) {
      fail(kModule, "constraint clash");
    }
    if (g.in_domain(n) && (!p.phi.defined(n) || !std::isfinite(p.phi[n]))) {
      fail(kModule, "phi must be finite on the domain");
    }
  }
}

// Cost of placing cell n inside the region, relative to leaving it out.
double unary(const CutProblem& p, NodeId n) {
  const CutGraph& g = *p.graph;
  return (p.count_exterior ? g.exterior(n) : 0.0) - p.phi[n] * g.area(n);
}

}  // namespace

CutSolution evaluate(const CutProblem& problem, const Region& region) {
  check_problem(problem);
  CutSolution s;
  s.region = region;
  s.perimeter = perimeter(*problem.graph, region, problem.count_exterior);
  s.weighted_area = weighted_area(*problem.graph, problem.phi, region);
  s.energy = s.perimeter - s.weighted_area;
  return s;
}

CutSolution minimize_phi_area(const CutProblem& problem) {
  check_problem(problem);
  const CutGraph& g = *problem.graph;
  const std::size_t cells = g.size();

  // Fixed-point capacities: every finite term is scaled by a common factor so
  // the flow runs in exact integer arithmetic.
  double total = 0.0;
  for (NodeId n = 0; n < cells; ++n) {
    if (!g.in_domain(n)) continue;
    total += std::abs(unary(problem, n));
    for (int k = 0; k < static_cast<int>(kStencil.size()); ++k) total += g.weight(n, k);
  }
  const double scale = std::ldexp(1.0, 50) / std::max(total, 1e-300);
  auto quantize = [&](double x) { return static_cast<MaxFlow::Capacity>(std::llround(x * scale)); };

  const std::size_t source = cells, sink = cells + 1;
  MaxFlow flow(cells + 2);
  for (NodeId n = 0; n < cells; ++n) {
    if (!g.in_domain(n)) continue;
    if (problem.must_include.contains(n)) flow.add_edge(source, n, MaxFlow::kInfinite, 0);
    if (problem.must_exclude.contains(n)) flow.add_edge(n, sink, MaxFlow::kInfinite, 0);
    const double c = unary(problem, n);
    if (c > 0.0) {
      flow.add_edge(n, sink, quantize(c), 0);
    } else if (c < 0.0) {
      flow.add_edge(source, n, quantize(-c), 0);
    }
    for (int k = 0; k < static_cast<int>(kStencil.size()); ++k) {
      const NodeId m = g.target(n, k);
      if (m == CutGraph::kNone) continue;
      const auto w = quantize(g.weight(n, k));
      flow.add_edge(n, m, w, w);
    }
  }
  flow.solve(source, sink);

  Region region(g.nx(), g.ny());
  if (problem.choice == MinimizerChoice::minimal) {
    const auto side = flow.source_side(source);
    for (NodeId n = 0; n < cells; ++n) region.set(n, g.in_domain(n) && side[n]);
  } else {
    const auto side = flow.sink_side(sink);
    for (NodeId n = 0; n < cells; ++n) region.set(n, g.in_domain(n) && !side[n]);
  }
  return evaluate(problem, region);
}

std::vector<InterfaceComponent> interface_components(const MetricGrid& grid, const CutGraph& graph,
                                                     const Region& region) {
  require_same_shape(grid, region.nx(), region.ny(), kModule);
  std::vector<double> cut(graph.size(), 0.0);
  Region incident(graph.nx(), graph.ny());
  for (NodeId n = 0; n < graph.size(); ++n) {
    if (!graph.in_domain(n)) continue;
    for (int k = 0; k < static_cast<int>(kStencil.size()); ++k) {
      const NodeId m = graph.target(n, k);
      if (m == CutGraph::kNone || region.contains(n) == region.contains(m)) continue;
      const NodeId inside = region.contains(n) ? n : m;
      cut[inside] += graph.weight(n, k);
      incident.set(inside, true);
    }
  }
  std::vector<InterfaceComponent> out;
  for (Region& cells : connected_components(grid, incident)) {
    double length = 0.0;
    for (NodeId n = 0; n < graph.size(); ++n) {
      if (cells.contains(n)) length += cut[n];
    }
    out.push_back({std::move(cells), length});
  }
  return out;
}

CurvatureSummary bubble_boundary_curvature(const MetricGrid& grid, const Region& region,
                                           double band) {
  require_same_shape(grid, region.nx(), region.ny(), kModule);
  if (boundary_layer(grid, region).count() < 8 ||
      boundary_layer(grid, region.complement_in(grid)).count() < 8) {
    fail(kModule, "boundary too small to sample");
  }
  const ScalarField sd = signed_distance(grid, region);
  const ScalarField kappa = level_mean_curvature(grid, sd, 0.5);
  // Only the free boundary is sampled: nodes near the edge of the domain see
  // the domain boundary, not the bubble interface.
  const Region rim = boundary_layer(grid, Region::domain_of(grid));
  ScalarField to_rim;
  if (!rim.empty()) to_rim = distance_transform(grid, rim);
  CurvatureSummary s;
  s.min = std::numeric_limits<double>::infinity();
  s.max = -std::numeric_limits<double>::infinity();
  double sum = 0.0;
  for (NodeId n = 0; n < grid.size(); ++n) {
    if (!kappa.defined(n) || std::abs(sd[n]) > band) continue;
    if (!rim.empty() && to_rim[n] < band + 2.0 * grid.h()) continue;
    sum += kappa[n];
    s.min = std::min(s.min, kappa[n]);
    s.max = std::max(s.max, kappa[n]);
    ++s.samples;
  }
  if (s.samples == 0) fail(kModule, "boundary too small to sample");
  s.mean = sum / static_cast<double>(s.samples);
  return s;
}

}  // namespace bubblecut
