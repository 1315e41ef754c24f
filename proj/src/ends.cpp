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

#include "bubble_internal.hpp"
#include "bubblecut/bubble.hpp"
#include "bubblecut/error.hpp"
#include "bubblecut/geometry.hpp"

namespace bubblecut {

using detail::kBubbleModule;

namespace {

bool adjacent(const MetricGrid& grid, const Region& a, const Region& b) {
  for (NodeId n = 0; n < grid.size(); ++n) {
    if (!a.contains(n)) continue;
    for (int dj = -1; dj <= 1; ++dj) {
      for (int di = -1; di <= 1; ++di) {
        const auto m = grid.neighbor(n, di, dj);
        if (m && b.contains(*m)) return true;
      }
    }
  }
  return false;
}

Separator separate(const MetricGrid& grid, const CutGraph& graph, const Region& domain,
                   const Region& a, const Region& b) {
  // Cells of the grid outside the domain join the side of the nearer end, so
  // that edges crossing the separator and leaving the domain still count.
  const Region off = Region::domain_of(grid) - domain;
  Region side_a(grid.nx(), grid.ny());
  if (!off.empty()) {
    const ScalarField da = distance_transform(grid, a);
    const ScalarField db = distance_transform(grid, b);
    for (NodeId n = 0; n < grid.size(); ++n) {
      if (off.contains(n) && da.defined(n) && (!db.defined(n) || da[n] < db[n])) {
        side_a.set(n, true);
      }
    }
  }
  CutProblem problem;
  problem.graph = &graph;
  problem.phi = ScalarField::constant(grid, 0.0);
  problem.must_include = a | side_a;
  problem.must_exclude = b | (off - side_a);
  problem.choice = MinimizerChoice::minimal;
  const CutSolution sol = minimize_phi_area(problem);
  Separator s;
  s.region = sol.region & domain;
  s.curve = Region(grid.nx(), grid.ny());
  for (const auto& c : interface_components(grid, graph, sol.region)) {
    if (c.length <= 0.0) continue;
    s.curve = s.curve | (c.cells & domain);
    s.component_lengths.push_back(c.length);
    s.length += c.length;
  }
  return s;
}

}  // namespace

Separator minimal_separator(const MetricGrid& grid, const Region& domain_in, const Region& end_a,
                            const Region& end_b) {
  require_same_shape(grid, domain_in.nx(), domain_in.ny(), kBubbleModule);
  require_same_shape(grid, end_a.nx(), end_a.ny(), kBubbleModule);
  require_same_shape(grid, end_b.nx(), end_b.ny(), kBubbleModule);
  const Region domain = domain_in & Region::domain_of(grid);
  const Region a = end_a & domain;
  const Region b = end_b & domain;
  if (a.empty() || b.empty() || a.intersects(b) || adjacent(grid, a, b)) {
    fail(kBubbleModule, "ends not separated");
  }
  const CutGraph graph(grid);
  return separate(grid, graph, domain, a, b);
}

std::vector<double> torus_systoles(const MetricGrid& grid) {
  if (grid.topology() != Topology::torus) fail(kBubbleModule, "systoles need a torus");
  const Region domain = Region::domain_of(grid);
  const CutGraph graph(grid);
  std::vector<double> out;
  // Horizontal loops separate two-row bands half a period apart; the cut
  // then consists of one loop in each of the two annuli between the bands,
  // told apart by the annulus holding the outer endpoint of each cut edge.
  for (int axis = 0; axis < 2; ++axis) {
    const int period = axis == 0 ? grid.ny() : grid.nx();
    auto level = [&](NodeId n) { return axis == 0 ? grid.row(n) : grid.col(n); };
    Region a(grid.nx(), grid.ny()), b(grid.nx(), grid.ny());
    for (NodeId n = 0; n < grid.size(); ++n) {
      const int k = level(n);
      if (k <= 1) a.set(n, true);
      if (k == period / 2 || k == period / 2 + 1) b.set(n, true);
    }
    const Separator s = separate(grid, graph, domain, a & domain, b & domain);
    double first = 0.0, second = 0.0;
    for (NodeId n = 0; n < graph.size(); ++n) {
      if (!graph.in_domain(n)) continue;
      for (int k = 0; k < static_cast<int>(kStencil.size()); ++k) {
        const NodeId m = graph.target(n, k);
        if (m == CutGraph::kNone || s.region.contains(n) == s.region.contains(m)) continue;
        const NodeId outer = s.region.contains(n) ? m : n;
        (level(outer) < period / 2 ? first : second) += graph.weight(n, k);
      }
    }
    out.push_back(std::min(first, second));
  }
  return out;
}

Verdict classify_end(const MetricGrid& grid, const Region& domain_in, const Region& end_band,
                     const BubbleSchedule& schedule) {
  require_same_shape(grid, domain_in.nx(), domain_in.ny(), kBubbleModule);
  require_same_shape(grid, end_band.nx(), end_band.ny(), kBubbleModule);
  const Region domain = domain_in & Region::domain_of(grid);
  const auto parts = connected_components(grid, end_band & domain);
  if (parts.size() != 1) fail(kBubbleModule, "not a single end");
  schedule.validate(grid, 0.0);
  const Region& end = parts.front();
  const CutGraph graph(grid);
  const double rho = schedule.rho;
  const double phi_big = schedule.forcing(0.0);

  const ScalarField d = distance_transform(grid, end);
  double depth = 0.0;
  for (NodeId n = 0; n < grid.size(); ++n) {
    if (domain.contains(n) && d.defined(n)) depth = std::max(depth, d[n]);
  }
  std::vector<Region> cores;
  for (int j = 0; depth - rho * (j + 1) > 2.0 * rho; ++j) {
    Region core(grid.nx(), grid.ny());
    for (NodeId n = 0; n < grid.size(); ++n) {
      if (domain.contains(n) && d.defined(n) && d[n] >= depth - rho * (j + 1)) core.set(n, true);
    }
    cores.push_back(std::move(core));
  }
  const int stages = static_cast<int>(cores.size());
  Verdict v;
  v.kind = VerdictKind::residual;
  v.kappa_tol = schedule.curvature_tolerance(grid, domain, std::max(stages, 1));
  v.steps = stages;
  if (cores.empty()) {
    v.note = "end too shallow to classify";
    return v;
  }
  const Region outside = (Region::domain_of(grid) - domain) | end;

  auto stage = [&](const Region& core, double eps) {
    ScalarField phi(grid.nx(), grid.ny());
    for (NodeId n = 0; n < grid.size(); ++n) {
      if (grid.in_domain(n)) phi.set(n, core.contains(n) ? phi_big : eps);
    }
    CutProblem problem;
    problem.graph = &graph;
    problem.phi = std::move(phi);
    problem.must_include = core;
    problem.must_exclude = outside;
    problem.choice = MinimizerChoice::minimal;
    return minimize_phi_area(problem).region;
  };
  auto tracks = [&](const Region& region, const Region& core) {
    return region.subset_of(dilate(grid, core, rho));
  };

  // Convex exhaustion: every stage stays within ρ of its core.
  bool convex = true;
  for (int j = 0; j < stages && convex; ++j) {
    convex = tracks(stage(cores[j], schedule.epsilon(j + 1)), cores[j]);
  }
  if (convex) {
    v.kind = VerdictKind::exhausts;
    v.end_class = EndClass::convex_exhaustion;
    return v;
  }

  // Concave exhaustion: growing bubbles from the innermost core reach the end.
  {
    const auto grown = detail::grow_core(grid, graph, domain, cores.front(),
                                         ScalarField::constant(grid, 0.0), schedule, &end);
    if (grown.reached) {
      v.kind = VerdictKind::exhausts;
      v.end_class = EndClass::concave_exhaustion;
      v.steps = grown.run.verdict.steps;
      return v;
    }
  }

  // Minimal foliation: the zero-prescription minimizers track the cores and
  // their boundaries have small curvature.
  bool foliated = true;
  double worst = 0.0;
  for (int j = 0; j < stages && foliated; ++j) {
    const Region region = stage(cores[j], 0.0);
    if (!tracks(region, cores[j])) {
      foliated = false;
      break;
    }
    const Verdict leaf = detail::residual_verdict(grid, graph, region, v.kappa_tol, j + 1);
    if (leaf.curve_lengths.empty() || std::abs(leaf.curvature.mean) > v.kappa_tol) {
      foliated = false;
      break;
    }
    worst = std::max(worst, std::abs(leaf.curvature.mean));
    if (j == 0) {
      v.residual = region;
      v.residual_curve = leaf.residual_curve;
      v.curve_lengths = leaf.curve_lengths;
      v.residual_length = leaf.residual_length;
      v.curvature = leaf.curvature;
    }
  }
  if (foliated) {
    v.kind = VerdictKind::residual;
    v.end_class = EndClass::minimal_foliation;
    v.note = "worst leaf |mean curvature| " + std::to_string(worst);
    return v;
  }
  v.note = "end matches no class";
  return v;
}

std::optional<Verdict> detect_residual(const MetricGrid& grid, const Region& domain_in,
                                       const BubbleSchedule& schedule, double threshold) {
  require_same_shape(grid, domain_in.nx(), domain_in.ny(), kBubbleModule);
  const Region domain = domain_in & Region::domain_of(grid);
  if (boundary_layer(grid, domain).empty()) {
    // Closed surface: the systoles are closed geodesics.
    const auto lengths = torus_systoles(grid);
    Verdict v;
    v.kind = VerdictKind::residual;
    v.curve_lengths = lengths;
    v.residual_length = *std::min_element(lengths.begin(), lengths.end());
    v.kappa_tol = threshold;
    v.note = "closed surface: systoles";
    return v;
  }
  const BubbleRun run =
      shrink_bubbles(grid, domain, ScalarField::constant(grid, 0.0), schedule);
  if (run.verdict.kind == VerdictKind::residual && !run.verdict.curve_lengths.empty() &&
      std::abs(run.verdict.curvature.mean) <= threshold) {
    return run.verdict;
  }
  return std::nullopt;
}

}  // namespace bubblecut
