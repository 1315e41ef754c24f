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
#include <numbers>

#include "bubble_internal.hpp"
#include "bubblecut/bubble.hpp"
#include "bubblecut/error.hpp"
#include "bubblecut/geometry.hpp"

namespace bubblecut {

using detail::kBubbleModule;

namespace {
// Confinement is measured exactly up to this many band widths; the
// invariant of interest is C ≤ 3.
constexpr double kExcursionCap = 4.0;
}  // namespace

namespace detail {

double cell_length(const MetricGrid& grid, NodeId n) { return std::sqrt(grid.cell_area(n)); }

double max_abs(const ScalarField& f, const Region& where) {
  double m = 0.0;
  for (NodeId n = 0; n < f.size(); ++n) {
    if (where.contains(n) && f.defined(n)) m = std::max(m, std::abs(f[n]));
  }
  return m;
}

double inradius(const MetricGrid& grid, const Region& domain) {
  if (boundary_layer(grid, domain).empty()) return 0.5 * std::min(grid.width(), grid.height());
  const ScalarField sd = signed_distance(grid, domain);
  double depth = 0.0;
  for (NodeId n = 0; n < grid.size(); ++n) {
    if (domain.contains(n) && sd.defined(n)) depth = std::max(depth, -sd[n]);
  }
  return depth;
}

Verdict residual_verdict(const MetricGrid& grid, const CutGraph& graph, const Region& region,
                         double kappa_tol, int steps) {
  Verdict v;
  v.kind = VerdictKind::residual;
  v.residual = region;
  v.residual_curve = Region(grid.nx(), grid.ny());
  v.kappa_tol = kappa_tol;
  v.steps = steps;
  // Each curve is measured as the perimeter of the complementary piece it
  // bounds: that piece is thick even when the residual collapses to a
  // one-cell band, whose own cut would be skipped by the long stencil edges.
  double band = std::numeric_limits<double>::infinity();
  for (const Region& piece : connected_components(grid, region.complement_in(grid))) {
    const double length = perimeter(graph, piece);
    if (length <= 0.0) continue;
    v.curve_lengths.push_back(length);
    for (NodeId n = 0; n < grid.size(); ++n) {
      if (!region.contains(n)) continue;
      for (int k = 0; k < static_cast<int>(kStencil.size()); ++k) {
        for (int sign : {1, -1}) {
          const auto m = grid.neighbor(n, sign * kStencil[k][0], sign * kStencil[k][1]);
          if (m && piece.contains(*m)) {
            v.residual_curve.set(n, true);
            band = std::min(band, cell_length(grid, n));
          }
        }
      }
    }
  }
  if (!v.curve_lengths.empty()) {
    v.residual_length = *std::min_element(v.curve_lengths.begin(), v.curve_lengths.end());
    try {
      v.curvature = bubble_boundary_curvature(grid, region, band);
    } catch (const Error& e) {
      v.note = std::string(e.message());
    }
  }
  return v;
}

namespace {

// Cells of U within 2ρ/3 of it that the next growth step may claim, with the
// prescription for each; cells beyond are returned in `far`.
void growth_prescription(const MetricGrid& grid, const Region& X, const Region& U,
                         const ScalarField& phi_target, double eps, double rho, double phi_big,
                         ScalarField& phi, Region& far) {
  const ScalarField sd = signed_distance(grid, U, rho);
  for (NodeId n = 0; n < grid.size(); ++n) {
    if (!grid.in_domain(n)) continue;
    const double base = (phi_target.defined(n) ? phi_target[n] : 0.0) + eps;
    if (U.contains(n) || !X.contains(n)) {
      phi.set(n, -base);
      continue;
    }
    const double d = sd[n];
    double value;
    if (d <= 0.5 * rho) {
      value = base;
    } else if (d < 2.0 * rho / 3.0) {
      const double s = (d - 0.5 * rho) / (rho / 6.0);
      value = base + s * (phi_big - base);
    } else {
      value = phi_big;
      far.set(n, true);
    }
    // Concave energy Per + Σ φ dA is the φ-area energy of −φ.
    phi.set(n, -value);
  }
}

}  // namespace

GrowResult grow_core(const MetricGrid& grid, const CutGraph& graph, const Region& X,
                     const Region& seed, const ScalarField& phi_target,
                     const BubbleSchedule& schedule, const Region* target) {
  GrowResult out;
  BubbleTrace& trace = out.run.trace;
  const double phi_big = schedule.forcing(max_abs(phi_target, X));
  const Region outside_x = Region::domain_of(grid) - X;
  auto done = [&](const Region& U) {
    return target ? U.intersects(*target) : X.subset_of(U);
  };
  trace.regions.push_back(seed);
  if (done(seed)) {
    out.reached = true;
    out.run.verdict.kind = VerdictKind::exhausts;
    return out;
  }
  Region U = seed;
  int stall = 0;
  for (int step = 1; step <= schedule.max_steps; ++step) {
    ScalarField phi(grid.nx(), grid.ny());
    Region far(grid.nx(), grid.ny());
    growth_prescription(grid, X, U, phi_target, schedule.epsilon(step), schedule.rho, phi_big, phi,
                        far);
    CutProblem problem;
    problem.graph = &graph;
    problem.phi = phi;
    problem.must_include = U;
    problem.must_exclude = far | outside_x;
    problem.choice = MinimizerChoice::maximal;
    const CutSolution sol = minimize_phi_area(problem);

    const ScalarField sd = signed_distance(grid, U, 2.0 * schedule.rho);
    double motion = 0.0;
    for (NodeId n = 0; n < grid.size(); ++n) {
      if (sol.region.contains(n) && !U.contains(n)) {
        motion = std::max(motion, sd[n] / cell_length(grid, n) + 0.5);
      }
    }
    trace.confinement =
        std::max(trace.confinement, boundary_excursion(grid, sol.region, U, kExcursionCap * schedule.rho) / schedule.rho);
    trace.regions.push_back(sol.region);
    // Store the concave prescription with its natural sign.
    ScalarField shown = phi;
    for (NodeId n = 0; n < shown.size(); ++n) {
      if (shown.defined(n)) shown[n] = -shown[n];
    }
    trace.phis.push_back(std::move(shown));
    trace.energies.push_back(sol.energy);
    trace.motions.push_back(motion);
    U = sol.region;
    out.run.verdict.steps = step;
    if (done(U)) {
      out.reached = true;
      out.run.verdict.kind = VerdictKind::exhausts;
      return out;
    }
    stall = motion < schedule.stall_tolerance ? stall + 1 : 0;
    if (stall >= 2) break;
  }
  out.run.verdict.kind = VerdictKind::residual;
  out.run.verdict.residual = U;
  return out;
}

}  // namespace detail

std::string_view to_string(VerdictKind kind) {
  switch (kind) {
    case VerdictKind::empties: return "Empties";
    case VerdictKind::exhausts: return "Exhausts";
    case VerdictKind::residual: return "Residual";
  }
  return "?";
}

std::string_view to_string(EndClass end_class) {
  switch (end_class) {
    case EndClass::convex_exhaustion: return "convex_exhaustion";
    case EndClass::concave_exhaustion: return "concave_exhaustion";
    case EndClass::minimal_foliation: return "minimal_foliation";
  }
  return "?";
}

double BubbleSchedule::epsilon(int step) const { return epsilon0 * std::pow(decay, step); }

double BubbleSchedule::forcing(double max_abs_phi) const {
  return phi_big > 0.0 ? phi_big : 2.0 / rho + max_abs_phi + 1.0;
}

void BubbleSchedule::validate(const MetricGrid& grid, double max_abs_phi) const {
  auto bad = [] { fail(kBubbleModule, "bad schedule"); };
  if (!(epsilon0 > 0.0) || !std::isfinite(epsilon0)) bad();
  if (!(decay > 0.0 && decay < 1.0)) bad();
  if (!(rho > 0.0) || !std::isfinite(rho)) bad();
  if (max_steps < 1) bad();
  if (!(stall_tolerance > 0.0)) bad();
  if (!(kappa_tol >= 0.0)) bad();
  if (phi_big != 0.0 && !(phi_big >= 2.0 / rho + max_abs_phi)) bad();
  double finest = std::numeric_limits<double>::infinity();
  for (NodeId n = 0; n < grid.size(); ++n) {
    if (grid.in_domain(n)) finest = std::min(finest, detail::cell_length(grid, n));
  }
  if (rho < 3.0 * finest) bad();
}

double BubbleSchedule::curvature_tolerance(const MetricGrid& grid, const Region& domain,
                                           int steps) const {
  if (kappa_tol > 0.0) return kappa_tol;
  double area = 0.0;
  std::size_t count = 0;
  for (NodeId n = 0; n < grid.size(); ++n) {
    if (domain.contains(n) && grid.in_domain(n)) {
      area += grid.cell_area(n);
      ++count;
    }
  }
  const double cell = count ? std::sqrt(area / static_cast<double>(count)) : grid.h();
  const double radius = detail::inradius(grid, domain);
  return std::max(2.0 * epsilon(steps), 4.0 * cell / (radius * radius));
}

namespace {

// Part of U that the next shrinking step must keep: cells deeper than ρ; for
// components thinner than that, their deeper half; nothing for components
// small enough to disappear within one band.
Region forced_core(const MetricGrid& grid, const Region& U, const ScalarField& sd, double rho) {
  Region core(grid.nx(), grid.ny());
  for (const Region& component : connected_components(grid, U)) {
    double area = 0.0, deepest = 0.0;
    for (NodeId n = 0; n < grid.size(); ++n) {
      if (!component.contains(n)) continue;
      area += grid.cell_area(n);
      deepest = std::min(deepest, sd[n]);
    }
    if (area <= std::numbers::pi * rho * rho) continue;
    const double threshold = deepest < -rho ? -rho : 0.5 * deepest;
    for (NodeId n = 0; n < grid.size(); ++n) {
      if (component.contains(n) && (sd[n] < threshold || (deepest >= -rho && sd[n] <= threshold))) {
        core.set(n, true);
      }
    }
  }
  return core;
}

}  // namespace

BubbleRun shrink_bubbles(const MetricGrid& grid, const Region& V_in, const ScalarField& phi,
                         const BubbleSchedule& schedule) {
  require_same_shape(grid, V_in.nx(), V_in.ny(), kBubbleModule);
  require_same_shape(grid, phi.nx(), phi.ny(), kBubbleModule);
  const Region V = V_in & Region::domain_of(grid);
  for (NodeId n = 0; n < grid.size(); ++n) {
    if (V.contains(n) && (!phi.defined(n) || phi[n] < 0.0)) {
      fail(kBubbleModule, "prescription must be non-negative on V");
    }
  }
  const double max_phi = detail::max_abs(phi, V);
  schedule.validate(grid, max_phi);
  const double phi_big = schedule.forcing(max_phi);

  BubbleRun run;
  BubbleTrace& trace = run.trace;
  trace.regions.push_back(V);
  if (V.empty()) {
    run.verdict.kind = VerdictKind::empties;
    return run;
  }
  const CutGraph graph(grid);
  const Region domain = Region::domain_of(grid);
  Region U = V;
  int stall = 0;
  bool released = false;
  auto solve = [&](const Region& core, double eps, CutSolution& sol, ScalarField& phi_i) {
    phi_i = ScalarField(grid.nx(), grid.ny());
    for (NodeId n = 0; n < grid.size(); ++n) {
      if (!grid.in_domain(n)) continue;
      phi_i.set(n, U.contains(n) ? (core.contains(n) ? phi_big : phi[n] + eps) : 0.0);
    }
    CutProblem problem;
    problem.graph = &graph;
    problem.phi = phi_i;
    problem.must_include = core;
    problem.must_exclude = domain - U;
    problem.count_exterior = true;
    problem.choice = MinimizerChoice::minimal;
    sol = minimize_phi_area(problem);
  };

  for (int step = 1; step <= schedule.max_steps; ++step) {
    const double eps = schedule.epsilon(step);
    const ScalarField sd = signed_distance(grid, U, 2.0 * schedule.rho);
    const Region core =
        released ? Region(grid.nx(), grid.ny()) : forced_core(grid, U, sd, schedule.rho);
    CutSolution sol;
    ScalarField phi_i;
    solve(core, eps, sol, phi_i);

    double motion = 0.0;
    for (NodeId n = 0; n < grid.size(); ++n) {
      if (U.contains(n) && !sol.region.contains(n)) {
        motion = std::max(motion, -sd[n] / detail::cell_length(grid, n) + 0.5);
      }
    }
    if (!sol.region.empty()) {
      trace.confinement =
          std::max(trace.confinement, boundary_excursion(grid, sol.region, U, kExcursionCap * schedule.rho) / schedule.rho);
    }
    trace.regions.push_back(sol.region);
    trace.phis.push_back(std::move(phi_i));
    trace.energies.push_back(sol.energy);
    trace.motions.push_back(motion);
    const bool unchanged = sol.region == U;
    U = sol.region;
    run.verdict.steps = step;
    if (U.empty()) {
      run.verdict.kind = VerdictKind::empties;
      return run;
    }
    if (released) {
      // A released step either made progress or confirms the residual.
      released = false;
      if (unchanged) {
        run.verdict = detail::residual_verdict(
            grid, graph, U, schedule.curvature_tolerance(grid, V, step), step);
        run.verdict.note = "curvature above tolerance after release";
        return run;
      }
      stall = 0;
      continue;
    }
    stall = motion < schedule.stall_tolerance ? stall + 1 : 0;
    if (stall >= 2) {
      const double tol = schedule.curvature_tolerance(grid, V, step) + max_phi;
      Verdict v = detail::residual_verdict(grid, graph, U, tol, step);
      if (std::abs(v.curvature.mean) <= tol) {
        run.verdict = std::move(v);
        return run;
      }
      // Not a near-minimal curve: drop the forced core once and continue.
      released = true;
      stall = 0;
    }
  }
  run.verdict = detail::residual_verdict(
      grid, graph, U, schedule.curvature_tolerance(grid, V, schedule.max_steps) + max_phi,
      schedule.max_steps);
  run.verdict.note = "max_steps reached";
  return run;
}

BubbleRun grow_bubbles(const MetricGrid& grid, const Region& X_in, const Region& seed,
                       const ScalarField& phi_target, const BubbleSchedule& schedule) {
  require_same_shape(grid, X_in.nx(), X_in.ny(), kBubbleModule);
  require_same_shape(grid, seed.nx(), seed.ny(), kBubbleModule);
  require_same_shape(grid, phi_target.nx(), phi_target.ny(), kBubbleModule);
  const Region X = X_in & Region::domain_of(grid);
  const Region start = seed & X;
  if (start.empty()) fail(kBubbleModule, "no seed");
  const double max_phi = detail::max_abs(phi_target, X);
  schedule.validate(grid, max_phi);
  const CutGraph graph(grid);
  auto result = detail::grow_core(grid, graph, X, start, phi_target, schedule, nullptr);
  if (result.reached) return std::move(result.run);
  const int steps = result.run.verdict.steps;
  const double tol = schedule.curvature_tolerance(grid, X, steps) + max_phi;
  Verdict v = detail::residual_verdict(grid, graph, result.run.verdict.residual, tol, steps);
  // Volume bound: the residual must be shorter than the seed interface.
  double seed_length = 0.0;
  for (const auto& c : interface_components(grid, graph, start)) seed_length += c.length;
  if (!(v.residual_length < seed_length + tol * grid.h())) {
    v.note = "residual not shorter than the seed boundary";
  }
  if (std::abs(v.curvature.mean) > tol) fail(kBubbleModule, "seed boundary not mean convex");
  result.run.verdict = std::move(v);
  return std::move(result.run);
}

}  // namespace bubblecut
