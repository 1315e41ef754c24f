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


#include "bubblecut/trichotomy.hpp"

#include <algorithm>
#include <cmath>

#include "bubblecut/error.hpp"
#include "bubblecut/geometry.hpp"
#include "bubble_internal.hpp"

namespace bubblecut {

namespace {

constexpr std::string_view kModule = "bubble-engine";

// Copy of the grid whose domain is `region`.
MetricGrid restricted_grid(const MetricGrid& grid, const Region& region) {
  MetricGrid out = grid;
  std::vector<std::uint8_t> mask(grid.size());
  for (NodeId n = 0; n < grid.size(); ++n) mask[n] = region.contains(n) ? 1 : 0;
  out.set_domain(std::move(mask));
  return out;
}

// Staircase of the distinct nonempty trace regions, smoothed on the frame,
// Morse-regularized and verified on `certified`.
void certify(const MetricGrid& grid, const std::vector<Region>& trace, const Region& certified,
             const TrichotomyOptions& options, double eps, ComponentReport& out,
             ScalarField& function) {
  StaircaseSpec spec;
  for (const Region& r : trace) {
    if (r.empty()) break;
    if (!spec.regions.empty() && r == spec.regions.back()) continue;
    spec.regions.push_back(r);
  }
  out.stages = spec.regions.size();
  if (spec.regions.empty() || certified.empty()) {
    out.note = "nothing to certify";
    return;
  }
  const MetricGrid frame = frame_grid(grid);
  const Staircase stairs = staircase(frame, spec);
  const MetricGrid sub = restricted_grid(grid, certified);
  const ScalarField smooth = restrict_to_domain(sub, mollify(frame, stairs.h, eps));
  const auto [lo, hi] = smooth.range();
  const double amplitude = options.morse_amplitude * std::max(hi - lo, grid.h());
  ScalarField f = smooth;
  try {
    f = morse_regularize(sub, smooth, amplitude, options.seed).f;
  } catch (const Error& e) {
    out.note = e.message();
  }
  out.convexity = verify_mean_convex(sub, f, ScalarField::constant(grid, options.phi_floor),
                                     default_grad_floor(sub, f));
  out.certified = certified;
  for (NodeId n = 0; n < grid.size(); ++n) {
    if (certified.contains(n) && f.defined(n)) function.set(n, f[n]);
  }
}

std::vector<EndReport> classify_ends(const MetricGrid& grid, const Region& component,
                                     const BubbleSchedule& schedule) {
  std::vector<EndReport> ends;
  // Two rings of boundary cells, whatever the metric scale.
  const Region outer = boundary_layer(grid, component);
  const Region rim = outer | boundary_layer(grid, component - outer);
  for (Region& band : connected_components(grid, rim)) {
    EndReport e;
    try {
      e.verdict = classify_end(grid, component, band, schedule);
      e.note = e.verdict->note;
    } catch (const Error& err) {
      e.note = err.message();
    }
    e.band = std::move(band);
    ends.push_back(std::move(e));
  }
  return ends;
}

}  // namespace

std::string_view to_string(Clause clause) {
  switch (clause) {
    case Clause::convex_function: return "convex_function";
    case Clause::residual_curve: return "residual_curve";
    case Clause::mixed: return "mixed";
  }
  return "unknown";
}

bool TrichotomyReport::certified() const {
  bool any = false;
  for (const auto& c : components) {
    if (!c.convexity) continue;
    any = true;
    if (!c.convexity->pass) return false;
  }
  return any;
}

TrichotomyReport trichotomy(const MetricGrid& grid, const Region& domain_in,
                            const TrichotomyOptions& options) {
  require_same_shape(grid, domain_in.nx(), domain_in.ny(), kModule);
  const Region domain = domain_in & Region::domain_of(grid);
  if (domain.empty()) fail(kModule, "empty domain");
  if (!(options.phi_floor >= 0.0)) fail(kModule, "prescription must be non-negative on V");
  if (!(options.morse_amplitude > 0.0)) fail(kModule, "amplitude must be positive");
  options.schedule.validate(grid, options.phi_floor);

  TrichotomyReport report;
  report.function = ScalarField(grid.nx(), grid.ny());
  const ScalarField phi = ScalarField::constant(grid, options.phi_floor);
  const bool closed = boundary_layer(grid, domain).empty();

  for (Region& region : connected_components(grid, domain)) {
    ComponentReport c;
    c.region = std::move(region);
    if (closed) {
      // No boundary to shrink from: the systoles are the residual curves.
      c.residual = detect_residual(grid, c.region, options.schedule, 0.0);
      c.clause = Clause::residual_curve;
      c.note = "closed surface";
      report.components.push_back(std::move(c));
      continue;
    }
    c.shrink = shrink_bubbles(grid, c.region, phi, options.schedule);
    const Verdict& v = c.shrink.verdict;
    // The smoothing radius spans the digital facets of the component but
    // stays well inside it.
    c.smoothing_radius =
        options.smoothing_radius > 0.0
            ? options.smoothing_radius
            : std::min(default_smoothing_radius(restricted_grid(grid, c.region)),
                       0.5 * detail::inradius(grid, c.region));
    if (v.kind == VerdictKind::empties) {
      c.clause = Clause::convex_function;
      certify(grid, c.shrink.trace.regions, c.region, options, c.smoothing_radius, c,
              report.function);
    } else {
      c.residual = v;
      const bool minimal = !v.curve_lengths.empty() && v.note.empty() &&
                           std::abs(v.curvature.mean) <= v.kappa_tol;
      if (minimal) {
        c.clause = Clause::residual_curve;
      } else {
        // The swept part carries the nested levels of the trace.
        c.clause = Clause::mixed;
        std::vector<Region> swept(c.shrink.trace.regions.begin(),
                                  c.shrink.trace.regions.end() - 1);
        certify(grid, swept, c.region - v.residual, options, c.smoothing_radius, c,
                report.function);
        if (c.note.empty()) c.note = v.note;
      }
    }
    if (options.classify_ends) c.ends = classify_ends(grid, c.region, options.schedule);
    report.components.push_back(std::move(c));
  }

  bool all_convex = true, all_residual = true;
  for (const auto& c : report.components) {
    all_convex = all_convex && c.clause == Clause::convex_function;
    all_residual = all_residual && c.clause == Clause::residual_curve;
  }
  report.clause = all_convex     ? Clause::convex_function
                  : all_residual ? Clause::residual_curve
                                 : Clause::mixed;

  int steps = 0;
  for (const auto& c : report.components) steps = std::max(steps, c.shrink.verdict.steps);
  report.kappa_tol = options.schedule.curvature_tolerance(grid, domain, steps);
  for (const auto& c : report.components) {
    if (!c.convexity || !c.convexity->pass) continue;
    report.consistency_checked = true;
    auto found = detect_residual(grid, c.certified, options.schedule, 0.5 * report.kappa_tol);
    if (found) {
      report.consistent = false;
      report.detector = std::move(found);
    }
  }
  return report;
}

}  // namespace bubblecut
