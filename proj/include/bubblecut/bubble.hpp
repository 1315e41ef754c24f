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

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "bubblecut/cut.hpp"
#include "bubblecut/grid.hpp"

namespace bubblecut {

// Parameters shared by the shrinking and growing schedules.
struct BubbleSchedule {
  double epsilon0 = 0.2;        // initial curvature offset (1/length)
  double decay = 0.5;           // ε_i = ε0·decay^i
  double rho = 0.1;             // band width (length)
  double phi_big = 0.0;         // forcing value; 0 selects 2/ρ + max|φ| + 1
  int max_steps = 200;
  double stall_tolerance = 1.0;  // cells
  double kappa_tol = 0.0;       // 0 selects the grid-derived default

  double epsilon(int step) const;
  double forcing(double max_abs_phi) const;
  // Throws "bad schedule" when an invariant fails on this grid.
  void validate(const MetricGrid& grid, double max_abs_phi) const;
  // Tolerance on |curvature| for approximately minimal curves.
  double curvature_tolerance(const MetricGrid& grid, const Region& domain, int steps) const;
};

struct BubbleTrace {
  std::vector<Region> regions;  // U_0, U_1, ...
  std::vector<ScalarField> phis;  // prescription used to produce regions[i], i ≥ 1
  std::vector<double> energies;
  std::vector<double> motions;  // boundary motion per step, in cells
  double confinement = 0.0;     // observed C: sup dist(∂U_{i+1}, ∂U_i) / ρ
};

enum class VerdictKind { empties, exhausts, residual };
enum class EndClass { convex_exhaustion, concave_exhaustion, minimal_foliation };

std::string_view to_string(VerdictKind kind);
std::string_view to_string(EndClass end_class);

struct Verdict {
  VerdictKind kind = VerdictKind::empties;
  Region residual;                    // stalled region when kind = residual
  Region residual_curve;              // inside cells along its interface
  std::vector<double> curve_lengths;  // per interface component
  double residual_length = 0.0;       // shortest interface component
  CurvatureSummary curvature;
  double kappa_tol = 0.0;
  std::optional<EndClass> end_class;
  int steps = 0;
  std::string note;
};

struct BubbleRun {
  BubbleTrace trace;
  Verdict verdict;
};

// Shrinking φ-bubbles inside V: each step keeps the part of U_i deeper than ρ
// and lets the boundary settle in the ρ-band under φ + ε_i.
BubbleRun shrink_bubbles(const MetricGrid& grid, const Region& V, const ScalarField& phi,
                         const BubbleSchedule& schedule);

// Growing concave bubbles from a seed inside X: each step may add cells within
// 2ρ/3 of U_{i-1}, paying perimeter plus (φ_target + ε_i)·area.
BubbleRun grow_bubbles(const MetricGrid& grid, const Region& X, const Region& seed,
                       const ScalarField& phi_target, const BubbleSchedule& schedule);

struct Separator {
  Region region;  // side containing end A
  Region curve;   // inside cells along the separating interface
  double length = 0.0;
  std::vector<double> component_lengths;
};

Separator minimal_separator(const MetricGrid& grid, const Region& domain, const Region& end_a,
                            const Region& end_b);

// Shortest closed curves in the two homology classes of a torus, found as
// minimal separators between parallel bands half a period apart.
std::vector<double> torus_systoles(const MetricGrid& grid);

Verdict classify_end(const MetricGrid& grid, const Region& domain, const Region& end_band,
                     const BubbleSchedule& schedule);

// Finds closed curves of small curvature by shrinking with φ ≡ 0.
// Returns a Residual verdict when one with |mean curvature| ≤ threshold exists.
std::optional<Verdict> detect_residual(const MetricGrid& grid, const Region& domain,
                                       const BubbleSchedule& schedule, double threshold);

}  // namespace bubblecut
