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

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "bubblecut/bubble.hpp"
#include "bubblecut/convexify.hpp"
#include "bubblecut/grid.hpp"

namespace bubblecut {

struct TrichotomyOptions {
  double phi_floor = 0.0;            // target for the certified levels
  BubbleSchedule schedule;
  double smoothing_radius = 0.0;     // 0 selects a per-component default
  double morse_amplitude = 1e-3;     // relative to the range of the function
  std::uint64_t seed = 0;            // Morse perturbation
  bool classify_ends = true;
};

enum class Clause { convex_function = 1, residual_curve = 2, mixed = 3 };

struct EndReport {
  Region band;
  std::optional<Verdict> verdict;  // absent when classification failed
  std::string note;
};

// Outcome on one connected component of the domain.
struct ComponentReport {
  Region region;
  Clause clause = Clause::convex_function;
  BubbleRun shrink;                         // empty trace on closed surfaces
  std::optional<Verdict> residual;          // clause 2 and 3
  Region certified;                         // where the function is certified
  std::size_t stages = 0;                   // staircase stages used
  double smoothing_radius = 0.0;
  std::optional<ConvexityReport> convexity;
  std::vector<EndReport> ends;
  std::string note;
};

struct TrichotomyReport {
  Clause clause = Clause::convex_function;
  std::vector<ComponentReport> components;
  ScalarField function;  // emitted where certified, undefined elsewhere
  double kappa_tol = 0.0;
  // Maximum-principle consistency: when every emitted function passes, the
  // residual detector must find no curve with |curvature| ≤ κ_tol/2.
  bool consistency_checked = false;
  bool consistent = true;
  std::optional<Verdict> detector;
  bool certified() const;  // every emitted function passes verification
};

// Decides per domain component between a certified strictly mean convex
// function (shrinking φ_floor-bubbles empty the component; the staircase of
// the trace is smoothed, Morse-regularized and verified) and an
// approximately minimal residual curve; components that disagree, or a
// residual that is not minimal, give the mixed clause.
TrichotomyReport trichotomy(const MetricGrid& grid, const Region& domain,
                            const TrichotomyOptions& options);

std::string_view to_string(Clause clause);

}  // namespace bubblecut
