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

// Helpers shared by the schedule and end-analysis translation units.

#include "bubblecut/bubble.hpp"

namespace bubblecut::detail {

inline constexpr std::string_view kBubbleModule = "bubble-engine";

double cell_length(const MetricGrid& grid, NodeId n);
double max_abs(const ScalarField& f, const Region& where);
// Largest depth of the domain below its boundary (its inradius).
double inradius(const MetricGrid& grid, const Region& domain);
// Residual verdict for a stalled region.
Verdict residual_verdict(const MetricGrid& grid, const CutGraph& graph, const Region& region,
                         double kappa_tol, int steps);

struct GrowResult {
  BubbleRun run;
  bool reached = false;  // touched `target` (or covered X when no target)
};

// Growing schedule without the final curvature check. Stops early when the
// region meets `target` (if given) or covers X.
GrowResult grow_core(const MetricGrid& grid, const CutGraph& graph, const Region& X,
                     const Region& seed, const ScalarField& phi_target,
                     const BubbleSchedule& schedule, const Region* target);

}  // namespace bubblecut::detail
