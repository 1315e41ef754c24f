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
#include <utility>
#include <vector>

#include "bubblecut/cut.hpp"
#include "bubblecut/geometry.hpp"
#include "bubblecut/grid.hpp"
#include "bubblecut/parallel.hpp"

namespace bubblecut {

// Nested regions U_1 ⊃ U_2 ⊃ ... with per-stage gap bounds δ_i and bending
// coefficients c_i. Empty gap or bend lists select measured values.
struct StaircaseSpec {
  std::vector<Region> regions;
  std::vector<double> gaps;   // δ_i for the pair (U_i, U_{i+1}); size = stages - 1
  std::vector<double> bends;  // c_i per stage
};

struct Staircase {
  ScalarField h;                    // max over active stages
  std::vector<ScalarField> stages;  // β_i(d_i) + offset_i where stage i is active
  std::vector<double> gaps;
  std::vector<double> bends;
  std::vector<double> offsets;
  std::vector<int> active;          // index of the stage attaining h per node, -1 off h
  Region ridge;                     // nodes where the attaining stage changes with a crease
};

// h = max_i β_i(d_i) + offset_i, with d_i the signed distance of U_i
// (negative inside) and stage i ≥ 2 active on U_{i-1}. Offsets keep h
// continuous across each activation boundary; h = 0 on ∂U_1.
Staircase staircase(const MetricGrid& grid, const StaircaseSpec& spec);

// β(d) with β(t) = t + c·t²; throws when β' ≤ 0 on the range of d.
ScalarField bend(const MetricGrid& grid, const ScalarField& d, double c);

// Kernel profile Ψ(t) = (1 - t²)² on [0, 1].
double quartic_bump(double t);

// Normalized mollifier weights at node x: Ψ(|y - x|_{G_x} / ε)·area(y) over
// defined nodes y, divided by their sum.
std::vector<std::pair<NodeId, double>> kernel_weights(const MetricGrid& grid,
                                                      const ScalarField& f, NodeId x,
                                                      double eps);

ScalarField mollify(const MetricGrid& grid, const ScalarField& f, double eps,
                    Exec exec = Exec::parallel);

// Copy of the grid whose domain is the whole frame. Distance fields built on
// it extend smoothly across the domain boundary, so averaging them does not
// see the digital rim of the domain.
MetricGrid frame_grid(const MetricGrid& grid);

// f on the domain nodes of grid, undefined elsewhere.
ScalarField restrict_to_domain(const MetricGrid& grid, const ScalarField& f);

// Mollification radius that spans the flat facets of digitized distance
// levels: twelve of the coarsest metric grid steps over the domain.
double default_smoothing_radius(const MetricGrid& grid);

// Rounds the corners of a region: the δ-offset of its δ-erosion, measured on
// the ε-mollified distance to the interior equidistant and clipped to the
// region. δ = ε = 0 is the identity. Throws "lemma hypothesis violated" on
// reflex corners.
Region corner_smooth(const MetricGrid& grid, const Region& region, double delta, double eps);

// Same for the region {F ≤ 0} of an implicit description F, whose boundary
// is located between nodes. Prefer it for piecewise smooth regions: a mask
// fixes its boundary only to within a cell, and the resulting stair steps
// span lengths that a small ε cannot average out.
Region corner_smooth(const MetricGrid& grid, const ScalarField& implicit, double delta,
                     double eps);

// The field whose δ-sublevel, clipped to the region, is corner_smooth's
// output.
ScalarField corner_smoothing_field(const MetricGrid& grid, const Region& region, double delta,
                                   double eps);
ScalarField corner_smoothing_field(const MetricGrid& grid, const ScalarField& implicit,
                                   double delta, double eps);

// Level curvature of f sampled on the nodes where |f - level| ≤ band.
CurvatureSummary level_curvature(const MetricGrid& grid, const ScalarField& f, double level,
                                 double band);

struct MorseResult {
  ScalarField f;
  double amplitude = 0.0;
  std::uint64_t seed = 0;
  double center_x = 0.0;  // bowl center, coordinates
  double center_y = 0.0;
  std::vector<CriticalPoint> critical;
};

// Adds the bowl amplitude·|x - c|²/L² (L the domain diameter, c the domain
// centroid jittered by a seeded offset) so that every critical point is
// nondegenerate at the bowl's Hessian scale.
MorseResult morse_regularize(const MetricGrid& grid, const ScalarField& f, double amplitude,
                             std::uint64_t seed);

struct ConvexityReport {
  std::size_t domain_nodes = 0;
  std::size_t samples = 0;  // non-critical nodes with a curvature value
  double min_margin = 0.0;
  double mean_margin = 0.0;
  std::size_t violations = 0;
  std::vector<NodeId> violating_nodes;  // first kMaxListed
  std::vector<double> histogram_edges;
  std::vector<std::size_t> histogram_counts;
  std::vector<CriticalPoint> critical;
  bool pass = false;

  static constexpr std::size_t kMaxListed = 1000;
  double sampled_fraction() const {
    return domain_nodes ? static_cast<double>(samples) / static_cast<double>(domain_nodes) : 0.0;
  }
};

// Level curvature margins against φ_target wherever |∇f| ≥ grad_floor, plus
// the critical points of f. Passes when every margin is positive and every
// critical point is a minimum.
ConvexityReport verify_mean_convex(const MetricGrid& grid, const ScalarField& f,
                                   const ScalarField& phi_target, double grad_floor,
                                   Exec exec = Exec::parallel);

}  // namespace bubblecut
