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

#include <array>
#include <cstdint>
#include <vector>

#include "bubblecut/grid.hpp"
#include "bubblecut/parallel.hpp"

namespace bubblecut {

// Forward half of the 16-neighborhood stencil: axis, knight and diagonal
// directions spanning the upper half plane. The other half is obtained by
// negation.
inline constexpr std::array<std::array<int, 2>, 8> kStencil = {
    {{1, 0}, {2, 1}, {1, 1}, {1, 2}, {0, 1}, {-1, 2}, {-1, 1}, {-2, 1}}};

// Cauchy–Crofton weighted neighborhood graph over the cells of a grid. Each
// in-domain cell owns the forward stencil edges leaving it; edges that leave
// the domain contribute to the cell's exterior weight instead.
class CutGraph {
 public:
  static constexpr NodeId kNone = static_cast<NodeId>(-1);

  explicit CutGraph(const MetricGrid& grid, Exec exec = Exec::parallel);

  int nx() const { return nx_; }
  int ny() const { return ny_; }
  std::size_t size() const { return area_.size(); }
  bool in_domain(NodeId n) const { return domain_[n] != 0; }

  // Target and weight of forward stencil edge k of node n; target is kNone
  // when the edge leaves the domain.
  NodeId target(NodeId n, int k) const { return target_[n * kStencil.size() + k]; }
  double weight(NodeId n, int k) const { return weight_[n * kStencil.size() + k]; }
  // Total weight of the stencil edges (both orientations) leaving the domain.
  double exterior(NodeId n) const { return exterior_[n]; }
  double area(NodeId n) const { return area_[n]; }

  const std::vector<double>& weights() const { return weight_; }
  const std::vector<double>& exteriors() const { return exterior_; }

 private:
  int nx_ = 0, ny_ = 0;
  std::vector<std::uint8_t> domain_;
  std::vector<NodeId> target_;
  std::vector<double> weight_;
  std::vector<double> exterior_;
  std::vector<double> area_;
};

CutGraph build_cut_graph(const MetricGrid& grid, Exec exec = Exec::parallel);

// Crofton weight of the stencil direction (dx, dy) (index units) under the
// metric g on a grid of spacing h.
double crofton_weight(const MetricTensor& g, int dx, int dy, double h);

// Sum of the weights of edges with exactly one endpoint in the region. With
// count_exterior, edges from the region leaving the domain count as well.
double perimeter(const CutGraph& graph, const Region& region, bool count_exterior = false);

// Sum of φ·dA over the region.
double weighted_area(const CutGraph& graph, const ScalarField& phi, const Region& region);

enum class MinimizerChoice { minimal, maximal };

struct CutProblem {
  const CutGraph* graph = nullptr;
  ScalarField phi;
  Region must_include;
  Region must_exclude;
  MinimizerChoice choice = MinimizerChoice::minimal;
  // When set, the interface with the exterior of the domain is charged too.
  bool count_exterior = false;
};

struct CutSolution {
  Region region;
  double energy = 0.0;
  double perimeter = 0.0;
  double weighted_area = 0.0;
};

// Discrete energy perimeter − weighted_area of an arbitrary mask.
CutSolution evaluate(const CutProblem& problem, const Region& region);

CutSolution minimize_phi_area(const CutProblem& problem);

// One connected piece of the interface between a region and the rest of the
// domain: the inside cells incident to cut edges, and the total weight of
// those edges.
struct InterfaceComponent {
  Region cells;
  double length = 0.0;
};

// Interface pieces ordered by their first cell; edges leaving the domain are
// not part of the interface.
std::vector<InterfaceComponent> interface_components(const MetricGrid& grid, const CutGraph& graph,
                                                     const Region& region);

struct CurvatureSummary {
  double mean = 0.0;
  double min = 0.0;
  double max = 0.0;
  std::size_t samples = 0;
};

// Level curvature of the region's signed distance (negative inside) sampled
// on the nodes within `band` of the interface.
CurvatureSummary bubble_boundary_curvature(const MetricGrid& grid, const Region& region,
                                           double band);

}  // namespace bubblecut
