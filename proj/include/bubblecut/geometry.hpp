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

#include <limits>

#include <vector>

#include "bubblecut/grid.hpp"
#include "bubblecut/parallel.hpp"

namespace bubblecut {

/// Riemannian area of a cell: sqrt(det g) h^2 at the cell center.
double cell_area(const MetricGrid& grid, NodeId cell);

/// Geodesic distance to a source set by first-order fast marching on the
/// 8-neighbor triangulation of the grid (|grad d|_g = 1, d = 0 on source).
/// Nodes farther than `limit` are left undefined.
ScalarField distance_transform(const MetricGrid& grid, const Region& source,
                               double limit = std::numeric_limits<double>::infinity());

/// Inside-adjacent boundary layer: cells of the region with a 4-neighbor
/// outside it, off the domain, or beyond a non-periodic grid edge.
Region boundary_layer(const MetricGrid& grid, const Region& region);

/// Negative inside the region, positive outside, with the interface half a
/// link away from the boundary layer on either side. With a finite `limit`,
/// values are clamped to [-limit, limit] and computed only up to it.
ScalarField signed_distance(const MetricGrid& grid, const Region& region,
                            double limit = std::numeric_limits<double>::infinity());

/// Signed distance to the 1/2-level of the region's indicator averaged over
/// metric balls of radius eps (beyond-frame and off-domain cells count as
/// outside). The interface is located to sub-cell accuracy, so its levels
/// are free of the stair steps of a digitized boundary.
ScalarField smooth_signed_distance(const MetricGrid& grid, const Region& region, double eps);

/// Signed distance to the level curve {f = level} (negative where f < level),
/// with the curve located by interpolation between nodes. Nodes where f is
/// undefined stay undefined; throws "no boundary" when the level is not
/// crossed.
ScalarField level_signed_distance(const MetricGrid& grid, const ScalarField& f, double level);

Region erode(const MetricGrid& grid, const Region& region, double rho);
Region dilate(const MetricGrid& grid, const Region& region, double rho);
/// Morphological opening dilate(erode(U, rho), rho), clipped to U.
Region accessible_set(const MetricGrid& grid, const Region& region, double rho);

/// Geodesic curvature of the level curves of f with the downstream sign
/// convention: boundaries of convex sublevel sets are positive.
/// Nodes whose gradient falls below grad_floor, or whose 3x3 stencil is
/// incomplete, are left undefined.
ScalarField level_mean_curvature(const MetricGrid& grid, const ScalarField& f,
                                 double grad_floor, Exec exec = Exec::parallel);

/// Curvature at a single node; throws "near-critical, curvature undefined"
/// where level_mean_curvature would leave the node undefined.
double level_mean_curvature_at(const MetricGrid& grid, const ScalarField& f,
                               double grad_floor, NodeId node);

/// |grad f|_g at a node by central differences; negative when the stencil
/// is incomplete.
double gradient_norm(const MetricGrid& grid, const ScalarField& f, NodeId node);

/// Default gradient floor: 1e-3 * (field range / h).
double default_grad_floor(const MetricGrid& grid, const ScalarField& f);

struct CriticalPoint {
  NodeId node = 0;
  double value = 0.0;
  int index = 0;  // 0 minimum, 1 saddle, 2 maximum
  bool nondegenerate = false;
};

/// Discrete critical points of f over interior domain nodes. Neighbor
/// comparisons use simulation of simplicity (ties broken by node order);
/// the index comes from the signs of the discrete Hessian eigenvalues when
/// both exceed hessian_floor, otherwise from the ring pattern.
/// A negative hessian_floor selects 1e-6 * range / diameter^2.
std::vector<CriticalPoint> critical_points(const MetricGrid& grid, const ScalarField& f,
                                           double hessian_floor = -1.0);

/// Connected components (8-connectivity, periodic-aware) of a region.
std::vector<Region> connected_components(const MetricGrid& grid, const Region& region);

/// One-sided Hausdorff distance: sup over boundary_layer(from) of the
/// geodesic distance to boundary_layer(to). Zero when `from` is empty;
/// distances beyond `limit` are reported as `limit`.
double boundary_excursion(const MetricGrid& grid, const Region& from, const Region& to,
                          double limit = std::numeric_limits<double>::infinity());

}  // namespace bubblecut
