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

#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "bubblecut/grid.hpp"
#include "json.hpp"

namespace bubblecut {

/// Axis-aligned coordinate window covered by the grid cells.
struct Box {
  double xmin = 0.0;
  double xmax = 1.0;
  double ymin = 0.0;
  double ymax = 1.0;
};

/// Cell-centered grid of nx columns over the box; h = width / nx and the
/// row count is the nearest integer to height / h.
MetricGrid make_grid(const Box& box, int nx, Topology topology = Topology::plane);

/// Warping profile w(t) of a warped cylinder dt^2 + w(t)^2 dtheta^2.
struct WarpProfile {
  enum class Kind { cosh, exp, exp_neg, table };
  Kind kind = Kind::cosh;
  std::vector<std::pair<double, double>> table;  // (t, w) knots, Kind::table only

  double w(double t) const;
  static WarpProfile from_name(const std::string& name);
};

MetricGrid euclidean(const Box& box, int nx);
/// lambda(r) = a + b r^2 about the origin.
MetricGrid conformal_radial(const Box& box, int nx, double a, double b);
/// lambda = 2 / (1 - r^2) on the Euclidean square [-extent, extent]^2 with
/// the domain restricted to r <= domain_radius < 1.
MetricGrid poincare_disk(int n, double extent, double domain_radius);
/// theta in [0, period) along x (periodic), t in [t0, t1] along y.
MetricGrid warped_cylinder(const WarpProfile& profile, double t0, double t1, int n_theta,
                           double period);
MetricGrid flat_torus(double period_x, double period_y, int nx);
struct Bump {
  double x = 0.0;
  double y = 0.0;
  double amplitude = 0.0;
  double width = 1.0;
};
/// lambda = 1 + sum of Gaussian bumps.
MetricGrid perturbed_flat(const Box& box, int nx, const std::vector<Bump>& bumps,
                          Topology topology = Topology::plane);

/// Named-generator entry point used by configuration files.
MetricGrid generate_metric(const std::string& name, const nlohmann::json& params);

/// Disk of the given Euclidean coordinate radius about (cx, cy).
Region disk_region(const MetricGrid& grid, double cx, double cy, double radius);
/// Cells with y in [y_lo, y_hi] (coordinate, inclusive).
Region band_y(const MetricGrid& grid, double y_lo, double y_hi);
Region band_x(const MetricGrid& grid, double x_lo, double x_hi);
Region box_region(const MetricGrid& grid, const Box& box);
Region region_where(const MetricGrid& grid, const std::function<bool(double, double)>& inside);

}  // namespace bubblecut
