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

#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <random>

#include "bubblecut/convexify.hpp"
#include "bubblecut/cut.hpp"
#include "bubblecut/error.hpp"
#include "bubblecut/geometry.hpp"
#include "bubblecut/metrics.hpp"
#include "doctest.h"

using namespace bubblecut;

namespace {

std::string error_message(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.message();
  }
  return {};
}

double xc(const MetricGrid& g, NodeId n) { return g.x(g.col(n)); }
double yc(const MetricGrid& g, NodeId n) { return g.y(g.row(n)); }

ScalarField field(const MetricGrid& grid, const std::function<double(double, double)>& f) {
  ScalarField out(grid.nx(), grid.ny());
  for (NodeId n = 0; n < grid.size(); ++n) {
    if (grid.in_domain(n)) out.set(n, f(xc(grid, n), yc(grid, n)));
  }
  return out;
}

MetricGrid disk_grid(int nx, double radius = 1.0) {
  MetricGrid grid = euclidean(Box{-1.2, 1.2, -1.2, 1.2}, nx);
  const Region disk = disk_region(grid, 0.0, 0.0, radius);
  std::vector<std::uint8_t> mask(grid.size());
  for (NodeId n = 0; n < grid.size(); ++n) mask[n] = disk.contains(n);
  grid.set_domain(mask);
  return grid;
}

Region sublevel(const ScalarField& f, double s) {
  Region r(f.nx(), f.ny());
  for (NodeId n = 0; n < f.size(); ++n) {
    if (f.defined(n) && f[n] <= s) r.set(n, true);
  }
  return r;
}

}  // namespace

TEST_CASE("bending keeps levels and orders") {
  const MetricGrid grid = euclidean(Box{-1, 1, -1, 1}, 64);
  const ScalarField d = signed_distance(grid, disk_region(grid, 0.1, 0.0, 0.5));
  const ScalarField same = bend(grid, d, 0.0);
  for (NodeId n = 0; n < grid.size(); ++n) CHECK(same[n] == d[n]);
  const ScalarField b = bend(grid, d, 0.4);
  std::mt19937 rng(7);
  const auto [lo, hi] = d.range();
  std::uniform_real_distribution<double> level(lo, hi);
  for (int k = 0; k < 20; ++k) {
    const double s = level(rng);
    CHECK(sublevel(b, s + 0.4 * s * s) == sublevel(d, s));
  }
  auto arg = [&](const ScalarField& f, bool max) {
    const auto r = f.range();
    Region out(f.nx(), f.ny());
    for (NodeId n = 0; n < f.size(); ++n) out.set(n, f[n] == (max ? r[1] : r[0]));
    return out;
  };
  CHECK(arg(b, true) == arg(d, true));
  CHECK(arg(b, false) == arg(d, false));
  CHECK(error_message([&] { bend(grid, d, 5.0); }) == "bending breaks monotonicity");
}

TEST_CASE("bending makes the distance to a convex inner boundary convex in both axes") {
  // Odd node count puts a node at the center; the distance to the inner
  // circle of radius 1 is the distance to the center minus 1.
  const MetricGrid grid = euclidean(Box{-2, 2, -2, 2}, 161);
  const double h = grid.h();
  Region center(grid.nx(), grid.ny());
  center.set(grid.index(80, 80), true);
  const ScalarField to_center = distance_transform(grid, center);
  ScalarField d(grid.nx(), grid.ny());
  for (NodeId n = 0; n < grid.size(); ++n) {
    if (to_center[n] >= 1.0 - 2.0 * h) d.set(n, to_center[n] - 1.0);
  }
  const ScalarField b = bend(grid, d, 0.5);
  int checked = 0;
  for (NodeId n = 0; n < grid.size(); ++n) {
    const double r = std::hypot(xc(grid, n), yc(grid, n));
    if (r < 1.0 + h || r > 1.0 + 3.0 * h) continue;
    const auto e = grid.neighbor(n, 2, 0), w = grid.neighbor(n, -2, 0);
    const auto s = grid.neighbor(n, 0, -2), nn = grid.neighbor(n, 0, 2);
    CHECK(b[*e] + b[*w] - 2.0 * b[n] > 0.0);
    CHECK(b[*s] + b[*nn] - 2.0 * b[n] > 0.0);
    ++checked;
  }
  CHECK(checked > 100);
}

TEST_CASE("single-stage staircase is the bent distance") {
  const MetricGrid grid = disk_grid(96);
  StaircaseSpec spec;
  spec.regions = {Region::domain_of(grid)};
  spec.bends = {0.2};
  const Staircase s = staircase(grid, spec);
  const ScalarField expected = bend(grid, signed_distance(grid, Region::domain_of(grid)), 0.2);
  for (NodeId n = 0; n < grid.size(); ++n) {
    REQUIRE(s.h.defined(n) == expected.defined(n));
    if (expected.defined(n)) CHECK(s.h[n] == expected[n]);
  }
  CHECK(s.ridge.empty());
}

TEST_CASE("staircase of nested disks") {
  const MetricGrid grid = disk_grid(120);
  StaircaseSpec spec;
  spec.regions = {Region::domain_of(grid), disk_region(grid, 0.05, 0.0, 2.0 / 3.0),
                  disk_region(grid, 0.1, 0.05, 1.0 / 3.0)};
  const Staircase s = staircase(grid, spec);
  REQUIRE(s.gaps.size() == 2);

  // Sublevels are intersections of the stage sublevels.
  std::mt19937 rng(11);
  const auto [lo, hi] = s.h.range();
  std::uniform_real_distribution<double> level(lo, hi);
  for (int k = 0; k < 20; ++k) {
    const double t = level(rng);
    Region expected = Region::domain_of(grid);
    for (const ScalarField& stage : s.stages) {
      Region allowed(grid.nx(), grid.ny());
      for (NodeId n = 0; n < grid.size(); ++n) {
        allowed.set(n, grid.in_domain(n) && (!stage.defined(n) || stage[n] <= t));
      }
      expected = expected & allowed;
    }
    CHECK(sublevel(s.h, t) == expected);
  }

  // h vanishes on the outer boundary layer and is negative inside.
  const Region rim = boundary_layer(grid, Region::domain_of(grid));
  for (NodeId n = 0; n < grid.size(); ++n) {
    if (rim.contains(n)) CHECK(s.h[n] < 0.0);
    if (rim.contains(n)) CHECK(s.h[n] >= -grid.h());
  }

  // Away from creases the level curvature is that of the attaining stage.
  const double floor = 0.5;
  const ScalarField kh = level_mean_curvature(grid, s.h, floor);
  std::vector<ScalarField> ks;
  for (const ScalarField& stage : s.stages) ks.push_back(level_mean_curvature(grid, stage, floor));
  const Region near_ridge = s.ridge.empty() ? s.ridge : dilate(grid, s.ridge, 2.5 * grid.h());
  int compared = 0;
  for (NodeId n = 0; n < grid.size(); ++n) {
    if (!kh.defined(n) || near_ridge.contains(n)) continue;
    const ScalarField& k = ks[s.active[n]];
    REQUIRE(k.defined(n));
    CHECK(kh[n] == doctest::Approx(k[n]).epsilon(1e-9));
    ++compared;
  }
  CHECK(compared > 1000);

  // Across the creases, the frame-mollified staircase is strictly mean convex.
  const MetricGrid frame = frame_grid(grid);
  const Staircase sf = staircase(frame, spec);
  const ScalarField smooth =
      restrict_to_domain(grid, mollify(frame, sf.h, default_smoothing_radius(grid)));
  const ConvexityReport report = verify_mean_convex(
      grid, smooth, ScalarField::constant(grid, 0.0), default_grad_floor(grid, smooth));
  CHECK(report.min_margin > 0.0);
  // The rim layer lacks full stencils; about 5% of nodes at this resolution.
  CHECK(report.sampled_fraction() > 0.9);
  CHECK(report.pass);
}

TEST_CASE("staircase rejects broken nests") {
  const MetricGrid grid = disk_grid(64);
  StaircaseSpec spec;
  spec.regions = {disk_region(grid, 0, 0, 0.5), disk_region(grid, 0.4, 0, 0.3)};
  CHECK(error_message([&] { staircase(grid, spec); }) == "staircase gap violated");
  spec.regions = {disk_region(grid, 0, 0, 0.9), disk_region(grid, 0, 0, 0.3)};
  spec.gaps = {0.2};
  CHECK(error_message([&] { staircase(grid, spec); }) == "staircase gap violated");
  spec.gaps = {0.7};
  CHECK_NOTHROW(staircase(grid, spec));
}

TEST_CASE("kernel weights are normalized") {
  const MetricGrid grid = poincare_disk(64, 0.8, 0.75);
  const ScalarField f = field(grid, [](double x, double) { return x; });
  double worst = 0.0;
  for (NodeId n = 0; n < grid.size(); ++n) {
    const auto w = kernel_weights(grid, f, n, 3.0 * 2.0 * grid.h());
    if (w.empty()) continue;
    double sum = 0.0;
    for (const auto& [y, weight] : w) {
      CHECK(weight >= 0.0);
      sum += weight;
    }
    worst = std::max(worst, std::abs(sum - 1.0));
  }
  CHECK(worst < 1e-14);
}

TEST_CASE("mollification fixes affine fields in the interior") {
  const MetricGrid grid = euclidean(Box{-1, 1, -1, 1}, 80);
  const double eps = 4.0 * grid.h();
  const ScalarField f = field(grid, [](double x, double y) { return 0.3 + 2.0 * x - y; });
  const ScalarField g = mollify(grid, f, eps);
  for (NodeId n = 0; n < grid.size(); ++n) {
    if (std::abs(xc(grid, n)) < 0.8 && std::abs(yc(grid, n)) < 0.8) {
      CHECK(g[n] == doctest::Approx(f[n]).epsilon(1e-12));
    }
  }
  CHECK(error_message([&] { mollify(grid, f, 1.5 * grid.h()); }) == "kernel under-resolved");
}

TEST_CASE("mollified cone has convex levels") {
  // Odd node count puts the apex on a node.
  const MetricGrid grid = euclidean(Box{-1, 1, -1, 1}, 129);
  const double eps = 3.0 * grid.h();
  const ScalarField cone = field(grid, [](double x, double y) { return std::hypot(x, y); });
  const ScalarField g = mollify(grid, cone, eps);
  const ScalarField k = level_mean_curvature(grid, g, 0.5);
  int sampled = 0;
  for (NodeId n = 0; n < grid.size(); ++n) {
    if (!k.defined(n) || g[n] < 0.2 || g[n] > 0.8) continue;
    CHECK(k[n] > 0.0);
    ++sampled;
  }
  CHECK(sampled > 1000);
  // Smooth at the tip: the minimum is a nondegenerate critical point.
  const auto crit = critical_points(grid, g);
  REQUIRE(crit.size() == 1);
  CHECK(crit[0].index == 0);
  CHECK(crit[0].nondegenerate);
}

TEST_CASE("serial and parallel mollification agree bit for bit") {
  const MetricGrid grid = poincare_disk(96, 0.8, 0.75);
  const ScalarField f = field(grid, [](double x, double y) { return std::sin(3 * x) + y * y; });
  const ScalarField a = mollify(grid, f, 3.0 * 2.0 * grid.h(), Exec::serial);
  const ScalarField b = mollify(grid, f, 3.0 * 2.0 * grid.h(), Exec::parallel);
  for (NodeId n = 0; n < grid.size(); ++n) {
    REQUIRE(a.defined(n) == b.defined(n));
    if (a.defined(n)) CHECK(std::bit_cast<std::uint64_t>(a[n]) == std::bit_cast<std::uint64_t>(b[n]));
  }
}

TEST_CASE("serial and parallel verification agree bit for bit") {
  const MetricGrid grid = poincare_disk(96, 0.8, 0.75);
  const ScalarField f = field(grid, [](double x, double y) { return x * x + 2 * y * y + 0.3 * x; });
  const ScalarField phi = ScalarField::constant(grid, 0.5);
  const double floor = default_grad_floor(grid, f);
  const ConvexityReport a = verify_mean_convex(grid, f, phi, floor, Exec::serial);
  const ConvexityReport b = verify_mean_convex(grid, f, phi, floor, Exec::parallel);
  CHECK(a.samples == b.samples);
  CHECK(std::bit_cast<std::uint64_t>(a.min_margin) == std::bit_cast<std::uint64_t>(b.min_margin));
  CHECK(std::bit_cast<std::uint64_t>(a.mean_margin) == std::bit_cast<std::uint64_t>(b.mean_margin));
  CHECK(a.violations == b.violations);
  CHECK(a.violating_nodes == b.violating_nodes);
  CHECK(a.histogram_counts == b.histogram_counts);
  CHECK(a.critical.size() == b.critical.size());
  CHECK(a.pass == b.pass);
}

namespace {

// Implicit description max(|x - a|, |x - b|) - 1 of the lens cut out by two
// unit disks centered at (-0.5, 0) and (0.5, 0).
ScalarField lens_field(const MetricGrid& grid) {
  return field(grid, [](double x, double y) {
    return std::max(std::hypot(x + 0.5, y), std::hypot(x - 0.5, y)) - 1.0;
  });
}

Region zero_sublevel(const ScalarField& f) { return sublevel(f, 0.0); }

double hausdorff(const MetricGrid& grid, const Region& a, const Region& b) {
  return std::max(boundary_excursion(grid, a, b), boundary_excursion(grid, b, a));
}

}  // namespace

TEST_CASE("corner smoothing with zero radii is the identity") {
  const MetricGrid grid = disk_grid(64);
  const Region r = disk_region(grid, 0.1, 0.0, 0.6);
  CHECK(corner_smooth(grid, r, 0.0, 0.0) == r);
  CHECK(error_message([&] { corner_smooth(grid, r, grid.h(), 0.02); }) ==
        "kernel under-resolved");
}

TEST_CASE("corner smoothing rounds the lens") {
  const MetricGrid grid = euclidean(Box{-0.8, 0.8, -1.1, 1.1}, 161);
  const double h = grid.h(), delta = 0.05, eps = 0.02;
  const ScalarField lens = lens_field(grid);
  const Region input = zero_sublevel(lens);
  const Region out = corner_smooth(grid, lens, delta, eps);
  CHECK(out.subset_of(input));
  CHECK(hausdorff(grid, out, input) <= delta + eps + 2.0 * h);

  // Arcs keep curvature about 1, the corner caps approach 1/δ.
  const ScalarField f = corner_smoothing_field(grid, lens, delta, eps);
  const CurvatureSummary k = level_curvature(grid, f, delta, h);
  CHECK(k.samples > 500);
  CHECK(k.min >= 0.9);
  CHECK(k.max > 0.8 / delta);

  // From a mask the boundary is known only to within a cell; the result is
  // still a displaced-by-at-most-δ+ε+2h convex region.
  const Region from_mask = corner_smooth(grid, input, delta, eps);
  CHECK(from_mask.subset_of(input));
  CHECK(hausdorff(grid, from_mask, input) <= delta + eps + 2.0 * h);
  const CurvatureSummary km =
      level_curvature(grid, corner_smoothing_field(grid, input, delta, eps), delta, h);
  CHECK(km.mean > 1.0);
}

TEST_CASE("corner smoothing of a square gives arcs of radius delta") {
  const MetricGrid grid = euclidean(Box{-0.7, 0.7, -0.7, 0.7}, 141);
  const double h = grid.h(), delta = 0.1, eps = 0.02;
  const ScalarField square =
      field(grid, [](double x, double y) { return std::max(std::abs(x), std::abs(y)) - 0.5; });
  const ScalarField f = corner_smoothing_field(grid, square, delta, eps);
  const ScalarField k = level_mean_curvature(grid, f, default_grad_floor(grid, f));
  int corners = 0, sides = 0;
  for (NodeId n = 0; n < grid.size(); ++n) {
    if (!k.defined(n) || std::abs(f[n] - delta) > h) continue;
    const double x = std::abs(xc(grid, n)), y = std::abs(yc(grid, n));
    // Inside the caps, clear of the ε-blurred junctions with the sides.
    if (x > 0.4 + eps && y > 0.4 + eps) {
      CHECK(k[n] == doctest::Approx(1.0 / delta).epsilon(0.2));
      ++corners;
    }
    if (std::min(x, y) < 0.3) {
      CHECK(std::abs(k[n]) < 0.05);
      ++sides;
    }
  }
  CHECK(corners > 40);
  CHECK(sides > 200);
}

TEST_CASE("corner smoothing rejects reflex corners and thin regions") {
  const MetricGrid grid = euclidean(Box{-1, 1, -1, 1}, 101);
  const Region square = sublevel(
      field(grid, [](double x, double y) { return std::max(std::abs(x), std::abs(y)) - 0.6; }),
      0.0);
  Region notch(grid.nx(), grid.ny());
  for (NodeId n = 0; n < grid.size(); ++n) notch.set(n, xc(grid, n) > 0.0 && yc(grid, n) > 0.0);
  const Region l_shape = square - notch;
  CHECK(error_message([&] { corner_smooth(grid, l_shape, 0.1, 0.05); }) ==
        "lemma hypothesis violated");
  const Region strip = sublevel(field(grid, [](double, double y) { return std::abs(y) - 0.05; }), 0.0);
  CHECK(error_message([&] { corner_smooth(grid, strip, 0.2, 0.05); }) ==
        "region thinner than the smoothing radius");
}

TEST_CASE("Morse regularization keeps a Morse function") {
  const MetricGrid grid = disk_grid(65);
  const ScalarField f = field(grid, [](double x, double y) { return x * x + 2.0 * y * y; });
  const double amplitude = 1e-4;
  const MorseResult m = morse_regularize(grid, f, amplitude, 3);
  for (NodeId n = 0; n < grid.size(); ++n) {
    if (f.defined(n)) CHECK(std::abs(m.f[n] - f[n]) <= amplitude * 1.01);
  }
  const auto before = critical_points(grid, f);
  REQUIRE(before.size() == m.critical.size());
  for (std::size_t i = 0; i < before.size(); ++i) {
    CHECK(before[i].node == m.critical[i].node);
    CHECK(before[i].index == m.critical[i].index);
  }
  // Seeded and reproducible.
  const MorseResult again = morse_regularize(grid, f, amplitude, 3);
  CHECK(again.center_x == m.center_x);
  CHECK(again.center_y == m.center_y);
  CHECK(morse_regularize(grid, f, amplitude, 4).center_x != m.center_x);
  CHECK(error_message([&] { morse_regularize(grid, f, 0.0, 3); }) == "amplitude must be positive");
}

TEST_CASE("Morse regularization resolves a flat minimum") {
  const MetricGrid grid = disk_grid(97);
  const ScalarField f =
      field(grid, [](double x, double y) { return std::max(std::hypot(x, y) - 0.3, 0.0); });
  const MorseResult m = morse_regularize(grid, f, 1e-3, 1);
  REQUIRE(m.critical.size() == 1);
  CHECK(m.critical[0].index == 0);
  CHECK(m.critical[0].nondegenerate);
  CHECK(std::hypot(xc(grid, m.critical[0].node), yc(grid, m.critical[0].node)) < 0.3);
}

TEST_CASE("verification of r squared on the disk") {
  const MetricGrid grid = disk_grid(97);
  const ScalarField f = field(grid, [](double x, double y) { return x * x + y * y; });
  const ConvexityReport r =
      verify_mean_convex(grid, f, ScalarField::constant(grid, 0.0), default_grad_floor(grid, f));
  CHECK(r.pass);
  CHECK(r.violations == 0);
  CHECK(r.sampled_fraction() > 0.9);
  REQUIRE(r.critical.size() == 1);
  CHECK(r.critical[0].index == 0);
  const ScalarField k = level_mean_curvature(grid, f, default_grad_floor(grid, f));
  for (NodeId n = 0; n < grid.size(); ++n) {
    const double rad = std::hypot(xc(grid, n), yc(grid, n));
    if (k.defined(n) && rad > 0.2) CHECK(k[n] == doctest::Approx(1.0 / rad).epsilon(0.02));
  }
  std::size_t binned = 0;
  for (std::size_t c : r.histogram_counts) binned += c;
  CHECK(binned == r.samples);
}

TEST_CASE("verification fails on geodesic levels and on saddles") {
  SUBCASE("flat cylinder") {
    WarpProfile flat = WarpProfile::from_name("table");
    flat.table = {{0.0, 1.0}, {1.0, 1.0}};
    const MetricGrid grid = warped_cylinder(flat, 0.0, 1.0, 64, 1.0);
    const ScalarField t = field(grid, [](double, double y) { return y; });
    const ConvexityReport r =
        verify_mean_convex(grid, t, ScalarField::constant(grid, 0.01), default_grad_floor(grid, t));
    CHECK_FALSE(r.pass);
    CHECK(r.min_margin == doctest::Approx(-0.01).epsilon(1e-6));
    CHECK(r.violations == r.samples);
  }
  SUBCASE("saddle") {
    const MetricGrid grid = euclidean(Box{-1, 1, -1, 1}, 65);
    const ScalarField f = field(grid, [](double x, double y) { return x * x - y * y; });
    const ConvexityReport r =
        verify_mean_convex(grid, f, ScalarField::constant(grid, 0.0), default_grad_floor(grid, f));
    CHECK_FALSE(r.pass);
    bool saddle = false;
    for (const auto& c : r.critical) saddle = saddle || c.index == 1;
    CHECK(saddle);
  }
}

TEST_CASE("mollified margins degrade at most linearly in the radius") {
  // cosh(2x) + y² has a positive definite Hessian, so its levels are
  // strictly convex, and averaging lowers its smallest margin. Margins are
  // measured where every kernel stays in the frame.
  const MetricGrid grid = euclidean(Box{-1, 1, -1, 1}, 129);
  const double h = grid.h();
  const ScalarField f =
      field(grid, [](double x, double y) { return std::cosh(2.0 * x) + y * y; });
  Region core(grid.nx(), grid.ny());
  for (NodeId n = 0; n < grid.size(); ++n) {
    core.set(n, std::abs(xc(grid, n)) <= 0.6 && std::abs(yc(grid, n)) <= 0.6);
  }
  auto margin = [&](const ScalarField& g) {
    const ScalarField k = level_mean_curvature(grid, g, default_grad_floor(grid, g));
    double m = std::numeric_limits<double>::infinity();
    for (NodeId n = 0; n < grid.size(); ++n) {
      if (core.contains(n) && k.defined(n)) m = std::min(m, k[n]);
    }
    return m;
  };
  const double m0 = margin(f);
  REQUIRE(m0 > 0.0);
  std::vector<double> radii{2.0 * h, 4.0 * h, 8.0 * h}, margins;
  double c = 0.0;
  for (double eps : radii) {
    margins.push_back(margin(mollify(grid, f, eps)));
    c = std::max(c, (m0 - margins.back()) / eps);
  }
  for (std::size_t i = 0; i < radii.size(); ++i) {
    CHECK(margins[i] > 0.0);
    CHECK(margins[i] >= m0 - c * radii[i]);
    CHECK(margins[i] <= (i ? margins[i - 1] : m0));
  }
  CHECK(c > 0.0);
  // One constant covers the sweep without collapse.
  CHECK(c * radii.back() < 0.5 * m0);
}
