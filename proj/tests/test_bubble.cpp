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
#include <numbers>

#include "bubblecut/bubble.hpp"
#include "bubblecut/error.hpp"
#include "bubblecut/geometry.hpp"
#include "bubblecut/metrics.hpp"
#include "doctest.h"

using namespace bubblecut;

namespace {

constexpr double kPi = std::numbers::pi;

std::string error_message(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.message();
  }
  return {};
}

MetricGrid unit_disk_grid(int nx) {
  MetricGrid grid = euclidean(Box{-1.2, 1.2, -1.2, 1.2}, nx);
  const Region disk = disk_region(grid, 0.0, 0.0, 1.0);
  std::vector<std::uint8_t> mask(grid.size());
  for (NodeId n = 0; n < grid.size(); ++n) mask[n] = disk.contains(n);
  grid.set_domain(mask);
  return grid;
}

MetricGrid cosh_cylinder() {
  return warped_cylinder(WarpProfile{}, -2.0, 2.0, 256, 2.0 * kPi);
}

MetricGrid flat_cylinder(int n_theta, double length) {
  WarpProfile flat = WarpProfile::from_name("table");
  flat.table = {{0.0, 1.0}, {1.0, 1.0}};
  return warped_cylinder(flat, 0.0, length, n_theta, 1.0);
}

void check_nested(const BubbleTrace& trace, bool downward) {
  for (std::size_t i = 1; i < trace.regions.size(); ++i) {
    if (downward) {
      CHECK(trace.regions[i].subset_of(trace.regions[i - 1]));
    } else {
      CHECK(trace.regions[i - 1].subset_of(trace.regions[i]));
    }
  }
}

// Largest |t| among the residual curve cells, in coordinate units.
double max_abs_y(const MetricGrid& grid, const Region& r) {
  double m = 0.0;
  for (NodeId n = 0; n < grid.size(); ++n) {
    if (r.contains(n)) m = std::max(m, std::abs(grid.y(grid.row(n))));
  }
  return m;
}

}  // namespace

TEST_CASE("schedule invariants are enforced") {
  const MetricGrid grid = unit_disk_grid(96);
  BubbleSchedule s;
  CHECK_NOTHROW(s.validate(grid, 0.1));
  CHECK(s.epsilon(1) < s.epsilon(0));
  CHECK(s.forcing(0.1) == doctest::Approx(2.0 / 0.1 + 0.1 + 1.0));
  auto expect_bad = [&](BubbleSchedule bad) {
    CHECK(error_message([&] { bad.validate(grid, 0.1); }) == "bad schedule");
  };
  BubbleSchedule b = s;
  b.epsilon0 = 0.0;
  expect_bad(b);
  b = s;
  b.decay = 1.0;
  expect_bad(b);
  b = s;
  b.rho = 2.0 * grid.h();
  expect_bad(b);
  b = s;
  b.phi_big = 5.0;
  expect_bad(b);
  b = s;
  b.max_steps = 0;
  expect_bad(b);
  const ScalarField phi = ScalarField::constant(grid, 0.1);
  CHECK(error_message([&] { shrink_bubbles(grid, Region::domain_of(grid), phi, b); }) ==
        "bad schedule");
}

TEST_CASE("shrinking an empty region empties at step zero") {
  const MetricGrid grid = unit_disk_grid(96);
  const BubbleRun run = shrink_bubbles(grid, Region(grid.nx(), grid.ny()),
                                       ScalarField::constant(grid, 0.1), BubbleSchedule{});
  CHECK(run.verdict.kind == VerdictKind::empties);
  CHECK(run.verdict.steps == 0);
  CHECK(run.trace.regions.size() == 1);
}

TEST_CASE("shrinking bubbles empty a Euclidean disk") {
  const MetricGrid grid = unit_disk_grid(96);
  BubbleSchedule s;
  s.rho = 0.1;
  const BubbleRun run =
      shrink_bubbles(grid, Region::domain_of(grid), ScalarField::constant(grid, 0.1), s);
  CHECK(run.verdict.kind == VerdictKind::empties);
  CHECK(run.verdict.steps < s.max_steps);
  check_nested(run.trace, true);
  for (std::size_t i = 1; i < run.trace.regions.size(); ++i) {
    CHECK(run.trace.regions[i].count() < run.trace.regions[i - 1].count());
  }
  CHECK(run.trace.confinement <= 3.0);
  CHECK(run.trace.phis.size() + 1 == run.trace.regions.size());
}

TEST_CASE("shrinking bubbles stall at the neck of a catenoid-like cylinder") {
  const MetricGrid grid = cosh_cylinder();
  const BubbleRun run = shrink_bubbles(grid, Region::domain_of(grid),
                                       ScalarField::constant(grid, 0.05), BubbleSchedule{});
  REQUIRE(run.verdict.kind == VerdictKind::residual);
  check_nested(run.trace, true);
  CHECK(run.trace.confinement <= 3.0);
  const Verdict& v = run.verdict;
  REQUIRE(!v.residual_curve.empty());
  CHECK(max_abs_y(grid, v.residual_curve) <= 3.0 * grid.h());
  CHECK(std::max(std::abs(v.curvature.min), std::abs(v.curvature.max)) <= 0.1);
  CHECK(std::abs(v.curvature.mean) <= v.kappa_tol);
  CHECK(v.residual_length == doctest::Approx(2.0 * kPi).epsilon(0.03));

  // Discrete stationarity: the region below the upper residual curve,
  // re-solved freely in a collar around that curve, does not get shorter
  // beyond the tolerance.
  double top = -1e9;
  for (NodeId n = 0; n < grid.size(); ++n) {
    if (v.residual.contains(n)) top = std::max(top, grid.y(grid.row(n)));
  }
  const Region below = band_y(grid, -2.0, top);
  const CutGraph graph(grid);
  const Region collar = band_y(grid, top - 0.3, top + 0.3);
  CutProblem p;
  p.graph = &graph;
  p.phi = ScalarField::constant(grid, 0.0);
  p.must_include = below - collar;
  p.must_exclude = Region::domain_of(grid) - below - collar;
  const CutSolution free = minimize_phi_area(p);
  const double before = perimeter(graph, below);
  CHECK(free.perimeter >= before - v.kappa_tol * 2.0 * kPi * 0.3);
}

TEST_CASE("growing bubbles exhaust an expanding cusp") {
  const MetricGrid grid =
      warped_cylinder(WarpProfile::from_name("exp"), 0.0, 3.0, 128, 2.0 * kPi);
  const Region X = Region::domain_of(grid);
  const Region seed = band_y(grid, 2.8, 3.0);
  BubbleSchedule s;
  s.rho = 0.25;
  const BubbleRun run = grow_bubbles(grid, X, seed, ScalarField::constant(grid, 0.0), s);
  CHECK(run.verdict.kind == VerdictKind::exhausts);
  check_nested(run.trace, false);
  CHECK(run.trace.confinement <= 3.0);
}

TEST_CASE("growing bubbles from a collar stop at the neck") {
  const MetricGrid grid = cosh_cylinder();
  const Region X = Region::domain_of(grid);
  const Region seed = band_y(grid, 1.5, 2.0);
  const BubbleRun run = grow_bubbles(grid, X, seed, ScalarField::constant(grid, 0.0),
                                     BubbleSchedule{});
  REQUIRE(run.verdict.kind == VerdictKind::residual);
  check_nested(run.trace, false);
  CHECK(run.trace.confinement <= 3.0);
  const Verdict& v = run.verdict;
  bool near_neck = false;
  for (NodeId n = 0; n < grid.size(); ++n) {
    if (v.residual_curve.contains(n) && std::abs(grid.y(grid.row(n))) <= 3.0 * grid.h()) near_neck = true;
  }
  CHECK(near_neck);
  CHECK(v.residual_length < 2.0 * kPi * std::cosh(1.5));
  CHECK(v.note.empty());
}

TEST_CASE("growth errors and trivial exhaustion") {
  const MetricGrid grid = unit_disk_grid(96);
  const Region X = Region::domain_of(grid);
  const ScalarField zero = ScalarField::constant(grid, 0.0);
  CHECK(error_message([&] { grow_bubbles(grid, X, Region(grid.nx(), grid.ny()), zero, {}); }) ==
        "no seed");
  const BubbleRun run = grow_bubbles(grid, X, X, zero, BubbleSchedule{});
  CHECK(run.verdict.kind == VerdictKind::exhausts);
  CHECK(run.verdict.steps == 0);
}

TEST_CASE("minimal separator on a flat cylinder") {
  const MetricGrid grid = flat_cylinder(64, 2.0);
  const Region domain = Region::domain_of(grid);
  const Separator s = minimal_separator(grid, domain, band_y(grid, 0.0, 0.05),
                                        band_y(grid, 1.95, 2.0));
  CHECK(s.length == doctest::Approx(1.0).epsilon(0.03));
  CHECK(s.component_lengths.size() == 1);
}

TEST_CASE("minimal separator finds the neck") {
  const MetricGrid grid = cosh_cylinder();
  const Separator s = minimal_separator(grid, Region::domain_of(grid), band_y(grid, -2.0, -1.95),
                                        band_y(grid, 1.95, 2.0));
  CHECK(s.length == doctest::Approx(2.0 * kPi).epsilon(0.03));
  CHECK(max_abs_y(grid, s.curve) <= 3.0 * grid.h());
}

TEST_CASE("minimal separator in an annulus hugs the inner boundary") {
  const MetricGrid grid = euclidean(Box{-2.2, 2.2, -2.2, 2.2}, 176);
  const Region domain = disk_region(grid, 0, 0, 2.0) - disk_region(grid, 0, 0, 1.0);
  const Region inner = domain & disk_region(grid, 0, 0, 1.0 + 1.5 * grid.h());
  const Region outer = domain - disk_region(grid, 0, 0, 2.0 - 1.5 * grid.h());
  const Separator s = minimal_separator(grid, domain, inner, outer);
  CHECK(s.length >= 2.0 * kPi * 0.97);
  CHECK(s.length <= 2.0 * kPi * (1.0 + 4.0 * grid.h()) * 1.03);
  for (NodeId n = 0; n < grid.size(); ++n) {
    if (s.curve.contains(n)) CHECK(std::hypot(grid.x(grid.col(n)), grid.y(grid.row(n))) <= 1.0 + 4.0 * grid.h());
  }
}

TEST_CASE("separator errors") {
  const MetricGrid grid = flat_cylinder(32, 2.0);
  const Region domain = Region::domain_of(grid);
  const Region a = band_y(grid, 0.0, 0.5);
  auto msg = [&](const Region& x, const Region& y) {
    return error_message([&] { minimal_separator(grid, domain, x, y); });
  };
  CHECK(msg(a, band_y(grid, 0.4, 1.0)) == "ends not separated");
  CHECK(msg(a, band_y(grid, 0.5 + 0.5 * grid.h(), 1.0)) == "ends not separated");
  CHECK(msg(a, Region(grid.nx(), grid.ny())) == "ends not separated");
}

TEST_CASE("flat torus systoles equal the periods") {
  const MetricGrid grid = flat_torus(1.0, 1.5, 64);
  const auto lengths = torus_systoles(grid);
  REQUIRE(lengths.size() == 2);
  CHECK(lengths[0] == doctest::Approx(1.0).epsilon(0.03));
  CHECK(lengths[1] == doctest::Approx(1.5).epsilon(0.03));
  const auto v = detect_residual(grid, Region::domain_of(grid), BubbleSchedule{}, 0.1);
  REQUIRE(v.has_value());
  CHECK(v->residual_length == doctest::Approx(1.0).epsilon(0.03));
}

TEST_CASE("end classification") {
  BubbleSchedule s;
  SUBCASE("disk is exhausted by convex bubbles") {
    const MetricGrid grid = unit_disk_grid(96);
    const Region domain = Region::domain_of(grid);
    const Region end = domain - disk_region(grid, 0, 0, 1.0 - 1.5 * grid.h());
    const Verdict v = classify_end(grid, domain, end, s);
    REQUIRE(v.end_class.has_value());
    CHECK(*v.end_class == EndClass::convex_exhaustion);
  }
  SUBCASE("shrinking cusp is exhausted by concave bubbles") {
    const MetricGrid grid =
        warped_cylinder(WarpProfile::from_name("exp_neg"), 0.0, 3.0, 128, 2.0 * kPi);
    const Region domain = Region::domain_of(grid);
    const Verdict v = classify_end(grid, domain, band_y(grid, 2.95, 3.0), s);
    REQUIRE(v.end_class.has_value());
    CHECK(*v.end_class == EndClass::concave_exhaustion);
  }
  SUBCASE("flat cylinder is foliated by geodesics") {
    const MetricGrid grid = flat_cylinder(64, 2.0);
    const Region domain = Region::domain_of(grid);
    const Verdict v = classify_end(grid, domain, band_y(grid, 1.95, 2.0), s);
    REQUIRE(v.end_class.has_value());
    CHECK(*v.end_class == EndClass::minimal_foliation);
    CHECK(std::abs(v.curvature.mean) <= v.kappa_tol);
  }
  SUBCASE("two boundary bands are rejected") {
    const MetricGrid grid = flat_cylinder(32, 2.0);
    const Region ends = band_y(grid, 0.0, 0.1) | band_y(grid, 1.9, 2.0);
    CHECK(error_message([&] { classify_end(grid, Region::domain_of(grid), ends, s); }) ==
          "not a single end");
  }
}

TEST_CASE("residual detector respects the maximum principle on a disk") {
  const MetricGrid grid = unit_disk_grid(96);
  CHECK_FALSE(detect_residual(grid, Region::domain_of(grid), BubbleSchedule{}, 0.05).has_value());
  const MetricGrid neck = cosh_cylinder();
  const auto v = detect_residual(neck, Region::domain_of(neck), BubbleSchedule{}, 0.1);
  REQUIRE(v.has_value());
  CHECK(v->residual_length == doctest::Approx(2.0 * kPi).epsilon(0.03));
}
