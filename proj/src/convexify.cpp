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

#include "bubblecut/convexify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "bubblecut/cut.hpp"
#include "bubblecut/error.hpp"
#include "bubblecut/parallel.hpp"

namespace bubblecut {

namespace {

constexpr std::string_view kModule = "convexify";

double smallest_stretch(const MetricTensor& g) {
  const double tr = g.g11 + g.g22;
  const double disc = std::sqrt(std::max(tr * tr - 4.0 * g.det(), 0.0));
  return std::sqrt(0.5 * (tr - disc));
}

// Smallest metric length of one grid step over the domain.
double finest_step(const MetricGrid& grid) {
  double m = std::numeric_limits<double>::infinity();
  for (NodeId n = 0; n < grid.size(); ++n) {
    if (grid.in_domain(n)) m = std::min(m, grid.h() * smallest_stretch(grid.metric(n)));
  }
  return m;
}

// Largest metric length of one grid step over the domain.
double coarsest_step(const MetricGrid& grid) {
  double m = 0.0;
  for (NodeId n = 0; n < grid.size(); ++n) {
    if (!grid.in_domain(n)) continue;
    const MetricTensor& g = grid.metric(n);
    const double tr = g.g11 + g.g22;
    const double disc = std::sqrt(std::max(tr * tr - 4.0 * g.det(), 0.0));
    m = std::max(m, grid.h() * std::sqrt(0.5 * (tr + disc)));
  }
  return m;
}

double beta(double t, double c) { return t + c * t * t; }

// Indicator averaging radius, in grid steps, that locates a mask boundary.
constexpr double kMaskSmoothing = 3.0;

}  // namespace

ScalarField bend(const MetricGrid& grid, const ScalarField& d, double c) {
  require_same_shape(grid, d.nx(), d.ny(), kModule);
  ScalarField out(d.nx(), d.ny());
  for (NodeId n = 0; n < d.size(); ++n) {
    if (!d.defined(n)) continue;
    if (!(1.0 + 2.0 * c * d[n] > 0.0)) fail(kModule, "bending breaks monotonicity");
    out.set(n, beta(d[n], c));
  }
  return out;
}

Staircase staircase(const MetricGrid& grid, const StaircaseSpec& spec) {
  const std::size_t k = spec.regions.size();
  if (k == 0) fail(kModule, "empty staircase");
  if (!spec.gaps.empty() && spec.gaps.size() + 1 != k) fail(kModule, "gap count mismatch");
  if (!spec.bends.empty() && spec.bends.size() != k) fail(kModule, "bend count mismatch");
  const Region domain = Region::domain_of(grid);
  std::vector<Region> regions;
  for (const Region& r : spec.regions) {
    require_same_shape(grid, r.nx(), r.ny(), kModule);
    regions.push_back(r & domain);
    if (regions.back().empty()) fail(kModule, "staircase gap violated");
  }

  Staircase out;
  for (std::size_t i = 0; i + 1 < k; ++i) {
    if (!regions[i + 1].subset_of(regions[i]) || regions[i + 1] == regions[i]) {
      fail(kModule, "staircase gap violated");
    }
    const double measured = boundary_excursion(grid, regions[i + 1], regions[i]);
    if (spec.gaps.empty()) {
      out.gaps.push_back(measured + grid.h());
    } else {
      if (!(spec.gaps[i] > measured)) fail(kModule, "staircase gap violated");
      out.gaps.push_back(spec.gaps[i]);
    }
  }

  out.h = ScalarField(grid.nx(), grid.ny());
  out.active.assign(grid.size(), -1);
  for (std::size_t i = 0; i < k; ++i) {
    const ScalarField d = signed_distance(grid, regions[i]);
    // Stage i ≥ 2 lives on the previous region.
    ScalarField local(grid.nx(), grid.ny());
    double reach = 0.0;
    for (NodeId n = 0; n < grid.size(); ++n) {
      if (!d.defined(n) || (i > 0 && !regions[i - 1].contains(n))) continue;
      local.set(n, d[n]);
      reach = std::max(reach, std::abs(d[n]));
    }
    double c;
    if (spec.bends.empty()) {
      double kmin = 0.0;
      try {
        kmin = bubble_boundary_curvature(grid, regions[i], 1.5 * coarsest_step(grid)).min;
      } catch (const Error&) {
        kmin = 0.0;
      }
      c = 1.5 * std::max(0.0, -kmin);
      if (reach > 0.0) c = std::min(c, 0.25 / reach);
    } else {
      c = spec.bends[i];
    }
    const ScalarField bent = bend(grid, local, c);
    double offset = 0.0;
    if (i > 0) {
      offset = std::numeric_limits<double>::infinity();
      for (NodeId n = 0; n < grid.size(); ++n) {
        if (!bent.defined(n)) continue;
        bool on_layer = false;
        for (int dj = -1; dj <= 1 && !on_layer; ++dj) {
          for (int di = -1; di <= 1 && !on_layer; ++di) {
            const auto m = grid.neighbor(n, di, dj);
            on_layer = !m || !regions[i - 1].contains(*m);
          }
        }
        if (on_layer) offset = std::min(offset, out.h[n] - bent[n]);
      }
      if (!std::isfinite(offset)) offset = 0.0;
    }
    ScalarField stage(grid.nx(), grid.ny());
    for (NodeId n = 0; n < grid.size(); ++n) {
      if (!bent.defined(n)) continue;
      const double v = bent[n] + offset;
      stage.set(n, v);
      if (!out.h.defined(n) || v > out.h[n]) {
        out.h.set(n, v);
        out.active[n] = static_cast<int>(i);
      }
    }
    out.bends.push_back(c);
    out.offsets.push_back(offset);
    out.stages.push_back(std::move(stage));
  }

  // Creases: neighbors attained by stages whose increments differ.
  out.ridge = Region(grid.nx(), grid.ny());
  for (NodeId n = 0; n < grid.size(); ++n) {
    const int a = out.active[n];
    if (a < 0) continue;
    for (int dj = -1; dj <= 1; ++dj) {
      for (int di = -1; di <= 1; ++di) {
        const auto m = grid.neighbor(n, di, dj);
        if (!m || out.active[*m] < 0 || out.active[*m] == a) continue;
        const ScalarField& sa = out.stages[a];
        const ScalarField& sb = out.stages[out.active[*m]];
        if (!sa.defined(*m) || !sb.defined(n)) {
          out.ridge.set(n, true);
          continue;
        }
        const double jump = (sa[*m] - sa[n]) - (sb[*m] - sb[n]);
        if (std::abs(jump) > 1e-9 * (1.0 + std::abs(out.h[n]))) out.ridge.set(n, true);
      }
    }
  }
  return out;
}

double quartic_bump(double t) {
  if (t < 0.0 || t >= 1.0) return 0.0;
  const double s = 1.0 - t * t;
  return s * s;
}

std::vector<std::pair<NodeId, double>> kernel_weights(const MetricGrid& grid,
                                                      const ScalarField& f, NodeId x,
                                                      double eps) {
  std::vector<std::pair<NodeId, double>> w;
  if (!f.defined(x) || !grid.in_domain(x)) return w;
  const MetricTensor& g = grid.metric(x);
  const double h = grid.h();
  int r = static_cast<int>(std::ceil(eps / (h * smallest_stretch(g))));
  const int rx = grid.periodic_x() ? std::min(r, (grid.nx() - 1) / 2) : r;
  const int ry = grid.periodic_y() ? std::min(r, (grid.ny() - 1) / 2) : r;
  double total = 0.0;
  for (int dj = -ry; dj <= ry; ++dj) {
    for (int di = -rx; di <= rx; ++di) {
      const auto y = grid.neighbor(x, di, dj);
      if (!y || !grid.in_domain(*y) || !f.defined(*y)) continue;
      const double psi = quartic_bump(g.length(di * h, dj * h) / eps);
      if (psi <= 0.0) continue;
      const double weight = psi * grid.cell_area(*y);
      w.emplace_back(*y, weight);
      total += weight;
    }
  }
  for (auto& [node, weight] : w) weight /= total;
  return w;
}

ScalarField mollify(const MetricGrid& grid, const ScalarField& f, double eps, Exec exec) {
  require_same_shape(grid, f.nx(), f.ny(), kModule);
  if (!(eps >= 2.0 * finest_step(grid) * (1.0 - 1e-12))) fail(kModule, "kernel under-resolved");
  ScalarField out(grid.nx(), grid.ny());
  auto kernel = [&](NodeId n) {
    const auto w = kernel_weights(grid, f, n, eps);
    if (w.empty()) return;
    double v = 0.0;
    for (const auto& [y, weight] : w) v += weight * f[y];
    out.set(n, v);
  };
  const auto count = static_cast<long>(grid.size());
  if (exec == Exec::serial) {
    for (long n = 0; n < count; ++n) kernel(static_cast<NodeId>(n));
  } else {
#pragma omp parallel for schedule(static) num_threads(kernel_threads())
    for (long n = 0; n < count; ++n) kernel(static_cast<NodeId>(n));
  }
  return out;
}

MetricGrid frame_grid(const MetricGrid& grid) {
  MetricGrid out = grid;
  out.set_domain(std::vector<std::uint8_t>(grid.size(), 1));
  return out;
}

ScalarField restrict_to_domain(const MetricGrid& grid, const ScalarField& f) {
  require_same_shape(grid, f.nx(), f.ny(), kModule);
  ScalarField out(grid.nx(), grid.ny());
  for (NodeId n = 0; n < grid.size(); ++n) {
    if (grid.in_domain(n) && f.defined(n)) out.set(n, f[n]);
  }
  return out;
}

double default_smoothing_radius(const MetricGrid& grid) { return 12.0 * coarsest_step(grid); }

CurvatureSummary level_curvature(const MetricGrid& grid, const ScalarField& f, double level,
                                 double band) {
  require_same_shape(grid, f.nx(), f.ny(), kModule);
  const ScalarField kappa = level_mean_curvature(grid, f, default_grad_floor(grid, f));
  CurvatureSummary s;
  s.min = std::numeric_limits<double>::infinity();
  s.max = -s.min;
  double sum = 0.0;
  for (NodeId n = 0; n < grid.size(); ++n) {
    if (!kappa.defined(n) || std::abs(f[n] - level) > band) continue;
    s.min = std::min(s.min, kappa[n]);
    s.max = std::max(s.max, kappa[n]);
    sum += kappa[n];
    ++s.samples;
  }
  if (s.samples == 0) fail(kModule, "level not sampled");
  s.mean = sum / static_cast<double>(s.samples);
  return s;
}

namespace {

// Throws unless δ and ε resolve on the grid.
void check_corner_radii(const MetricGrid& grid, double delta, double eps) {
  const double step = finest_step(grid);
  if (!(delta >= 2.0 * step * (1.0 - 1e-12)) || !(eps >= 2.0 * step * (1.0 - 1e-12))) {
    fail(kModule, "kernel under-resolved");
  }
}

// Reflex corners are filled by a closing of radius δ well beyond the
// discretization noise of the morphology.
void check_convex_corners(const MetricGrid& grid, const Region& region, double delta) {
  const Region closing = erode(grid, dilate(grid, region, delta), delta);
  const Region filled = closing - region;
  if (filled.empty()) return;
  const ScalarField to_region = distance_transform(grid, region);
  const double noise = 1.5 * coarsest_step(grid);
  for (NodeId n = 0; n < grid.size(); ++n) {
    if (filled.contains(n) && to_region.defined(n) && to_region[n] > noise) {
      fail(kModule, "lemma hypothesis violated");
    }
  }
}

// The ε-mollified distance to the interior equidistant at depth δ of the
// region whose boundary is the zero level of the signed distance sd.
ScalarField equidistant_field(const MetricGrid& grid, const ScalarField& sd, double delta,
                              double eps) {
  bool deep = false;
  for (NodeId n = 0; n < grid.size() && !deep; ++n) deep = sd.defined(n) && sd[n] < -delta;
  if (!deep) fail(kModule, "region thinner than the smoothing radius");
  return mollify(grid, level_signed_distance(grid, sd, -delta), eps);
}

Region clip_sublevel(const MetricGrid& grid, const Region& region, const ScalarField& f,
                     double level) {
  Region out(grid.nx(), grid.ny());
  for (NodeId n = 0; n < grid.size(); ++n) {
    if (region.contains(n) && f.defined(n) && f[n] <= level) out.set(n, true);
  }
  return out;
}

Region implicit_region(const MetricGrid& grid, const ScalarField& implicit) {
  require_same_shape(grid, implicit.nx(), implicit.ny(), kModule);
  Region out(grid.nx(), grid.ny());
  for (NodeId n = 0; n < grid.size(); ++n) {
    if (grid.in_domain(n) && implicit.defined(n) && implicit[n] <= 0.0) out.set(n, true);
  }
  return out;
}

}  // namespace

ScalarField corner_smoothing_field(const MetricGrid& grid, const Region& region_in, double delta,
                                   double eps) {
  require_same_shape(grid, region_in.nx(), region_in.ny(), kModule);
  const Region region = region_in & Region::domain_of(grid);
  check_corner_radii(grid, delta, eps);
  if (region.empty()) fail(kModule, "empty region");
  // The mask boundary is located to sub-cell accuracy by averaging the
  // indicator over a few cells.
  const ScalarField sd = smooth_signed_distance(grid, region, kMaskSmoothing * finest_step(grid));
  return equidistant_field(grid, sd, delta, eps);
}

ScalarField corner_smoothing_field(const MetricGrid& grid, const ScalarField& implicit,
                                   double delta, double eps) {
  const Region region = implicit_region(grid, implicit);
  check_corner_radii(grid, delta, eps);
  if (region.empty()) fail(kModule, "empty region");
  return equidistant_field(grid, level_signed_distance(grid, implicit, 0.0), delta, eps);
}

Region corner_smooth(const MetricGrid& grid, const Region& region_in, double delta, double eps) {
  require_same_shape(grid, region_in.nx(), region_in.ny(), kModule);
  const Region region = region_in & Region::domain_of(grid);
  if (delta == 0.0 && eps == 0.0) return region;
  check_corner_radii(grid, delta, eps);
  if (region.empty()) fail(kModule, "empty region");
  check_convex_corners(grid, region, delta);
  return clip_sublevel(grid, region, corner_smoothing_field(grid, region, delta, eps), delta);
}

Region corner_smooth(const MetricGrid& grid, const ScalarField& implicit, double delta,
                     double eps) {
  const Region region = implicit_region(grid, implicit);
  if (delta == 0.0 && eps == 0.0) return region;
  check_corner_radii(grid, delta, eps);
  if (region.empty()) fail(kModule, "empty region");
  check_convex_corners(grid, region, delta);
  return clip_sublevel(grid, region, corner_smoothing_field(grid, implicit, delta, eps), delta);
}

MorseResult morse_regularize(const MetricGrid& grid, const ScalarField& f, double amplitude,
                             std::uint64_t seed) {
  require_same_shape(grid, f.nx(), f.ny(), kModule);
  if (!(amplitude > 0.0) || !std::isfinite(amplitude)) fail(kModule, "amplitude must be positive");
  double sx = 0.0, sy = 0.0, count = 0.0;
  double xmin = std::numeric_limits<double>::infinity(), xmax = -xmin, ymin = xmin, ymax = -xmin;
  for (NodeId n = 0; n < grid.size(); ++n) {
    if (!grid.in_domain(n) || !f.defined(n)) continue;
    const double x = grid.x(grid.col(n)), y = grid.y(grid.row(n));
    sx += x;
    sy += y;
    count += 1.0;
    xmin = std::min(xmin, x);
    xmax = std::max(xmax, x);
    ymin = std::min(ymin, y);
    ymax = std::max(ymax, y);
  }
  if (count == 0.0) fail(kModule, "field undefined on the domain");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> jitter(-grid.h(), grid.h());
  MorseResult out;
  out.amplitude = amplitude;
  out.seed = seed;
  out.center_x = sx / count + jitter(rng);
  out.center_y = sy / count + jitter(rng);
  const double diameter = std::max(std::hypot(xmax - xmin, ymax - ymin), grid.h());
  const double scale = amplitude / (diameter * diameter);
  out.f = ScalarField(grid.nx(), grid.ny());
  for (NodeId n = 0; n < grid.size(); ++n) {
    if (!grid.in_domain(n) || !f.defined(n)) continue;
    const double dx = grid.x(grid.col(n)) - out.center_x;
    const double dy = grid.y(grid.row(n)) - out.center_y;
    out.f.set(n, f[n] + scale * (dx * dx + dy * dy));
  }
  out.critical = critical_points(grid, out.f, scale);
  for (const auto& c : out.critical) {
    if (!c.nondegenerate) fail(kModule, "regularization failed");
  }
  return out;
}

ConvexityReport verify_mean_convex(const MetricGrid& grid, const ScalarField& f,
                                   const ScalarField& phi_target, double grad_floor, Exec exec) {
  require_same_shape(grid, f.nx(), f.ny(), kModule);
  require_same_shape(grid, phi_target.nx(), phi_target.ny(), kModule);
  ConvexityReport r;
  const ScalarField kappa = level_mean_curvature(grid, f, grad_floor, exec);
  std::vector<double> margins;
  for (NodeId n = 0; n < grid.size(); ++n) {
    if (!grid.in_domain(n) || !f.defined(n)) continue;
    ++r.domain_nodes;
    if (!kappa.defined(n)) continue;
    const double margin = kappa[n] - (phi_target.defined(n) ? phi_target[n] : 0.0);
    margins.push_back(margin);
    if (margin <= 0.0) {
      ++r.violations;
      if (r.violating_nodes.size() < ConvexityReport::kMaxListed) r.violating_nodes.push_back(n);
    }
  }
  r.samples = margins.size();
  if (!margins.empty()) {
    const auto [lo, hi] = std::minmax_element(margins.begin(), margins.end());
    r.min_margin = *lo;
    double sum = 0.0;
    for (double m : margins) sum += m;
    r.mean_margin = sum / static_cast<double>(margins.size());
    constexpr int kBins = 20;
    const double width = (*hi - *lo) / kBins;
    for (int b = 0; b <= kBins; ++b) r.histogram_edges.push_back(*lo + b * width);
    r.histogram_counts.assign(kBins, 0);
    for (double m : margins) {
      int b = width > 0.0 ? static_cast<int>((m - *lo) / width) : 0;
      ++r.histogram_counts[std::clamp(b, 0, kBins - 1)];
    }
  }
  r.critical = critical_points(grid, f);
  bool indices_ok = true;
  for (const auto& c : r.critical) indices_ok = indices_ok && c.index == 0;
  r.pass = r.samples > 0 && r.min_margin > 0.0 && indices_ok;
  return r;
}

}  // namespace bubblecut
