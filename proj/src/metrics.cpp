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

#include "bubblecut/metrics.hpp"

#include <algorithm>
#include <cmath>

#include "bubblecut/error.hpp"

namespace bubblecut {

namespace {

constexpr std::string_view kModule = "cli-io";
constexpr double kTwoPi = 6.283185307179586476925286766559;

template <typename Fn>
std::vector<double> sample(const MetricGrid& grid, Fn&& fn) {
  std::vector<double> out(grid.size());
  for (NodeId n = 0; n < grid.size(); ++n) out[n] = fn(grid.x(grid.col(n)), grid.y(grid.row(n)));
  return out;
}

Box box_from(const nlohmann::json& p) {
  Box b;
  b.xmin = p.value("xmin", -1.0);
  b.xmax = p.value("xmax", 1.0);
  b.ymin = p.value("ymin", b.xmin);
  b.ymax = p.value("ymax", b.xmax);
  return b;
}

}  // namespace

MetricGrid make_grid(const Box& box, int nx, Topology topology) {
  if (!(box.xmax > box.xmin) || !(box.ymax > box.ymin)) fail(kModule, "empty coordinate box");
  if (nx < 4) fail(kModule, "grid needs at least 4 nodes per direction");
  const double h = (box.xmax - box.xmin) / nx;
  const int ny = static_cast<int>(std::lround((box.ymax - box.ymin) / h));
  return MetricGrid(nx, ny, h, topology, box.xmin + 0.5 * h, box.ymin + 0.5 * h);
}

double WarpProfile::w(double t) const {
  switch (kind) {
    case Kind::cosh: return std::cosh(t);
    case Kind::exp: return std::exp(t);
    case Kind::exp_neg: return std::exp(-t);
    case Kind::table: {
      if (table.empty()) fail(kModule, "empty warp table");
      if (t <= table.front().first) return table.front().second;
      if (t >= table.back().first) return table.back().second;
      const auto hi = std::upper_bound(table.begin(), table.end(), t,
                                       [](double v, const auto& knot) { return v < knot.first; });
      const auto lo = hi - 1;
      const double s = (t - lo->first) / (hi->first - lo->first);
      return lo->second + s * (hi->second - lo->second);
    }
  }
  return 1.0;
}

WarpProfile WarpProfile::from_name(const std::string& name) {
  WarpProfile p;
  if (name == "cosh") p.kind = Kind::cosh;
  else if (name == "exp") p.kind = Kind::exp;
  else if (name == "exp_neg") p.kind = Kind::exp_neg;
  else if (name == "table") p.kind = Kind::table;
  else fail(kModule, "unknown warp profile '" + name + "'");
  return p;
}

MetricGrid euclidean(const Box& box, int nx) { return make_grid(box, nx); }

MetricGrid conformal_radial(const Box& box, int nx, double a, double b) {
  MetricGrid grid = make_grid(box, nx);
  grid.set_conformal(sample(grid, [&](double x, double y) { return a + b * (x * x + y * y); }));
  return grid;
}

MetricGrid poincare_disk(int n, double extent, double domain_radius) {
  if (!(domain_radius > 0.0 && domain_radius < 1.0)) fail(kModule, "degenerate metric");
  MetricGrid grid = make_grid({-extent, extent, -extent, extent}, n);
  // Beyond the unit circle the factor is clamped; those nodes are off-domain.
  const double r_clamp = std::min(0.99, std::max(domain_radius, extent));
  grid.set_conformal(sample(grid, [&](double x, double y) {
    const double r = std::min(std::hypot(x, y), r_clamp);
    return 2.0 / (1.0 - r * r);
  }));
  std::vector<std::uint8_t> mask(grid.size());
  for (NodeId k = 0; k < grid.size(); ++k) {
    mask[k] = std::hypot(grid.x(grid.col(k)), grid.y(grid.row(k))) <= domain_radius ? 1 : 0;
  }
  grid.set_domain(std::move(mask));
  return grid;
}

MetricGrid warped_cylinder(const WarpProfile& profile, double t0, double t1, int n_theta,
                           double period) {
  MetricGrid grid = make_grid({0.0, period, t0, t1}, n_theta, Topology::cylinder);
  std::vector<MetricTensor> g(grid.size());
  for (NodeId n = 0; n < grid.size(); ++n) {
    const double w = profile.w(grid.y(grid.row(n)));
    if (!(w > 0.0)) fail(kModule, "degenerate metric");
    g[n] = {w * w, 0.0, 1.0};
  }
  grid.set_tensor(std::move(g));
  return grid;
}

MetricGrid flat_torus(double period_x, double period_y, int nx) {
  return make_grid({0.0, period_x, 0.0, period_y}, nx, Topology::torus);
}

MetricGrid perturbed_flat(const Box& box, int nx, const std::vector<Bump>& bumps,
                          Topology topology) {
  MetricGrid grid = make_grid(box, nx, topology);
  grid.set_conformal(sample(grid, [&](double x, double y) {
    double lambda = 1.0;
    for (const auto& b : bumps) {
      const double r2 = (x - b.x) * (x - b.x) + (y - b.y) * (y - b.y);
      lambda += b.amplitude * std::exp(-r2 / (b.width * b.width));
    }
    return lambda;
  }));
  return grid;
}

MetricGrid generate_metric(const std::string& name, const nlohmann::json& params) {
  const int n = params.value("n", 128);
  if (name == "euclidean") {
    MetricGrid grid = euclidean(box_from(params), n);
    if (params.contains("lambda")) {
      grid.set_conformal(std::vector<double>(grid.size(), params.at("lambda").get<double>()));
    }
    return grid;
  }
  if (name == "conformal_radial") {
    return conformal_radial(box_from(params), n, params.value("a", 1.0), params.value("b", 0.0));
  }
  if (name == "poincare_disk") {
    return poincare_disk(n, params.value("extent", 0.9), params.value("domain_radius", 0.9));
  }
  if (name == "warped_cylinder") {
    WarpProfile profile = WarpProfile::from_name(params.value("w", std::string("cosh")));
    if (profile.kind == WarpProfile::Kind::table) {
      for (const auto& knot : params.at("table")) {
        profile.table.emplace_back(knot.at(0).get<double>(), knot.at(1).get<double>());
      }
    }
    return warped_cylinder(profile, params.value("t0", -2.0), params.value("t1", 2.0), n,
                           params.value("period", kTwoPi));
  }
  if (name == "flat_torus") {
    return flat_torus(params.value("period_x", 1.0), params.value("period_y", 1.0), n);
  }
  if (name == "perturbed_flat") {
    std::vector<Bump> bumps;
    if (params.contains("bumps")) {
      for (const auto& b : params.at("bumps")) {
        bumps.push_back({b.value("x", 0.0), b.value("y", 0.0), b.value("amplitude", 0.0),
                         b.value("width", 1.0)});
      }
    }
    const auto topo = topology_from_string(params.value("topology", std::string("plane")));
    return perturbed_flat(box_from(params), n, bumps, topo);
  }
  fail(kModule, "unknown metric generator '" + name + "'");
}

Region region_where(const MetricGrid& grid, const std::function<bool(double, double)>& inside) {
  Region r(grid.nx(), grid.ny());
  for (NodeId n = 0; n < grid.size(); ++n) {
    if (grid.in_domain(n) && inside(grid.x(grid.col(n)), grid.y(grid.row(n)))) r.set(n, true);
  }
  return r;
}

Region disk_region(const MetricGrid& grid, double cx, double cy, double radius) {
  return region_where(grid, [&](double x, double y) { return std::hypot(x - cx, y - cy) <= radius; });
}

Region band_y(const MetricGrid& grid, double y_lo, double y_hi) {
  return region_where(grid, [&](double, double y) { return y >= y_lo && y <= y_hi; });
}

Region band_x(const MetricGrid& grid, double x_lo, double x_hi) {
  return region_where(grid, [&](double x, double) { return x >= x_lo && x <= x_hi; });
}

Region box_region(const MetricGrid& grid, const Box& box) {
  return region_where(grid, [&](double x, double y) {
    return x >= box.xmin && x <= box.xmax && y >= box.ymin && y <= box.ymax;
  });
}

}  // namespace bubblecut
