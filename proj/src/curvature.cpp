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

#include <algorithm>
#include <array>
#include <cmath>
#include <optional>

#include "bubblecut/error.hpp"
#include "bubblecut/geometry.hpp"

namespace bubblecut {

namespace {

constexpr std::string_view kModule = "geometry-core";

struct Stencil {
  // Values at E, W, N, S, NE, NW, SE, SW and the metric at C, E, W, N, S.
  double c, e, w, n, s, ne, nw, se, sw;
  MetricTensor gc, ge, gw, gn, gs;
};

std::optional<Stencil> gather(const MetricGrid& grid, const ScalarField& f, NodeId node) {
  if (!grid.in_domain(node) || !f.defined(node)) return std::nullopt;
  static constexpr std::array<std::array<int, 2>, 8> kOffsets = {
      {{1, 0}, {-1, 0}, {0, 1}, {0, -1}, {1, 1}, {-1, 1}, {1, -1}, {-1, -1}}};
  std::array<NodeId, 8> ids{};
  for (std::size_t k = 0; k < kOffsets.size(); ++k) {
    const auto m = grid.neighbor(node, kOffsets[k][0], kOffsets[k][1]);
    if (!m || !grid.in_domain(*m) || !f.defined(*m)) return std::nullopt;
    ids[k] = *m;
  }
  return Stencil{f[node],           f[ids[0]],          f[ids[1]],          f[ids[2]],
                 f[ids[3]],         f[ids[4]],          f[ids[5]],          f[ids[6]],
                 f[ids[7]],         grid.metric(node),  grid.metric(ids[0]), grid.metric(ids[1]),
                 grid.metric(ids[2]), grid.metric(ids[3])};
}

// sqrt(det g) times the g-unit normal g^{-1} df / |df|_g.
std::optional<std::array<double, 2>> face_flux(const MetricTensor& g, double fx, double fy) {
  const auto v = g.raise(fx, fy);
  const double norm2 = fx * v[0] + fy * v[1];
  if (!(norm2 > 0.0)) return std::nullopt;
  const double scale = std::sqrt(g.det() / norm2);
  return std::array<double, 2>{scale * v[0], scale * v[1]};
}

std::optional<double> curvature_kernel(const MetricGrid& grid, const ScalarField& f,
                                       double grad_floor, NodeId node) {
  const auto st = gather(grid, f, node);
  if (!st) return std::nullopt;
  const double h = grid.h();
  const double fx = (st->e - st->w) / (2.0 * h);
  const double fy = (st->n - st->s) / (2.0 * h);
  if (std::sqrt(st->gc.dual_norm2(fx, fy)) < grad_floor) return std::nullopt;

  const auto fe = face_flux((st->gc + st->ge) * 0.5, (st->e - st->c) / h,
                            ((st->n - st->s) + (st->ne - st->se)) / (4.0 * h));
  const auto fw = face_flux((st->gc + st->gw) * 0.5, (st->c - st->w) / h,
                            ((st->n - st->s) + (st->nw - st->sw)) / (4.0 * h));
  const auto fn = face_flux((st->gc + st->gn) * 0.5,
                            ((st->e - st->w) + (st->ne - st->nw)) / (4.0 * h), (st->n - st->c) / h);
  const auto fs = face_flux((st->gc + st->gs) * 0.5,
                            ((st->e - st->w) + (st->se - st->sw)) / (4.0 * h), (st->c - st->s) / h);
  if (!fe || !fw || !fn || !fs) return std::nullopt;
  const double div = ((*fe)[0] - (*fw)[0] + (*fn)[1] - (*fs)[1]) / h;
  return div / std::sqrt(st->gc.det());
}

}  // namespace

double gradient_norm(const MetricGrid& grid, const ScalarField& f, NodeId node) {
  if (!grid.in_domain(node) || !f.defined(node)) return -1.0;
  const auto e = grid.neighbor(node, 1, 0);
  const auto w = grid.neighbor(node, -1, 0);
  const auto n = grid.neighbor(node, 0, 1);
  const auto s = grid.neighbor(node, 0, -1);
  for (const auto& m : {e, w, n, s}) {
    if (!m || !grid.in_domain(*m) || !f.defined(*m)) return -1.0;
  }
  const double fx = (f[*e] - f[*w]) / (2.0 * grid.h());
  const double fy = (f[*n] - f[*s]) / (2.0 * grid.h());
  return std::sqrt(grid.metric(node).dual_norm2(fx, fy));
}

double default_grad_floor(const MetricGrid& grid, const ScalarField& f) {
  const auto r = f.range();
  return 1e-3 * (r[1] - r[0]) / grid.h();
}

ScalarField level_mean_curvature(const MetricGrid& grid, const ScalarField& f, double grad_floor,
                                 Exec exec) {
  require_same_shape(grid, f.nx(), f.ny(), kModule);
  ScalarField out(grid.nx(), grid.ny());
  const auto count = static_cast<long>(grid.size());
  if (exec == Exec::serial) {
    for (long n = 0; n < count; ++n) {
      if (const auto k = curvature_kernel(grid, f, grad_floor, static_cast<NodeId>(n))) {
        out.set(static_cast<NodeId>(n), *k);
      }
    }
  } else {
#pragma omp parallel for schedule(static) num_threads(kernel_threads())
    for (long n = 0; n < count; ++n) {
      if (const auto k = curvature_kernel(grid, f, grad_floor, static_cast<NodeId>(n))) {
        out.set(static_cast<NodeId>(n), *k);
      }
    }
  }
  return out;
}

double level_mean_curvature_at(const MetricGrid& grid, const ScalarField& f, double grad_floor,
                               NodeId node) {
  require_same_shape(grid, f.nx(), f.ny(), kModule);
  const auto k = curvature_kernel(grid, f, grad_floor, node);
  if (!k) fail(kModule, "near-critical, curvature undefined");
  return *k;
}

std::vector<CriticalPoint> critical_points(const MetricGrid& grid, const ScalarField& f,
                                           double hessian_floor) {
  require_same_shape(grid, f.nx(), f.ny(), kModule);
  const auto range = f.range();
  if (!(range[1] > range[0])) fail(kModule, "degenerate field");
  const double h = grid.h();
  if (hessian_floor < 0.0) {
    const double diameter = std::hypot(grid.width(), grid.height());
    hessian_floor = 1e-6 * (range[1] - range[0]) / (diameter * diameter);
  }

  static constexpr std::array<std::array<int, 2>, 8> kRing = {
      {{1, 0}, {1, 1}, {0, 1}, {-1, 1}, {-1, 0}, {-1, -1}, {0, -1}, {1, -1}}};
  std::vector<CriticalPoint> points;
  for (NodeId node = 0; node < grid.size(); ++node) {
    if (!grid.in_domain(node) || !f.defined(node)) continue;
    std::array<NodeId, 8> ring{};
    bool complete = true;
    for (std::size_t k = 0; k < kRing.size() && complete; ++k) {
      const auto m = grid.neighbor(node, kRing[k][0], kRing[k][1]);
      complete = m && grid.in_domain(*m) && f.defined(*m);
      if (complete) ring[k] = *m;
    }
    if (!complete) continue;

    // Simulation of simplicity: equal values are ordered by node id.
    auto above = [&](NodeId m) { return f[m] > f[node] || (f[m] == f[node] && m > node); };
    int changes = 0;
    int ups = 0;
    for (std::size_t k = 0; k < ring.size(); ++k) {
      const bool a = above(ring[k]);
      ups += a ? 1 : 0;
      if (a != above(ring[(k + 1) % ring.size()])) ++changes;
    }
    int ring_index;
    if (ups == 8) {
      ring_index = 0;
    } else if (ups == 0) {
      ring_index = 2;
    } else if (changes >= 4) {
      ring_index = 1;
    } else {
      continue;
    }

    const double fxx = (f[ring[0]] - 2.0 * f[node] + f[ring[4]]) / (h * h);
    const double fyy = (f[ring[2]] - 2.0 * f[node] + f[ring[6]]) / (h * h);
    const double fxy = (f[ring[1]] - f[ring[3]] + f[ring[5]] - f[ring[7]]) / (4.0 * h * h);
    const double mean = 0.5 * (fxx + fyy);
    const double radius = std::hypot(0.5 * (fxx - fyy), fxy);
    const double l1 = mean - radius;
    const double l2 = mean + radius;

    CriticalPoint cp;
    cp.node = node;
    cp.value = f[node];
    cp.nondegenerate = std::abs(l1) > hessian_floor && std::abs(l2) > hessian_floor;
    cp.index = cp.nondegenerate ? (l1 < 0.0 ? 1 : 0) + (l2 < 0.0 ? 1 : 0) : ring_index;
    points.push_back(cp);
  }
  return points;
}

}  // namespace bubblecut
