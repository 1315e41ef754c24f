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
#include <functional>
#include <limits>
#include <optional>
#include <queue>
#include <utility>

#include "bubblecut/error.hpp"
#include "bubblecut/geometry.hpp"

namespace bubblecut {

namespace {

constexpr std::string_view kModule = "geometry-core";
constexpr double kInf = std::numeric_limits<double>::infinity();

// Counterclockwise 8-ring; consecutive entries span the eight triangles of
// the grid triangulation around a node.
constexpr std::array<std::array<int, 2>, 8> kRing = {
    {{1, 0}, {1, 1}, {0, 1}, {-1, 1}, {-1, 0}, {-1, -1}, {0, -1}, {1, -1}}};
constexpr std::array<std::array<int, 2>, 4> kAxes = {{{1, 0}, {-1, 0}, {0, 1}, {0, -1}}};

double quad(const MetricTensor& g, double ux, double uy, double vx, double vy) {
  return g.g11 * ux * vx + g.g12 * (ux * vy + uy * vx) + g.g22 * uy * vy;
}

// min over s in [0,1] of (1-s) ta + s tb + |a + s (b - a)|_g, where a and b
// are the displacements from the updated node to the two simplex vertices.
double simplex_update(const MetricTensor& g, double ax, double ay, double ta, double bx,
                      double by, double tb) {
  const double ex = bx - ax;
  const double ey = by - ay;
  const double A = quad(g, ex, ey, ex, ey);
  const double B = quad(g, ex, ey, ax, ay);
  const double C = quad(g, ax, ay, ax, ay);
  double best = std::min(ta + std::sqrt(C), tb + std::sqrt(quad(g, bx, by, bx, by)));
  const double dt = tb - ta;
  if (dt * dt < A) {
    const double disc = std::max(A * C - B * B, 0.0);
    const double s = (-B - dt * std::sqrt(disc / (A - dt * dt))) / A;
    if (s > 0.0 && s < 1.0) {
      const double q = std::max(C + 2.0 * B * s + A * s * s, 0.0);
      best = std::min(best, ta + s * dt + std::sqrt(q));
    }
  }
  return best;
}

// Fast marching with anchor propagation. Every node carries an anchor: a
// point (relative displacement in index units) with a known arrival time.
// Besides the simplex update, a node is offered the length of the straight
// chord to the anchor of each accepted neighbor, with the metric integrated
// along the chord and the chord required to stay inside the allowed set.
// Chords are exact for point sources in a constant metric, which removes the
// axis-aligned kinks of the plain simplex scheme.
class FastMarcher {
 public:
  FastMarcher(const MetricGrid& grid, const std::vector<std::uint8_t>& allowed)
      : grid_(grid),
        allowed_(allowed),
        value_(grid.size(), kInf),
        chord_(grid.size(), kInf),
        anchor_(grid.size()),
        accepted_(grid.size(), 0) {
    const MetricTensor g0 = grid.metric(0);
    bool all_allowed = true;
    for (NodeId n = 0; n < grid.size(); ++n) {
      const MetricTensor g = grid.metric(n);
      if (!allowed_[n]) all_allowed = false;
      if (g.g11 != g0.g11 || g.g12 != g0.g12 || g.g22 != g0.g22) uniform_ = false;
    }
    direct_ = uniform_ && all_allowed;
  }

  void seed(NodeId n, double v, double ax = 0.0, double ay = 0.0) {
    if (v < value_[n]) {
      value_[n] = v;
      anchor_[n] = Anchor{ax, ay, 0.0};
      chord_[n] = v;
      heap_.emplace(v, n);
    }
  }

  // Marches until every reachable node is accepted or the front passes
  // `limit`; nodes not accepted come back as infinity.
  std::vector<double> run(double limit = kInf) {
    const double h = grid_.h();
    while (!heap_.empty()) {
      const auto [v, n] = heap_.top();
      heap_.pop();
      if (accepted_[n] || v > value_[n]) continue;
      if (v > limit) break;
      accepted_[n] = 1;
      for (const auto& d : kRing) {
        const auto m = grid_.neighbor(n, d[0], d[1]);
        if (!m || !allowed_[*m] || accepted_[*m]) continue;
        offer_chord(*m, n, d, h);
        const double candidate = std::min(update(*m, h), chord_[*m]);
        if (candidate < value_[*m]) {
          value_[*m] = candidate;
          heap_.emplace(candidate, *m);
        }
      }
    }
    for (NodeId n = 0; n < value_.size(); ++n) {
      if (!accepted_[n]) value_[n] = kInf;
    }
    return std::move(value_);
  }

 private:
  struct Anchor {
    double dx = 0.0, dy = 0.0;  // anchor position minus node position, in cells
    double time = 0.0;
  };

  static constexpr double kMaxChordCells = 64.0;

  double accepted_value(std::optional<NodeId> n) const {
    return (n && accepted_[*n]) ? value_[*n] : kInf;
  }

  // Rounds half-way cases toward zero so that samples never land on the far
  // side of an anchor placed on a link midpoint.
  static int round_toward_zero(double x) {
    const double r = std::floor(std::abs(x) + 0.5 - 1e-9);
    return static_cast<int>(x < 0 ? -r : r);
  }

  // Metric length of the segment from node m to m + (dx, dy) cells; infinity
  // when a sample along it leaves the allowed set.
  double chord_length(NodeId m, double dx, double dy, double h) const {
    if (direct_) return grid_.metric(m).length(dx * h, dy * h);
    const int samples = std::max(1, static_cast<int>(std::ceil(2.0 * std::max(std::abs(dx), std::abs(dy)))));
    MetricTensor sum{0.0, 0.0, 0.0};
    for (int k = 0; k < samples; ++k) {
      const double s = static_cast<double>(k) / samples;
      const auto node = grid_.neighbor(m, round_toward_zero(s * dx), round_toward_zero(s * dy));
      if (!node || !allowed_[*node]) return kInf;
      if (!uniform_) sum = sum + grid_.metric(*node);
    }
    if (uniform_) return grid_.metric(m).length(dx * h, dy * h);
    return (sum * (1.0 / samples)).length(dx * h, dy * h);
  }

  // Offers node m the chord through the anchor of its newly accepted
  // neighbor p, which sits at offset -d from m.
  void offer_chord(NodeId m, NodeId p, const std::array<int, 2>& d, double h) {
    const Anchor& a = anchor_[p];
    Anchor candidate{a.dx - d[0], a.dy - d[1], a.time};
    double t = kInf;
    if (direct_ || std::max(std::abs(candidate.dx), std::abs(candidate.dy)) <= kMaxChordCells) {
      t = candidate.time + chord_length(m, candidate.dx, candidate.dy, h);
    }
    if (t == kInf) {
      // Rebase on the neighbor itself.
      candidate = Anchor{static_cast<double>(-d[0]), static_cast<double>(-d[1]), value_[p]};
      const MetricTensor g = (grid_.metric(m) + grid_.metric(p)) * 0.5;
      t = candidate.time + g.length(d[0] * h, d[1] * h);
    }
    if (t < chord_[m]) {
      chord_[m] = t;
      anchor_[m] = candidate;
    }
  }

  double update(NodeId m, double h) const {
    double best = kInf;
    for (std::size_t k = 0; k < kRing.size(); ++k) {
      const auto& a = kRing[k];
      const auto& b = kRing[(k + 1) % kRing.size()];
      const auto na = grid_.neighbor(m, a[0], a[1]);
      const auto nb = grid_.neighbor(m, b[0], b[1]);
      const double ta = accepted_value(na);
      const double tb = accepted_value(nb);
      if (ta == kInf && tb == kInf) continue;
      MetricTensor g = grid_.metric(m);
      int count = 1;
      if (ta != kInf) { g = g + grid_.metric(*na); ++count; }
      if (tb != kInf) { g = g + grid_.metric(*nb); ++count; }
      g = g * (1.0 / count);
      const double ax = a[0] * h, ay = a[1] * h, bx = b[0] * h, by = b[1] * h;
      double t;
      if (tb == kInf) {
        t = ta + g.length(ax, ay);
      } else if (ta == kInf) {
        t = tb + g.length(bx, by);
      } else {
        t = simplex_update(g, ax, ay, ta, bx, by, tb);
      }
      best = std::min(best, t);
    }
    return best;
  }

  using Entry = std::pair<double, NodeId>;
  const MetricGrid& grid_;
  const std::vector<std::uint8_t>& allowed_;
  bool uniform_ = true;
  bool direct_ = false;
  std::vector<double> value_;
  std::vector<double> chord_;
  std::vector<Anchor> anchor_;
  std::vector<std::uint8_t> accepted_;
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> heap_;
};

double half_link(const MetricGrid& grid, NodeId n, std::optional<NodeId> m, int di, int dj) {
  MetricTensor g = grid.metric(n);
  if (m) g = (g + grid.metric(*m)) * 0.5;
  return 0.5 * g.length(di * grid.h(), dj * grid.h());
}

bool outside(const MetricGrid& grid, const Region& region, std::optional<NodeId> m) {
  return !m || !grid.in_domain(*m) || !region.contains(*m);
}

}  // namespace

double cell_area(const MetricGrid& grid, NodeId cell) { return grid.cell_area(cell); }

ScalarField distance_transform(const MetricGrid& grid, const Region& source, double limit) {
  require_same_shape(grid, source.nx(), source.ny(), kModule);
  FastMarcher marcher(grid, grid.domain_mask());
  bool any = false;
  for (NodeId n = 0; n < grid.size(); ++n) {
    if (source.contains(n) && grid.in_domain(n)) {
      marcher.seed(n, 0.0);
      any = true;
    }
  }
  if (!any) fail(kModule, "empty source");
  const auto values = marcher.run(limit);
  ScalarField out(grid.nx(), grid.ny());
  for (NodeId n = 0; n < grid.size(); ++n) {
    if (grid.in_domain(n) && values[n] < kInf) out.set(n, values[n]);
  }
  return out;
}

Region boundary_layer(const MetricGrid& grid, const Region& region) {
  require_same_shape(grid, region.nx(), region.ny(), kModule);
  Region layer(grid.nx(), grid.ny());
  for (NodeId n = 0; n < grid.size(); ++n) {
    if (!region.contains(n) || !grid.in_domain(n)) continue;
    for (const auto& d : kAxes) {
      if (outside(grid, region, grid.neighbor(n, d[0], d[1]))) {
        layer.set(n, true);
        break;
      }
    }
  }
  return layer;
}

ScalarField signed_distance(const MetricGrid& grid, const Region& region, double limit) {
  require_same_shape(grid, region.nx(), region.ny(), kModule);
  std::vector<std::uint8_t> inside(grid.size(), 0);
  std::vector<std::uint8_t> outside_nodes(grid.size(), 0);
  for (NodeId n = 0; n < grid.size(); ++n) {
    if (!grid.in_domain(n)) continue;
    (region.contains(n) ? inside : outside_nodes)[n] = 1;
  }
  FastMarcher in_marcher(grid, inside);
  FastMarcher out_marcher(grid, outside_nodes);
  bool interface = false;
  for (NodeId n = 0; n < grid.size(); ++n) {
    if (!grid.in_domain(n)) continue;
    const bool in = region.contains(n);
    for (const auto& d : kAxes) {
      const auto m = grid.neighbor(n, d[0], d[1]);
      if (in && outside(grid, region, m)) {
        in_marcher.seed(n, half_link(grid, n, m, d[0], d[1]), 0.5 * d[0], 0.5 * d[1]);
        interface = true;
      } else if (!in && m && grid.in_domain(*m) && region.contains(*m)) {
        out_marcher.seed(n, half_link(grid, n, m, d[0], d[1]), 0.5 * d[0], 0.5 * d[1]);
      }
    }
  }
  if (!interface) fail(kModule, "no boundary");
  const auto din = in_marcher.run(limit);
  const auto dout = out_marcher.run(limit);
  ScalarField out(grid.nx(), grid.ny());
  for (NodeId n = 0; n < grid.size(); ++n) {
    if (inside[n] && din[n] < kInf) out.set(n, -din[n]);
    if (outside_nodes[n] && dout[n] < kInf) out.set(n, dout[n]);
    if (limit < kInf && !out.defined(n) && grid.in_domain(n)) {
      out.set(n, inside[n] ? -limit : limit);
    }
  }
  return out;
}

namespace {

// Indicator of the region averaged with the quartic kernel of radius eps in
// the metric of each node. Lattice positions beyond a non-periodic frame
// count as outside, with the area of the center cell.
std::vector<double> smoothed_indicator(const MetricGrid& grid, const Region& region, double eps) {
  const double h = grid.h();
  std::vector<double> chi(grid.size(), 0.0);
  for (NodeId n = 0; n < grid.size(); ++n) {
    const MetricTensor& g = grid.metric(n);
    const double tr = g.g11 + g.g22;
    const double small = std::sqrt(0.5 * (tr - std::sqrt(std::max(tr * tr - 4.0 * g.det(), 0.0))));
    const int r = static_cast<int>(std::ceil(eps / (h * small)));
    const double own_area = std::sqrt(g.det());
    double inside = 0.0, total = 0.0;
    for (int dj = -r; dj <= r; ++dj) {
      for (int di = -r; di <= r; ++di) {
        const double t = g.length(di * h, dj * h) / eps;
        if (t >= 1.0) continue;
        const double psi = (1.0 - t * t) * (1.0 - t * t);
        const auto m = grid.neighbor(n, di, dj);
        const double area = m ? std::sqrt(grid.metric(*m).det()) : own_area;
        total += psi * area;
        if (m && grid.in_domain(*m) && region.contains(*m)) inside += psi * area;
      }
    }
    chi[n] = inside / total;
  }
  return chi;
}

}  // namespace

namespace {

// Half-width, in cells, of the band around a traced level where distances
// are computed exactly rather than marched.
constexpr int kTracedBand = 16;

struct Foot {
  double dist = kInf;
  double ax = 0.0, ay = 0.0;  // foot point minus node, in cells
};

// Nearest point to the node (origin) on the segment a-b (cells) under g.
Foot segment_foot(const MetricTensor& g, double h, double ax, double ay, double bx, double by) {
  const double ex = bx - ax, ey = by - ay;
  const double ee = g.g11 * ex * ex + 2.0 * g.g12 * ex * ey + g.g22 * ey * ey;
  double t = 0.0;
  if (ee > 0.0) {
    t = -(g.g11 * ax * ex + g.g12 * (ax * ey + ay * ex) + g.g22 * ay * ey) / ee;
    t = std::clamp(t, 0.0, 1.0);
  }
  Foot f;
  f.ax = ax + t * ex;
  f.ay = ay + t * ey;
  f.dist = g.length(f.ax * h, f.ay * h);
  return f;
}

// Signed distance to the zero level of g (inside where g >= 0, negative
// there). The level is traced by marching squares, and every node of a
// crossed cell is seeded with its exact distance to the traced segments, so
// corners of the level curve are located as well as its smooth arcs. Nodes
// with valid = 0 take no part; a neighbor outside the frame or invalid reads
// `missing` when given, otherwise cells touching it are not traced and the
// foot point comes from the gradient.
ScalarField zero_level_distance(const MetricGrid& grid, const std::vector<double>& g,
                                const std::vector<std::uint8_t>& valid,
                                std::optional<double> missing) {
  const double h = grid.h();
  std::vector<std::uint8_t> inside(grid.size(), 0), outside_nodes(grid.size(), 0);
  for (NodeId n = 0; n < grid.size(); ++n) {
    if (!grid.in_domain(n) || !valid[n]) continue;
    (g[n] >= 0.0 ? inside : outside_nodes)[n] = 1;
  }
  auto value_at = [&](NodeId n, int di, int dj) -> std::optional<double> {
    if (di == 0 && dj == 0) return g[n];
    const auto m = grid.neighbor(n, di, dj);
    if (m && valid[*m]) return g[*m];
    return missing;
  };
  auto derivative = [&](NodeId n, int di, int dj) {
    const auto fwd = value_at(n, di, dj), bwd = value_at(n, -di, -dj);
    if (fwd && bwd) return (*fwd - *bwd) / (2.0 * h);
    if (fwd) return (*fwd - g[n]) / h;
    if (bwd) return (g[n] - *bwd) / h;
    return 0.0;
  };
  // Segments of the traced level, each in cells relative to its base node.
  struct Segment {
    NodeId base;
    double ax, ay, bx, by;
  };
  std::vector<Segment> segments;
  auto trace_cell = [&](NodeId n, int ci, int cj) {
    // Corners counterclockwise from the lower left, in cells relative to n.
    const std::array<std::array<int, 2>, 4> corner{
        {{ci, cj}, {ci + 1, cj}, {ci + 1, cj + 1}, {ci, cj + 1}}};
    std::array<double, 4> v{};
    for (int k = 0; k < 4; ++k) {
      const auto val = value_at(n, corner[k][0], corner[k][1]);
      if (!val) return;
      v[k] = *val;
    }
    std::array<std::array<double, 2>, 4> cross{};
    int count = 0;
    for (int k = 0; k < 4; ++k) {
      const int l = (k + 1) % 4;
      if ((v[k] >= 0.0) == (v[l] >= 0.0)) continue;
      const double t = v[k] / (v[k] - v[l]);
      cross[count++] = {corner[k][0] + t * (corner[l][0] - corner[k][0]),
                        corner[k][1] + t * (corner[l][1] - corner[k][1])};
    }
    auto add = [&](int a, int b) {
      segments.push_back({n, cross[a][0], cross[a][1], cross[b][0], cross[b][1]});
    };
    if (count == 2) {
      add(0, 1);
    } else if (count == 4) {
      // Saddle cell: the center value decides which corners connect.
      const double center = 0.25 * (v[0] + v[1] + v[2] + v[3]);
      if ((center >= 0.0) == (v[0] >= 0.0)) {
        add(0, 3);
        add(1, 2);
      } else {
        add(0, 1);
        add(2, 3);
      }
    }
  };
  for (NodeId n = 0; n < grid.size(); ++n) {
    if (!valid[n]) continue;
    trace_cell(n, 0, 0);
    // Cells whose lower-left corner lies beyond the frame.
    if (missing) {
      for (const auto& c : {std::array<int, 2>{-1, 0}, {0, -1}, {-1, -1}}) {
        if (!grid.neighbor(n, c[0], c[1])) trace_cell(n, c[0], c[1]);
      }
    }
  }
  FastMarcher in_marcher(grid, inside);
  FastMarcher out_marcher(grid, outside_nodes);
  bool interface = !segments.empty();
  // Nodes near the traced level get their exact distance to it, which the
  // marching front would otherwise only approximate.
  std::vector<Foot> foot(grid.size());
  for (const Segment& seg : segments) {
    for (int dj = -kTracedBand; dj <= kTracedBand + 1; ++dj) {
      for (int di = -kTracedBand; di <= kTracedBand + 1; ++di) {
        const auto m = grid.neighbor(seg.base, di, dj);
        if (!m || (!inside[*m] && !outside_nodes[*m])) continue;
        const Foot f =
            segment_foot(grid.metric(*m), h, seg.ax - di, seg.ay - dj, seg.bx - di, seg.by - dj);
        if (f.dist < foot[*m].dist) foot[*m] = f;
      }
    }
  }
  for (NodeId n = 0; n < grid.size(); ++n) {
    if (!inside[n] && !outside_nodes[n]) continue;
    const bool in = inside[n] != 0;
    Foot f = foot[n];
    if (f.dist == kInf) {
      // Untraced crossings next to unknown values: gradient foot point.
      bool crossing = false;
      for (const auto& d : kAxes) {
        const auto v = value_at(n, d[0], d[1]);
        crossing = crossing || (v && ((*v >= 0.0) != in));
      }
      if (!crossing) continue;
      interface = true;
      const MetricTensor& metric = grid.metric(n);
      const double gx = derivative(n, 1, 0);
      const double gy = derivative(n, 0, 1);
      const double norm2 = metric.dual_norm2(gx, gy);
      const double excess = g[n];
      if (norm2 > 0.0 && std::abs(excess) < std::sqrt(norm2) * 2.0 * h) {
        const auto up = metric.raise(gx, gy);
        f.dist = std::abs(excess) / std::sqrt(norm2);
        f.ax = -excess * up[0] / norm2 / h;
        f.ay = -excess * up[1] / norm2 / h;
      } else {
        f.dist = 0.5 * metric.length(h, 0.0);
      }
    }
    (in ? in_marcher : out_marcher).seed(n, f.dist, f.ax, f.ay);
  }
  if (!interface) fail(kModule, "no boundary");
  const auto din = in_marcher.run();
  const auto dout = out_marcher.run();
  ScalarField out(grid.nx(), grid.ny());
  for (NodeId n = 0; n < grid.size(); ++n) {
    if (inside[n] && din[n] < kInf) out.set(n, -din[n]);
    if (outside_nodes[n] && dout[n] < kInf) out.set(n, dout[n]);
  }
  return out;
}

}  // namespace

ScalarField smooth_signed_distance(const MetricGrid& grid, const Region& region, double eps) {
  require_same_shape(grid, region.nx(), region.ny(), kModule);
  if (!(eps > 0.0)) fail(kModule, "smoothing radius must be positive");
  std::vector<double> g = smoothed_indicator(grid, region, eps);
  for (double& v : g) v -= 0.5;
  return zero_level_distance(grid, g, std::vector<std::uint8_t>(grid.size(), 1), -0.5);
}

ScalarField level_signed_distance(const MetricGrid& grid, const ScalarField& f, double level) {
  require_same_shape(grid, f.nx(), f.ny(), kModule);
  std::vector<double> g(grid.size(), 0.0);
  std::vector<std::uint8_t> valid(grid.size(), 0);
  for (NodeId n = 0; n < grid.size(); ++n) {
    if (!grid.in_domain(n) || !f.defined(n)) continue;
    g[n] = level - f[n];
    valid[n] = 1;
  }
  return zero_level_distance(grid, g, valid, std::nullopt);
}

Region erode(const MetricGrid& grid, const Region& region, double rho) {
  if (!(rho >= 0.0)) fail(kModule, "negative radius");
  const Region in_domain = region & Region::domain_of(grid);
  if (in_domain.empty()) return Region::empty_like(grid);
  if (boundary_layer(grid, in_domain).empty()) return in_domain;
  const auto sd = signed_distance(grid, in_domain);
  Region out(grid.nx(), grid.ny());
  for (NodeId n = 0; n < grid.size(); ++n) {
    if (in_domain.contains(n) && sd.defined(n) && sd[n] <= -rho) out.set(n, true);
  }
  return out;
}

Region dilate(const MetricGrid& grid, const Region& region, double rho) {
  if (!(rho >= 0.0)) fail(kModule, "negative radius");
  const Region in_domain = region & Region::domain_of(grid);
  if (in_domain.empty()) return Region::empty_like(grid);
  if (in_domain.complement_in(grid).empty()) return in_domain;
  const auto sd = signed_distance(grid, in_domain);
  Region out = in_domain;
  for (NodeId n = 0; n < grid.size(); ++n) {
    if (grid.in_domain(n) && sd.defined(n) && sd[n] <= rho) out.set(n, true);
  }
  return out;
}

Region accessible_set(const MetricGrid& grid, const Region& region, double rho) {
  const Region core = erode(grid, region, rho);
  if (core.empty()) return core;
  return dilate(grid, core, rho) & region;
}

std::vector<Region> connected_components(const MetricGrid& grid, const Region& region) {
  require_same_shape(grid, region.nx(), region.ny(), kModule);
  std::vector<Region> components;
  std::vector<std::uint8_t> seen(grid.size(), 0);
  std::vector<NodeId> stack;
  for (NodeId start = 0; start < grid.size(); ++start) {
    if (!region.contains(start) || seen[start]) continue;
    Region comp(grid.nx(), grid.ny());
    stack.push_back(start);
    seen[start] = 1;
    while (!stack.empty()) {
      const NodeId n = stack.back();
      stack.pop_back();
      comp.set(n, true);
      for (const auto& d : kRing) {
        const auto m = grid.neighbor(n, d[0], d[1]);
        if (m && region.contains(*m) && !seen[*m]) {
          seen[*m] = 1;
          stack.push_back(*m);
        }
      }
    }
    components.push_back(std::move(comp));
  }
  return components;
}

double boundary_excursion(const MetricGrid& grid, const Region& from, const Region& to,
                          double limit) {
  const Region from_layer = boundary_layer(grid, from);
  if (from_layer.empty()) return 0.0;
  const Region to_layer = boundary_layer(grid, to);
  if (to_layer.empty()) return kInf;
  const auto d = distance_transform(grid, to_layer, limit);
  double worst = 0.0;
  for (NodeId n = 0; n < grid.size(); ++n) {
    if (!from_layer.contains(n)) continue;
    worst = std::max(worst, d.defined(n) ? d[n] : limit);
  }
  return worst;
}

}  // namespace bubblecut
