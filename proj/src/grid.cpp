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

#include "bubblecut/grid.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "bubblecut/error.hpp"

namespace bubblecut {

namespace {
constexpr std::string_view kModule = "geometry-core";
}  // namespace

std::string_view to_string(Topology topology) {
  switch (topology) {
    case Topology::plane: return "plane";
    case Topology::cylinder: return "cylinder";
    case Topology::torus: return "torus";
  }
  return "plane";
}

Topology topology_from_string(std::string_view name) {
  if (name == "plane") return Topology::plane;
  if (name == "cylinder") return Topology::cylinder;
  if (name == "torus") return Topology::torus;
  fail(kModule, "unknown topology '" + std::string(name) + "'");
}

double MetricTensor::length(double dx, double dy) const {
  return std::sqrt(g11 * dx * dx + 2.0 * g12 * dx * dy + g22 * dy * dy);
}

double MetricTensor::dual_norm2(double fx, double fy) const {
  const double d = det();
  return (g22 * fx * fx - 2.0 * g12 * fx * fy + g11 * fy * fy) / d;
}

std::array<double, 2> MetricTensor::raise(double fx, double fy) const {
  const double d = det();
  return {(g22 * fx - g12 * fy) / d, (-g12 * fx + g11 * fy) / d};
}

MetricGrid::MetricGrid(int nx, int ny, double h, Topology topology, double x0, double y0)
    : nx_(nx), ny_(ny), h_(h), topology_(topology), x0_(x0), y0_(y0) {
  if (nx < 4 || ny < 4) fail(kModule, "grid needs at least 4 nodes per direction");
  if (!(h > 0.0) || !std::isfinite(h)) fail(kModule, "grid spacing must be positive");
  domain_.assign(size(), 1);
  metric_.assign(size(), MetricTensor{});
  lambda_.assign(size(), 1.0);
}

std::optional<NodeId> MetricGrid::neighbor(NodeId n, int di, int dj) const {
  int i = col(n) + di;
  int j = row(n) + dj;
  if (i < 0 || i >= nx_) {
    if (!periodic_x()) return std::nullopt;
    i = ((i % nx_) + nx_) % nx_;
  }
  if (j < 0 || j >= ny_) {
    if (!periodic_y()) return std::nullopt;
    j = ((j % ny_) + ny_) % ny_;
  }
  return index(i, j);
}

void MetricGrid::set_domain(std::vector<std::uint8_t> mask) {
  if (mask.size() != size()) fail(kModule, "domain mask has wrong size");
  for (auto& m : mask) m = m ? 1 : 0;
  domain_ = std::move(mask);
}

std::size_t MetricGrid::domain_count() const {
  return static_cast<std::size_t>(std::count(domain_.begin(), domain_.end(), 1));
}

void MetricGrid::set_conformal(const std::vector<double>& lambda) {
  if (lambda.size() != size()) fail(kModule, "metric sample count mismatch");
  for (double l : lambda) {
    if (!(l > 0.0) || !std::isfinite(l)) fail(kModule, "degenerate metric");
  }
  conformal_ = true;
  lambda_ = lambda;
  for (std::size_t n = 0; n < size(); ++n) metric_[n] = MetricTensor::conformal(lambda[n]);
}

void MetricGrid::set_tensor(std::vector<MetricTensor> tensors) {
  if (tensors.size() != size()) fail(kModule, "metric sample count mismatch");
  for (const auto& g : tensors) {
    if (!g.positive_definite() || !std::isfinite(g.det())) fail(kModule, "degenerate metric");
  }
  conformal_ = false;
  metric_ = std::move(tensors);
  for (std::size_t n = 0; n < size(); ++n) lambda_[n] = std::sqrt(std::sqrt(metric_[n].det()));
}

double MetricGrid::cell_area(NodeId n) const {
  if (n >= size() || !in_domain(n)) fail(kModule, "outside domain");
  return std::sqrt(metric_[n].det()) * h_ * h_;
}

Region::Region(int nx, int ny, std::vector<std::uint8_t> mask)
    : nx_(nx), ny_(ny), mask_(std::move(mask)) {
  if (mask_.size() != static_cast<std::size_t>(nx) * ny) fail(kModule, "mask has wrong size");
  for (auto& m : mask_) m = m ? 1 : 0;
}

std::size_t Region::count() const {
  return static_cast<std::size_t>(std::count(mask_.begin(), mask_.end(), 1));
}

bool Region::subset_of(const Region& other) const {
  for (std::size_t n = 0; n < mask_.size(); ++n) {
    if (mask_[n] && !other.mask_[n]) return false;
  }
  return true;
}

bool Region::intersects(const Region& other) const {
  for (std::size_t n = 0; n < mask_.size(); ++n) {
    if (mask_[n] && other.mask_[n]) return true;
  }
  return false;
}

Region Region::operator&(const Region& o) const {
  Region r(nx_, ny_);
  for (std::size_t n = 0; n < mask_.size(); ++n) r.mask_[n] = mask_[n] & o.mask_[n];
  return r;
}

Region Region::operator|(const Region& o) const {
  Region r(nx_, ny_);
  for (std::size_t n = 0; n < mask_.size(); ++n) r.mask_[n] = mask_[n] | o.mask_[n];
  return r;
}

Region Region::operator-(const Region& o) const {
  Region r(nx_, ny_);
  for (std::size_t n = 0; n < mask_.size(); ++n) r.mask_[n] = mask_[n] & !o.mask_[n];
  return r;
}

Region Region::complement_in(const MetricGrid& grid) const {
  Region r(nx_, ny_);
  for (std::size_t n = 0; n < mask_.size(); ++n) {
    r.mask_[n] = (grid.in_domain(n) && !mask_[n]) ? 1 : 0;
  }
  return r;
}

ScalarField ScalarField::constant(const MetricGrid& grid, double value) {
  ScalarField f(grid.nx(), grid.ny());
  for (NodeId n = 0; n < grid.size(); ++n) {
    if (grid.in_domain(n)) f.set(n, value);
  }
  return f;
}

std::array<double, 2> ScalarField::range() const {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (std::size_t n = 0; n < values_.size(); ++n) {
    if (!defined_[n]) continue;
    lo = std::min(lo, values_[n]);
    hi = std::max(hi, values_[n]);
  }
  if (lo > hi) return {0.0, 0.0};
  return {lo, hi};
}

std::size_t ScalarField::defined_count() const {
  return static_cast<std::size_t>(std::count(defined_.begin(), defined_.end(), 1));
}

void require_same_shape(const MetricGrid& grid, int nx, int ny, std::string_view module) {
  if (!grid.same_shape(nx, ny)) fail(module, "mask or field does not belong to this grid");
}

}  // namespace bubblecut
