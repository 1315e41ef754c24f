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
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace bubblecut {

using NodeId = std::size_t;

enum class Topology { plane, cylinder, torus };

std::string_view to_string(Topology topology);
Topology topology_from_string(std::string_view name);

/// Symmetric 2x2 metric tensor g = [[g11, g12], [g12, g22]].
struct MetricTensor {
  double g11 = 1.0;
  double g12 = 0.0;
  double g22 = 1.0;

  static MetricTensor conformal(double lambda) {
    return {lambda * lambda, 0.0, lambda * lambda};
  }

  double det() const { return g11 * g22 - g12 * g12; }
  bool positive_definite() const { return g11 > 0.0 && det() > 0.0; }

  /// g-length of the coordinate vector (dx, dy).
  double length(double dx, double dy) const;
  /// Squared dual norm |df|^2_g = df . g^{-1} df.
  double dual_norm2(double fx, double fy) const;
  /// Raises a covector: returns g^{-1} (fx, fy).
  std::array<double, 2> raise(double fx, double fy) const;

  MetricTensor operator+(const MetricTensor& o) const {
    return {g11 + o.g11, g12 + o.g12, g22 + o.g22};
  }
  MetricTensor operator*(double s) const { return {g11 * s, g12 * s, g22 * s}; }
};

/// Rectangular node grid carrying a Riemannian metric sample at every node.
///
/// Node (i, j) sits at (x0 + i*h, y0 + j*h) and owns the h-by-h cell
/// centered on it, so "cell" and "node" are used interchangeably. Nodes
/// outside the domain mask are not part of the manifold; together with the
/// grid frame in non-periodic directions they form its exterior.
class MetricGrid {
 public:
  MetricGrid(int nx, int ny, double h, Topology topology, double x0 = 0.0,
             double y0 = 0.0);

  int nx() const { return nx_; }
  int ny() const { return ny_; }
  double h() const { return h_; }
  double x0() const { return x0_; }
  double y0() const { return y0_; }
  Topology topology() const { return topology_; }
  bool periodic_x() const { return topology_ != Topology::plane; }
  bool periodic_y() const { return topology_ == Topology::torus; }
  std::size_t size() const { return static_cast<std::size_t>(nx_) * ny_; }

  NodeId index(int i, int j) const { return static_cast<NodeId>(j) * nx_ + i; }
  int col(NodeId n) const { return static_cast<int>(n % nx_); }
  int row(NodeId n) const { return static_cast<int>(n / nx_); }
  double x(int i) const { return x0_ + i * h_; }
  double y(int j) const { return y0_ + j * h_; }

  /// Neighbor at lattice offset (di, dj), wrapping periodic directions.
  /// Returns nullopt when the offset leaves the grid frame.
  std::optional<NodeId> neighbor(NodeId n, int di, int dj) const;

  bool in_domain(NodeId n) const { return domain_[n] != 0; }
  const std::vector<std::uint8_t>& domain_mask() const { return domain_; }
  void set_domain(std::vector<std::uint8_t> mask);
  std::size_t domain_count() const;

  bool conformal() const { return conformal_; }
  const MetricTensor& metric(NodeId n) const { return metric_[n]; }
  /// Conformal factor; only meaningful when conformal().
  double lambda(NodeId n) const { return lambda_[n]; }
  void set_conformal(const std::vector<double>& lambda);
  void set_tensor(std::vector<MetricTensor> tensors);

  double cell_area(NodeId n) const;
  /// Coordinate extent of one period (or of the frame) in each direction.
  double width() const { return nx_ * h_; }
  double height() const { return ny_ * h_; }

  /// Shape fingerprint used to check that masks and fields belong here.
  bool same_shape(int nx, int ny) const { return nx == nx_ && ny == ny_; }

 private:
  int nx_;
  int ny_;
  double h_;
  Topology topology_;
  double x0_;
  double y0_;
  bool conformal_ = true;
  std::vector<std::uint8_t> domain_;
  std::vector<MetricTensor> metric_;
  std::vector<double> lambda_;
};

/// Boolean cell mask on a grid; a domain U whose boundary is extractable.
class Region {
 public:
  Region() = default;
  Region(int nx, int ny) : nx_(nx), ny_(ny), mask_(static_cast<std::size_t>(nx) * ny, 0) {}
  Region(int nx, int ny, std::vector<std::uint8_t> mask);

  static Region empty_like(const MetricGrid& grid) { return Region(grid.nx(), grid.ny()); }
  static Region domain_of(const MetricGrid& grid) {
    return Region(grid.nx(), grid.ny(), grid.domain_mask());
  }

  int nx() const { return nx_; }
  int ny() const { return ny_; }
  std::size_t size() const { return mask_.size(); }
  bool contains(NodeId n) const { return mask_[n] != 0; }
  void set(NodeId n, bool inside) { mask_[n] = inside ? 1 : 0; }
  const std::vector<std::uint8_t>& mask() const { return mask_; }

  std::size_t count() const;
  bool empty() const { return count() == 0; }
  bool subset_of(const Region& other) const;
  bool intersects(const Region& other) const;

  Region operator&(const Region& o) const;
  Region operator|(const Region& o) const;
  /// Set difference: cells of *this not in o.
  Region operator-(const Region& o) const;
  /// Complement relative to the grid's domain.
  Region complement_in(const MetricGrid& grid) const;

  bool operator==(const Region& o) const = default;

 private:
  int nx_ = 0;
  int ny_ = 0;
  std::vector<std::uint8_t> mask_;
};

/// Per-node real values with a mask of nodes where the value is meaningful.
class ScalarField {
 public:
  ScalarField() = default;
  ScalarField(int nx, int ny)
      : nx_(nx), ny_(ny),
        values_(static_cast<std::size_t>(nx) * ny, 0.0),
        defined_(static_cast<std::size_t>(nx) * ny, 0) {}

  /// Field defined on every domain node, filled with value.
  static ScalarField constant(const MetricGrid& grid, double value);

  int nx() const { return nx_; }
  int ny() const { return ny_; }
  std::size_t size() const { return values_.size(); }

  double operator[](NodeId n) const { return values_[n]; }
  double& operator[](NodeId n) { return values_[n]; }
  bool defined(NodeId n) const { return defined_[n] != 0; }
  void set(NodeId n, double v) { values_[n] = v; defined_[n] = 1; }
  void undefine(NodeId n) { defined_[n] = 0; }

  const std::vector<double>& values() const { return values_; }
  const std::vector<std::uint8_t>& defined_mask() const { return defined_; }

  /// (min, max) over defined nodes; (0, 0) when nothing is defined.
  std::array<double, 2> range() const;
  std::size_t defined_count() const;

 private:
  int nx_ = 0;
  int ny_ = 0;
  std::vector<double> values_;
  std::vector<std::uint8_t> defined_;
};

void require_same_shape(const MetricGrid& grid, int nx, int ny, std::string_view module);

}  // namespace bubblecut
