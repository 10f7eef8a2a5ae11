#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>

#include <Eigen/Core>

namespace nlocch {

/// Raised when two fields (or a field and an operator) live on different grids.
class GridMismatch : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Cell-centred tensor-product grid on the box [0, extent_0] x ... x [0, extent_{d-1}].
///
/// Node j on axis i sits at (j + 1/2) * spacing(i). This layout makes the even
/// reflection across every face exact, so homogeneous Neumann conditions are
/// represented by the type-II cosine transform. Axes beyond `dim` are inert
/// (one point, unit extent) so index arithmetic is uniform.
class Grid {
 public:
  static constexpr int kMaxDim = 3;
  static constexpr int kMinPoints = 4;

  Grid() = default;
  Grid(std::span<const int> points, std::span<const double> extents);

  /// Square/cubic grid with `n` points and the same extent on every axis.
  static Grid uniform(int dim, int n, double extent = 1.0);

  int dim() const { return dim_; }
  int points(int axis) const { return points_[static_cast<std::size_t>(axis)]; }
  double extent(int axis) const { return extents_[static_cast<std::size_t>(axis)]; }
  double spacing(int axis) const { return extent(axis) / points(axis); }
  double max_spacing() const;
  double min_extent() const;

  /// Midpoint-rule quadrature weight of every node.
  double cell_volume() const;
  double volume() const;
  Eigen::Index size() const;

  /// Row-major strides (axis 0 slowest).
  Eigen::Index stride(int axis) const;
  double center(int axis, int j) const { return (j + 0.5) * spacing(axis); }
  /// Coordinates of the node with flat index `idx`.
  std::array<double, kMaxDim> coordinates(Eigen::Index idx) const;
  std::array<int, kMaxDim> multi_index(Eigen::Index idx) const;

  const std::array<int, kMaxDim>& points() const { return points_; }
  const std::array<double, kMaxDim>& extents() const { return extents_; }

  bool operator==(const Grid&) const = default;

  std::string describe() const;

 private:
  int dim_ = 0;
  std::array<int, kMaxDim> points_{1, 1, 1};
  std::array<double, kMaxDim> extents_{1.0, 1.0, 1.0};
};

void require_same_grid(const Grid& a, const Grid& b, const char* what);

}  // namespace nlocch
