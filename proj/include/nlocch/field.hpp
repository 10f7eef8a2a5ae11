#pragma once

#include <array>
#include <utility>

#include <Eigen/Core>

#include "nlocch/grid.hpp"

namespace nlocch {

/// Scalar nodal values on a Grid, stored row-major in an Eigen vector.
class Field {
 public:
  Field() = default;
  explicit Field(Grid grid);
  Field(Grid grid, Eigen::VectorXd values);

  static Field constant(const Grid& grid, double value);

  /// Samples `f(x)` at every node; `x` is a std::array<double, 3> of coordinates.
  template <class Fn>
  static Field sample(const Grid& grid, Fn&& f) {
    Field out(grid);
    for (Eigen::Index i = 0; i < grid.size(); ++i) out.values_[i] = f(grid.coordinates(i));
    return out;
  }

  const Grid& grid() const { return grid_; }
  const Eigen::VectorXd& values() const { return values_; }
  Eigen::VectorXd& values() { return values_; }
  Eigen::Index size() const { return values_.size(); }

  double operator[](Eigen::Index i) const { return values_[i]; }
  double& operator[](Eigen::Index i) { return values_[i]; }

  bool all_finite() const { return values_.allFinite(); }
  double max_abs() const { return values_.size() ? values_.cwiseAbs().maxCoeff() : 0.0; }

  /// Copy of this field with values replaced by `v` (same grid).
  Field with_values(Eigen::VectorXd v) const;

  Field& operator+=(const Field& other);
  Field& operator-=(const Field& other);
  Field& operator*=(double s) {
    values_ *= s;
    return *this;
  }

 private:
  Grid grid_;
  Eigen::VectorXd values_;
};

Field operator+(Field a, const Field& b);
Field operator-(Field a, const Field& b);
Field operator*(double s, Field a);
Field operator*(Field a, double s);

/// Nodewise map over one or two fields.
template <class Fn>
Field map(const Field& a, Fn&& f) {
  Field out(a.grid());
  for (Eigen::Index i = 0; i < a.size(); ++i) out[i] = f(a[i]);
  return out;
}

}  // namespace nlocch
