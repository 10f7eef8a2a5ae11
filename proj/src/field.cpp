#include "nlocch/field.hpp"

#include <stdexcept>

namespace nlocch {

Field::Field(Grid grid) : grid_(std::move(grid)), values_(Eigen::VectorXd::Zero(grid_.size())) {}

Field::Field(Grid grid, Eigen::VectorXd values) : grid_(std::move(grid)), values_(std::move(values)) {
  if (values_.size() != grid_.size()) {
    throw std::invalid_argument("field: value count does not match grid size");
  }
}

Field Field::constant(const Grid& grid, double value) {
  return Field(grid, Eigen::VectorXd::Constant(grid.size(), value));
}

Field Field::with_values(Eigen::VectorXd v) const { return Field(grid_, std::move(v)); }

Field& Field::operator+=(const Field& other) {
  require_same_grid(grid_, other.grid_, "field +=");
  values_ += other.values_;
  return *this;
}

Field& Field::operator-=(const Field& other) {
  require_same_grid(grid_, other.grid_, "field -=");
  values_ -= other.values_;
  return *this;
}

Field operator+(Field a, const Field& b) { return a += b; }
Field operator-(Field a, const Field& b) { return a -= b; }
Field operator*(double s, Field a) { return a *= s; }
Field operator*(Field a, double s) { return a *= s; }

}  // namespace nlocch
