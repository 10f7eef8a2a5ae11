#include "nlocch/grid.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <vector>

namespace nlocch {

Grid::Grid(std::span<const int> points, std::span<const double> extents) {
  if (points.size() != extents.size()) {
    throw std::invalid_argument("grid: points and extents must have the same length");
  }
  if (points.empty() || points.size() > static_cast<std::size_t>(kMaxDim)) {
    throw std::invalid_argument("grid: dimension must be 1, 2 or 3");
  }
  dim_ = static_cast<int>(points.size());
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (points[i] < kMinPoints) {
      throw std::invalid_argument("grid: every axis needs at least 4 points");
    }
    if (!(extents[i] > 0.0) || !std::isfinite(extents[i])) {
      throw std::invalid_argument("grid: extents must be positive and finite");
    }
    points_[i] = points[i];
    extents_[i] = extents[i];
  }
}

Grid Grid::uniform(int dim, int n, double extent) {
  std::vector<int> p(static_cast<std::size_t>(std::max(dim, 0)), n);
  std::vector<double> e(p.size(), extent);
  return Grid(p, e);
}

double Grid::max_spacing() const {
  double h = 0.0;
  for (int i = 0; i < dim_; ++i) h = std::max(h, spacing(i));
  return h;
}

double Grid::min_extent() const {
  double e = extents_[0];
  for (int i = 1; i < dim_; ++i) e = std::min(e, extent(i));
  return e;
}

double Grid::cell_volume() const {
  double w = 1.0;
  for (int i = 0; i < dim_; ++i) w *= spacing(i);
  return w;
}

double Grid::volume() const {
  double v = 1.0;
  for (int i = 0; i < dim_; ++i) v *= extent(i);
  return v;
}

Eigen::Index Grid::size() const {
  Eigen::Index n = 1;
  for (int i = 0; i < dim_; ++i) n *= points(i);
  return dim_ == 0 ? 0 : n;
}

Eigen::Index Grid::stride(int axis) const {
  Eigen::Index s = 1;
  for (int i = axis + 1; i < dim_; ++i) s *= points(i);
  return s;
}

std::array<int, Grid::kMaxDim> Grid::multi_index(Eigen::Index idx) const {
  std::array<int, kMaxDim> m{0, 0, 0};
  for (int i = dim_ - 1; i >= 0; --i) {
    m[static_cast<std::size_t>(i)] = static_cast<int>(idx % points(i));
    idx /= points(i);
  }
  return m;
}

std::array<double, Grid::kMaxDim> Grid::coordinates(Eigen::Index idx) const {
  const auto m = multi_index(idx);
  std::array<double, kMaxDim> x{0.0, 0.0, 0.0};
  for (int i = 0; i < dim_; ++i) x[static_cast<std::size_t>(i)] = center(i, m[static_cast<std::size_t>(i)]);
  return x;
}

std::string Grid::describe() const {
  std::ostringstream os;
  os << "Grid(dim=" << dim_ << ", points=";
  for (int i = 0; i < dim_; ++i) os << (i ? "x" : "") << points(i);
  os << ", extent=";
  for (int i = 0; i < dim_; ++i) os << (i ? "x" : "") << extent(i);
  os << ")";
  return os.str();
}

void require_same_grid(const Grid& a, const Grid& b, const char* what) {
  if (!(a == b)) {
    throw GridMismatch(std::string(what) + ": grid mismatch (" + a.describe() + " vs " + b.describe() + ")");
  }
}

}  // namespace nlocch
