#include "nlocch/norms.hpp"

#include <cmath>

namespace nlocch {

double inner(const Field& a, const Field& b) {
  require_same_grid(a.grid(), b.grid(), "inner");
  return a.grid().cell_volume() * a.values().dot(b.values());
}

double norm_l2(const Field& f) { return std::sqrt(inner(f, f)); }

double gradient_norm_l2(const Field& f) {
  const Grid& g = f.grid();
  const auto& v = f.values();
  double sum = 0.0;
  for (int axis = 0; axis < g.dim(); ++axis) {
    const Eigen::Index stride = g.stride(axis);
    const int n = g.points(axis);
    const double inv_h = 1.0 / g.spacing(axis);
    for (Eigen::Index idx = 0; idx < g.size(); ++idx) {
      const int j = static_cast<int>((idx / stride) % n);
      if (j + 1 < n) {
        const double d = (v[idx + stride] - v[idx]) * inv_h;
        sum += d * d;
      }
    }
  }
  return std::sqrt(g.cell_volume() * sum);
}

double norm_h1(const Field& f) {
  const double l2 = norm_l2(f);
  const double grad = gradient_norm_l2(f);
  return std::sqrt(l2 * l2 + grad * grad);
}

double dual_norm(const Field& f, DualNormWorkspace& ws) {
  const double m = mean(f);
  Field centred = f;
  centred.values().array() -= m;
  const Field u = ws.inverse_laplacian(centred);
  const double grad = gradient_norm_l2(u);
  return std::sqrt(grad * grad + m * m);
}

}  // namespace nlocch
