// Independent reference implementations used by the tests. Everything here is
// assembled directly (dense matrices, double sums, Simpson rules) and shares no
// code with the library's transform-based paths.
#pragma once

#include <cmath>
#include <functional>
#include <random>

#include <Eigen/Dense>

#include "nlocch/field.hpp"
#include "nlocch/grid.hpp"
#include "nlocch/kernel.hpp"

namespace oracle {

using nlocch::Field;
using nlocch::Grid;

inline Field random_field(const Grid& g, unsigned seed, double lo = -1.0, double hi = 1.0) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(lo, hi);
  Field f(g);
  for (Eigen::Index i = 0; i < f.size(); ++i) f[i] = u(rng);
  return f;
}

inline Field random_mean_free(const Grid& g, unsigned seed) {
  Field f = random_field(g, seed);
  f.values().array() -= f.values().mean();
  return f;
}

// 3-point Neumann Laplacian with mirrored ghost cells, assembled entry by entry.
inline Eigen::MatrixXd laplacian_matrix(const Grid& g) {
  const Eigen::Index n = g.size();
  Eigen::MatrixXd D = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto idx = g.multi_index(i);
    for (int a = 0; a < g.dim(); ++a) {
      const double w = 1.0 / (g.spacing(a) * g.spacing(a));
      for (int s : {-1, 1}) {
        const int j = idx[a] + s;
        if (j < 0 || j >= g.points(a)) continue;  // mirrored ghost: flux is zero
        D(i, i + s * g.stride(a)) += w;
        D(i, i) -= w;
      }
    }
  }
  return D;
}

inline double distance(const Grid& g, Eigen::Index i, Eigen::Index j) {
  const auto x = g.coordinates(i);
  const auto y = g.coordinates(j);
  double r2 = 0.0;
  for (int a = 0; a < g.dim(); ++a) r2 += (x[a] - y[a]) * (x[a] - y[a]);
  return std::sqrt(r2);
}

// Direct J_eps(r) = c exp(-1/(1-(r/eps)^2)) eps^{-n-2}, independent of the profile class.
inline double kernel_value(double c, int n, double r, double eps) {
  const double s = r / eps;
  if (s >= 1.0) return 0.0;
  return c * std::exp(-1.0 / (1.0 - s * s)) / std::pow(eps, n + 2);
}

// Dense L_eps: (L psi)_i = sum_j w J(x_i - x_j) (psi_i - psi_j).
inline Eigen::MatrixXd nonlocal_matrix(const Grid& g, double c, double eps) {
  const Eigen::Index n = g.size();
  const double w = g.cell_volume();
  Eigen::MatrixXd L = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      if (i == j) continue;
      const double k = w * kernel_value(c, g.dim(), distance(g, i, j), eps);
      L(i, j) -= k;
      L(i, i) += k;
    }
  }
  return L;
}

// E(psi) = 1/4 sum_ij w^2 J(x_i - x_j) (psi_i - psi_j)^2.
inline double nonlocal_energy(const Grid& g, double c, double eps, const Eigen::VectorXd& psi) {
  const double w = g.cell_volume();
  double e = 0.0;
  for (Eigen::Index i = 0; i < g.size(); ++i) {
    for (Eigen::Index j = 0; j < g.size(); ++j) {
      const double d = psi[i] - psi[j];
      e += w * w * kernel_value(c, g.dim(), distance(g, i, j), eps) * d * d;
    }
  }
  return 0.25 * e;
}

// Composite Simpson on [a,b] with m (even) panels.
inline double simpson(const std::function<double(double)>& f, double a, double b, int m) {
  const double h = (b - a) / m;
  double s = f(a) + f(b);
  for (int k = 1; k < m; ++k) s += (k % 2 ? 4.0 : 2.0) * f(a + k * h);
  return s * h / 3.0;
}

// Bump moment int_0^1 r^2 exp(-1/(1-r^2)) r^{n-1} dr; the integrand is flat at r=1,
// so Simpson converges fast.
inline double bump_moment(int n) {
  return simpson([n](double r) { return r < 1.0 ? std::pow(r, n + 1) * std::exp(-1.0 / (1.0 - r * r)) : 0.0; }, 0.0,
                 1.0, 20000);
}

}  // namespace oracle
