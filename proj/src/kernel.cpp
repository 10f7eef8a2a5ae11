#include "nlocch/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "nlocch/transforms.hpp"

namespace nlocch {

namespace {

double bump(double r) {
  const double s = 1.0 - r * r;
  return s > 0.0 ? std::exp(-1.0 / s) : 0.0;
}

double adaptive_integral(const auto& f) {
  double error = 0.0;
  return boost::math::quadrature::gauss_kronrod<double, 31>::integrate(f, 0.0, 1.0, 20, 1e-14, &error);
}

}  // namespace

double sphere_moment(int n) {
  switch (n) {
    case 1:
      return 2.0;
    case 2:
      return std::numbers::pi;
    case 3:
      return 4.0 * std::numbers::pi / 3.0;
    default:
      throw std::invalid_argument("sphere_moment: dimension must be 1, 2 or 3");
  }
}

double moment_target(int n) { return 2.0 / sphere_moment(n); }

double bump_moment(int n) {
  return adaptive_integral([n](double r) { return std::pow(r, n + 1) * bump(r); });
}

MollifierProfile::MollifierProfile(int dim, double normalization) : dim_(dim), normalization_(normalization) {}

double MollifierProfile::rho1(double r) const { return normalization_ * r * r * bump(r); }

double MollifierProfile::rho(double r, double epsilon) const {
  return std::pow(epsilon, -dim_) * rho1(r / epsilon);
}

double MollifierProfile::kernel(double r, double epsilon) const {
  return std::pow(epsilon, -dim_ - 2) * normalization_ * bump(r / epsilon);
}

double MollifierProfile::moment(double epsilon) const {
  // Substitute r = epsilon * s; the integrand vanishes for s >= 1.
  const int n = dim_;
  return epsilon * adaptive_integral([&](double s) {
           return rho(epsilon * s, epsilon) * std::pow(epsilon * s, n - 1);
         });
}

double MollifierProfile::moment_residual() const { return std::abs(moment() - moment_target(dim_)); }

MollifierProfile build_profile(int n) {
  const double target = moment_target(n);  // validates n
  return MollifierProfile(n, target / bump_moment(n));
}

double Kernel::sample(const std::array<int, Grid::kMaxDim>& offset) const {
  Eigen::Index c = 0;
  for (int i = 0; i < grid_.dim(); ++i) {
    const int p = 2 * grid_.points(i);
    const int m = offset[static_cast<std::size_t>(i)];
    c = c * p + ((m % p) + p) % p;
  }
  return samples_[c];
}

Kernel build_kernel(const MollifierProfile& profile, double epsilon, const Grid& grid) {
  if (!(epsilon > 0.0) || !std::isfinite(epsilon)) throw std::invalid_argument("build_kernel: epsilon must be positive");
  if (profile.dim() != grid.dim()) throw std::invalid_argument("build_kernel: profile and grid dimensions differ");
  if (epsilon < 2.0 * grid.max_spacing() * (1.0 - 1e-12)) {
    std::ostringstream os;
    os << "build_kernel: epsilon = " << epsilon << " is under-resolved; need epsilon >= 2 * max spacing = "
       << 2.0 * grid.max_spacing();
    throw KernelResolutionError(os.str());
  }

  Kernel k;
  k.epsilon_ = epsilon;
  k.profile_ = profile;
  k.grid_ = grid;
  const int d = grid.dim();
  for (int i = 0; i < d; ++i) {
    const int r = static_cast<int>(std::ceil(epsilon / grid.spacing(i)));
    k.radius_[static_cast<std::size_t>(i)] = std::min(r, grid.points(i) - 1);
  }

  const auto padded = PaddedConvolution::padded_points(grid);
  k.samples_ = Eigen::VectorXd::Zero(PaddedConvolution::padded_size(grid));
  std::array<int, 3> lo{0, 0, 0}, hi{0, 0, 0};
  for (int i = 0; i < d; ++i) {
    lo[static_cast<std::size_t>(i)] = -k.radius_[static_cast<std::size_t>(i)];
    hi[static_cast<std::size_t>(i)] = k.radius_[static_cast<std::size_t>(i)];
  }
  double sum = 0.0;
  for (int m0 = lo[0]; m0 <= hi[0]; ++m0) {
    for (int m1 = lo[1]; m1 <= hi[1]; ++m1) {
      for (int m2 = lo[2]; m2 <= hi[2]; ++m2) {
        const std::array<int, 3> m{m0, m1, m2};
        double r2 = 0.0;
        Eigen::Index c = 0;
        for (int i = 0; i < d; ++i) {
          const auto ui = static_cast<std::size_t>(i);
          const double z = m[ui] * grid.spacing(i);
          r2 += z * z;
          c = c * padded[ui] + ((m[ui] % padded[ui]) + padded[ui]) % padded[ui];
        }
        const double j = profile.kernel(std::sqrt(r2), epsilon);
        k.samples_[c] = j;
        sum += j;
      }
    }
  }
  const double w = grid.cell_volume();
  k.mass_ = sum * w;

  PaddedConvolution conv(grid, w * k.samples_);
  Eigen::VectorXd a;
  conv.apply(Eigen::VectorXd::Ones(grid.size()), a);
  k.a_eps_ = Field(grid, std::move(a));
  k.min_a_ = k.a_eps_.values().minCoeff();
  k.max_a_ = k.a_eps_.values().maxCoeff();
  return k;
}

}  // namespace nlocch
