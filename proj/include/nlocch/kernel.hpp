#pragma once

#include <array>
#include <memory>
#include <stdexcept>

#include <Eigen/Core>

#include "nlocch/field.hpp"

namespace nlocch {

/// Raised when a kernel would be sampled with fewer than two cells per
/// support radius on some axis.
class KernelResolutionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// C_n = integral over S^{n-1} of |e_1 . sigma|^2, i.e. |S^{n-1}| / n.
double sphere_moment(int n);

/// Radial mollifier profile
///
///   rho_1(r) = c_n r^2 exp(-1 / (1 - r^2))   for |r| < 1,   0 otherwise,
///
/// scaled as rho_eps(r) = eps^{-n} rho_1(r / eps). The induced interaction
/// kernel J_eps(x) = rho_eps(|x|) / |x|^2 = eps^{-n-2} c_n exp(-1 / (1 - |x/eps|^2))
/// is smooth and compactly supported. c_n is fixed so that
/// integral_0^inf rho_eps(r) r^{n-1} dr = 2 / C_n for every eps.
class MollifierProfile {
 public:
  MollifierProfile() = default;
  MollifierProfile(int dim, double normalization);

  int dim() const { return dim_; }
  double normalization() const { return normalization_; }

  double rho1(double r) const;
  double rho(double r, double epsilon) const;
  /// J_eps evaluated at distance r (J_eps is radial).
  double kernel(double r, double epsilon) const;

  /// integral_0^inf rho_eps(r) r^{n-1} dr by adaptive Gauss-Kronrod quadrature.
  double moment(double epsilon = 1.0) const;
  /// |moment() - 2 / C_n|.
  double moment_residual() const;

 private:
  int dim_ = 0;
  double normalization_ = 0.0;
};

/// Normalization target of the moment condition.
double moment_target(int n);

/// Integral over [0, 1] of r^{n+1} exp(-1 / (1 - r^2)), computed adaptively.
double bump_moment(int n);

MollifierProfile build_profile(int n);

/// Interaction kernel J_eps sampled on the difference lattice of a grid,
/// together with a_eps(x) = integral over Omega of J_eps(x - y) dy.
class Kernel {
 public:
  double epsilon() const { return epsilon_; }
  const MollifierProfile& profile() const { return profile_; }
  const Grid& grid() const { return grid_; }

  /// J_eps on the padded lattice (2 N_i points per axis, offset m stored at
  /// m mod 2 N_i). Offsets beyond the support are zero.
  const Eigen::VectorXd& padded_samples() const { return samples_; }
  /// J_eps at lattice offset m (components with |m_i| < N_i).
  double sample(const std::array<int, Grid::kMaxDim>& offset) const;

  /// Support radius in cells per axis, clamped to N_i - 1.
  const std::array<int, Grid::kMaxDim>& radius_cells() const { return radius_; }

  const Field& a_eps() const { return a_eps_; }
  double min_a() const { return min_a_; }
  double max_a() const { return max_a_; }
  /// Discrete mass sum_z J_eps(z) * cell volume over the sampled lattice.
  double mass() const { return mass_; }

  friend Kernel build_kernel(const MollifierProfile& profile, double epsilon, const Grid& grid);

 private:
  double epsilon_ = 0.0;
  MollifierProfile profile_;
  Grid grid_;
  std::array<int, Grid::kMaxDim> radius_{0, 0, 0};
  Eigen::VectorXd samples_;
  Field a_eps_;
  double min_a_ = 0.0;
  double max_a_ = 0.0;
  double mass_ = 0.0;
};

/// Throws KernelResolutionError when epsilon < 2 * max spacing.
Kernel build_kernel(const MollifierProfile& profile, double epsilon, const Grid& grid);

}  // namespace nlocch
