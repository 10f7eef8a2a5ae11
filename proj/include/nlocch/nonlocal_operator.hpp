#pragma once

#include <memory>

#include <Eigen/Core>

#include "nlocch/cosine_polynomial.hpp"
#include "nlocch/field.hpp"
#include "nlocch/kernel.hpp"
#include "nlocch/transforms.hpp"

namespace nlocch {

/// L_eps psi(x) = integral over Omega of J_eps(x - y) (psi(x) - psi(y)) dy,
/// discretized by the midpoint rule as a_eps * psi - J_eps * (psi 1_Omega) with a
/// zero-padded linear convolution.
///
/// The kernel is shared and immutable; the convolution buffers are private,
/// so use one operator instance per thread.
class NonlocalOperator {
 public:
  explicit NonlocalOperator(std::shared_ptr<const Kernel> kernel);

  const Kernel& kernel() const { return *kernel_; }
  std::shared_ptr<const Kernel> shared_kernel() const { return kernel_; }
  const Grid& grid() const { return kernel_->grid(); }
  double epsilon() const { return kernel_->epsilon(); }

  Field apply(const Field& psi);
  void apply(const Eigen::VectorXd& in, Eigen::VectorXd& out);

  /// E_eps(psi) = (1/2) <psi, L_eps psi>.
  double energy(const Field& psi);

  /// |L_eps c + laplacian_c|_{L2} with the Laplacian supplied exactly.
  double laplacian_residual(const Field& c, const Field& laplacian_c);
  double laplacian_residual(const CosinePolynomial& c);

  /// Cosine-mode symbol of the operator with even reflection across the box
  /// faces in place of truncation: Jhat(0) - Jhat(k) >= 0. Agrees with L_eps in
  /// the interior; used to precondition implicit solves.
  const Eigen::VectorXd& reflected_symbol() const { return reflected_symbol_; }

 private:
  std::shared_ptr<const Kernel> kernel_;
  PaddedConvolution convolution_;
  Eigen::VectorXd reflected_symbol_;
  Eigen::VectorXd scratch_;
};

Field apply(NonlocalOperator& op, const Field& psi);
double energy(NonlocalOperator& op, const Field& psi);
double laplacian_residual(NonlocalOperator& op, const CosinePolynomial& c);

}  // namespace nlocch
