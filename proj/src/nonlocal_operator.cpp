#include "nlocch/nonlocal_operator.hpp"

#include "nlocch/norms.hpp"

namespace nlocch {

NonlocalOperator::NonlocalOperator(std::shared_ptr<const Kernel> kernel)
    : kernel_(std::move(kernel)),
      convolution_(kernel_->grid(), kernel_->grid().cell_volume() * kernel_->padded_samples()) {
  const Eigen::VectorXd jhat = convolution_.cosine_symbol();
  reflected_symbol_ = (jhat[0] - jhat.array()).cwiseMax(0.0).matrix();
}

void NonlocalOperator::apply(const Eigen::VectorXd& in, Eigen::VectorXd& out) {
  convolution_.apply(in, scratch_);
  out = kernel_->a_eps().values().cwiseProduct(in) - scratch_;
}

Field NonlocalOperator::apply(const Field& psi) {
  require_same_grid(grid(), psi.grid(), "nonlocal apply");
  Field out(psi.grid());
  apply(psi.values(), out.values());
  return out;
}

double NonlocalOperator::energy(const Field& psi) { return 0.5 * inner(psi, apply(psi)); }

double NonlocalOperator::laplacian_residual(const Field& c, const Field& laplacian_c) {
  require_same_grid(c.grid(), laplacian_c.grid(), "laplacian_residual");
  return norm_l2(apply(c) + laplacian_c);
}

double NonlocalOperator::laplacian_residual(const CosinePolynomial& c) {
  return laplacian_residual(c.sample(grid()), c.sample_laplacian(grid()));
}

Field apply(NonlocalOperator& op, const Field& psi) { return op.apply(psi); }
double energy(NonlocalOperator& op, const Field& psi) { return op.energy(psi); }
double laplacian_residual(NonlocalOperator& op, const CosinePolynomial& c) { return op.laplacian_residual(c); }

}  // namespace nlocch
