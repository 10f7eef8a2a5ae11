#pragma once

#include <complex>
#include <memory>
#include <vector>

#include <Eigen/Core>

#include "nlocch/grid.hpp"

namespace nlocch {

namespace detail {
struct FftwPlanDeleter {
  void operator()(void* plan) const;
};
struct FftwBufferDeleter {
  void operator()(void* p) const;
};
using PlanHandle = std::unique_ptr<void, FftwPlanDeleter>;
template <class T>
using FftwBuffer = std::unique_ptr<T[], FftwBufferDeleter>;
}  // namespace detail

/// Type-II cosine transform on a cell-centred grid and its exact inverse.
///
/// forward() produces unnormalized DCT-II coefficients; inverse() applies the
/// DCT-III scaled by 1/prod(2 N_i), so inverse(forward(f)) == f. Coefficient k
/// multiplies prod_i cos(pi k_i (j_i + 1/2) / N_i).
///
/// Owns its plans and buffers: one instance per thread of execution.
class CosineTransform {
 public:
  explicit CosineTransform(const Grid& grid);

  void forward(const Eigen::VectorXd& in, Eigen::VectorXd& out);
  void inverse(const Eigen::VectorXd& in, Eigen::VectorXd& out);

  const Grid& grid() const { return grid_; }

 private:
  Grid grid_;
  Eigen::Index n_;
  double scale_;
  detail::FftwBuffer<double> buffer_;
  detail::PlanHandle forward_plan_;
  detail::PlanHandle inverse_plan_;
};

/// Zero-padded (linear, non-circular) convolution of grid fields with a fixed
/// kernel sampled on the difference lattice.
///
/// The padded lattice has 2 N_i points per axis; lattice offset m (|m_i| < N_i)
/// is stored at index m_i mod 2 N_i. The kernel values passed in already carry
/// the quadrature weight.
class PaddedConvolution {
 public:
  PaddedConvolution(const Grid& grid, const Eigen::VectorXd& padded_kernel);

  /// out_i = sum_j kernel(x_i - x_j) * in_j over grid nodes j.
  void apply(const Eigen::VectorXd& in, Eigen::VectorXd& out);

  /// Real part of the kernel transform at cosine mode k (k_i < N_i), i.e.
  /// sum_m kernel(m) prod_i cos(pi k_i m_i / N_i). Flat row-major over grid modes.
  Eigen::VectorXd cosine_symbol() const;

  const Grid& grid() const { return grid_; }
  static std::array<int, Grid::kMaxDim> padded_points(const Grid& grid);
  static Eigen::Index padded_size(const Grid& grid);

 private:
  Grid grid_;
  std::array<int, Grid::kMaxDim> padded_{1, 1, 1};
  Eigen::Index real_size_ = 0;
  Eigen::Index complex_size_ = 0;
  detail::FftwBuffer<double> real_;
  detail::FftwBuffer<std::complex<double>> spectrum_;
  std::vector<std::complex<double>> kernel_hat_;
  // Padded-lattice position of every grid node.
  Eigen::Matrix<Eigen::Index, Eigen::Dynamic, 1> window_;
  detail::PlanHandle r2c_;
  detail::PlanHandle c2r_;
};

}  // namespace nlocch
