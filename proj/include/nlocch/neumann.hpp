#pragma once

#include <Eigen/Core>

#include "nlocch/field.hpp"
#include "nlocch/transforms.hpp"

namespace nlocch {

/// Threshold above which inverse_neumann_laplacian treats its input as not
/// mean-free (relative to max(1, max|f|)).
inline constexpr double kMeanRejectTolerance = 1e-8;

/// Spectral workspace for the cell-centred discrete Neumann Laplacian.
///
/// The discrete operator is the standard 3-point stencil per axis with mirrored
/// ghost cells. It is diagonal in the type-II cosine basis with eigenvalues
///
///   lambda(k) = sum_i (2 / h_i^2) (1 - cos(pi k_i / N_i))   (of -Delta_h).
///
/// Single-user: holds transform buffers.
class NeumannWorkspace {
 public:
  explicit NeumannWorkspace(const Grid& grid);

  const Grid& grid() const { return grid_; }
  /// Eigenvalues of -Delta_h, flat row-major over cosine modes.
  const Eigen::VectorXd& symbol() const { return symbol_; }
  /// 1 / symbol(), with 0 on the zero mode (mean-free restriction).
  const Eigen::VectorXd& inverse_symbol() const { return inverse_symbol_; }

  Field laplacian(const Field& f);
  Field inverse_laplacian(const Field& f);
  Field solve_helmholtz(double shift, double stiffness, double biharmonic, const Field& rhs);

  /// out = C^{-1} diag(multiplier) C in, with C the cosine transform.
  void apply_multiplier(const Eigen::VectorXd& in, const Eigen::VectorXd& multiplier, Eigen::VectorXd& out);

  CosineTransform& transform() { return transform_; }

 private:
  Grid grid_;
  CosineTransform transform_;
  Eigen::VectorXd symbol_;
  Eigen::VectorXd inverse_symbol_;
  Eigen::VectorXd coeffs_;
};

using DualNormWorkspace = NeumannWorkspace;

/// Eigenvalues of -Delta_h for every cosine mode of `grid`.
Eigen::VectorXd neumann_symbol(const Grid& grid);

/// (1/|Omega|) * integral of f by the midpoint rule.
double mean(const Field& f);

Field laplacian_neumann(const Field& f);
Field laplacian_neumann(const Field& f, NeumannWorkspace& ws);

/// Solves (shift I - stiffness Delta_h + biharmonic Delta_h^2) u = rhs exactly.
Field solve_helmholtz(double symbol_shift, double stiffness, double biharmonic, const Field& rhs,
                      NeumannWorkspace& ws);
Field solve_helmholtz(double symbol_shift, double stiffness, double biharmonic, const Field& rhs);

/// Mean-free u with -Delta_h u = f. Throws std::invalid_argument when f is not mean-free.
Field inverse_neumann_laplacian(const Field& f, NeumannWorkspace& ws);

}  // namespace nlocch
