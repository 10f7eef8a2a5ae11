#include "nlocch/neumann.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace nlocch {

Eigen::VectorXd neumann_symbol(const Grid& grid) {
  Eigen::VectorXd symbol(grid.size());
  for (Eigen::Index idx = 0; idx < grid.size(); ++idx) {
    const auto k = grid.multi_index(idx);
    double s = 0.0;
    for (int i = 0; i < grid.dim(); ++i) {
      const double h = grid.spacing(i);
      s += 2.0 / (h * h) * (1.0 - std::cos(std::numbers::pi * k[static_cast<std::size_t>(i)] / grid.points(i)));
    }
    symbol[idx] = s;
  }
  return symbol;
}

NeumannWorkspace::NeumannWorkspace(const Grid& grid)
    : grid_(grid), transform_(grid), symbol_(neumann_symbol(grid)), coeffs_(grid.size()) {
  inverse_symbol_ = symbol_.unaryExpr([](double s) { return s > 0.0 ? 1.0 / s : 0.0; });
  inverse_symbol_[0] = 0.0;
}

void NeumannWorkspace::apply_multiplier(const Eigen::VectorXd& in, const Eigen::VectorXd& multiplier,
                                        Eigen::VectorXd& out) {
  transform_.forward(in, coeffs_);
  coeffs_.array() *= multiplier.array();
  transform_.inverse(coeffs_, out);
}

Field NeumannWorkspace::laplacian(const Field& f) {
  require_same_grid(grid_, f.grid(), "laplacian_neumann");
  Field out(grid_);
  transform_.forward(f.values(), coeffs_);
  coeffs_.array() *= -symbol_.array();
  coeffs_[0] = 0.0;
  transform_.inverse(coeffs_, out.values());
  return out;
}

Field NeumannWorkspace::inverse_laplacian(const Field& f) {
  require_same_grid(grid_, f.grid(), "inverse_neumann_laplacian");
  const double m = mean(f);
  if (std::abs(m) > kMeanRejectTolerance * std::max(1.0, f.max_abs())) {
    std::ostringstream os;
    os << "inverse_neumann_laplacian: input is not mean-free (mean = " << m << ")";
    throw std::invalid_argument(os.str());
  }
  Field out(grid_);
  apply_multiplier(f.values(), inverse_symbol_, out.values());
  return out;
}

Field NeumannWorkspace::solve_helmholtz(double shift, double stiffness, double biharmonic, const Field& rhs) {
  require_same_grid(grid_, rhs.grid(), "solve_helmholtz");
  if (!(shift > 0.0)) throw std::invalid_argument("solve_helmholtz: symbol_shift must be positive");
  if (stiffness < 0.0 || biharmonic < 0.0) {
    throw std::invalid_argument("solve_helmholtz: stiffness and biharmonic must be non-negative");
  }
  Field out(grid_);
  transform_.forward(rhs.values(), coeffs_);
  coeffs_.array() /= shift + stiffness * symbol_.array() + biharmonic * symbol_.array().square();
  transform_.inverse(coeffs_, out.values());
  return out;
}

double mean(const Field& f) { return f.size() ? f.values().mean() : 0.0; }

Field laplacian_neumann(const Field& f) {
  NeumannWorkspace ws(f.grid());
  return ws.laplacian(f);
}

Field laplacian_neumann(const Field& f, NeumannWorkspace& ws) { return ws.laplacian(f); }

Field solve_helmholtz(double symbol_shift, double stiffness, double biharmonic, const Field& rhs,
                      NeumannWorkspace& ws) {
  return ws.solve_helmholtz(symbol_shift, stiffness, biharmonic, rhs);
}

Field solve_helmholtz(double symbol_shift, double stiffness, double biharmonic, const Field& rhs) {
  NeumannWorkspace ws(rhs.grid());
  return ws.solve_helmholtz(symbol_shift, stiffness, biharmonic, rhs);
}

Field inverse_neumann_laplacian(const Field& f, NeumannWorkspace& ws) { return ws.inverse_laplacian(f); }

}  // namespace nlocch
