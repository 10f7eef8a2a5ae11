#pragma once

#include <array>
#include <string>
#include <vector>

#include "nlocch/field.hpp"

namespace nlocch {

/// Finite sum  sum_t a_t prod_i cos(pi k_{t,i} x_i / L_i)  on a box.
///
/// Every term has zero normal derivative on the box faces, so these are
/// Neumann-compatible smooth test functions with closed-form Laplacians.
class CosinePolynomial {
 public:
  struct Term {
    double coefficient = 1.0;
    std::array<int, 3> wavenumbers{0, 0, 0};
    bool operator==(const Term&) const = default;
  };

  CosinePolynomial() = default;
  explicit CosinePolynomial(std::vector<Term> terms);

  static CosinePolynomial constant(double value);
  /// Grammar: term ('+' term)*, term := [coef '*'] 'cos(' k1 [',' k2 [',' k3]] ')' | number.
  /// Example: "0.2*cos(1,1)", "cos(2,0) + cos(0,3)", "0.8".
  static CosinePolynomial parse(const std::string& text);
  std::string to_string() const;

  const std::vector<Term>& terms() const { return terms_; }

  double value(const std::array<double, 3>& x, const std::array<double, 3>& extents) const;
  double laplacian(const std::array<double, 3>& x, const std::array<double, 3>& extents) const;

  Field sample(const Grid& grid) const;
  Field sample_laplacian(const Grid& grid) const;

  /// Exact integral over the box of |grad c|^2.
  double gradient_norm_squared(const Grid& grid) const;

  bool operator==(const CosinePolynomial&) const = default;

 private:
  std::vector<Term> terms_;
};

}  // namespace nlocch
