#pragma once

#include "nlocch/field.hpp"
#include "nlocch/neumann.hpp"

namespace nlocch {

/// Midpoint-rule L2 inner product.
double inner(const Field& a, const Field& b);

double norm_l2(const Field& f);

/// L2 norm of the face-centred discrete gradient. Interior faces carry
/// (f_{j+1} - f_j) / h; boundary faces carry zero (mirrored ghost values), so
/// the result squared equals <f, -Delta_h f>.
double gradient_norm_l2(const Field& f);

double norm_h1(const Field& f);

/// Equivalent H^1(Omega)' norm:
///   sqrt( |grad_h (-Delta_h)^{-1} (f - f_Omega)|_{L2}^2 + |f_Omega|^2 ).
double dual_norm(const Field& f, DualNormWorkspace& ws);

}  // namespace nlocch
