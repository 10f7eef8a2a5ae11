#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "nlocch/cosine_polynomial.hpp"
#include "nlocch/norms.hpp"
#include "nlocch/physics.hpp"
#include "nlocch/solver_local.hpp"
#include "nlocch/solver_nonlocal.hpp"

namespace nlocch {

/// Minimum slope accepted for the sqrt(eps) rate claims.
inline constexpr double kRateThreshold = 0.45;

/// Error norms between a nonlocal and a local trajectory.
struct TrajectoryErrors {
  double phi_dual_sup = 0.0;     // sup_t |phi_eps - phi|_{H^1'}
  double phi_l2l2 = 0.0;         // |phi_eps - phi|_{L2(0,T;L2)}
  double sigma_l2_sup = 0.0;     // sup_t |sigma_eps - sigma|_{L2}
  double grad_sigma_l2l2 = 0.0;  // |grad(sigma_eps - sigma)|_{L2(0,T;L2)}
};

/// Sup norms over snapshots; time integrals by the trapezoidal rule over
/// snapshot times. Throws std::invalid_argument when snapshot times differ.
template <class TrajA, class TrajB>
TrajectoryErrors error_functionals(const TrajA& reference, const TrajB& other, DualNormWorkspace& ws) {
  if (reference.size() != other.size()) throw std::invalid_argument("error_functionals: snapshot count mismatch");
  TrajectoryErrors e;
  double phi_int = 0.0, grad_int = 0.0;
  double prev_phi = 0.0, prev_grad = 0.0;
  for (std::size_t k = 0; k < reference.size(); ++k) {
    if (reference[k].time != other[k].time) throw std::invalid_argument("error_functionals: snapshot time mismatch");
    const Field dphi = other[k].phi - reference[k].phi;
    const Field dsigma = other[k].sigma - reference[k].sigma;
    e.phi_dual_sup = std::max(e.phi_dual_sup, dual_norm(dphi, ws));
    e.sigma_l2_sup = std::max(e.sigma_l2_sup, norm_l2(dsigma));
    const double phi_sq = inner(dphi, dphi);
    const double g = gradient_norm_l2(dsigma);
    const double grad_sq = g * g;
    if (k > 0) {
      const double dt = reference[k].time - reference[k - 1].time;
      phi_int += 0.5 * dt * (prev_phi + phi_sq);
      grad_int += 0.5 * dt * (prev_grad + grad_sq);
    }
    prev_phi = phi_sq;
    prev_grad = grad_sq;
  }
  e.phi_l2l2 = std::sqrt(phi_int);
  e.grad_sigma_l2l2 = std::sqrt(grad_int);
  return e;
}

/// Least-squares line through (ln eps, ln error).
struct RateFit {
  double slope = 0.0;
  double prefactor = 0.0;   // exp(intercept)
  double residual = 0.0;    // RMS deviation in log space
  int points = 0;           // rows used
  int below_floor = 0;      // rows excluded for error <= 0 or non-finite
  bool valid = false;       // false when fewer than three usable rows remain
};

RateFit fit_rate(const std::vector<double>& epsilons, const std::vector<double>& errors);

/// True when errors are non-increasing as eps decreases (epsilons given in
/// decreasing order).
bool monotone_in_eps(const std::vector<double>& errors);

/// Operator-level study: residual |L_eps c + Delta c| per catalog entry and the
/// energy gap |E_eps(psi) - (1/2)|grad psi|^2| for psi = catalog[0].
struct OperatorStudyRow {
  double epsilon = 0.0;
  std::vector<double> residuals;
  double energy = 0.0;
  double energy_gap = 0.0;
  double min_aeps_eps2 = 0.0;
  double kernel_mass = 0.0;
};

struct OperatorStudy {
  Grid grid;
  std::vector<CosinePolynomial> catalog;
  double energy_limit = 0.0;
  std::vector<OperatorStudyRow> rows;
  std::vector<RateFit> residual_fits;  // per catalog entry
  RateFit energy_fit;
  bool energy_gap_decreasing = false;
};

OperatorStudy run_operator_study(const Grid& grid, const std::vector<double>& epsilons,
                                 const std::vector<CosinePolynomial>& catalog);

struct SweepPlan {
  std::vector<double> epsilons;  // strictly decreasing, >= 3 entries
  Grid grid;
  ModelParams params;
  SolverConfig local_cfg;
  SolverConfig nonlocal_template;  // dt = dt_base; stabilization used for the implicit scheme
  double c_dt = 1.0;
  NonlocalScheme scheme = NonlocalScheme::implicit;
  double tolerance = 1e-10;
  /// Stabilization for the nonlocal runs; unset means C3 (implicit) or
  /// max a_eps + C3 (stabilized_explicit).
  std::optional<double> nonlocal_stabilization;
  CosinePolynomial phi0;
  CosinePolynomial sigma0;
  std::vector<CosinePolynomial> catalog;
  bool preflight = true;

  void validate() const;
  /// Nonlocal solver configuration for one eps (dt adapted, snapshot times shared with the local run).
  SolverConfig nonlocal_config(double epsilon, const Kernel& kernel) const;
};

struct SweepRow {
  double eps = 0.0;
  TrajectoryErrors errors;
  double op_residual = 0.0;
  double energy_gap = 0.0;
  double min_aeps_eps2 = 0.0;
  double dt = 0.0;
  double stabilization = 0.0;
  double coercivity_margin = 0.0;
  double sigma_min = 0.0;
  double sigma_max = 0.0;
  long solver_iterations = 0;
  bool failed = false;
  std::string failure;
};

struct ConvergenceReport {
  std::vector<SweepRow> rows;
  /// Keyed by CSV column name.
  std::vector<std::pair<std::string, RateFit>> fits;
  std::vector<std::pair<std::string, bool>> monotone;
  double local_sigma_min = 0.0;
  double local_sigma_max = 0.0;
  /// Temporal self-difference of the local reference (dt vs dt/2), or -1 when skipped.
  TrajectoryErrors temporal_error;
  bool preflight_ran = false;
  double preflight_ratio = 0.0;         // temporal error / largest eps-error, max over columns
  double preflight_ratio_finest = 0.0;  // temporal error / finest-eps error, max over columns

  const RateFit& fit(const std::string& column) const;
  bool is_monotone(const std::string& column) const;
};

/// Column order of the CSV report.
const std::vector<std::string>& report_columns();
double column_value(const SweepRow& row, const std::string& column);

/// Runs the reference local simulation, one nonlocal simulation per eps
/// (distributed over `workers` threads) and assembles the report.
ConvergenceReport run_sweep(const SweepPlan& plan, int workers = 1,
                            const std::function<void(const std::string&)>& log = {});

}  // namespace nlocch
