#include "nlocch/assumptions.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "nlocch/kernel.hpp"

namespace nlocch {

namespace {

AssumptionCheck at_most(std::string name, std::string ass, double value, double threshold) {
  return {std::move(name), std::move(ass), value, "<=", threshold, value <= threshold};
}

AssumptionCheck at_least(std::string name, std::string ass, double value, double threshold) {
  return {std::move(name), std::move(ass), value, ">=", threshold, value >= threshold};
}

double sample_point(int i) { return -kSampleRange + 2.0 * kSampleRange * i / (kSampleCount - 1); }

}  // namespace

std::vector<AssumptionCheck> verify_assumptions(const ExperimentConfig& config) {
  std::vector<AssumptionCheck> checks;

  for (int n = 1; n <= 3; ++n) {
    const MollifierProfile profile = build_profile(n);
    checks.push_back(at_most("moment residual n=" + std::to_string(n), "mollifier", profile.moment_residual(),
                             kMomentTolerance));
    double asym = 0.0, min_rho = std::numeric_limits<double>::infinity();
    for (int i = 0; i <= 2000; ++i) {
      const double r = -1.5 + 3.0 * i / 2000;
      asym = std::max(asym, std::abs(profile.rho1(r) - profile.rho1(-r)));
      min_rho = std::min(min_rho, profile.rho1(r));
    }
    checks.push_back(at_most("rho_1 evenness n=" + std::to_string(n), "mollifier", asym, 0.0));
    checks.push_back(at_least("rho_1 non-negative n=" + std::to_string(n), "mollifier", min_rho, 0.0));
    checks.push_back(at_most("rho_1 support n=" + std::to_string(n), "mollifier", std::abs(profile.rho1(1.0)) +
                                                                             std::abs(profile.rho1(1.5)), 0.0));
  }

  const ModelParams params = make_params(config);
  const PotentialSpec& psi = params.potential;
  double min_psi = std::numeric_limits<double>::infinity();
  double min_second_margin = std::numeric_limits<double>::infinity();
  double min_growth_margin = std::numeric_limits<double>::infinity();
  double max_fd_error = 0.0;
  for (int i = 0; i < kSampleCount; ++i) {
    const double s = sample_point(i);
    min_psi = std::min(min_psi, psi.value(s));
    min_second_margin = std::min(min_second_margin, psi.second_derivative(s) + psi.stabilization_bound);
    min_growth_margin = std::min(min_growth_margin, psi.value(s) - (kGrowthC1 * std::pow(s, 4) - kGrowthC2));
    const double h = 1e-5;
    const double fd = (psi.value(s + h) - psi.value(s - h)) / (2 * h);
    max_fd_error = std::max(max_fd_error, std::abs(fd - psi.derivative(s)) / std::max(1.0, std::abs(psi.derivative(s))));
  }
  checks.push_back(at_least("Psi >= 0", "potential", min_psi, 0.0));
  checks.push_back(at_least("Psi'' + C3 >= 0", "potential", min_second_margin, 0.0));
  checks.push_back(at_least("Psi - (s^4/8 - 1) >= 0", "potential", min_growth_margin, 0.0));
  checks.push_back(at_most("Psi' finite-difference consistency", "potential", max_fd_error, 1e-6));

  const InterpolationSpec& h = params.interp;
  double h_min = std::numeric_limits<double>::infinity(), h_max = -h_min, max_slope = 0.0;
  for (int i = 0; i < kSampleCount; ++i) {
    const double s = sample_point(i);
    h_min = std::min(h_min, h.value(s));
    h_max = std::max(h_max, h.value(s));
    max_slope = std::max(max_slope, std::abs(h.derivative(s)));
    if (i > 0) {
      const double s0 = sample_point(i - 1);
      max_slope = std::max(max_slope, std::abs(h.value(s) - h.value(s0)) / (s - s0));
    }
  }
  checks.push_back(at_least("h >= 0", "interpolation", h_min, 0.0));
  checks.push_back(at_most("h <= 1", "interpolation", h_max, 1.0));
  checks.push_back(at_most("sup |h'| <= L_h", "interpolation", max_slope, h.lipschitz));

  checks.push_back(at_least("min(P, A, B, C)", "coefficients", std::min({params.P, params.A, params.B, params.C}), 0.0));
  checks.push_back(at_least("sigma_S", "coefficients", config.sigma_s, 0.0));
  checks.push_back(at_most("sigma_S", "coefficients", config.sigma_s, 1.0));

  const Grid grid = make_grid(config);
  const MollifierProfile profile = build_profile(grid.dim());
  for (double eps : config.epsilons) {
    const Kernel k = build_kernel(profile, eps, grid);
    checks.push_back(at_least("min a_eps * eps^2 (eps=" + std::to_string(eps) + ")", "kernel coercivity",
                              k.min_a() * eps * eps, 0.01));
  }
  return checks;
}

bool all_passed(const std::vector<AssumptionCheck>& checks) {
  return std::all_of(checks.begin(), checks.end(), [](const AssumptionCheck& c) { return c.passed; });
}

}  // namespace nlocch
