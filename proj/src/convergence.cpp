#include "nlocch/convergence.hpp"

#include <Eigen/QR>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <memory>
#include <mutex>
#include <sstream>
#include <thread>

#include "nlocch/kernel.hpp"
#include "nlocch/nonlocal_operator.hpp"

namespace nlocch {

RateFit fit_rate(const std::vector<double>& epsilons, const std::vector<double>& errors) {
  if (epsilons.size() != errors.size()) throw std::invalid_argument("fit_rate: size mismatch");
  RateFit fit;
  std::vector<double> x, y;
  for (std::size_t i = 0; i < errors.size(); ++i) {
    if (!(errors[i] > 0.0) || !std::isfinite(errors[i]) || !(epsilons[i] > 0.0)) {
      ++fit.below_floor;
      continue;
    }
    x.push_back(std::log(epsilons[i]));
    y.push_back(std::log(errors[i]));
  }
  fit.points = static_cast<int>(x.size());
  if (x.size() < 3) {
    fit.slope = fit.prefactor = fit.residual = std::numeric_limits<double>::quiet_NaN();
    return fit;
  }
  Eigen::MatrixXd design(x.size(), 2);
  Eigen::VectorXd rhs(y.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    design(static_cast<Eigen::Index>(i), 0) = x[i];
    design(static_cast<Eigen::Index>(i), 1) = 1.0;
    rhs[static_cast<Eigen::Index>(i)] = y[i];
  }
  const Eigen::Vector2d coef = design.colPivHouseholderQr().solve(rhs);
  const Eigen::VectorXd res = design * coef - rhs;
  fit.slope = coef[0];
  fit.prefactor = std::exp(coef[1]);
  fit.residual = std::sqrt(res.squaredNorm() / static_cast<double>(res.size()));
  fit.valid = true;
  return fit;
}

bool monotone_in_eps(const std::vector<double>& errors) {
  for (std::size_t i = 1; i < errors.size(); ++i) {
    if (!(errors[i] <= errors[i - 1])) return false;
  }
  return true;
}

OperatorStudy run_operator_study(const Grid& grid, const std::vector<double>& epsilons,
                                 const std::vector<CosinePolynomial>& catalog) {
  if (catalog.empty()) throw std::invalid_argument("operator study: empty test catalog");
  OperatorStudy study;
  study.grid = grid;
  study.catalog = catalog;
  study.energy_limit = 0.5 * catalog.front().gradient_norm_squared(grid);
  const MollifierProfile profile = build_profile(grid.dim());

  std::vector<Field> samples, laplacians;
  for (const auto& c : catalog) {
    samples.push_back(c.sample(grid));
    laplacians.push_back(c.sample_laplacian(grid));
  }
  for (double eps : epsilons) {
    auto kernel = std::make_shared<const Kernel>(build_kernel(profile, eps, grid));
    NonlocalOperator op(kernel);
    OperatorStudyRow row;
    row.epsilon = eps;
    for (std::size_t i = 0; i < catalog.size(); ++i) {
      row.residuals.push_back(op.laplacian_residual(samples[i], laplacians[i]));
    }
    row.energy = op.energy(samples.front());
    row.energy_gap = std::abs(row.energy - study.energy_limit);
    row.min_aeps_eps2 = kernel->min_a() * eps * eps;
    row.kernel_mass = kernel->mass();
    study.rows.push_back(std::move(row));
  }
  for (std::size_t i = 0; i < catalog.size(); ++i) {
    std::vector<double> r;
    for (const auto& row : study.rows) r.push_back(row.residuals[i]);
    study.residual_fits.push_back(fit_rate(epsilons, r));
  }
  std::vector<double> gaps;
  for (const auto& row : study.rows) gaps.push_back(row.energy_gap);
  study.energy_fit = fit_rate(epsilons, gaps);
  study.energy_gap_decreasing = true;
  for (std::size_t i = 1; i < gaps.size(); ++i) {
    if (!(gaps[i] < gaps[i - 1])) study.energy_gap_decreasing = false;
  }
  return study;
}

void SweepPlan::validate() const {
  if (epsilons.size() < 3) throw std::invalid_argument("sweep: at least three epsilons required");
  for (std::size_t i = 0; i < epsilons.size(); ++i) {
    if (!(epsilons[i] > 0.0)) throw std::invalid_argument("sweep: epsilons must be positive");
    if (i && !(epsilons[i] < epsilons[i - 1])) throw std::invalid_argument("sweep: epsilons must be strictly decreasing");
  }
  if (epsilons.back() < 2.0 * grid.max_spacing() * (1.0 - 1e-12)) {
    throw KernelResolutionError("sweep: smallest epsilon is below 2 * max spacing");
  }
  if (catalog.empty()) throw std::invalid_argument("sweep: operator test catalog is empty");
  if (!(c_dt > 0.0)) throw std::invalid_argument("sweep: c_dt must be positive");
  params.validate();
  local_cfg.validate(params);
  nonlocal_template.validate(params);
}

SolverConfig SweepPlan::nonlocal_config(double epsilon, const Kernel& kernel) const {
  SolverConfig cfg = nonlocal_template;
  const double interval = nonlocal_template.dt * nonlocal_template.snapshot_stride;
  const double target = std::min(nonlocal_template.dt, c_dt * epsilon * epsilon);
  const int substeps = std::max(1, static_cast<int>(std::ceil(interval / target - 1e-9)));
  cfg.dt = interval / substeps;
  cfg.snapshot_stride = substeps;
  if (nonlocal_stabilization) {
    cfg.stabilization = *nonlocal_stabilization;
  } else if (scheme == NonlocalScheme::stabilized_explicit) {
    cfg.stabilization = explicit_stabilization_threshold(kernel, params.potential);
  } else {
    cfg.stabilization = params.potential.stabilization_bound;
  }
  return cfg;
}

const std::vector<std::string>& report_columns() {
  static const std::vector<std::string> cols{"eps",          "phi_dual_sup", "phi_l2l2",      "sigma_l2_sup",
                                             "grad_sigma_l2l2", "op_residual", "energy_gap", "min_aeps_eps2",
                                             "dt"};
  return cols;
}

double column_value(const SweepRow& row, const std::string& column) {
  if (column == "eps") return row.eps;
  if (column == "phi_dual_sup") return row.errors.phi_dual_sup;
  if (column == "phi_l2l2") return row.errors.phi_l2l2;
  if (column == "sigma_l2_sup") return row.errors.sigma_l2_sup;
  if (column == "grad_sigma_l2l2") return row.errors.grad_sigma_l2l2;
  if (column == "op_residual") return row.op_residual;
  if (column == "energy_gap") return row.energy_gap;
  if (column == "min_aeps_eps2") return row.min_aeps_eps2;
  if (column == "dt") return row.dt;
  throw std::invalid_argument("unknown report column '" + column + "'");
}

const RateFit& ConvergenceReport::fit(const std::string& column) const {
  for (const auto& [name, f] : fits) {
    if (name == column) return f;
  }
  throw std::invalid_argument("no fit for column '" + column + "'");
}

bool ConvergenceReport::is_monotone(const std::string& column) const {
  for (const auto& [name, m] : monotone) {
    if (name == column) return m;
  }
  throw std::invalid_argument("no monotonicity flag for column '" + column + "'");
}

namespace {

const std::vector<std::string> kErrorColumns{"phi_dual_sup", "phi_l2l2", "sigma_l2_sup", "grad_sigma_l2l2",
                                             "op_residual", "energy_gap"};

// Operator columns do not depend on time stepping; they contribute zero.
double temporal_column(const TrajectoryErrors& e, const std::string& column) {
  if (column == "phi_dual_sup") return e.phi_dual_sup;
  if (column == "phi_l2l2") return e.phi_l2l2;
  if (column == "sigma_l2_sup") return e.sigma_l2_sup;
  if (column == "grad_sigma_l2l2") return e.grad_sigma_l2l2;
  return 0.0;
}

}  // namespace

ConvergenceReport run_sweep(const SweepPlan& plan, int workers, const std::function<void(const std::string&)>& log) {
  plan.validate();
  auto say = [&](const std::string& msg) {
    if (log) log(msg);
  };
  const Grid& grid = plan.grid;
  const Field phi0 = plan.phi0.sample(grid);
  const Field sigma0 = plan.sigma0.sample(grid);

  say("local reference run");
  const LocalState initial = make_local_state(phi0, sigma0, plan.params.potential);
  const LocalTrajectory reference = run_local(initial, plan.params, plan.local_cfg);

  ConvergenceReport report;
  report.local_sigma_min = std::numeric_limits<double>::infinity();
  report.local_sigma_max = -std::numeric_limits<double>::infinity();
  for (const auto& s : reference) {
    report.local_sigma_min = std::min(report.local_sigma_min, s.sigma.values().minCoeff());
    report.local_sigma_max = std::max(report.local_sigma_max, s.sigma.values().maxCoeff());
  }

  if (plan.preflight) {
    say("temporal pre-flight (dt / 2)");
    SolverConfig half = plan.local_cfg;
    half.dt /= 2.0;
    half.snapshot_stride *= 2;
    const LocalTrajectory refined = run_local(initial, plan.params, half);
    DualNormWorkspace ws(grid);
    report.temporal_error = error_functionals(refined, reference, ws);
    report.preflight_ran = true;
  }

  const MollifierProfile profile = build_profile(grid.dim());
  report.rows.resize(plan.epsilons.size());
  std::atomic<std::size_t> next{0};
  std::mutex log_mutex;
  auto worker = [&]() {
    DualNormWorkspace ws(grid);
    for (std::size_t i = next++; i < plan.epsilons.size(); i = next++) {
      SweepRow& row = report.rows[i];
      row.eps = plan.epsilons[i];
      try {
        auto kernel = std::make_shared<const Kernel>(build_kernel(profile, row.eps, grid));
        const SolverConfig cfg = plan.nonlocal_config(row.eps, *kernel);
        row.dt = cfg.dt;
        row.stabilization = cfg.stabilization;
        row.min_aeps_eps2 = kernel->min_a() * row.eps * row.eps;
        row.coercivity_margin = coercivity_margin(*kernel, plan.params.potential);
        {
          std::lock_guard lock(log_mutex);
          std::ostringstream os;
          os << "eps = " << row.eps << ": dt = " << cfg.dt << ", S = " << cfg.stabilization;
          if (row.coercivity_margin <= 0.0) os << " (warning: min a_eps - C3 <= 0)";
          say(os.str());
        }
        NonlocalSolver solver(kernel, plan.params, cfg, {plan.scheme, plan.tolerance});
        const NonlocalState start = make_nonlocal_state(phi0, sigma0, solver.op(), plan.params.potential);
        const NonlocalTrajectory traj = solver.run(start);
        row.solver_iterations = solver.total_iterations();
        row.errors = error_functionals(reference, traj, ws);
        row.sigma_min = std::numeric_limits<double>::infinity();
        row.sigma_max = -std::numeric_limits<double>::infinity();
        for (const auto& s : traj) {
          row.sigma_min = std::min(row.sigma_min, s.sigma.values().minCoeff());
          row.sigma_max = std::max(row.sigma_max, s.sigma.values().maxCoeff());
        }
        const CosinePolynomial& probe = plan.catalog.front();
        row.op_residual = solver.op().laplacian_residual(probe);
        row.energy_gap = std::abs(solver.op().energy(probe.sample(grid)) - 0.5 * probe.gradient_norm_squared(grid));
      } catch (const SolverAbort& e) {
        row.failed = true;
        row.failure = e.what();
      }
    }
  };
  const int n_workers = std::max(1, std::min<int>(workers, static_cast<int>(plan.epsilons.size())));
  if (n_workers == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < n_workers; ++w) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }

  std::vector<double> eps;
  for (const auto& row : report.rows) {
    if (!row.failed) eps.push_back(row.eps);
  }
  for (const auto& column : kErrorColumns) {
    std::vector<double> values;
    for (const auto& row : report.rows) {
      if (!row.failed) values.push_back(column_value(row, column));
    }
    report.fits.emplace_back(column, fit_rate(eps, values));
    report.monotone.emplace_back(column, monotone_in_eps(values));
    if (report.preflight_ran && !values.empty()) {
      // per-column ratios against the largest and the finest-eps error
      const double t = temporal_column(report.temporal_error, column);
      const double largest = *std::max_element(values.begin(), values.end());
      if (largest > 0.0) report.preflight_ratio = std::max(report.preflight_ratio, t / largest);
      if (values.back() > 0.0) report.preflight_ratio_finest = std::max(report.preflight_ratio_finest, t / values.back());
    }
  }
  return report;
}

}  // namespace nlocch
