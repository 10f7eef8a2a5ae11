#include "nlocch/solver_local.hpp"

#include <cmath>
#include <sstream>

#include "nlocch/norms.hpp"

namespace nlocch {

long SolverConfig::total_steps() const {
  const double ratio = t_end / dt;
  const long n = std::lround(ratio);
  if (n < 1 || std::abs(ratio - static_cast<double>(n)) > 1e-9 * ratio) {
    std::ostringstream os;
    os << "solver: t_end / dt = " << ratio << " is not a positive integer";
    throw std::invalid_argument(os.str());
  }
  return n;
}

double SolverConfig::time_of_step(long j) const {
  return t_end * (static_cast<double>(j) / static_cast<double>(total_steps()));
}

void SolverConfig::validate(const ModelParams& params) const {
  if (!(dt > 0.0) || !(t_end > 0.0)) throw std::invalid_argument("solver: dt and t_end must be positive");
  if (snapshot_stride < 1) throw std::invalid_argument("solver: snapshot_stride must be >= 1");
  if (stabilization < params.potential.stabilization_bound) {
    throw std::invalid_argument("solver: stabilization S must be >= C3 of the potential");
  }
  if (dt * params.C > 1.0) {
    std::ostringstream os;
    os << "solver: dt * C = " << dt * params.C << " > 1 violates the nutrient positivity gate";
    throw std::invalid_argument(os.str());
  }
  (void)total_steps();
}

LocalState make_local_state(const Field& phi0, const Field& sigma0, const PotentialSpec& potential) {
  require_same_grid(phi0.grid(), sigma0.grid(), "make_local_state");
  Field mu = potential_derivative(potential, phi0) - laplacian_neumann(phi0);
  return LocalState{0.0, phi0, std::move(mu), sigma0};
}

double local_energy(const Field& phi, const PotentialSpec& potential) {
  const double g = gradient_norm_l2(phi);
  return 0.5 * g * g + potential_energy(potential, phi);
}

bool sigma_within_bounds(const Field& sigma, double tol) {
  if (sigma.size() == 0) return true;
  return sigma.values().minCoeff() >= -tol && sigma.values().maxCoeff() <= 1.0 + tol;
}

namespace detail {

Field nutrient_step(const ModelParams& params, double dt, double time, const Field& phi, const Field& sigma,
                    NeumannWorkspace& ws) {
  const Field sigma_s = params.sigma_source(time, sigma.grid());
  Field rhs(sigma.grid());
  for (Eigen::Index i = 0; i < rhs.size(); ++i) {
    rhs[i] = sigma[i] + dt * params.B * sigma_s[i] - dt * params.C * sigma[i] * params.interp.value(phi[i]);
  }
  return ws.solve_helmholtz(1.0 + dt * params.B, dt, 0.0, rhs);
}

void check_finite(const Field& phi, const Field& sigma, double time, const char* who) {
  if (!phi.all_finite() || !sigma.all_finite()) {
    std::ostringstream os;
    os << who << ": non-finite state at t = " << time << " (max|phi| = " << phi.max_abs() << ")";
    throw SolverAbort(os.str(), time, phi.max_abs());
  }
}

}  // namespace detail

LocalSolver::LocalSolver(const Grid& grid, ModelParams params, SolverConfig cfg)
    : grid_(grid), params_(std::move(params)), cfg_(cfg), ws_(grid) {
  params_.validate();
  cfg_.validate(params_);
}

LocalState LocalSolver::step(const LocalState& s) {
  require_same_grid(grid_, s.phi.grid(), "step_local");
  require_same_grid(grid_, s.sigma.grid(), "step_local");
  const double dt = cfg_.dt;
  const double S = cfg_.stabilization;

  const Field dpsi = potential_derivative(params_.potential, s.phi);
  Field explicit_part = dpsi - S * s.phi;
  Field rhs = s.phi + dt * reaction_phi(params_, s.phi, s.sigma) + dt * ws_.laplacian(explicit_part);
  Field phi = ws_.solve_helmholtz(1.0, dt * S, dt, rhs);

  Field mu = dpsi - ws_.laplacian(phi) + S * (phi - s.phi);
  Field sigma = detail::nutrient_step(params_, dt, s.time, s.phi, s.sigma, ws_);

  const double t = s.time + dt;
  detail::check_finite(phi, sigma, t, "step_local");
  return LocalState{t, std::move(phi), std::move(mu), std::move(sigma)};
}

LocalTrajectory LocalSolver::run(LocalState state) {
  const long n = cfg_.total_steps();
  LocalTrajectory traj;
  state.time = 0.0;
  traj.push_back(state);
  for (long j = 1; j <= n; ++j) {
    state = step(state);
    state.time = cfg_.time_of_step(j);
    if (j % cfg_.snapshot_stride == 0 || j == n) traj.push_back(state);
  }
  return traj;
}

LocalState step_local(const LocalState& state, const ModelParams& params, const SolverConfig& cfg) {
  LocalSolver solver(state.phi.grid(), params, cfg);
  return solver.step(state);
}

LocalTrajectory run_local(const LocalState& initial, const ModelParams& params, const SolverConfig& cfg) {
  LocalSolver solver(initial.phi.grid(), params, cfg);
  return solver.run(initial);
}

}  // namespace nlocch
