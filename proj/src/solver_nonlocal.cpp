#include "nlocch/solver_nonlocal.hpp"

#include <cmath>
#include <sstream>

#include "nlocch/norms.hpp"

namespace nlocch {

std::string to_string(NonlocalScheme scheme) {
  return scheme == NonlocalScheme::implicit ? "implicit" : "stabilized_explicit";
}

NonlocalScheme nonlocal_scheme_from_string(const std::string& name) {
  if (name == "implicit") return NonlocalScheme::implicit;
  if (name == "stabilized_explicit") return NonlocalScheme::stabilized_explicit;
  throw std::invalid_argument("unknown nonlocal scheme '" + name + "'");
}

double explicit_stabilization_threshold(const Kernel& kernel, const PotentialSpec& potential) {
  return kernel.max_a() + potential.stabilization_bound;
}

double coercivity_margin(const Kernel& kernel, const PotentialSpec& potential) {
  return kernel.min_a() - potential.stabilization_bound;
}

NonlocalState make_nonlocal_state(const Field& phi0, const Field& sigma0, NonlocalOperator& op,
                                  const PotentialSpec& potential) {
  require_same_grid(phi0.grid(), sigma0.grid(), "make_nonlocal_state");
  Field mu = op.apply(phi0) + potential_derivative(potential, phi0);
  return NonlocalState{0.0, phi0, std::move(mu), sigma0, op.epsilon()};
}

double nonlocal_energy(const Field& phi, NonlocalOperator& op, const PotentialSpec& potential) {
  return potential_energy(potential, phi) + op.energy(phi);
}

NonlocalSolver::NonlocalSolver(std::shared_ptr<const Kernel> kernel, ModelParams params, SolverConfig cfg,
                               Options options)
    : params_(std::move(params)), cfg_(cfg), options_(options), op_(std::move(kernel)), ws_(op_.grid()) {
  params_.validate();
  cfg_.validate(params_);
  if (options_.scheme == NonlocalScheme::stabilized_explicit) {
    const double threshold = explicit_stabilization_threshold(op_.kernel(), params_.potential);
    if (cfg_.stabilization < threshold) {
      std::ostringstream os;
      os << "nonlocal solver: stabilized_explicit needs S >= max a_eps + C3 = " << threshold << ", got "
         << cfg_.stabilization;
      throw std::invalid_argument(os.str());
    }
  } else {
    // Q^{-1} for Q = (-Delta_h)^{-1} + dt (Lrefl + S), diagonal in the cosine basis.
    const auto& lambda = ws_.symbol();
    const auto& ell = op_.reflected_symbol();
    preconditioner_ = (lambda.array() / (1.0 + cfg_.dt * lambda.array() * (ell.array() + cfg_.stabilization))).matrix();
    preconditioner_[0] = 0.0;
  }
}

Field NonlocalSolver::implicit_phi_update(const Field& rhs, const Field& guess, double time) {
  // A phi+ = rhs with A = I + dt (-Delta_h)(L + S). A preserves the mean and is
  // the identity on constants, so split off the mean of rhs and solve the
  // mean-free part of  B x = G b0  with B = G + dt (L + S), G = (-Delta_h)^{-1}.
  // B is symmetric positive definite on mean-free vectors.
  const double dt = cfg_.dt;
  const double S = cfg_.stabilization;
  const double m = mean(rhs);
  Eigen::VectorXd b0 = rhs.values().array() - m;
  Eigen::VectorXd target;
  ws_.apply_multiplier(b0, ws_.inverse_symbol(), target);

  Eigen::VectorXd lx, gx;
  auto apply_b = [&](const Eigen::VectorXd& x, Eigen::VectorXd& out) {
    ws_.apply_multiplier(x, ws_.inverse_symbol(), gx);
    op_.apply(x, lx);
    out = gx + dt * (lx + S * x);
  };
  auto project = [](Eigen::VectorXd& v) { v.array() -= v.mean(); };

  Eigen::VectorXd x = guess.values().array() - guess.values().mean();
  Eigen::VectorXd bx, r, z, p, bp;
  apply_b(x, bx);
  r = target - bx;
  project(r);
  const double target_norm = target.norm();
  last_iterations_ = 0;
  if (target_norm == 0.0) {
    x.setZero();
  } else if (r.norm() > options_.tolerance * target_norm) {
    ws_.apply_multiplier(r, preconditioner_, z);
    p = z;
    double rz = r.dot(z);
    bool converged = false;
    for (int it = 1; it <= options_.max_iterations; ++it) {
      apply_b(p, bp);
      const double alpha = rz / p.dot(bp);
      x += alpha * p;
      r -= alpha * bp;
      last_iterations_ = it;
      if (r.norm() <= options_.tolerance * target_norm) {
        converged = true;
        break;
      }
      ws_.apply_multiplier(r, preconditioner_, z);
      const double rz_next = r.dot(z);
      p = z + (rz_next / rz) * p;
      rz = rz_next;
    }
    if (!converged) {
      std::ostringstream os;
      os << "nonlocal solver: PCG did not converge in " << options_.max_iterations << " iterations at t = " << time;
      throw SolverAbort(os.str(), time, guess.max_abs());
    }
  }
  total_iterations_ += last_iterations_;
  project(x);
  x.array() += m;
  return Field(rhs.grid(), std::move(x));
}

NonlocalState NonlocalSolver::step(const NonlocalState& s) {
  require_same_grid(op_.grid(), s.phi.grid(), "step_nonlocal");
  require_same_grid(op_.grid(), s.sigma.grid(), "step_nonlocal");
  const double dt = cfg_.dt;
  const double S = cfg_.stabilization;
  const double t = s.time + dt;

  const Field dpsi = potential_derivative(params_.potential, s.phi);
  const Field reaction = reaction_phi(params_, s.phi, s.sigma);
  Field phi;
  if (options_.scheme == NonlocalScheme::stabilized_explicit) {
    Field mu_tilde = op_.apply(s.phi) + dpsi;
    Field rhs = s.phi + dt * reaction + dt * ws_.laplacian(mu_tilde - S * s.phi);
    phi = ws_.solve_helmholtz(1.0, dt * S, 0.0, rhs);
  } else {
    Field rhs = s.phi + dt * reaction + dt * ws_.laplacian(dpsi - S * s.phi);
    phi = implicit_phi_update(rhs, s.phi, t);
  }
  Field mu = op_.apply(phi) + potential_derivative(params_.potential, phi);
  Field sigma = detail::nutrient_step(params_, dt, s.time, s.phi, s.sigma, ws_);

  detail::check_finite(phi, sigma, t, "step_nonlocal");
  return NonlocalState{t, std::move(phi), std::move(mu), std::move(sigma), op_.epsilon()};
}

NonlocalTrajectory NonlocalSolver::run(NonlocalState state) {
  const long n = cfg_.total_steps();
  NonlocalTrajectory traj;
  state.time = 0.0;
  state.epsilon = op_.epsilon();
  traj.push_back(state);
  for (long j = 1; j <= n; ++j) {
    state = step(state);
    state.time = cfg_.time_of_step(j);
    if (j % cfg_.snapshot_stride == 0 || j == n) traj.push_back(state);
  }
  return traj;
}

NonlocalState step_nonlocal(const NonlocalState& state, NonlocalOperator& op, const ModelParams& params,
                            const SolverConfig& cfg, NonlocalScheme scheme) {
  NonlocalSolver solver(op.shared_kernel(), params, cfg, {scheme});
  return solver.step(state);
}

NonlocalTrajectory run_nonlocal(const NonlocalState& initial, NonlocalOperator& op, const ModelParams& params,
                                const SolverConfig& cfg, NonlocalScheme scheme) {
  NonlocalSolver solver(op.shared_kernel(), params, cfg, {scheme});
  return solver.run(initial);
}

}  // namespace nlocch
