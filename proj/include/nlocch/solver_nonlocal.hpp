#pragma once

#include <memory>
#include <string>
#include <vector>

#include "nlocch/kernel.hpp"
#include "nlocch/neumann.hpp"
#include "nlocch/nonlocal_operator.hpp"
#include "nlocch/physics.hpp"
#include "nlocch/solver_local.hpp"

namespace nlocch {

/// How the nonlocal chemical potential enters the phi update.
enum class NonlocalScheme {
  /// L_eps treated implicitly: (I + dt (-Delta_h)(L_eps + S)) phi+ = phi + dt Delta_h(Psi'(phi) - S phi) + dt R,
  /// solved by preconditioned conjugate gradients in the H^{-1} pairing.
  implicit,
  /// L_eps explicit with stabilization S >= max a_eps + C3:
  /// (I + dt S (-Delta_h)) phi+ = phi + dt Delta_h(L_eps phi + Psi'(phi) - S phi) + dt R.
  stabilized_explicit,
};

std::string to_string(NonlocalScheme scheme);
NonlocalScheme nonlocal_scheme_from_string(const std::string& name);

struct NonlocalState {
  double time = 0.0;
  Field phi;
  Field mu;
  Field sigma;
  double epsilon = 0.0;
};

using NonlocalTrajectory = std::vector<NonlocalState>;

/// Smallest stabilization admissible for the stabilized-explicit scheme.
double explicit_stabilization_threshold(const Kernel& kernel, const PotentialSpec& potential);

/// min_x a_eps(x) + min_s Psi''(s) = min a_eps - C3; positive values satisfy
/// the small-epsilon condition of the nonlocal well-posedness theory.
double coercivity_margin(const Kernel& kernel, const PotentialSpec& potential);

NonlocalState make_nonlocal_state(const Field& phi0, const Field& sigma0, NonlocalOperator& op,
                                  const PotentialSpec& potential);

/// integral Psi(phi) + E_eps(phi).
double nonlocal_energy(const Field& phi, NonlocalOperator& op, const PotentialSpec& potential);

class NonlocalSolver {
 public:
  struct Options {
    NonlocalScheme scheme = NonlocalScheme::implicit;
    double tolerance = 1e-12;  // relative PCG residual
    int max_iterations = 1000;
  };

  NonlocalSolver(std::shared_ptr<const Kernel> kernel, ModelParams params, SolverConfig cfg, Options options);
  NonlocalSolver(std::shared_ptr<const Kernel> kernel, ModelParams params, SolverConfig cfg)
      : NonlocalSolver(std::move(kernel), std::move(params), cfg, Options{}) {}

  NonlocalState step(const NonlocalState& state);
  NonlocalTrajectory run(NonlocalState initial);

  NonlocalOperator& op() { return op_; }
  const SolverConfig& config() const { return cfg_; }
  const Options& options() const { return options_; }
  int last_iterations() const { return last_iterations_; }
  long total_iterations() const { return total_iterations_; }

 private:
  Field implicit_phi_update(const Field& rhs, const Field& guess, double time);

  ModelParams params_;
  SolverConfig cfg_;
  Options options_;
  NonlocalOperator op_;
  NeumannWorkspace ws_;
  Eigen::VectorXd preconditioner_;
  int last_iterations_ = 0;
  long total_iterations_ = 0;
};

NonlocalState step_nonlocal(const NonlocalState& state, NonlocalOperator& op, const ModelParams& params,
                            const SolverConfig& cfg, NonlocalScheme scheme = NonlocalScheme::implicit);
NonlocalTrajectory run_nonlocal(const NonlocalState& initial, NonlocalOperator& op, const ModelParams& params,
                                const SolverConfig& cfg, NonlocalScheme scheme = NonlocalScheme::implicit);

}  // namespace nlocch
