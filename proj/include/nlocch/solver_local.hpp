#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "nlocch/field.hpp"
#include "nlocch/neumann.hpp"
#include "nlocch/physics.hpp"

namespace nlocch {

/// Slack allowed on 0 <= sigma <= 1 for discrete trajectories.
inline constexpr double kSigmaTolerance = 1e-6;

/// Thrown when a time step produces non-finite values or a solve fails.
class SolverAbort : public std::runtime_error {
 public:
  SolverAbort(const std::string& what, double time, double max_abs_phi)
      : std::runtime_error(what), time_(time), max_abs_phi_(max_abs_phi) {}
  double time() const { return time_; }
  double max_abs_phi() const { return max_abs_phi_; }

 private:
  double time_;
  double max_abs_phi_;
};

struct SolverConfig {
  double dt = 1e-4;
  double t_end = 0.5;
  double stabilization = 1.0;
  int snapshot_stride = 50;

  /// t_end / dt, which must be an integer (relative slack 1e-9).
  long total_steps() const;
  /// Time of step j, t_end * j / N. Snapshot times of runs whose step counts
  /// are multiples of a common snapshot count agree bitwise.
  double time_of_step(long j) const;

  /// Throws std::invalid_argument on non-positive dt/t_end, stride < 1,
  /// S < C3, or the consumption positivity gate dt * C > 1.
  void validate(const ModelParams& params) const;
};

struct LocalState {
  double time = 0.0;
  Field phi;
  Field mu;
  Field sigma;
};

using LocalTrajectory = std::vector<LocalState>;

/// Builds a consistent initial state (mu = -Delta_h phi + Psi'(phi)).
LocalState make_local_state(const Field& phi0, const Field& sigma0, const PotentialSpec& potential);

/// Discrete energy  (1/2)|grad_h phi|^2 + integral Psi(phi).
double local_energy(const Field& phi, const PotentialSpec& potential);

/// True when every sigma value lies in [-tol, 1 + tol].
bool sigma_within_bounds(const Field& sigma, double tol = kSigmaTolerance);

/// First-order stabilized IMEX integrator for the local system.
class LocalSolver {
 public:
  LocalSolver(const Grid& grid, ModelParams params, SolverConfig cfg);

  LocalState step(const LocalState& state);
  /// Snapshots at t = 0, every `snapshot_stride` steps, and t_end.
  LocalTrajectory run(LocalState initial);

  const SolverConfig& config() const { return cfg_; }
  const ModelParams& params() const { return params_; }

 private:
  Grid grid_;
  ModelParams params_;
  SolverConfig cfg_;
  NeumannWorkspace ws_;
};

LocalState step_local(const LocalState& state, const ModelParams& params, const SolverConfig& cfg);
LocalTrajectory run_local(const LocalState& initial, const ModelParams& params, const SolverConfig& cfg);

namespace detail {
/// Shared nutrient update: (1 + dt B - dt Delta_h) sigma+ = sigma + dt B sigma_S - dt C sigma h(phi).
Field nutrient_step(const ModelParams& params, double dt, double time, const Field& phi, const Field& sigma,
                    NeumannWorkspace& ws);
void check_finite(const Field& phi, const Field& sigma, double time, const char* who);
}  // namespace detail

}  // namespace nlocch
