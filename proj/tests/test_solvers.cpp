#include <doctest.h>

#include <cmath>
#include <memory>

#include "nlocch/cosine_polynomial.hpp"
#include "nlocch/neumann.hpp"
#include "nlocch/norms.hpp"
#include "nlocch/solver_local.hpp"
#include "nlocch/solver_nonlocal.hpp"
#include "oracles.hpp"

using namespace nlocch;

namespace {

Eigen::VectorXd apply_fn(const Eigen::VectorXd& v, double (*f)(double)) { return v.unaryExpr(f); }

double dpsi(double s) { return s * s * s - s; }
double hfun(double s) { return 0.5 * (1.0 + std::tanh(2.0 * s)); }

struct DenseModel {
  Eigen::MatrixXd D;
  Eigen::MatrixXd I;
  ModelParams p;
  double dt;
  double S;

  Eigen::VectorXd reaction(const Eigen::VectorXd& phi, const Eigen::VectorXd& sigma) const {
    return ((p.P * sigma.array() - p.A) * apply_fn(phi, hfun).array()).matrix();
  }
  Eigen::VectorXd sigma_step(const Eigen::VectorXd& phi, const Eigen::VectorXd& sigma) const {
    const double ss = std::get<double>(p.sigma_s);
    const Eigen::VectorXd rhs =
        (sigma.array() + dt * p.B * ss - dt * p.C * sigma.array() * apply_fn(phi, hfun).array()).matrix();
    return ((1.0 + dt * p.B) * I - dt * D).lu().solve(rhs);
  }
};

ModelParams pure_flow() {
  ModelParams p;
  p.P = 0.0;
  p.A = 0.0;
  return p;
}

}  // namespace

TEST_CASE("solver config validation") {
  ModelParams p;
  SolverConfig c;
  CHECK_NOTHROW(c.validate(p));
  CHECK(c.total_steps() == 5000);
  CHECK(c.time_of_step(5000) == 0.5);
  c.stabilization = 0.5;
  CHECK_THROWS_AS(c.validate(p), std::invalid_argument);
  c = SolverConfig{};
  c.dt = 2.0;
  c.t_end = 4.0;
  CHECK_THROWS_AS(c.validate(p), std::invalid_argument);  // dt * C > 1
  c = SolverConfig{};
  c.dt = 3e-4;
  CHECK_THROWS_AS(c.validate(p), std::invalid_argument);  // 0.5 / 3e-4 not an integer
  c = SolverConfig{};
  c.snapshot_stride = 0;
  CHECK_THROWS_AS(c.validate(p), std::invalid_argument);
}

TEST_CASE("local step matches the dense oracle") {
  const Grid g = Grid::uniform(2, 8);
  DenseModel m{oracle::laplacian_matrix(g), Eigen::MatrixXd::Identity(g.size(), g.size()), ModelParams{}, 1e-3, 1.0};
  SolverConfig cfg;
  cfg.dt = m.dt;
  cfg.t_end = 3 * m.dt;
  cfg.stabilization = m.S;
  LocalState s = make_local_state(oracle::random_field(g, 5, -0.8, 0.8), oracle::random_field(g, 6, 0.0, 1.0),
                                  m.p.potential);
  Eigen::VectorXd phi = s.phi.values(), sigma = s.sigma.values();
  const Eigen::MatrixXd A = m.I - m.dt * m.S * m.D + m.dt * m.D * m.D;
  LocalSolver solver(g, m.p, cfg);
  for (int k = 0; k < 3; ++k) {
    const Eigen::VectorXd rhs = phi + m.dt * m.reaction(phi, sigma) + m.dt * m.D * (apply_fn(phi, dpsi) - m.S * phi);
    const Eigen::VectorXd phi_new = A.lu().solve(rhs);
    const Eigen::VectorXd mu = apply_fn(phi, dpsi) - m.D * phi_new + m.S * (phi_new - phi);
    sigma = m.sigma_step(phi, sigma);
    phi = phi_new;
    s = solver.step(s);
    CHECK((s.phi.values() - phi).cwiseAbs().maxCoeff() <= 1e-9);
    CHECK((s.mu.values() - mu).cwiseAbs().maxCoeff() <= 1e-9);
    CHECK((s.sigma.values() - sigma).cwiseAbs().maxCoeff() <= 1e-9);
  }
}

TEST_CASE("nonlocal steps match the dense oracle for both schemes") {
  const Grid g = Grid::uniform(2, 8);
  const double eps = 0.3;
  auto kernel = std::make_shared<const Kernel>(build_kernel(build_profile(2), eps, g));
  const Eigen::MatrixXd L = oracle::nonlocal_matrix(g, kernel->profile().normalization(), eps);
  for (auto scheme : {NonlocalScheme::implicit, NonlocalScheme::stabilized_explicit}) {
    CAPTURE(to_string(scheme));
    const double S = scheme == NonlocalScheme::implicit ? 1.0 : explicit_stabilization_threshold(*kernel, double_well());
    DenseModel m{oracle::laplacian_matrix(g), Eigen::MatrixXd::Identity(g.size(), g.size()), ModelParams{}, 1e-3, S};
    SolverConfig cfg;
    cfg.dt = m.dt;
    cfg.t_end = 3 * m.dt;
    cfg.stabilization = S;
    NonlocalSolver solver(kernel, m.p, cfg, {scheme, 1e-13, 1000});
    NonlocalState s = make_nonlocal_state(oracle::random_field(g, 8, -0.8, 0.8), oracle::random_field(g, 9, 0.0, 1.0),
                                          solver.op(), m.p.potential);
    Eigen::VectorXd phi = s.phi.values(), sigma = s.sigma.values();
    CHECK((s.mu.values() - (L * phi + apply_fn(phi, dpsi))).cwiseAbs().maxCoeff() <= 1e-9);
    for (int k = 0; k < 3; ++k) {
      Eigen::VectorXd phi_new;
      if (scheme == NonlocalScheme::implicit) {
        const Eigen::MatrixXd A = m.I - m.dt * m.D * (L + S * m.I);
        const Eigen::VectorXd rhs =
            phi + m.dt * m.reaction(phi, sigma) + m.dt * m.D * (apply_fn(phi, dpsi) - S * phi);
        phi_new = A.lu().solve(rhs);
      } else {
        const Eigen::MatrixXd A = m.I - m.dt * S * m.D;
        const Eigen::VectorXd rhs =
            phi + m.dt * m.reaction(phi, sigma) + m.dt * m.D * (L * phi + apply_fn(phi, dpsi) - S * phi);
        phi_new = A.lu().solve(rhs);
      }
      sigma = m.sigma_step(phi, sigma);
      phi = phi_new;
      s = solver.step(s);
      CHECK((s.phi.values() - phi).cwiseAbs().maxCoeff() <= 1e-9);
      CHECK((s.mu.values() - (L * phi + apply_fn(phi, dpsi))).cwiseAbs().maxCoeff() <= 1e-9);
      CHECK((s.sigma.values() - sigma).cwiseAbs().maxCoeff() <= 1e-9);
    }
  }
}

TEST_CASE("explicit scheme enforces its stabilization threshold") {
  const Grid g = Grid::uniform(2, 8);
  auto kernel = std::make_shared<const Kernel>(build_kernel(build_profile(2), 0.3, g));
  SolverConfig cfg;
  cfg.stabilization = 1.0;
  CHECK_THROWS_AS(NonlocalSolver(kernel, ModelParams{}, cfg, {NonlocalScheme::stabilized_explicit}),
                  std::invalid_argument);
  CHECK(explicit_stabilization_threshold(*kernel, double_well()) == doctest::Approx(kernel->max_a() + 1.0));
  CHECK(nonlocal_scheme_from_string("stabilized_explicit") == NonlocalScheme::stabilized_explicit);
  CHECK(nonlocal_scheme_from_string(to_string(NonlocalScheme::implicit)) == NonlocalScheme::implicit);
  CHECK_THROWS(nonlocal_scheme_from_string("crank_nicolson"));
}

TEST_CASE("stationary states") {
  const Grid g = Grid::uniform(2, 16);
  ModelParams p = pure_flow();
  p.C = 0.0;
  SolverConfig cfg;
  cfg.dt = 1e-3;
  cfg.t_end = 1e-2;
  LocalSolver solver(g, p, cfg);
  for (double c : {-1.0, 0.0, 1.0}) {
    LocalState s = make_local_state(Field::constant(g, c), Field::constant(g, 1.0), p.potential);
    for (int k = 0; k < 5; ++k) s = solver.step(s);
    CHECK((s.phi.values().array() - c).abs().maxCoeff() < 1e-13);
    CHECK((s.sigma.values().array() - 1.0).abs().maxCoeff() < 1e-13);
  }
}

TEST_CASE("pure flows conserve mass and dissipate energy") {
  const Grid g = Grid::uniform(2, 32);
  const ModelParams p = pure_flow();
  const Field phi0 = CosinePolynomial::parse("0.3 + 0.4*cos(1,1) + 0.2*cos(3,0)").sample(g);
  const Field sigma0 = Field::constant(g, 0.8);
  SolverConfig cfg;
  cfg.dt = 1e-4;
  cfg.t_end = 2e-2;
  cfg.snapshot_stride = 1;

  SUBCASE("local") {
    LocalSolver solver(g, p, cfg);
    LocalState s = make_local_state(phi0, sigma0, p.potential);
    double e = local_energy(s.phi, p.potential);
    const double m0 = mean(s.phi);
    for (long k = 0; k < cfg.total_steps(); ++k) {
      const double m = mean(s.phi);
      s = solver.step(s);
      CHECK(std::abs(mean(s.phi) - m) <= 1e-12);
      const double e1 = local_energy(s.phi, p.potential);
      CHECK(e1 <= e + 1e-14);
      e = e1;
    }
    CHECK(std::abs(mean(s.phi) - m0) <= 1e-12 * cfg.total_steps());
  }
  SUBCASE("nonlocal") {
    auto kernel = std::make_shared<const Kernel>(build_kernel(build_profile(2), 0.1, g));
    NonlocalSolver solver(kernel, p, cfg);
    NonlocalState s = make_nonlocal_state(phi0, sigma0, solver.op(), p.potential);
    double e = nonlocal_energy(s.phi, solver.op(), p.potential);
    for (long k = 0; k < cfg.total_steps(); ++k) {
      const double m = mean(s.phi);
      s = solver.step(s);
      CHECK(std::abs(mean(s.phi) - m) <= 1e-12);
      const double e1 = nonlocal_energy(s.phi, solver.op(), p.potential);
      CHECK(e1 <= e + 1e-14);
      e = e1;
    }
  }
}

TEST_CASE("nutrient stays in the unit interval") {
  const Grid g = Grid::uniform(2, 32);
  ModelParams p;
  SolverConfig cfg;
  cfg.dt = 1e-3;
  cfg.t_end = 0.2;
  cfg.snapshot_stride = 10;
  const Field phi0 = CosinePolynomial::parse("0.9*cos(1,1)").sample(g);
  SUBCASE("sigma = 1 with no consumption") {
    p.C = 0.0;
    const LocalTrajectory traj = run_local(make_local_state(phi0, Field::constant(g, 1.0), p.potential), p, cfg);
    for (const auto& s : traj) CHECK((s.sigma.values().array() - 1.0).abs().maxCoeff() < 1e-13);
  }
  SUBCASE("default coupling from extreme data") {
    for (double s0 : {0.0, 1.0}) {
      const LocalTrajectory traj = run_local(make_local_state(phi0, Field::constant(g, s0), p.potential), p, cfg);
      for (const auto& s : traj) CHECK(sigma_within_bounds(s.sigma));
    }
  }
}

TEST_CASE("trajectory snapshot times") {
  const Grid g = Grid::uniform(1, 16);
  SolverConfig cfg;
  cfg.dt = 0.01;
  cfg.t_end = 0.25;
  cfg.snapshot_stride = 10;
  const ModelParams p;
  const auto traj = run_local(make_local_state(Field::constant(g, 0.1), Field::constant(g, 0.5), p.potential), p, cfg);
  REQUIRE(traj.size() == 4);
  CHECK(traj[0].time == 0.0);
  CHECK(traj[1].time == 0.25 * (10.0 / 25.0));
  CHECK(traj[2].time == 0.25 * (20.0 / 25.0));
  CHECK(traj[3].time == 0.25);
}

TEST_CASE("local scheme is first order in time") {
  const Grid g = Grid::uniform(2, 32);
  const ModelParams p;
  const Field phi0 = CosinePolynomial::parse("0.2*cos(1,1) + 0.1*cos(2,0)").sample(g);
  const Field sigma0 = Field::constant(g, 0.8);
  std::vector<Field> finals;
  for (double dt : {4e-3, 2e-3, 1e-3, 5e-4}) {
    SolverConfig cfg;
    cfg.dt = dt;
    cfg.t_end = 0.2;
    cfg.snapshot_stride = 1000000;
    finals.push_back(run_local(make_local_state(phi0, sigma0, p.potential), p, cfg).back().phi);
  }
  const double d1 = norm_l2(finals[0] - finals[1]);
  const double d2 = norm_l2(finals[1] - finals[2]);
  const double d3 = norm_l2(finals[2] - finals[3]);
  CHECK(d1 / d2 >= 1.7);
  CHECK(d1 / d2 <= 2.3);
  CHECK(d2 / d3 >= 1.7);
  CHECK(d2 / d3 <= 2.3);
}

TEST_CASE("non-finite state aborts") {
  const Grid g = Grid::uniform(1, 8);
  Field phi = Field::constant(g, 0.0);
  phi[3] = std::nan("");
  SolverConfig cfg;
  cfg.dt = 1e-3;
  cfg.t_end = 1e-3;
  LocalSolver solver(g, ModelParams{}, cfg);
  CHECK_THROWS_AS(solver.step(make_local_state(phi, Field::constant(g, 0.5), double_well())), SolverAbort);
}
