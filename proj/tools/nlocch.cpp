// nlocch: command-line driver for nonlocal/local Cahn-Hilliard tumor growth studies.
//
// Exit codes: 0 success, 2 configuration error (including a failed
// assumption audit), 3 solver abort, 4 rate assertion failure (--assert-rates).

#include <chrono>
#include <cmath>
#include <ctime>
#include <filesystem>
#include <iostream>
#include <memory>
#include <sstream>

#include <CLI11.hpp>

#include "nlocch/assumptions.hpp"
#include "nlocch/config.hpp"
#include "nlocch/convergence.hpp"
#include "nlocch/field_io.hpp"
#include "nlocch/report.hpp"
#include "nlocch/solver_local.hpp"
#include "nlocch/solver_nonlocal.hpp"
#include "nlocch/trajectory_io.hpp"

namespace fs = std::filesystem;
using namespace nlocch;

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitSolver = 3;
constexpr int kExitRates = 4;

struct Options {
  std::string config_path;
  std::string output;
  int parallel = 1;
  bool quiet = false;
  bool assert_rates = false;
  double epsilon = 0.0;
};

std::string timestamp() {
  const std::time_t now = std::time(nullptr);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
  return buf;
}

fs::path output_dir(const Options& opt, const ExperimentConfig& cfg) {
  return opt.output.empty() ? fs::path(cfg.output) : fs::path(opt.output);
}

bool wants(const ExperimentConfig& cfg, const std::string& format) {
  return std::find(cfg.formats.begin(), cfg.formats.end(), format) != cfg.formats.end();
}

std::ostream& info(const Options& opt) {
  static std::ostringstream sink;
  sink.str("");
  return opt.quiet ? static_cast<std::ostream&>(sink) : std::cout;
}

int verify_assumptions_cmd(const Options& opt, const ExperimentConfig& cfg) {
  const auto checks = verify_assumptions(cfg);
  for (const auto& c : checks) {
    info(opt) << (c.passed ? "PASS " : "FAIL ") << "[" << c.assumption << "] " << c.name << ": " << c.value << ' '
              << c.relation << ' ' << c.threshold << '\n';
  }
  if (!all_passed(checks)) {
    std::cerr << "verify-assumptions: at least one check failed\n";
    return kExitConfig;
  }
  return 0;
}

int operator_study_cmd(const Options& opt, const ExperimentConfig& cfg) {
  const OperatorStudy study = run_operator_study(make_grid(cfg), cfg.epsilons, cfg.catalog);
  const fs::path dir = output_dir(opt, cfg);
  if (wants(cfg, "csv")) write_text(dir / "operator_study.csv", operator_study_csv(study));
  if (wants(cfg, "json")) {
    auto j = operator_study_json(study, cfg);
    j["metadata"] = {{"timestamp", timestamp()}};
    write_text(dir / "operator_study.json", j.dump(2) + "\n");
  }
  bool ok = true;
  for (std::size_t i = 0; i < study.catalog.size(); ++i) {
    const auto& f = study.residual_fits[i];
    info(opt) << "residual " << study.catalog[i].to_string() << ": slope " << f.slope << ", fit residual "
              << f.residual << '\n';
    ok = ok && f.valid && f.slope >= kRateThreshold;
  }
  for (const auto& row : study.rows) {
    info(opt) << "eps " << row.epsilon << ": energy gap " << row.energy_gap << ", min a_eps eps^2 "
              << row.min_aeps_eps2 << '\n';
  }
  if (opt.assert_rates && !ok) {
    std::cerr << "operator-study: residual slope below " << kRateThreshold << '\n';
    return kExitRates;
  }
  return 0;
}

int convergence_sweep_cmd(const Options& opt, const ExperimentConfig& cfg) {
  const auto started = std::chrono::steady_clock::now();
  const SweepPlan plan = make_plan(cfg);
  const ConvergenceReport report = run_sweep(plan, opt.parallel, [&](const std::string& msg) {
    info(opt) << "[sweep] " << msg << std::endl;
  });
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  const fs::path dir = output_dir(opt, cfg);
  if (wants(cfg, "csv")) write_text(dir / "convergence.csv", report_csv(report));
  if (wants(cfg, "json")) {
    auto j = report_json(report, cfg);
    j["metadata"] = {{"timestamp", timestamp()}, {"parallel", opt.parallel}, {"runtime_seconds", seconds}};
    write_text(dir / "convergence.json", j.dump(2) + "\n");
  }
  info(opt) << report_csv(report);
  if (report.preflight_ran) {
    info(opt) << "temporal pre-flight: error ratio " << report.preflight_ratio << " vs largest eps-error, "
              << report.preflight_ratio_finest << " vs finest\n";
    if (report.preflight_ratio > 0.1) std::cerr << "warning: temporal error exceeds 10% of the largest eps-error\n";
  }
  bool any_failed = false;
  for (const auto& row : report.rows) {
    if (row.failed) {
      std::cerr << "convergence-sweep: eps = " << row.eps << " aborted: " << row.failure << '\n';
      any_failed = true;
    }
  }
  bool rates_ok = true;
  for (const std::string col : {"phi_dual_sup", "phi_l2l2", "sigma_l2_sup", "grad_sigma_l2l2", "op_residual"}) {
    const RateFit& f = report.fit(col);
    info(opt) << col << ": slope " << f.slope << " (fit residual " << f.residual << ")"
              << (report.is_monotone(col) ? "" : " [not monotone]") << '\n';
    rates_ok = rates_ok && f.valid && f.slope >= kRateThreshold;
    if (col != "op_residual") rates_ok = rates_ok && report.is_monotone(col);
  }
  if (any_failed) return kExitSolver;
  if (opt.assert_rates && !rates_ok) {
    std::cerr << "convergence-sweep: rate assertion failed (threshold " << kRateThreshold << ")\n";
    return kExitRates;
  }
  return 0;
}

int simulate_local_cmd(const Options& opt, const ExperimentConfig& cfg) {
  const Grid grid = make_grid(cfg);
  const ModelParams params = make_params(cfg);
  const SolverConfig scfg = make_local_config(cfg);
  const LocalState initial = make_local_state(cfg.phi0.sample(grid), cfg.sigma0.sample(grid), params.potential);
  const LocalTrajectory traj = run_local(initial, params, scfg);
  const fs::path dir = output_dir(opt, cfg) / "local";
  write_trajectory(dir, to_records(traj));
  info(opt) << "wrote " << traj.size() << " snapshots to " << dir << '\n';
  return 0;
}

int simulate_nonlocal_cmd(const Options& opt, const ExperimentConfig& cfg) {
  const SweepPlan plan = make_plan(cfg);
  const double eps = opt.epsilon > 0.0 ? opt.epsilon : cfg.epsilons.front();
  std::shared_ptr<const Kernel> kernel;
  try {
    kernel = std::make_shared<const Kernel>(build_kernel(build_profile(plan.grid.dim()), eps, plan.grid));
  } catch (const KernelResolutionError& e) {
    throw ConfigError("--epsilon", e.what());
  }
  const SolverConfig scfg = plan.nonlocal_config(eps, *kernel);
  NonlocalSolver solver(kernel, plan.params, scfg, {plan.scheme, plan.tolerance});
  if (coercivity_margin(*kernel, plan.params.potential) <= 0.0) {
    std::cerr << "warning: min a_eps - C3 <= 0 for eps = " << eps << '\n';
  }
  const NonlocalState initial = make_nonlocal_state(plan.phi0.sample(plan.grid), plan.sigma0.sample(plan.grid),
                                                    solver.op(), plan.params.potential);
  const NonlocalTrajectory traj = solver.run(initial);
  const fs::path dir = output_dir(opt, cfg) / ("nonlocal_eps_" + format_double(eps));
  write_trajectory(dir, to_records(traj));
  info(opt) << "wrote " << traj.size() << " snapshots to " << dir << " (dt = " << scfg.dt << ")\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"nlocch: nonlocal-to-local Cahn-Hilliard tumor growth laboratory"};
  app.require_subcommand(1);
  Options opt;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("config", opt.config_path, "experiment configuration file")->required();
    sub->add_option("--output", opt.output, "output directory (default: io.output)");
    sub->add_option("--parallel", opt.parallel, "worker threads for per-eps runs")->check(CLI::PositiveNumber);
    sub->add_flag("--quiet", opt.quiet, "suppress progress output");
  };
  auto* local = app.add_subcommand("simulate-local", "run the local system and write snapshots");
  auto* nonlocal = app.add_subcommand("simulate-nonlocal", "run the nonlocal system for one eps");
  auto* opstudy = app.add_subcommand("operator-study", "operator residual and energy convergence study");
  auto* sweep = app.add_subcommand("convergence-sweep", "nonlocal-to-local solution convergence sweep");
  auto* verify = app.add_subcommand("verify-assumptions", "sampled checks of the modelling assumptions");
  for (auto* sub : {local, nonlocal, opstudy, sweep, verify}) add_common(sub);
  nonlocal->add_option("--epsilon", opt.epsilon, "interaction length (default: first sweep epsilon)");
  opstudy->add_flag("--assert-rates", opt.assert_rates, "exit 4 unless every slope reaches the threshold");
  sweep->add_flag("--assert-rates", opt.assert_rates, "exit 4 unless every slope reaches the threshold");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    const ExperimentConfig cfg = load_config(opt.config_path);
    if (*local) return simulate_local_cmd(opt, cfg);
    if (*nonlocal) return simulate_nonlocal_cmd(opt, cfg);
    if (*opstudy) return operator_study_cmd(opt, cfg);
    if (*sweep) return convergence_sweep_cmd(opt, cfg);
    if (*verify) return verify_assumptions_cmd(opt, cfg);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const SolverAbort& e) {
    std::cerr << "solver abort: " << e.what() << '\n';
    return kExitSolver;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  }
  return 0;
}
