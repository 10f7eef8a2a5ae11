#pragma once

#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "nlocch/convergence.hpp"
#include "nlocch/cosine_polynomial.hpp"

namespace nlocch {

/// Invalid experiment configuration; `field()` names the offending
/// "section.key" (or the section for structural errors).
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string field, const std::string& message)
      : std::runtime_error(field + ": " + message), field_(std::move(field)) {}
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

/// Sectioned key-value experiment description. See docs/config.md for the
/// grammar; every key has a default except sweep.epsilons.
struct ExperimentConfig {
  // [grid]
  int dim = 2;
  std::vector<int> points{128, 128};
  std::vector<double> extent{1.0, 1.0};
  // [model]
  double P = 0.5;
  double A = 0.25;
  double B = 1.0;
  double C = 1.0;
  double sigma_s = 1.0;
  std::string potential = "double_well";
  std::string interpolation = "tanh";
  // [sweep]
  std::vector<double> epsilons;
  double t_end = 0.5;
  double dt_base = 1e-4;
  double c_dt = 1.0;
  int snapshot_stride = 50;
  std::optional<double> local_stabilization;     // "auto" = C3
  std::optional<double> nonlocal_stabilization;  // "auto" = scheme default
  std::string nonlocal_scheme = "implicit";
  double solver_tolerance = 1e-10;
  // [initial]
  CosinePolynomial phi0 = CosinePolynomial::parse("0.2*cos(1,1)");
  CosinePolynomial sigma0 = CosinePolynomial::constant(0.8);
  // [operator]
  std::vector<CosinePolynomial> catalog{CosinePolynomial::parse("cos(1,0)"), CosinePolynomial::parse("cos(1,2)"),
                                        CosinePolynomial::parse("cos(2,0) + cos(0,3)")};
  // [io]
  std::string output = "results";
  std::vector<std::string> formats{"csv", "json"};

  bool operator==(const ExperimentConfig&) const = default;
};

/// Parses and validates (the result always converts to a valid SweepPlan).
ExperimentConfig parse_config(const std::string& text);
ExperimentConfig load_config(const std::filesystem::path& path);
/// Canonical text form; parse_config(serialize_config(c)) == c.
std::string serialize_config(const ExperimentConfig& config);

Grid make_grid(const ExperimentConfig& config);
ModelParams make_params(const ExperimentConfig& config);
SolverConfig make_local_config(const ExperimentConfig& config);
SweepPlan make_plan(const ExperimentConfig& config);

}  // namespace nlocch
