#pragma once

#include <functional>
#include <string>
#include <variant>

#include "nlocch/field.hpp"

namespace nlocch {

using ScalarFn = std::function<double(double)>;

/// Potential Psi with its first two derivatives and the bound Psi'' >= -C3.
struct PotentialSpec {
  std::string name;
  ScalarFn value;
  ScalarFn derivative;
  ScalarFn second_derivative;
  double stabilization_bound = 0.0;  // C3

  /// Rejects (std::invalid_argument) specs that are negative, non-finite or
  /// violate Psi'' >= -C3 on 10^4 samples of [-10, 10].
  static PotentialSpec make(std::string name, ScalarFn value, ScalarFn derivative, ScalarFn second,
                            double stabilization_bound);
};

/// Interpolation h : R -> [0, 1] with derivative and Lipschitz constant.
struct InterpolationSpec {
  std::string name;
  ScalarFn value;
  ScalarFn derivative;
  double lipschitz = 0.0;

  static InterpolationSpec make(std::string name, ScalarFn value, ScalarFn derivative, double lipschitz);
};

/// Psi(s) = (1 - s^2)^2 / 4, C3 = 1.
PotentialSpec double_well();
/// h(s) = (1 + tanh(2 s)) / 2, L_h = 1.
InterpolationSpec smooth_interpolation();

PotentialSpec potential_by_name(const std::string& name);
InterpolationSpec interpolation_by_name(const std::string& name);

/// Sampled range used by every assumption check.
inline constexpr double kSampleRange = 10.0;
inline constexpr int kSampleCount = 10000;

/// Nutrient reservoir sigma_S: a constant in [0, 1] or a time-dependent field.
using SigmaSource = std::variant<double, std::function<Field(double, const Grid&)>>;

struct ModelParams {
  double P = 0.5;  // proliferation
  double A = 0.25;  // apoptosis
  double B = 1.0;  // nutrient supply
  double C = 1.0;  // nutrient consumption
  SigmaSource sigma_s = 1.0;
  PotentialSpec potential = double_well();
  InterpolationSpec interp = smooth_interpolation();

  /// Sign and range gates of the rate constants; throws std::invalid_argument.
  void validate() const;
  /// sigma_S at time t, range-checked to [0, 1].
  Field sigma_source(double t, const Grid& grid) const;
};

/// (P sigma - A) h(phi), nodewise.
Field reaction_phi(const ModelParams& params, const Field& phi, const Field& sigma);
/// B (sigma_S - sigma) - C sigma h(phi), nodewise.
Field reaction_sigma(const ModelParams& params, const Field& phi, const Field& sigma, const Field& sigma_s);

/// Psi'(phi) nodewise.
Field potential_derivative(const PotentialSpec& potential, const Field& phi);
/// integral of Psi(phi) by the midpoint rule.
double potential_energy(const PotentialSpec& potential, const Field& phi);

}  // namespace nlocch
