#pragma once

#include <string>
#include <vector>

#include "nlocch/config.hpp"

namespace nlocch {

/// One constructive, sampled check of a modelling assumption.
struct AssumptionCheck {
  std::string name;
  std::string assumption;  // e.g. "mollifier", "potential"
  double value = 0.0;
  std::string relation;  // "<=" or ">="
  double threshold = 0.0;
  bool passed = false;
};

/// Growth constants checked for the built-in double well: Psi(s) >= C1 s^4 - C2.
inline constexpr double kGrowthC1 = 1.0 / 8.0;
inline constexpr double kGrowthC2 = 1.0;
inline constexpr double kMomentTolerance = 1e-8;

/// Moment condition for n = 1, 2, 3, profile shape, potential and
/// interpolation bounds, rate-constant signs and kernel coercivity for the
/// configured sweep.
std::vector<AssumptionCheck> verify_assumptions(const ExperimentConfig& config);

bool all_passed(const std::vector<AssumptionCheck>& checks);

}  // namespace nlocch
