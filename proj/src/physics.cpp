#include "nlocch/physics.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace nlocch {

namespace {

template <class Fn>
void for_each_sample(Fn&& fn) {
  for (int i = 0; i < kSampleCount; ++i) {
    const double s = -kSampleRange + 2.0 * kSampleRange * i / (kSampleCount - 1);
    fn(s);
  }
}

}  // namespace

PotentialSpec PotentialSpec::make(std::string name, ScalarFn value, ScalarFn derivative, ScalarFn second,
                                  double stabilization_bound) {
  if (!(stabilization_bound >= 0.0)) throw std::invalid_argument("potential: C3 must be non-negative");
  for_each_sample([&](double s) {
    const double v = value(s), d = derivative(s), dd = second(s);
    if (!std::isfinite(v) || !std::isfinite(d) || !std::isfinite(dd)) {
      throw std::invalid_argument("potential '" + name + "': non-finite value on the sampled range");
    }
    if (v < 0.0) throw std::invalid_argument("potential '" + name + "': Psi must be non-negative");
    if (dd < -stabilization_bound) {
      std::ostringstream os;
      os << "potential '" << name << "': Psi''(" << s << ") = " << dd << " < -C3";
      throw std::invalid_argument(os.str());
    }
  });
  return PotentialSpec{std::move(name), std::move(value), std::move(derivative), std::move(second),
                       stabilization_bound};
}

InterpolationSpec InterpolationSpec::make(std::string name, ScalarFn value, ScalarFn derivative, double lipschitz) {
  for_each_sample([&](double s) {
    const double v = value(s), d = derivative(s);
    if (!(v >= 0.0 && v <= 1.0)) throw std::invalid_argument("interpolation '" + name + "': h leaves [0, 1]");
    if (!(std::abs(d) <= lipschitz)) throw std::invalid_argument("interpolation '" + name + "': |h'| exceeds L_h");
  });
  return InterpolationSpec{std::move(name), std::move(value), std::move(derivative), lipschitz};
}

PotentialSpec double_well() {
  return PotentialSpec::make(
      "double_well", [](double s) { return 0.25 * (1.0 - s * s) * (1.0 - s * s); },
      [](double s) { return s * s * s - s; }, [](double s) { return 3.0 * s * s - 1.0; }, 1.0);
}

InterpolationSpec smooth_interpolation() {
  return InterpolationSpec::make(
      "tanh", [](double s) { return 0.5 * (1.0 + std::tanh(2.0 * s)); },
      [](double s) {
        const double c = std::cosh(2.0 * s);
        return 1.0 / (c * c);
      },
      1.0);
}

PotentialSpec potential_by_name(const std::string& name) {
  if (name == "double_well") return double_well();
  throw std::invalid_argument("unknown potential '" + name + "'");
}

InterpolationSpec interpolation_by_name(const std::string& name) {
  if (name == "tanh") return smooth_interpolation();
  throw std::invalid_argument("unknown interpolation '" + name + "'");
}

void ModelParams::validate() const {
  const auto check = [](double v, const char* what) {
    if (!(v >= 0.0) || !std::isfinite(v)) {
      throw std::invalid_argument(std::string("model.") + what + " must be a non-negative constant");
    }
  };
  check(P, "P");
  check(A, "A");
  check(B, "B");
  check(C, "C");
  if (const auto* c = std::get_if<double>(&sigma_s)) {
    if (!(*c >= 0.0 && *c <= 1.0)) throw std::invalid_argument("model.sigma_s must lie in [0, 1]");
  }
}

Field ModelParams::sigma_source(double t, const Grid& grid) const {
  if (const auto* c = std::get_if<double>(&sigma_s)) return Field::constant(grid, *c);
  Field f = std::get<1>(sigma_s)(t, grid);
  require_same_grid(grid, f.grid(), "sigma_source");
  if (f.size() && (f.values().minCoeff() < 0.0 || f.values().maxCoeff() > 1.0)) {
    throw std::invalid_argument("sigma_S field leaves [0, 1]");
  }
  return f;
}

Field reaction_phi(const ModelParams& params, const Field& phi, const Field& sigma) {
  require_same_grid(phi.grid(), sigma.grid(), "reaction_phi");
  Field out(phi.grid());
  for (Eigen::Index i = 0; i < out.size(); ++i) {
    out[i] = (params.P * sigma[i] - params.A) * params.interp.value(phi[i]);
  }
  return out;
}

Field reaction_sigma(const ModelParams& params, const Field& phi, const Field& sigma, const Field& sigma_s) {
  require_same_grid(phi.grid(), sigma.grid(), "reaction_sigma");
  require_same_grid(phi.grid(), sigma_s.grid(), "reaction_sigma");
  Field out(phi.grid());
  for (Eigen::Index i = 0; i < out.size(); ++i) {
    out[i] = params.B * (sigma_s[i] - sigma[i]) - params.C * sigma[i] * params.interp.value(phi[i]);
  }
  return out;
}

Field potential_derivative(const PotentialSpec& potential, const Field& phi) {
  return map(phi, [&](double s) { return potential.derivative(s); });
}

double potential_energy(const PotentialSpec& potential, const Field& phi) {
  double sum = 0.0;
  for (Eigen::Index i = 0; i < phi.size(); ++i) sum += potential.value(phi[i]);
  return sum * phi.grid().cell_volume();
}

}  // namespace nlocch
