#include <doctest.h>

#include <cmath>

#include "nlocch/physics.hpp"
#include "oracles.hpp"

using namespace nlocch;

TEST_CASE("double well derivatives by finite differences") {
  const PotentialSpec psi = double_well();
  CHECK(psi.stabilization_bound == 1.0);
  const double h = 1e-5;
  for (double s = -3.0; s <= 3.0; s += 0.25) {
    CHECK(psi.derivative(s) == doctest::Approx((psi.value(s + h) - psi.value(s - h)) / (2 * h)).epsilon(1e-7));
    CHECK(psi.second_derivative(s) ==
          doctest::Approx((psi.derivative(s + h) - psi.derivative(s - h)) / (2 * h)).epsilon(1e-7));
    CHECK(psi.value(s) >= 0.0);
    CHECK(psi.second_derivative(s) >= -1.0);
    CHECK(psi.value(s) >= std::pow(std::abs(s), 4) / 8 - 1.0);
  }
  CHECK(psi.value(1.0) == 0.0);
  CHECK(psi.value(-1.0) == 0.0);
  CHECK(psi.value(0.0) == 0.25);
}

TEST_CASE("interpolation range and Lipschitz bound") {
  const InterpolationSpec h = smooth_interpolation();
  CHECK(h.value(0.0) == 0.5);
  const double d = 1e-6;
  double max_slope = 0.0;
  for (double s = -5.0; s <= 5.0; s += 0.01) {
    CHECK(h.value(s) >= 0.0);
    CHECK(h.value(s) <= 1.0);
    CHECK(h.derivative(s) == doctest::Approx((h.value(s + d) - h.value(s - d)) / (2 * d)).epsilon(1e-6));
    max_slope = std::max(max_slope, std::abs(h.derivative(s)));
  }
  CHECK(max_slope <= h.lipschitz);
  CHECK(max_slope == doctest::Approx(1.0));
}

TEST_CASE("potential and interpolation validation rejects inadmissible functions") {
  CHECK_THROWS_AS(PotentialSpec::make(
                      "negative", [](double s) { return s * s - 1.0; }, [](double s) { return 2 * s; },
                      [](double) { return 2.0; }, 1.0),
                  std::invalid_argument);
  CHECK_THROWS_AS(PotentialSpec::make(
                      "too concave", [](double s) { return 0.25 * (1 - s * s) * (1 - s * s); },
                      [](double s) { return s * s * s - s; }, [](double s) { return 3 * s * s - 1; }, 0.5),
                  std::invalid_argument);
  CHECK_THROWS_AS(InterpolationSpec::make(
                      "steep", [](double s) { return 0.5 * (1 + std::tanh(4 * s)); },
                      [](double s) { return 2.0 / (std::cosh(4 * s) * std::cosh(4 * s)); }, 1.0),
                  std::invalid_argument);
  CHECK_THROWS_AS(InterpolationSpec::make(
                      "unbounded", [](double s) { return s; }, [](double) { return 1.0; }, 1.0),
                  std::invalid_argument);
  CHECK_THROWS(potential_by_name("log"));
  CHECK_THROWS(interpolation_by_name("step"));
}

TEST_CASE("model parameter validation") {
  ModelParams p;
  CHECK_NOTHROW(p.validate());
  p.P = -0.1;
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);
  p = ModelParams{};
  p.C = -1.0;
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);
  p = ModelParams{};
  p.sigma_s = 1.5;
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);
  p.sigma_s = SigmaSource{[](double, const Grid& g) { return Field::constant(g, 2.0); }};
  CHECK_THROWS_AS(p.sigma_source(0.0, Grid::uniform(1, 8)), std::invalid_argument);
}

TEST_CASE("reaction terms") {
  const Grid g = Grid::uniform(1, 8);
  ModelParams p;
  const Field phi = oracle::random_field(g, 3);
  const Field sigma = oracle::random_field(g, 4, 0.0, 1.0);
  const Field rp = reaction_phi(p, phi, sigma);
  const Field sigma_s = p.sigma_source(0.0, g);
  const Field rs = reaction_sigma(p, phi, sigma, sigma_s);
  for (Eigen::Index i = 0; i < g.size(); ++i) {
    const double h = 0.5 * (1.0 + std::tanh(2.0 * phi[i]));
    CHECK(rp[i] == doctest::Approx((0.5 * sigma[i] - 0.25) * h).epsilon(1e-14));
    CHECK(rs[i] == doctest::Approx(1.0 * (1.0 - sigma[i]) - sigma[i] * h).epsilon(1e-14));
  }
  // balanced proliferation: P sigma = A switches the phase source off
  const Field rp0 = reaction_phi(p, phi, Field::constant(g, 0.5));
  CHECK(rp0.max_abs() == 0.0);

  // potential energy is the midpoint quadrature of Psi
  const Field one = Field::constant(g, 0.0);
  CHECK(potential_energy(p.potential, one) == doctest::Approx(0.25));
}
