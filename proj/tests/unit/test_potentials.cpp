#include <doctest.h>

#include <cmath>

#include "bosemix/errors.hpp"
#include "bosemix/potentials.hpp"
#include "bosemix/scattering.hpp"
#include "oracles.hpp"

using namespace bosemix;
using nlohmann::json;

TEST_CASE("square well l1 norm and zero potential") {
  auto z = square_well(0.0, 1.0);
  CHECK(z.is_zero());
  CHECK(z.l1_norm() == 0.0);
  auto v = square_well(2.0, 1.0);
  CHECK(v.l1_norm() == doctest::Approx(8 * oracle::kPi / 3).epsilon(1e-15));
  CHECK(v(0.5) == 2.0);
  CHECK(v(1.5) == 0.0);
}

TEST_CASE("descriptor validation") {
  json neg = {{"kind", "tabulated"},
              {"params", {{"r", {0.0, 0.5, 1.0}}, {"v", {1.0, -0.1, 0.0}}}},
              {"support_radius", 1.0}};
  CHECK_THROWS_AS(make_potential(neg), ValidationError);

  json wrong_support = {{"kind", "square_well"},
                        {"params", {{"V0", 1.0}, {"R", 1.0}}},
                        {"support_radius", 2.0}};
  CHECK_THROWS_AS(make_potential(wrong_support), ValidationError);

  json no_support = {{"kind", "square_well"}, {"params", {{"V0", 1.0}, {"R", 1.0}}}};
  CHECK_THROWS_AS(make_potential(no_support), ValidationError);

  json unknown = {{"kind", "gaussian"}, {"params", json::object()}, {"support_radius", 1.0}};
  CHECK_THROWS_AS(make_potential(unknown), ValidationError);
}

TEST_CASE("descriptor round trip is value-identical") {
  json d = {{"kind", "piecewise"},
            {"params", {{"radii", {0.3, 0.7, 1.1}}, {"values", {3.0, 1.5, 0.25}}}},
            {"support_radius", 1.1},
            {"non_increasing", true}};
  auto v = make_potential(d);
  auto w = make_potential(json::parse(to_json(v).dump()));
  CHECK(v == w);
  CHECK(w.declared_non_increasing());

  json bad = d;
  bad["params"]["values"] = {1.0, 2.0, 0.5};
  CHECK_THROWS_AS(make_potential(bad), ValidationError);
}

TEST_CASE("scaled soft potentials") {
  auto unit = square_well(1.0, 1.0);
  auto v = scaled_soft_potential(unit, 2.0, 1.0);
  CHECK(v(1.0) == doctest::Approx(unit(0.5) / 8.0).epsilon(1e-15));
  CHECK(v.support_radius() == 2.0);

  auto zero = scaled_soft_potential(unit, 2.0, 0.0);
  CHECK(zero.is_zero());

  auto wide = scaled_soft_potential(unit, 10.0, 1.0);
  CHECK(wide.l1_norm() == doctest::Approx(4 * oracle::kPi / 3).epsilon(1e-13));
  auto strong = scaled_soft_potential(unit, 3.0, 2.5);
  CHECK(strong.l1_norm() == doctest::Approx(2.5 * unit.l1_norm()).epsilon(1e-13));

  CHECK_THROWS_AS(scaled_soft_potential(unit, 0.0, 1.0), ParameterError);
  CHECK_THROWS_AS(scaled_soft_potential(unit, 1.0, -1.0), ParameterError);
  CHECK_THROWS_AS(scaled_soft_potential(square_well(1.0, 2.0), 1.0, 1.0), ParameterError);
}

TEST_CASE("fourier transform against the closed form") {
  auto v = square_well(2.0, 1.0);
  CHECK(fourier_radial(v, 0.0) == doctest::Approx(v.l1_norm()).epsilon(1e-13));
  for (double k : {1e-6, 0.3, oracle::kPi, 7.5, 40.0, 300.0}) {
    double ref = oracle::square_well_vhat(2.0, 1.0, k);
    CHECK(std::abs(fourier_radial(v, k) - ref) <= 1e-10 * std::max(1.0, std::abs(ref)));
  }
  // Riemann-Lebesgue bound
  for (double k : {10.0, 100.0, 1000.0})
    CHECK(std::abs(fourier_radial(v, k)) <= v.r_moment() / k);
}

TEST_CASE("fourier transform of a tabulated ramp") {
  // v(r) = 1 - r on [0, 1]: int r sin(kr)(1 - r) dr in closed form
  std::vector<double> r = {0.0, 1.0}, vals = {1.0, 0.0};
  auto v = tabulated(r, vals);
  for (double k : {0.5, 3.0, 20.0}) {
    double s = std::sin(k), c = std::cos(k);
    double i1 = (s - k * c) / (k * k);                                   // int r sin
    double i2 = (2 * k * s + (2 - k * k) * c - 2) / (k * k * k);         // int r^2 sin
    double ref = 4 * oracle::kPi / k * (i1 - i2);
    CHECK(fourier_radial(v, k) == doctest::Approx(ref).epsilon(1e-11));
  }
}

TEST_CASE("assumption report") {
  auto v = square_well(2.0, 1.0);
  auto s = std::make_shared<ScatteringSolution>(solve_scattering(v));
  PotentialTriple same{v, v, v};
  auto rep = validate_assumptions(same, *s, *s, *s, 1e-6, 0.5);
  CHECK(rep.miscibility_ok);
  CHECK(std::abs(rep.miscibility_margin) < 1e-15);

  auto zero = square_well(0.0, 1.0);
  auto sz = solve_scattering(zero);
  PotentialTriple tri{v, v, zero};
  rep = validate_assumptions(tri, *s, *s, sz, 1e-6, 0.5);
  CHECK(rep.miscibility_ok);
  CHECK(rep.delta_ab == 0.0);
  CHECK(rep.soft_ab);

  // mismatched solution
  CHECK_THROWS_AS(validate_assumptions(tri, sz, *s, sz, 1e-6, 0.5), ConsistencyError);
}

TEST_CASE("weak potentials are soft and delta follows the Born term") {
  auto base = square_well(1.0, 1.0);
  const double lam = 1e-4;  // delta / a ~ 5 lam must sit below (rho a^3)^0.5
  auto v = scaled_soft_potential(base, 1.0, lam);
  auto s = solve_scattering(v);
  PotentialTriple tri{v, v, v};
  const double rho = 1e-6 / std::pow(s.a(), 3);  // rho a_bar^3 = 1e-6
  auto rep = validate_assumptions(tri, s, s, s, rho, 0.5);
  CHECK(rep.soft_ab);
  double born2 = born_series(v, 2) - born_series(v, 1);
  CHECK(rep.delta_ab == doctest::Approx(std::abs(born2)).epsilon(5e-3));
}
