#include <doctest.h>

#include <cmath>
#include <random>

#include "bosemix/errors.hpp"
#include "bosemix/lhy.hpp"
#include "oracles.hpp"

using namespace bosemix;

TEST_CASE("LHY constant") {
  // 512 sqrt(pi) / 15 and (8 pi)^{5/2} 2 sqrt2 / (15 pi^2), from mpmath
  CHECK(kLhyConstant == 60.499758110908280398);
  double composed = std::pow(8 * oracle::kPi, 2.5) * 2 * std::sqrt(2.0) /
                    (15 * oracle::kPi * oracle::kPi);
  CHECK(composed == doctest::Approx(kLhyConstant).epsilon(1e-14));
}

TEST_CASE("bogoliubov G is cancellation free") {
  CHECK(bogoliubov_g(2.0, 0.0) == 0.0);
  for (double x : {1e-6, 1e-2, 1.0, 1e3, 1e8})
    for (double y : {1e-4, 0.3, 2.0}) {
      double g = bogoliubov_g(x, y);
      CHECK(g >= 0.0);
      if (x < 1e3) CHECK(g == doctest::Approx(oracle::bogoliubov_g_ld(x, y)).epsilon(1e-9));
    }
  // large x: G ~ y^3 / (2 x^2)
  CHECK(bogoliubov_g(1e8, 1.0) == doctest::Approx(0.5e-16).epsilon(1e-6));
  CHECK_THROWS_AS(bogoliubov_g(0.0, 1.0), DomainError);
}

TEST_CASE("main energy") {
  auto p = MixtureParams::constant_coupling(0.3, 0.0, 2.0, 1.0, 1.0);
  CHECK(e_main(p) == doctest::Approx(4 * oracle::kPi * 0.09 * 2.0));
  p = MixtureParams::constant_coupling(0.3, 0.2, 1.5, 1.5, 1.5);
  CHECK(e_main(p) == doctest::Approx(4 * oracle::kPi * 0.25 * 1.5).epsilon(1e-15));
  p = MixtureParams::constant_coupling(0.3, 0.2, 1.5, 2.0, 0.7);
  double ref = 4 * oracle::kPi * (0.09 * 1.5 + 2 * 0.06 * 0.7 + 0.04 * 2.0);
  CHECK(e_main(p) == doctest::Approx(ref).epsilon(1e-15));
}

TEST_CASE("I_AB values and monotonicity") {
  auto p = MixtureParams::constant_coupling(1.0, 0.0, 1.0, 1.0, 0.0);
  CHECK(i_ab(p) == doctest::Approx(kLhyConstant).epsilon(1e-15));
  auto q = MixtureParams::constant_coupling(2.0, 1.0, 1.0, 2.0, 0.0);  // xi = 1
  CHECK(i_ab(q) == doctest::Approx(kLhyConstant * std::pow(2.0, -0.25)).epsilon(1e-14));
  CHECK(std::abs(i_ab_quadrature(std::sqrt(0.5), std::sqrt(0.5)) - 50.874030) < 1e-6);
  double prev = INFINITY;
  for (int i = 0; i <= 10; ++i) {
    auto m = mu_pm(i / 10.0);
    double v = i_ab_from_mu(m.plus, m.minus);
    CHECK(v < prev);
    prev = v;
  }
}

TEST_CASE("I_AB quadrature") {
  CHECK(i_ab_quadrature(1.0, 0.0) == doctest::Approx(kLhyConstant).epsilon(1e-8));
  const double s = 1 / std::sqrt(2.0);
  CHECK(i_ab_quadrature(s, s) == doctest::Approx(kLhyConstant * std::pow(2.0, -0.25)).epsilon(1e-8));
  CHECK_THROWS_AS(i_ab_quadrature(1.0, 1.0), DomainError);
}

TEST_CASE("one-species LHY") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 200; ++i) {
    double rho = std::pow(10.0, -9 + 6 * u(rng)), a = 0.1 + 3 * u(rng);
    auto p = MixtureParams::constant_coupling(rho, 0.0, a, 0.0, 0.0);
    double total = e_main(p) + e_lhy(p);
    CHECK(total == doctest::Approx(oracle::one_species_lhy(rho, a)).epsilon(1e-12));
    CHECK(e_lhy_alternative(p) == doctest::Approx(e_lhy(p)).epsilon(1e-12));
  }
  // equal lengths collapse to the one-species value at total density
  auto p = MixtureParams::constant_coupling(2e-6, 3e-6, 1.3, 1.3, 1.3);
  CHECK(e_main(p) + e_lhy(p) == doctest::Approx(oracle::one_species_lhy(5e-6, 1.3)).epsilon(1e-12));
}

TEST_CASE("cross-form identity and scaling") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 2000; ++i) {
    double aa = 0.05 + u(rng), ab = 0.05 + u(rng), aab = u(rng) * std::sqrt(aa * ab);
    double ra = u(rng), rb = u(rng);
    auto p = MixtureParams::constant_coupling(ra, rb, aa, ab, aab);
    double e = e_lhy(p);
    CHECK(std::abs(e - e_lhy_alternative(p)) <= 1e-12 * e);
    CHECK(std::abs(e - oracle::lhy_sqrt_form(ra, rb, aa, ab, aab)) <= 1e-12 * e);
    auto q = p.with_densities(4 * ra, 4 * rb);
    CHECK(e_main(q) == doctest::Approx(16 * e_main(p)).epsilon(1e-14));
    CHECK(e_lhy(q) == doctest::Approx(32 * e).epsilon(1e-13));
  }
  auto bad = MixtureParams::constant_coupling(1.0, 1.0, 1.0, 1.0, 2.0);
  CHECK_THROWS_AS(e_lhy(bad), MiscibilityError);
}

TEST_CASE("one-species limit is continuous") {
  const double rho = 1e-6, a = 1.0;
  double ref = oracle::one_species_lhy(rho, a) - 4 * oracle::kPi * rho * rho * a;
  double prev = INFINITY;
  for (double eps : {1e-2, 1e-3, 1e-4, 1e-5}) {
    auto p = MixtureParams::constant_coupling(rho, eps * rho, a, eps, eps * eps);
    double d = std::abs(e_lhy(p) - ref) / ref;
    CHECK((d < prev || d < 1e-12));  // monotone until roundoff
    CHECK(d < 10 * eps);
    prev = d;
  }
}

TEST_CASE("energy breakdown") {
  auto p = MixtureParams::constant_coupling(1e-6, 2e-6, 1.0, 0.8, 0.5);
  auto e = energy_breakdown(p, 1.0, 0.0);
  CHECK(e.form_residual < 1e-12);
  CHECK(e.error_budget == doctest::Approx(std::pow(3e-6, 2.5)));
  auto j = to_json(e);
  CHECK(j.at("xi").get<double>() == e.xi);
}
