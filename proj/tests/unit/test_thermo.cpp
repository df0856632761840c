#include <doctest.h>

#include <cmath>
#include <random>

#include "bosemix/errors.hpp"
#include "bosemix/lhy.hpp"
#include "bosemix/thermo.hpp"
#include "oracles.hpp"

using namespace bosemix;

namespace {

GrandFunctionalParams regime(double aa = 1.0, double ab = 0.7, double aab = 0.5) {
  GrandFunctionalParams gp;
  gp.volume = 1e12;
  gp.rho = 1e-8;
  gp.a_bar = 1.0;
  gp.a_a = aa;
  gp.a_b = ab;
  gp.a_ab = aab;
  gp.k_z = 10.0;
  return gp;
}

// F written out term by term.
double f_direct(double ra, double rb, const GrandFunctionalParams& gp) {
  double kappa = 8 * oracle::kPi * gp.a_bar / gp.volume * std::pow(gp.rho, 0.25);
  double g = ra * ra * gp.a_a * gp.a_a + 2 * ra * rb * gp.a_ab * gp.a_ab +
             rb * rb * gp.a_b * gp.a_b;
  double xi = 2 * ra * rb * (gp.a_a * gp.a_b - gp.a_ab * gp.a_ab) / g;
  double mp = 0.5 * (std::sqrt(1 + xi) + std::sqrt(1 - xi));
  double mm = 0.5 * (std::sqrt(1 + xi) - std::sqrt(1 - xi));
  double i = 512 * std::sqrt(oracle::kPi) / 15 * (std::pow(mp, 2.5) + std::pow(mm, 2.5));
  return kappa * (ra * ra + rb * rb) + std::pow(gp.volume, -1.5) * std::pow(g, 1.25) * i -
         gp.mu_a * ra - gp.mu_b * rb;
}

}  // namespace

TEST_CASE("functional values") {
  auto gp = regime();
  CHECK(grand_functional(0.0, 0.0, gp) == 0.0);
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  gp.mu_a = 1e-9;
  gp.mu_b = 2e-9;
  for (int i = 0; i < 100; ++i) {
    double ra = 1e5 * u(rng), rb = 1e5 * u(rng);
    CHECK(grand_functional(ra, rb, gp) == doctest::Approx(f_direct(ra, rb, gp)).epsilon(1e-10));
  }
  CHECK_THROWS_AS(grand_functional(-1.0, 0.0, gp), DomainError);
  auto bad = regime(1.0, 1.0, 2.0);
  CHECK_THROWS_AS(grand_functional(1.0, 1.0, bad), MiscibilityError);
}

TEST_CASE("h of xi is smooth across the series switch") {
  for (double xi : {0.0, 0.2, 0.49999, 0.5, 0.8, 0.999, 1.0}) {
    auto t = h_of_xi(xi);
    auto mu = mu_pm(xi);
    CHECK(t.h == doctest::Approx(std::pow(mu.plus, 2.5) + std::pow(mu.minus, 2.5)).epsilon(1e-14));
  }
  for (double xi : {0.1, 0.3, 0.6, 0.9}) {
    auto h = [](double x) { return h_of_xi(x).h; };
    auto dh = [](double x) { return h_of_xi(x).dh; };
    CHECK(h_of_xi(xi).dh == doctest::Approx(oracle::derivative(h, xi, 1e-3)).epsilon(1e-8));
    CHECK(h_of_xi(xi).d2h == doctest::Approx(oracle::derivative(dh, xi, 1e-3)).epsilon(1e-7));
  }
  auto a = h_of_xi(0.5 - 1e-12), b = h_of_xi(0.5);
  CHECK(a.dh == doctest::Approx(b.dh).epsilon(1e-10));
  CHECK(a.d2h == doctest::Approx(b.d2h).epsilon(1e-9));
  CHECK(std::isfinite(h_of_xi(1.0).d2h));
}

TEST_CASE("derivatives match finite differences") {
  auto gp = regime();
  gp.mu_a = 3e-9;
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> u(0.01, 1.0);
  for (int i = 0; i < 1000; ++i) {
    double ra = 1e5 * u(rng), rb = 1e5 * u(rng);
    auto c = finite_difference_check(ra, rb, gp);
    CHECK(c.grad_rel < 1e-6);
    CHECK(c.hess_rel < 1e-6);
  }
}

TEST_CASE("boundary ray and special cases") {
  auto gp = regime();
  // r_B = 0: interior finite differences approach the boundary gradient
  const double ra = 5e4;
  auto g0 = grad_F(ra, 0.0, gp).value;
  auto f = [&](double rb) { return grand_functional(ra, rb, gp); };
  double one_sided = (-3 * f(0.0) + 4 * f(1e-2) - f(2e-2)) / 2e-2;
  CHECK(g0(1) == doctest::Approx(one_sided).epsilon(1e-6));

  // a_AB^2 = a_A a_B: I is constant, Hessian of the I term is that of G^{5/4}
  auto flat = regime(1.0, 0.64, 0.8);
  const double rb = 2e4;
  Mat2 h = hessian_lhy_term(ra, rb, flat);
  double g = ra * ra + 2 * ra * rb * 0.64 + rb * rb * 0.4096;
  Vec2 dg(2 * (ra + rb * 0.64), 2 * (rb * 0.4096 + ra * 0.64));
  Mat2 d2g;
  d2g << 2, 2 * 0.64, 2 * 0.64, 2 * 0.4096;
  Mat2 ref = kLhyConstant * std::pow(1e12, -1.5) *
             ((5.0 / 16) * std::pow(g, -0.75) * dg * dg.transpose() + 1.25 * std::pow(g, 0.25) * d2g);
  CHECK((h - ref).norm() <= 1e-12 * ref.norm());

  // convexifier only
  auto free = regime(0.0, 0.0, 0.0);
  auto hf = hessian_F(3.0, 4.0, free);
  double expect = 16 * oracle::kPi / 1e12 * std::pow(1e-8, 0.25);
  CHECK(hf.value(0, 0) == doctest::Approx(expect).epsilon(1e-14));
  CHECK(hf.value(1, 1) == doctest::Approx(expect).epsilon(1e-14));
  CHECK(hf.value(0, 1) == 0.0);
  CHECK(hf.on_g_zero);
  CHECK(grad_F(0.0, 0.0, gp).on_g_zero);
}

TEST_CASE("chemical potentials pin the minimum") {
  auto gp = regime();
  auto z = chemical_potentials_for(0.0, 0.0, gp);
  CHECK(z.mu_a == 0.0);
  CHECK(z.mu_b == 0.0);

  auto sym = regime(0.9, 0.9, 0.4);
  auto s = chemical_potentials_for(3e4, 3e4, sym);
  CHECK(s.mu_a == doctest::Approx(s.mu_b).epsilon(1e-14));

  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(0.05, 0.5);
  for (int i = 0; i < 20; ++i) {
    double n = 1e5 * u(rng), m = 1e5 * u(rng);
    auto mu = chemical_potentials_for(n, m, gp);
    CHECK(mu.warning.empty());
    auto q = gp;
    q.mu_a = mu.mu_a;
    q.mu_b = mu.mu_b;
    CHECK(grad_F(n, m, q).value.norm() <= 1e-12 * (mu.mu_a + mu.mu_b));
    double f0 = grand_functional(n, m, q);
    const double d = 0.01 * std::min(n, m);
    for (int x = -2; x <= 2; ++x)
      for (int y = -2; y <= 2; ++y)
        CHECK(grand_functional(n + x * d, m + y * d, q) >= f0 - 1e-15 * std::abs(f0));
  }
  auto tight = gp;
  tight.ell = 1e10;
  CHECK_FALSE(chemical_potentials_for(5e4, 5e4, tight).warning.empty());
}

TEST_CASE("convexity scans") {
  auto gp = regime();
  auto rep = convexity_scan(gp, 50);
  CHECK(rep.pass);
  // the one-species estimate sets the scale; mixing moves it by O(1)
  CHECK(rep.dominance_measured > 1.0);
  CHECK(rep.dominance_measured > 0.5 * rep.dominance_estimate);
  CHECK(rep.dominance_measured < 2 * rep.dominance_estimate);
  auto dilute = gp;
  dilute.rho = 1e-12;
  CHECK(convexity_scan(dilute, 50).dominance_measured ==
        doctest::Approx(10 * rep.dominance_measured).epsilon(1e-6));
  CHECK_THROWS_AS(convexity_scan(gp, 0), ParameterError);

  auto same = regime(1.0, 1.0, 1.0);
  CHECK(convexity_scan(same, 20).pass);

  // without the convexifier the scan reports whatever the I term gives
  auto raw = gp;
  raw.convexifier = false;
  auto r2 = convexity_scan(raw, 20);
  CHECK(std::isfinite(r2.min_eigenvalue));
  MESSAGE("min eigenvalue without convexifier: " << r2.min_eigenvalue);
}

TEST_CASE("swap symmetry") {
  auto gp = regime(1.0, 0.6, 0.3);
  gp.mu_a = 1e-9;
  gp.mu_b = 4e-9;
  auto sw = gp;
  std::swap(sw.a_a, sw.a_b);
  std::swap(sw.mu_a, sw.mu_b);
  for (double ra : {1e3, 4e4})
    for (double rb : {2e3, 7e4})
      CHECK(grand_functional(ra, rb, gp) ==
            doctest::Approx(grand_functional(rb, ra, sw)).epsilon(1e-13));
}

TEST_CASE("phase scan") {
  std::vector<double> g = {0.0, 1e-6, 2e-6};
  auto t = phase_scan(g, g, 1.0, 1.0, 0.5, 1.0, 0.0);
  CHECK(t.size() == 9);
  const auto& rows = t.rows();
  // rho_B = 0 row: classical LHY
  for (const auto& r : rows) {
    double ra = std::get<double>(r[0]), rb = std::get<double>(r[1]);
    if (rb == 0.0 && ra > 0) {
      double lhy = std::get<double>(r[3]);
      CHECK(std::get<double>(r[2]) + lhy == doctest::Approx(oracle::one_species_lhy(ra, 1.0)).epsilon(1e-12));
    }
  }
  // swap symmetry of the table
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j)
      CHECK(std::get<double>(rows[i * 3 + j][3]) ==
            doctest::Approx(std::get<double>(rows[j * 3 + i][3])).epsilon(1e-14));
  auto bad = phase_scan({1e-6}, {1e-6}, 1.0, 1.0, 2.0, 1.0, 0.0);
  CHECK_FALSE(std::get<bool>(bad.rows()[0][7]));
  CHECK(std::isnan(std::get<double>(bad.rows()[0][3])));
}
