#include <doctest.h>

#include <cmath>
#include <memory>
#include <random>

#include "bosemix/boxsum.hpp"
#include "bosemix/errors.hpp"
#include "bosemix/potentials.hpp"
#include "bosemix/quasifree.hpp"
#include "bosemix/scattering.hpp"
#include "oracles.hpp"

using namespace bosemix;

namespace {

MixtureParams mixture(double ra, double rb) {
  return MixtureParams::constant_coupling(ra, rb, 1.0, 0.8, 0.5);
}

}  // namespace

TEST_CASE("vacuum and explicit states") {
  auto p = mixture(1e-4, 5e-5);
  MomentumLattice lat(LatticeKind::kPeriodic, 60.0, 1.5);
  const double n0a = p.rho_a * lat.volume(), n0b = p.rho_b * lat.volume();
  CHECK(bogoliubov_functional(vacuum_state(lat, n0a, n0b), p) == 0.0);

  auto s = explicit_state(p, lat, n0a, n0b);
  check_admissible(s);
  CHECK(bogoliubov_functional(s, p) == doctest::Approx(sum_S(p, lat)).epsilon(1e-10));

  auto one = mixture(1e-4, 0.0);
  auto s1 = explicit_state(one, lat, 1e-4 * lat.volume(), 0.0);
  CHECK(bogoliubov_functional(s1, one) == doctest::Approx(sum_S(one, lat)).epsilon(1e-10));
}

TEST_CASE("admissibility") {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (int i = 0; i < 500; ++i) {
    std::array<double, 3> s = {u(rng), u(rng), u(rng)};
    auto m = minimizers_from_s(s);
    Mat2 lhs = m.gamma * (m.gamma + Mat2::Identity());
    Mat2 rhs = m.alpha * m.alpha;
    CHECK((lhs - rhs).cwiseAbs().maxCoeff() <= 1e-10 * std::max(1.0, rhs.cwiseAbs().maxCoeff()));
    CHECK(mode_admissible(m.alpha, m.gamma, 1e-10));
  }
  Mat2 a;
  a << 1.0, 0.0, 0.0, 0.0;
  CHECK_FALSE(mode_admissible(a, Mat2::Zero()));
  MomentumLattice lat(LatticeKind::kPeriodic, 10.0, 1.0);
  auto st = vacuum_state(lat, 1.0, 1.0);
  REQUIRE(!st.modes.empty());
  st.modes.back().alpha = a;
  CHECK_THROWS_AS(check_admissible(st), AdmissibilityError);
  CHECK_THROWS_AS(bogoliubov_functional(st, mixture(1e-3, 1e-3)), AdmissibilityError);
}

TEST_CASE("per-mode gradient matches finite differences") {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int i = 0; i < 200; ++i) {
    Mat2 b = oracle::random_sym(rng, 0.0, 1.0);
    b(0, 1) = b(1, 0) = 0.5 * u(rng) * std::sqrt(b(0, 0) * b(1, 1));
    double tau = 0.1 + std::abs(u(rng));
    std::array<double, 3> s = {u(rng), u(rng), u(rng)};
    auto o = mode_objective(s, b, tau);
    for (int j = 0; j < 3; ++j) {
      auto f = [&](double x) {
        auto t = s;
        t[j] = x;
        return mode_objective(t, b, tau).value;
      };
      double fd = oracle::derivative(f, s[j], 1e-3);
      CHECK(std::abs(fd - o.gradient[j]) <= 1e-6 * std::max(1.0, std::abs(fd)));
    }
  }
}

TEST_CASE("per-mode minimization") {
  auto zero = minimize_mode(Mat2::Zero().eval(), 1.0);
  CHECK(zero.value == 0.0);
  CHECK(zero.s[0] == 0.0);

  // one species at k^2 = rho g
  auto p = mixture(1e-3, 0.0);
  const double l = 8 * oracle::kPi * 1e-3;
  const double k = std::sqrt(l);
  auto m = minimize_per_mode(p, k);
  const double x = k * k;
  double g_form = 0.5 * (std::sqrt(x * x + 2 * l * x) - x - l);
  CHECK(m.value == doctest::Approx(g_form).epsilon(1e-8));
  CHECK(m.closed_form == doctest::Approx(g_form).epsilon(1e-12));

  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 100; ++i) {
    auto q = MixtureParams::constant_coupling(1e-3 * u(rng), 1e-3 * u(rng), 0.2 + u(rng),
                                              0.2 + u(rng), 0.1 * u(rng));
    double kk = std::pow(10.0, -2 + 2.5 * u(rng));
    auto num = minimize_per_mode(q, kk);
    auto ex = explicit_minimizers(diagonalize_mode(q, kk, kk * kk));
    CHECK((num.alpha - ex.alpha).cwiseAbs().maxCoeff() <= 1e-6);
    CHECK((num.gamma - ex.gamma).cwiseAbs().maxCoeff() <= 1e-6);
    CHECK(std::abs(num.value - num.closed_form) <= 1e-8 * std::abs(num.closed_form));
  }
  CHECK_THROWS_AS(minimize_per_mode(p, 0.0), DomainError);
}

TEST_CASE("explicit minimizers are not beaten by admissible perturbations") {
  auto p = mixture(1e-3, 7e-4);
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (double k : {0.05, 0.2, 1.0}) {
    Mat2 b = coupling_matrix(p, k);
    auto best = minimize_mode(b, k * k);
    for (int i = 0; i < 20; ++i) {
      auto s = best.s;
      for (auto& x : s) x += 1e-4 * u(rng);
      double f = mode_objective(s, b, k * k).value;
      CHECK(f - best.value >= -1e-10 * std::abs(best.value));
    }
  }
}

TEST_CASE("depletion") {
  auto one = mixture(1e-4, 0.0);
  MomentumLattice lat(LatticeKind::kPeriodic, 300.0);
  auto d = depletion(one, lat);
  CHECK(d.aa > 0.0);
  CHECK(d.bb == 0.0);
  CHECK(d.ab == 0.0);

  // k^-4 tail: doubling the shell region barely moves the sum
  auto p = MixtureParams::constant_coupling(1e-6, 0.0, 1.0, 1.0, 0.0);
  MomentumLattice a(LatticeKind::kPeriodic, 1000.0, 0.6);
  MomentumLattice b(LatticeKind::kPeriodic, 1000.0, 1.2);
  double da = depletion(p, a).aa, db = depletion(p, b).aa;
  CHECK(std::abs(da - db) / db < 0.01);

  // finite shell region: lattice_sum and direct enumeration agree
  MomentumLattice small(LatticeKind::kPeriodic, 100.0, 1.0);
  auto st = explicit_state(one, small, one.rho_a * small.volume(), 0.0);
  double direct = st.gamma_sum()(0, 0);
  double h = small.spacing();
  auto n_max = static_cast<std::int64_t>(std::floor(std::pow(1.0 / h, 2) * (1 + 1e-14)));
  double brute = oracle::brute_lattice_sum(h, n_max, [&](double k) {
    return diagonalize_mode(one, k, k * k).gamma(0, 0);
  });
  CHECK(direct == doctest::Approx(brute).epsilon(1e-12));
}

TEST_CASE("condensate fixed point") {
  auto p = mixture(1e-3, 5e-4);
  MomentumLattice lat(LatticeKind::kPeriodic, 40.0, 1.0);
  auto s = fix_condensate(p, lat);
  Mat2 g = s.gamma_sum();
  const double na = p.rho_a * lat.volume(), nb = p.rho_b * lat.volume();
  CHECK(std::abs(s.n0_a + g(0, 0) - na) <= 1e-9 * (na + nb));
  CHECK(std::abs(s.n0_b + g(1, 1) - nb) <= 1e-9 * (na + nb));
  CHECK(s.n0_a < na);
}

TEST_CASE("upper bound bookkeeping") {
  const double V0 = 2.0, R = 1.0;
  auto sa = std::make_shared<ScatteringSolution>(solve_scattering(square_well(V0, R)));
  auto sb = std::make_shared<ScatteringSolution>(solve_scattering(square_well(1.0, R)));
  auto sab = std::make_shared<ScatteringSolution>(solve_scattering(square_well(0.5, R)));
  MixtureParams p;
  p.rho_a = 1e-4;
  p.rho_b = 6e-5;
  p.a_a = sa->a();
  p.a_b = sb->a();
  p.a_ab = sab->a();
  p.g_a = Coupling::from_solution(sa);
  p.g_b = Coupling::from_solution(sb);
  p.g_ab = Coupling::from_solution(sab);
  std::array<const ScatteringSolution*, 3> sols = {sa.get(), sb.get(), sab.get()};

  MomentumLattice lat(LatticeKind::kPeriodic, 60.0, 0.7);
  auto st = fix_condensate(p, lat);
  auto f = upper_bound_energy(st, p, sols);
  double parts = 0;
  for (const auto& [name, v] : f.terms) parts += v;
  CHECK(parts == doctest::Approx(f.total).epsilon(1e-12));
  CHECK(f.identity_residual < 1e-12);

  // K_bog of the explicit state is the finite S sum at the condensate densities
  auto p0 = p.with_densities(st.rho0_a(), st.rho0_b());
  CHECK(f.get("K_bog") == doctest::Approx(sum_S(p0, lat)).epsilon(1e-9));

  // quartic gamma form against an independent double loop with the closed-form v-hat
  double h = lat.spacing();
  int m = static_cast<int>(std::floor(0.7 / h));
  std::vector<std::array<double, 4>> pts;  // x, y, z, gamma_AA
  for (int x = -m; x <= m; ++x)
    for (int y = -m; y <= m; ++y)
      for (int z = -m; z <= m; ++z) {
        double k = h * std::sqrt(double(x * x + y * y + z * z));
        if (k == 0 || k > 0.7 * (1 + 1e-14)) continue;
        pts.push_back({double(x), double(y), double(z),
                       diagonalize_mode(p0, k, k * k).gamma(0, 0)});
      }
  long double acc = 0;
  for (const auto& a : pts)
    for (const auto& b : pts) {
      double dk = h * std::sqrt(std::pow(a[0] - b[0], 2) + std::pow(a[1] - b[1], 2) +
                                std::pow(a[2] - b[2], 2));
      acc += oracle::square_well_vhat(V0, R, dk) * a[3] * b[3];
    }
  double ref = static_cast<double>(acc) / (2 * lat.volume());
  CHECK(f.get("D_gamma_A") == doctest::Approx(ref).epsilon(1e-9));

  // vacuum: no kinetic, pairing or density-matrix terms
  auto vac = vacuum_state(lat, p.rho_a * lat.volume(), p.rho_b * lat.volume());
  auto fv = upper_bound_energy(vac, p, sols);
  for (const char* name : {"kinetic", "L2gamma_g", "L2alpha_g", "L2gamma_vomega", "D_gamma_A",
                           "D_gamma_B", "D_gamma_AB", "condensate_shift"})
    CHECK(fv.get(name) == 0.0);
  CHECK(fv.get("L0_g") > 0.0);
  CHECK(fv.get("L0_gomega") > 0.0);

  auto neu = vacuum_state(MomentumLattice(LatticeKind::kNeumann, 10.0, 1.0), 1.0, 1.0);
  CHECK_THROWS_AS(upper_bound_energy(neu, p, sols), ParameterError);
  auto j = to_json(f);
  CHECK(j.contains("E_tilde"));
}

TEST_CASE("fixed point rejects depletion beyond the particle number") {
  auto p = MixtureParams::constant_coupling(1e-1, 0.0, 5.0, 1.0, 0.0);
  MomentumLattice lat(LatticeKind::kPeriodic, 3.0, 40.0);
  CHECK_THROWS_AS(fix_condensate(p, lat), RegimeError);
}
