#include "bosemix/lhy.hpp"

#include <cmath>
#include <numbers>

#include "bosemix/errors.hpp"
#include "bosemix/quadrature.hpp"

namespace bosemix {

constexpr double kPi = std::numbers::pi;

double bogoliubov_g(double x, double y) {
  if (!(x > 0.0)) throw DomainError("G(x, y) needs x > 0");
  if (y < -0.5 * x) throw DomainError("G(x, y) needs y >= -x/2");
  if (y == 0.0) return 0.0;
  // With t = y/x and s = sqrt(1 + 2t): G = x t^3 (s + 3) / (s + 1)^3.
  double t = y / x;
  double s = std::sqrt(1.0 + 2.0 * t);
  double sp = s + 1.0;
  return x * t * t * t * (s + 3.0) / (sp * sp * sp);
}

double e_main(const MixtureParams& p) {
  return 4 * kPi *
         (p.rho_a * p.rho_a * p.a_a + 2 * p.rho_a * p.rho_b * p.a_ab +
          p.rho_b * p.rho_b * p.a_b);
}

double i_ab_from_mu(double mu_plus, double mu_minus) {
  return kLhyConstant * (std::pow(mu_plus, 2.5) + std::pow(mu_minus, 2.5));
}

double i_ab(const MixtureParams& p) {
  auto mu = mu_pm(xi_ab(p));
  return i_ab_from_mu(mu.plus, mu.minus);
}

namespace {

// int_0^inf k^2 G(k^2, mu) dk; the closed form is (8 sqrt2 / 15) mu^{5/2}.
double radial_lhy_integral(double mu) {
  if (mu == 0.0) return 0.0;
  const double cutoff = 1e3 * std::max(1.0, mu);
  auto f = [mu](double k) {
    if (k == 0.0) return 0.5 * mu * mu;
    return k * k * bogoliubov_g(k * k, mu);
  };
  std::vector<double> pts = {0.0};
  double scale = std::sqrt(mu);
  for (double x : {0.05, 0.2, 0.5, 1.0, 2.0, 5.0, 10.0, 30.0, 100.0, 300.0})
    if (x * scale < cutoff) pts.push_back(x * scale);
  pts.push_back(cutoff);
  QuadratureTolerance tol{1e-15, 1e-13, 50};
  auto body = integrate_pieces(f, pts, tol);
  if (!body.converged)
    throw NumericalError("I_AB quadrature did not converge; error estimate " +
                         std::to_string(body.error));
  // Tail: k^2 G(k^2, mu) = k^4 sum_{n>=3} c_n (mu/k^2)^n with
  // c_n = binom(1/2, n) 2^n; integrate term by term.
  double tail = 0.0;
  double binom = 1.0;  // binom(1/2, n)
  for (int n = 1; n <= 60; ++n) {
    binom *= (0.5 - (n - 1)) / n;
    if (n < 3) continue;
    double term = binom * std::pow(2.0 * mu, n) *
                  std::pow(cutoff, 5.0 - 2.0 * n) / (2.0 * n - 5.0);
    tail += term;
    if (std::abs(term) < 1e-18 * std::abs(body.value)) break;
  }
  return body.value + tail;
}

}  // namespace

double i_ab_quadrature(double mu_plus, double mu_minus) {
  if (mu_plus < 0 || mu_minus < 0) throw DomainError("mu must be nonnegative");
  if (std::abs(mu_plus * mu_plus + mu_minus * mu_minus - 1.0) > 1e-10)
    throw DomainError("mu+^2 + mu-^2 must equal 1");
  // (8 pi)^{5/2} / (2 (2 pi)^3) * 4 pi * radial integral.
  double pref = std::pow(8 * kPi, 2.5) / (2 * std::pow(2 * kPi, 3)) * 4 * kPi;
  return pref * (radial_lhy_integral(mu_plus) + radial_lhy_integral(mu_minus));
}

double e_lhy(const MixtureParams& p) {
  double g = p.rho_a * p.rho_a * p.a_a * p.a_a +
             2 * p.rho_a * p.rho_b * p.a_ab * p.a_ab +
             p.rho_b * p.rho_b * p.a_b * p.a_b;
  if (g == 0.0) return 0.0;
  return std::pow(g, 1.25) * i_ab(p);
}

double e_lhy_alternative(const MixtureParams& p) {
  double x = p.rho_a * p.a_a, y = p.rho_b * p.a_b;
  double rad = (x - y) * (x - y) + 4 * p.rho_a * p.rho_b * p.a_ab * p.a_ab;
  if (rad < 0.0) throw ConsistencyError("negative radicand in LHY form");
  double root = std::sqrt(rad);
  double plus = x + y + root;
  double minus = x + y - root;
  // Stable small root: (x + y)^2 - rad = 4 rho_A rho_B (a_A a_B - a_AB^2).
  if (plus > 0.0) minus = 4 * p.rho_a * p.rho_b * (p.a_a * p.a_b - p.a_ab * p.a_ab) / plus;
  if (minus < 0.0) {
    if (minus < -1e-14 * plus)
      throw MiscibilityError("a_AB^2 > a_A a_B: LHY form undefined");
    minus = 0.0;
  }
  double pref = 4 * kPi * 16 * std::sqrt(2.0) / (15 * std::sqrt(kPi));
  return pref * (std::pow(plus, 2.5) + std::pow(minus, 2.5));
}

double error_budget(const MixtureParams& p, double c, double eta) {
  double ab = p.a_bar();
  return c * std::pow(p.rho() * ab, 2.5) * std::pow(p.rho() * ab * ab * ab, eta);
}

EnergyBreakdown energy_breakdown(const MixtureParams& p, double c, double eta) {
  EnergyBreakdown e;
  e.e_main = e_main(p);
  e.error_budget = error_budget(p, c, eta);
  double g = p.rho_a * p.rho_a * p.a_a * p.a_a +
             2 * p.rho_a * p.rho_b * p.a_ab * p.a_ab +
             p.rho_b * p.rho_b * p.a_b * p.a_b;
  if (g > 0.0) {
    e.xi = xi_ab(p);
    auto mu = mu_pm(e.xi);
    e.mu_plus = mu.plus;
    e.mu_minus = mu.minus;
    e.i_ab = i_ab_from_mu(mu.plus, mu.minus);
  } else {
    e.mu_plus = 1.0;
    e.i_ab = kLhyConstant;
  }
  e.e_lhy = e_lhy(p);
  e.e_lhy_alternative = e_lhy_alternative(p);
  e.form_residual =
      e.e_lhy > 0 ? std::abs(e.e_lhy - e.e_lhy_alternative) / e.e_lhy : 0.0;
  return e;
}

nlohmann::json to_json(const EnergyBreakdown& e) {
  return {{"e_main", e.e_main},
          {"e_lhy", e.e_lhy},
          {"e_lhy_alternative", e.e_lhy_alternative},
          {"i_ab", e.i_ab},
          {"xi", e.xi},
          {"mu_plus", e.mu_plus},
          {"mu_minus", e.mu_minus},
          {"error_budget", e.error_budget},
          {"form_residual", e.form_residual}};
}

}  // namespace bosemix
