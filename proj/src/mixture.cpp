#include "bosemix/mixture.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "bosemix/errors.hpp"
#include "bosemix/scattering.hpp"

namespace bosemix {

constexpr double kPi = std::numbers::pi;

Coupling Coupling::constant(double value) {
  Coupling c;
  c.value_ = value;
  return c;
}

Coupling Coupling::from_solution(std::shared_ptr<const ScatteringSolution> sol) {
  Coupling c;
  c.sol_ = std::move(sol);
  c.value_ = c.sol_->g_hat(0.0);
  const ScatteringSolution* s = c.sol_.get();
  double at0 = c.value_;
  c.f_ = [s, at0](double k) { return k == 0.0 ? at0 : s->g_hat(k); };
  return c;
}

MixtureParams MixtureParams::constant_coupling(double rho_a, double rho_b,
                                               double a_a, double a_b,
                                               double a_ab) {
  MixtureParams p;
  p.rho_a = rho_a;
  p.rho_b = rho_b;
  p.a_a = a_a;
  p.a_b = a_b;
  p.a_ab = a_ab;
  p.g_a = Coupling::constant(8 * kPi * a_a);
  p.g_b = Coupling::constant(8 * kPi * a_b);
  p.g_ab = Coupling::constant(8 * kPi * a_ab);
  return p;
}

MixtureParams MixtureParams::with_densities(double ra, double rb) const {
  MixtureParams p = *this;
  p.rho_a = ra;
  p.rho_b = rb;
  return p;
}

double MixtureParams::a_bar() const { return std::max({a_a, a_b, a_ab}); }
double MixtureParams::a_under() const { return std::min({a_a, a_b, a_ab}); }

Mat2 coupling_matrix(const MixtureParams& p, double k) {
  if (!(k >= 0.0)) throw DomainError("coupling_matrix needs k >= 0");
  double off = std::sqrt(p.rho_a * p.rho_b) * p.g_ab(k);
  Mat2 b;
  b << p.rho_a * p.g_a(k), off, off, p.rho_b * p.g_b(k);
  return b;
}

LambdaPair lambda_pm(const Mat2& b) {
  double b11 = b(0, 0), b22 = b(1, 1), b12 = b(0, 1);
  // The textbook radicand, kept only to catch inconsistent input.
  double scale = b11 * b11 + b22 * b22 + 2 * b12 * b12;
  double raw = b11 * b11 + b22 * b22 + 2 * (2 * b12 * b12 - b11 * b22);
  if (raw < -1e-14 * std::max(scale, 1e-300))
    throw ConsistencyError("negative eigenvalue radicand " + std::to_string(raw));
  double diff = b11 - b22;
  double root = std::hypot(diff, 2 * b12);
  double tr = b11 + b22;
  double det = b11 * b22 - b12 * b12;
  LambdaPair l;
  if (tr >= 0) {
    l.plus = 0.5 * (tr + root);
    l.minus = l.plus != 0.0 ? det / l.plus : 0.0;
  } else {
    l.minus = 0.5 * (tr - root);
    l.plus = det / l.minus;
  }
  return l;
}

LambdaPair lambda_pm(const MixtureParams& p, double k) {
  return lambda_pm(coupling_matrix(p, k));
}

Mat2 rotation_for(const Mat2& b) {
  double b11 = b(0, 0), b22 = b(1, 1), b12 = b(0, 1);
  Mat2 u;
  if (b12 == 0.0) {
    if (b11 >= b22)
      u.setIdentity();
    else
      u << 0, 1, 1, 0;
    return u;
  }
  double lp = lambda_pm(b).plus;
  Vec2 v1(lp - b22, b12), v2(b12, lp - b11);
  Vec2 v = v1.squaredNorm() >= v2.squaredNorm() ? v1 : v2;
  v.normalize();
  u << v(0), v(1), -v(1), v(0);
  return u;
}

BogoliubovMode diagonalize_mode(const Mat2& b, double k, double tau) {
  if (!(tau > 0.0)) throw DomainError("diagonalize_mode needs tau > 0 (k = " + std::to_string(k) + ")");
  BogoliubovMode m;
  m.k = k;
  m.tau = tau;
  m.b = b;
  auto l = lambda_pm(b);
  m.lambda_plus = l.plus;
  m.lambda_minus = l.minus;
  m.u = rotation_for(b);
  double lam[2] = {l.plus, l.minus};
  for (int i = 0; i < 2; ++i) {
    double disc = tau * tau + 2 * lam[i] * tau;
    if (disc < 0.0)
      throw RegimeError("mode k = " + std::to_string(k) + " has tau^2 + 2 lambda tau < 0");
    double e = std::sqrt(disc);
    double p = tau + lam[i] + e;
    m.d_diag(i) = 0.5 * p;
    m.beta_diag(i) = p > 0.0 ? lam[i] / p : -1.0;
  }
  m.flagged = l.minus < 0.0;
  if (std::abs(m.beta_diag(0)) < 1.0 && std::abs(m.beta_diag(1)) < 1.0) {
    auto mm = explicit_minimizers(m);
    m.alpha = mm.alpha;
    m.gamma = mm.gamma;
  }
  return m;
}

BogoliubovMode diagonalize_mode(const MixtureParams& p, double k, double tau) {
  return diagonalize_mode(coupling_matrix(p, k), k, tau);
}

Minimizers explicit_minimizers(const BogoliubovMode& m) {
  Vec2 ad, gd;
  double lam[2] = {m.lambda_plus, m.lambda_minus};
  for (int i = 0; i < 2; ++i) {
    if (!(std::abs(m.beta_diag(i)) < 1.0))
      throw RegimeError("pairing |beta| >= 1 at k = " + std::to_string(m.k));
    // beta/(1-beta^2) = lambda/(2E), beta^2/(1-beta^2) = lambda^2/(2E P),
    // with E = sqrt(tau^2 + 2 lambda tau) and P = tau + lambda + E.
    double e = std::sqrt(m.tau * m.tau + 2 * lam[i] * m.tau);
    double p = m.tau + lam[i] + e;
    ad(i) = -lam[i] / (2 * e);
    gd(i) = lam[i] * lam[i] / (2 * e * p);
  }
  Minimizers out;
  out.alpha = m.u.transpose() * ad.asDiagonal() * m.u;
  out.gamma = m.u.transpose() * gd.asDiagonal() * m.u;
  out.alpha(1, 0) = out.alpha(0, 1);
  out.gamma(1, 0) = out.gamma(0, 1);
  return out;
}

double xi_ab(double rho_a, double rho_b, double a_a, double a_b, double a_ab) {
  double den = rho_a * rho_a * a_a * a_a + 2 * rho_a * rho_b * a_ab * a_ab +
               rho_b * rho_b * a_b * a_b;
  if (!(den > 0.0)) throw DomainError("xi_AB undefined: vanishing denominator");
  double xi = 2 * rho_a * rho_b * (a_a * a_b - a_ab * a_ab) / den;
  if (xi < -1e-14 || xi > 1 + 1e-14)
    throw MiscibilityError("xi_AB = " + std::to_string(xi) + " outside [0, 1]");
  return std::clamp(xi, 0.0, 1.0);
}

double xi_ab(const MixtureParams& p) {
  return xi_ab(p.rho_a, p.rho_b, p.a_a, p.a_b, p.a_ab);
}

MuPair mu_pm(double xi) {
  if (xi < -1e-14 || xi > 1 + 1e-14)
    throw MiscibilityError("xi = " + std::to_string(xi) + " outside [0, 1]");
  xi = std::clamp(xi, 0.0, 1.0);
  MuPair m;
  m.plus = 0.5 * (std::sqrt(1 + xi) + std::sqrt(1 - xi));
  m.minus = xi / (2 * m.plus);
  return m;
}

}  // namespace bosemix
