#include "bosemix/thermo.hpp"

#include <algorithm>
#include <cmath>
#include <string>


#include "bosemix/boxsum.hpp"
#include "bosemix/errors.hpp"
#include "bosemix/lhy.hpp"
#include "bosemix/parallel.hpp"

namespace bosemix {

namespace {

constexpr double kPi = 3.14159265358979323846;

// Generalized binomial coefficient C(5/2, j).
double binom52(int j) {
  double c = 1.0;
  for (int i = 0; i < j; ++i) c *= (2.5 - i) / (i + 1);
  return c;
}

struct Local {
  double g = 0;
  Vec2 dg = Vec2::Zero();
  Mat2 d2g = Mat2::Zero();
  double xi = 0;
  Vec2 dxi = Vec2::Zero();
  Mat2 d2xi = Mat2::Zero();
};

Local local_terms(double ra, double rb, const GrandFunctionalParams& gp) {
  Local l;
  const double aa2 = gp.a_a * gp.a_a, bb2 = gp.a_b * gp.a_b, ab2 = gp.a_ab * gp.a_ab;
  l.g = ra * ra * aa2 + 2 * ra * rb * ab2 + rb * rb * bb2;
  l.dg << 2 * (ra * aa2 + rb * ab2), 2 * (rb * bb2 + ra * ab2);
  l.d2g << 2 * aa2, 2 * ab2, 2 * ab2, 2 * bb2;
  if (!(l.g > 0)) return l;
  const double d2 = 2 * (gp.a_a * gp.a_b - ab2);
  const double n = ra * rb;
  Vec2 dn(rb, ra);
  Mat2 d2n;
  d2n << 0, 1, 1, 0;
  const double g = l.g;
  l.xi = std::clamp(d2 * n / g, 0.0, 1.0);
  l.dxi = d2 * (dn / g - n * l.dg / (g * g));
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      l.d2xi(i, j) = d2 * (d2n(i, j) / g - (dn(i) * l.dg(j) + dn(j) * l.dg(i)) / (g * g) -
                           n * l.d2g(i, j) / (g * g) +
                           2 * n * l.dg(i) * l.dg(j) / (g * g * g));
  return l;
}

double volume_factor(const GrandFunctionalParams& gp) {
  return kLhyConstant / std::pow(gp.volume, 1.5);
}

}  // namespace

HTerm h_of_xi(double xi) {
  if (xi < 0 || xi > 1) throw MiscibilityError("xi outside [0, 1]");
  HTerm t{};
  if (xi < 0.5) {
    auto mu = mu_pm(xi);
    const double p = std::sqrt(1 + xi), s = std::sqrt(1 - xi);
    const double d1p = 0.25 * (1 / p - 1 / s), d1m = 0.25 * (1 / p + 1 / s);
    const double d2p = -1 / (8 * p * p * p) - 1 / (8 * s * s * s);
    const double d2m = -1 / (8 * p * p * p) + 1 / (8 * s * s * s);
    t.h = std::pow(mu.plus, 2.5) + std::pow(mu.minus, 2.5);
    t.dh = 2.5 * (std::pow(mu.plus, 1.5) * d1p + std::pow(mu.minus, 1.5) * d1m);
    t.d2h = 2.5 * (1.5 * std::sqrt(mu.plus) * d1p * d1p + std::pow(mu.plus, 1.5) * d2p +
                   1.5 * std::sqrt(mu.minus) * d1m * d1m + std::pow(mu.minus, 1.5) * d2m);
    return t;
  }
  // Near xi = 1 the branches of mu+ and mu- have cancelling 1/sqrt(1 - xi)
  // slopes; expand in u = 1 - xi instead.
  const double u = 1 - xi, w = 2 - u;
  double h = 0, dh = 0, d2h = 0;
  for (int m = 0; m < 80; ++m) {
    const double c = binom52(2 * m);
    const double e = 1.25 - m;
    const double um = m == 0 ? 1.0 : std::pow(u, m);
    const double um1 = m >= 1 ? (m == 1 ? 1.0 : std::pow(u, m - 1)) : 0.0;
    const double um2 = m >= 2 ? (m == 2 ? 1.0 : std::pow(u, m - 2)) : 0.0;
    const double we = std::pow(w, e);
    const double t0 = we * um;
    const double t1 = -e * we / w * um + m * we * um1;
    const double t2 = e * (e - 1) * we / (w * w) * um - 2 * e * m * we / w * um1 +
                      m * (m - 1.0) * we * um2;
    h += c * t0;
    dh += c * t1;
    d2h += c * t2;
    if (m > 3 && std::abs(c * t0) < 1e-18 * std::abs(h) &&
        std::abs(c * t2) < 1e-18 * (std::abs(d2h) + 1))
      break;
  }
  const double norm = std::pow(2.0, -1.5);
  // d/dxi = -d/du
  t.h = norm * h;
  t.dh = -norm * dh;
  t.d2h = norm * d2h;
  return t;
}

double GrandFunctionalParams::kappa() const {
  if (rho <= 0) return 0.0;
  return 8 * kPi * a_bar / volume * std::pow(rho * a_bar * a_bar * a_bar, 0.25);
}

double GrandFunctionalParams::ell_or_default() const {
  if (ell > 0) return ell;
  return GapConfig::lower_bound_defaults(rho, a_bar, 0.0, c).ell;
}

void GrandFunctionalParams::validate() const {
  if (!(volume > 0)) throw ParameterError("box volume must be positive");
  if (a_a < 0 || a_b < 0 || a_ab < 0) throw ParameterError("scattering lengths must be >= 0");
  if (a_ab * a_ab > a_a * a_b) throw MiscibilityError("a_AB^2 > a_A a_B");
  if (mu_a < 0 || mu_b < 0) throw ParameterError("chemical potentials must be >= 0");
  if (rho < 0 || !(a_bar > 0)) throw ParameterError("need rho >= 0 and a_bar > 0");
}

double grand_functional(double r_a, double r_b, const GrandFunctionalParams& gp) {
  if (r_a < 0 || r_b < 0) throw DomainError("grand_functional needs r_A, r_B >= 0");
  gp.validate();
  const double conv = gp.convexifier ? gp.kappa() * (r_a * r_a + r_b * r_b) : 0.0;
  auto l = local_terms(r_a, r_b, gp);
  const double lhy = l.g > 0 ? volume_factor(gp) * std::pow(l.g, 1.25) * h_of_xi(l.xi).h : 0.0;
  return conv + lhy - gp.mu_a * r_a - gp.mu_b * r_b;
}

Gradient grad_F(double r_a, double r_b, const GrandFunctionalParams& gp) {
  if (r_a < 0 || r_b < 0) throw DomainError("grad_F needs r_A, r_B >= 0");
  gp.validate();
  Gradient out;
  if (gp.convexifier) out.value = 2 * gp.kappa() * Vec2(r_a, r_b);
  out.value -= Vec2(gp.mu_a, gp.mu_b);
  auto l = local_terms(r_a, r_b, gp);
  if (!(l.g > 0)) {
    out.on_g_zero = true;  // G^{1/4} and G^{5/4} terms vanish in the limit
    return out;
  }
  auto h = h_of_xi(l.xi);
  out.value += volume_factor(gp) *
               (1.25 * std::pow(l.g, 0.25) * h.h * l.dg + std::pow(l.g, 1.25) * h.dh * l.dxi);
  return out;
}

Mat2 hessian_lhy_term(double r_a, double r_b, const GrandFunctionalParams& gp) {
  auto l = local_terms(r_a, r_b, gp);
  if (!(l.g > 0)) return Mat2::Zero();
  auto h = h_of_xi(l.xi);
  const double g = l.g;
  Mat2 m = (5.0 / 16.0) * std::pow(g, -0.75) * h.h * l.dg * l.dg.transpose() +
           1.25 * std::pow(g, 0.25) *
               (h.h * l.d2g + h.dh * (l.dg * l.dxi.transpose() + l.dxi * l.dg.transpose())) +
           std::pow(g, 1.25) * (h.d2h * l.dxi * l.dxi.transpose() + h.dh * l.d2xi);
  m *= volume_factor(gp);
  m(1, 0) = m(0, 1) = 0.5 * (m(0, 1) + m(1, 0));
  return m;
}

Hessian hessian_F(double r_a, double r_b, const GrandFunctionalParams& gp) {
  if (r_a < 0 || r_b < 0) throw DomainError("hessian_F needs r_A, r_B >= 0");
  gp.validate();
  Hessian out;
  if (gp.convexifier) out.value = 2 * gp.kappa() * Mat2::Identity();
  auto l = local_terms(r_a, r_b, gp);
  if (!(l.g > 0)) {
    out.on_g_zero = true;
    return out;
  }
  out.value += hessian_lhy_term(r_a, r_b, gp);
  return out;
}

ChemicalPotentials chemical_potentials_for(double n, double m,
                                           const GrandFunctionalParams& gp) {
  GrandFunctionalParams q = gp;
  q.mu_a = q.mu_b = 0;
  Vec2 g = grad_F(n, m, q).value;
  ChemicalPotentials mu{g(0), g(1), ""};
  const double ell = gp.ell_or_default();
  const double top = gp.c / (ell * ell);
  if (mu.mu_a < 0 || mu.mu_b < 0 || mu.mu_a > top || mu.mu_b > top) {
    char buf[160];
    std::snprintf(buf, sizeof buf, "chemical potentials (%.6e, %.6e) outside [0, %.6e]",
                  mu.mu_a, mu.mu_b, top);
    mu.warning = buf;
  }
  return mu;
}

ConvexityReport convexity_scan(const GrandFunctionalParams& gp, int n) {
  if (n <= 0) throw ParameterError("convexity scan needs a nonempty grid");
  gp.validate();
  const double rmax = gp.r_max();
  if (!(rmax > 0)) throw ParameterError("convexity scan needs C K_z rho |Lambda| > 0");
  struct Cell {
    double eig, scale, lhy_norm, ra, rb;
  };
  std::vector<Cell> cells(static_cast<std::size_t>(n) * static_cast<std::size_t>(n));
  parallel_for(cells.size(), [&](std::size_t idx) {
    const int i = static_cast<int>(idx) / n + 1, j = static_cast<int>(idx) % n + 1;
    const double s = static_cast<double>(i) / n, t = (j - 0.5) / n;
    const double ra = s * t * rmax, rb = s * (1 - t) * rmax;
    Mat2 h = hessian_F(ra, rb, gp).value;
    Mat2 hl = hessian_lhy_term(ra, rb, gp);
    // closed-form smaller eigenvalue of a symmetric 2x2
    const double tr = 0.5 * (h(0, 0) + h(1, 1));
    const double r = std::hypot(0.5 * (h(0, 0) - h(1, 1)), h(0, 1));
    const double lo = tr - r;
    const double rl = std::hypot(0.5 * (hl(0, 0) - hl(1, 1)), hl(0, 1));
    const double lhy_norm = std::max(std::abs(0.5 * (hl(0, 0) + hl(1, 1)) + rl),
                                     std::abs(0.5 * (hl(0, 0) + hl(1, 1)) - rl));
    cells[idx] = {lo, h.cwiseAbs().maxCoeff(), lhy_norm, ra, rb};
  });
  ConvexityReport rep;
  rep.grid = n;
  rep.min_eigenvalue = INFINITY;
  double lhy_max = 0;
  for (const auto& c : cells) {
    if (c.eig < rep.min_eigenvalue) {
      rep.min_eigenvalue = c.eig;
      rep.worst_r_a = c.ra;
      rep.worst_r_b = c.rb;
    }
    rep.scale = std::max(rep.scale, c.scale);
    lhy_max = std::max(lhy_max, c.lhy_norm);
  }
  rep.min_scaled = rep.scale > 0 ? rep.min_eigenvalue / rep.scale : 0.0;
  rep.pass = rep.min_scaled >= -1e-14;
  const double x = gp.rho * gp.a_bar * gp.a_bar * gp.a_bar;
  // One species at r_max: the I-term curvature is (15/4) C a^{5/2} (c K_z rho)^{1/2} / |Lambda|.
  rep.dominance_estimate =
      x > 0 ? 16 * kPi / (3.75 * kLhyConstant * std::sqrt(gp.c * gp.k_z) * std::pow(x, 0.25))
            : INFINITY;
  const double conv = gp.convexifier ? 2 * gp.kappa() : 0.0;
  rep.dominance_measured = lhy_max > 0 ? conv / lhy_max : INFINITY;
  return rep;
}

nlohmann::json to_json(const ConvexityReport& r) {
  auto num = [](double v) -> nlohmann::json {
    if (std::isfinite(v)) return v;
    return nullptr;
  };
  return {{"grid", r.grid},
          {"min_eigenvalue", num(r.min_eigenvalue)},
          {"scale", num(r.scale)},
          {"min_scaled", num(r.min_scaled)},
          {"pass", r.pass},
          {"dominance_estimate", num(r.dominance_estimate)},
          {"dominance_measured", num(r.dominance_measured)},
          {"worst_r_a", r.worst_r_a},
          {"worst_r_b", r.worst_r_b}};
}

DerivativeCheck finite_difference_check(double r_a, double r_b,
                                        const GrandFunctionalParams& gp) {
  const double step = 0.05 * std::min(r_a, r_b);
  if (!(step > 0)) throw DomainError("finite-difference check needs an interior point");
  auto f = [&](double x, double y) { return grand_functional(x, y, gp); };
  // Richardson: (4 D(h/2) - D(h)) / 3.
  auto rich = [](auto d, double h) { return (4 * d(0.5 * h) - d(h)) / 3; };
  Vec2 g_fd;
  g_fd(0) = rich([&](double h) { return (f(r_a + h, r_b) - f(r_a - h, r_b)) / (2 * h); }, step);
  g_fd(1) = rich([&](double h) { return (f(r_a, r_b + h) - f(r_a, r_b - h)) / (2 * h); }, step);
  Mat2 h_fd;
  const double f0 = f(r_a, r_b);
  h_fd(0, 0) = rich(
      [&](double h) { return (f(r_a + h, r_b) - 2 * f0 + f(r_a - h, r_b)) / (h * h); }, step);
  h_fd(1, 1) = rich(
      [&](double h) { return (f(r_a, r_b + h) - 2 * f0 + f(r_a, r_b - h)) / (h * h); }, step);
  h_fd(0, 1) = h_fd(1, 0) = rich(
      [&](double h) {
        return (f(r_a + h, r_b + h) - f(r_a + h, r_b - h) - f(r_a - h, r_b + h) +
                f(r_a - h, r_b - h)) /
               (4 * h * h);
      },
      step);
  Vec2 g = grad_F(r_a, r_b, gp).value;
  Mat2 h = hessian_F(r_a, r_b, gp).value;
  DerivativeCheck out;
  out.grad_rel = (g - g_fd).norm() / std::max(g.norm(), 1e-300);
  out.hess_rel = (h - h_fd).norm() / std::max(h.norm(), 1e-300);
  return out;
}

Table phase_scan(const std::vector<double>& rho_a, const std::vector<double>& rho_b,
                 double a_a, double a_b, double a_ab, double c, double eta) {
  Table t({"rho_a", "rho_b", "e_main", "e_lhy", "xi", "mu_plus", "mu_minus", "miscible",
           "error_budget"});
  const std::size_t nb = rho_b.size();
  std::vector<std::vector<Cell>> rows(rho_a.size() * nb);
  parallel_for(rows.size(), [&](std::size_t idx) {
    const double ra = rho_a[idx / nb], rb = rho_b[idx % nb];
    auto p = MixtureParams::constant_coupling(ra, rb, a_a, a_b, a_ab);
    const double nan = std::nan("");
    if (!p.miscible()) {
      rows[idx] = {ra, rb, e_main(p), nan, nan, nan, nan, false, error_budget(p, c, eta)};
      return;
    }
    auto e = energy_breakdown(p, c, eta);
    rows[idx] = {ra, rb, e.e_main, e.e_lhy, e.xi, e.mu_plus, e.mu_minus, true, e.error_budget};
  });
  for (auto& r : rows) t.add_row(std::move(r));
  return t;
}

}  // namespace bosemix
