#include "bosemix/boxsum.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "bosemix/errors.hpp"
#include "bosemix/lhy.hpp"
#include "bosemix/quadrature.hpp"
#include "bosemix/scattering.hpp"

namespace bosemix {

constexpr double kPi = std::numbers::pi;

std::vector<std::int64_t> shell_multiplicities(int dim, std::int64_t n_max,
                                               bool nonnegative) {
  if (dim < 0 || n_max < 0) throw ParameterError("bad shell request");
  std::vector<std::int64_t> r(static_cast<std::size_t>(n_max + 1), 0);
  r[0] = 1;
  for (int d = 0; d < dim; ++d) {
    std::vector<std::int64_t> next(r.size(), 0);
    for (std::int64_t m = 0; m * m <= n_max; ++m) {
      std::int64_t w = (m == 0 || nonnegative) ? 1 : 2;
      for (std::int64_t n = m * m; n <= n_max; ++n)
        next[static_cast<std::size_t>(n)] += w * r[static_cast<std::size_t>(n - m * m)];
    }
    r.swap(next);
  }
  return r;
}

MomentumLattice::MomentumLattice(LatticeKind kind, double side, double k_max)
    : kind_(kind), side_(side), k_max_(k_max) {
  if (!(side > 0.0) || !std::isfinite(side)) throw ParameterError("box side must be positive");
}

double MomentumLattice::spacing() const {
  return kind_ == LatticeKind::kPeriodic ? 2 * kPi / side_ : kPi / side_;
}

namespace {

std::int64_t shell_limit(double k_max, double h) {
  double x = k_max / h;
  return static_cast<std::int64_t>(std::floor(x * x * (1 + 1e-14)));
}

}  // namespace

std::vector<Shell> MomentumLattice::shells() const {
  std::vector<Shell> out;
  if (!(k_max_ > 0.0)) return out;
  double h = spacing();
  auto n_max = shell_limit(k_max_, h);
  auto mult = shell_multiplicities(3, n_max, kind_ == LatticeKind::kNeumann);
  for (std::int64_t n = 1; n <= n_max; ++n)
    if (mult[static_cast<std::size_t>(n)] > 0)
      out.push_back({n, mult[static_cast<std::size_t>(n)], h * std::sqrt(static_cast<double>(n))});
  return out;
}

std::int64_t MomentumLattice::point_count() const {
  std::int64_t c = 0;
  for (const auto& s : shells()) c += s.multiplicity;
  return c;
}

GapConfig GapConfig::lower_bound_defaults(double rho, double a_bar, double eta,
                                          double c) {
  GapConfig g;
  double gas = rho * a_bar * a_bar * a_bar;
  g.eta = eta;
  g.nu = 1e-4;
  g.m = 15000.0;
  g.k_ell = std::pow(gas, -2 * eta) / (1000 * c);
  g.k_h = std::pow(gas, -1.0 / 250 - 3.0 / 10000);
  g.k_z = std::pow(gas, -1.0 / 10000);
  g.ell = g.k_ell / std::sqrt(rho * a_bar);
  g.m_cal = rho * std::pow(g.ell, 3) * std::pow(gas, 1.0 / 50);
  g.gapped = true;
  return g;
}

double tau_symbol(double k, const GapConfig& cfg, bool gapped) {
  double t = k * k;
  if (!gapped || k == 0.0) return t;
  double l2 = cfg.ell * cfg.ell;
  t -= kPi / (2 * l2);
  if (k > cfg.k_h / cfg.ell) t -= cfg.k_h / l2;
  return t;
}

double min_tau_on_lattice(const MomentumLattice& lat, const GapConfig& cfg) {
  // tau is increasing in |k| apart from the single drop at K_H / l, so the
  // first shell and the first shell past the drop are the candidates.
  double h = lat.spacing();
  double best = tau_symbol(h, cfg, cfg.gapped);
  double edge = cfg.k_h / cfg.ell;
  auto n_max = shell_limit(edge + 2 * h, h) + 4;
  auto mult = shell_multiplicities(3, n_max, lat.kind() == LatticeKind::kNeumann);
  for (std::int64_t n = 1; n <= n_max; ++n) {
    if (mult[static_cast<std::size_t>(n)] == 0) continue;
    double k = h * std::sqrt(static_cast<double>(n));
    best = std::min(best, tau_symbol(k, cfg, cfg.gapped));
    if (k > edge) break;
  }
  if (!(best > 0.0))
    throw RegimeError("gapped kinetic symbol is not positive on the lattice (min " +
                      std::to_string(best) + ")");
  return best;
}

namespace {

// Smooth step: 1 below 0, 0 above 1.
double bump(double t) {
  if (t <= 0.0) return 1.0;
  if (t >= 1.0) return 0.0;
  double a = std::exp(-1.0 / (1.0 - t));
  double b = std::exp(-1.0 / t);
  return a / (a + b);
}

double sphere_measure(int dim, double k) {
  switch (dim) {
    case 3:
      return 4 * kPi * k * k;
    case 2:
      return 2 * kPi * k;
    default:
      return 2.0;
  }
}

}  // namespace

LatticeSumResult lattice_sum(const MomentumLattice& lat, const RadialSummand& s) {
  const double h = lat.spacing();
  double k2 = lat.k_max() > 0.0 ? std::max(lat.k_max(), 96 * h) : 128 * h;
  double k1 = k2 / 3;
  if (k1 < s.smooth_from) {
    k1 = s.smooth_from + 2 * h;
    k2 = std::max(k2, k1 + 64 * h);
  }
  const double width = k2 - k1;
  auto chi = [&](double k) { return bump((k - k1) / width); };

  struct Part {
    int dim;
    double weight;
  };
  std::vector<Part> parts;
  if (lat.kind() == LatticeKind::kNeumann)
    parts = {{3, 1.0 / 8}, {2, 3.0 / 8}, {1, 3.0 / 8}};
  else
    parts = {{3, 1.0}};

  auto n_max = shell_limit(k2, h);
  double k_far = std::max(s.k_far, k2);
  std::vector<double> pts = {k1, k2};
  for (double x = 2 * k2; x < k_far; x *= 2) pts.push_back(x);
  if (k_far > k2) pts.push_back(k_far);
  if (s.oscillation > 0.0) {
    std::vector<double> fine;
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
      int n = 1 + static_cast<int>((pts[i + 1] - pts[i]) / s.oscillation);
      for (int j = 0; j < n; ++j) fine.push_back(pts[i] + (pts[i + 1] - pts[i]) * j / n);
    }
    fine.push_back(pts.back());
    pts.swap(fine);
  }

  LatticeSumResult out;
  for (const auto& part : parts) {
    auto mult = shell_multiplicities(part.dim, n_max, false);
    CompensatedSum shells;
    for (std::int64_t n = 1; n <= n_max; ++n) {
      auto m = mult[static_cast<std::size_t>(n)];
      if (m == 0) continue;
      double k = h * std::sqrt(static_cast<double>(n));
      double c = chi(k);
      if (c == 0.0) continue;
      shells.add(static_cast<double>(m) * c * s.f(k));
    }
    auto integrand = [&](double k) {
      return sphere_measure(part.dim, k) * (1.0 - chi(k)) * s.f(k);
    };
    double integral = integrate_pieces(integrand, pts, {1e-300, 1e-13, 50}).value;
    if (s.far_tail) integral += s.far_tail(k_far, part.dim);
    double density = std::pow(h, -part.dim);
    out.shell_part += part.weight * shells.value();
    out.integral_part += part.weight * density * integral;
  }
  out.value = out.shell_part + out.integral_part;
  return out;
}

double finite_lattice_sum(const MomentumLattice& lat,
                          const std::function<double(double)>& f) {
  CompensatedSum acc;
  for (const auto& s : lat.shells()) acc.add(static_cast<double>(s.multiplicity) * f(s.k));
  return acc.value();
}

double s_summand(double tau, double lp, double lm) {
  auto one = [tau](double l) {
    double e = std::sqrt(tau * tau + 2 * l * tau);
    // e - tau - l = -l^2 / (e + tau + l), cancellation-free.
    double p = e + tau + l;
    return p != 0.0 ? -l * l / p : e - tau - l;
  };
  return 0.5 * (one(lp) + one(lm));
}

double s0_summand(double tau, double lp, double lm) {
  return 0.5 * (bogoliubov_g(tau, lp) + bogoliubov_g(tau, lm));
}

namespace {

double tau_at(double k, const GapConfig* gap) {
  return gap ? tau_symbol(k, *gap, gap->gapped) : k * k;
}

void require_positive_tau(double tau, double k) {
  if (!(tau > 0.0))
    throw RegimeError("kinetic symbol not positive at k = " + std::to_string(k));
}

}  // namespace

double sum_S(const MixtureParams& p, const MomentumLattice& lat, const GapConfig* gap) {
  return finite_lattice_sum(lat, [&](double k) {
    double tau = tau_at(k, gap);
    require_positive_tau(tau, k);
    auto l = lambda_pm(p, k);
    return s_summand(tau, l.plus, l.minus);
  });
}

double sum_S0(const MixtureParams& p, const MomentumLattice& lat, const GapConfig* gap) {
  if (p.rho_a == 0.0 && p.rho_b == 0.0) return 0.0;
  RadialSummand s;
  s.f = [&](double k) {
    double tau = tau_at(k, gap);
    require_positive_tau(tau, k);
    auto l = lambda_pm(p, k);
    return s0_summand(tau, l.plus, l.minus);
  };
  auto l0 = lambda_pm(p, 0.0);
  double scale = std::sqrt(std::max(std::abs(l0.plus), std::abs(l0.minus)));
  s.k_far = 50.0 * scale;
  if (gap && gap->gapped) s.smooth_from = gap->k_h / gap->ell;
  // Beyond k_far, G(k^2, y) = k^2 sum_{n>=3} binom(1/2, n) (2y / k^2)^n.
  s.far_tail = [&p](double K, int dim) {
    auto l = lambda_pm(p, K);
    double total = 0.0;
    for (double y : {l.plus, l.minus}) {
      double binom = 1.0;
      for (int n = 1; n <= 40; ++n) {
        binom *= (0.5 - (n - 1)) / n;
        if (n < 3) continue;
        double expo = dim + 2.0 - 2.0 * n;
        double term = binom * std::pow(2 * y, n) * sphere_measure(dim, 1.0) *
                      std::pow(K, expo) / (-expo);
        total += 0.5 * term;
        if (std::abs(term) < 1e-20 * std::abs(total)) break;
      }
    }
    return total;
  };
  return lattice_sum(lat, s).value;
}

GOmegaResult g_omega_lattice(const ScatteringSolution& sol, double ell,
                             const GapConfig& cfg) {
  GOmegaResult r;
  r.g_omega_moment = sol.g_omega_moment();
  if (sol.potential().is_zero()) return r;
  MomentumLattice lat(LatticeKind::kNeumannSigned, ell);
  double R = sol.support_radius();
  RadialSummand s;
  s.f = [&](double k) {
    double tau = tau_symbol(k, cfg, cfg.gapped);
    require_positive_tau(tau, k);
    double g = sol.g_hat(k);
    return g * g / (2 * tau);
  };
  s.k_far = 1e4 / R;
  s.oscillation = 4 * kPi / R;
  if (cfg.gapped) s.smooth_from = cfg.k_h / cfg.ell;
  double total = lattice_sum(lat, s).value;
  r.g_omega = total / (8 * ell * ell * ell);
  r.difference = r.g_omega - r.g_omega_moment;
  double a = sol.a();
  r.scaled = a > 0 ? std::abs(r.difference) * ell / (a * a) : 0.0;
  return r;
}

double low_momenta_partial_sum(const ScatteringSolution& sol, double ell,
                               const GapConfig& cfg) {
  MomentumLattice lat(LatticeKind::kNeumannSigned, ell, cfg.k_h / ell);
  double total = finite_lattice_sum(lat, [&](double k) {
    double tau = tau_symbol(k, cfg, cfg.gapped);
    require_positive_tau(tau, k);
    double g = sol.g_hat(k);
    return g * g / (2 * tau);
  });
  return total / (8 * ell * ell * ell);
}

ConvergenceReport sum_vs_integral_report(const MixtureParams& p,
                                         const std::vector<double>& sides,
                                         LatticeKind kind) {
  if (sides.size() < 3) throw ParameterError("convergence report needs at least 3 box sizes");
  ConvergenceReport rep;
  double integral = e_lhy(p);
  std::vector<double> xs, ys;
  double prev_gap = NAN, prev_l = NAN;
  for (double L : sides) {
    MomentumLattice lat(kind, L);
    double sum = sum_S0(p, lat) / lat.volume();
    double gap = integral != 0.0 ? (sum - integral) / integral : 0.0;
    double order = NAN;
    if (!std::isnan(prev_gap) && gap != 0.0 && prev_gap != 0.0)
      order = std::log(std::abs(prev_gap / gap)) / std::log(L / prev_l);
    rep.table.add_row({L, sum, integral, gap, order});
    rep.gaps.push_back(gap);
    if (gap != 0.0) {
      xs.push_back(std::log(L));
      ys.push_back(std::log(std::abs(gap)));
    }
    prev_gap = gap;
    prev_l = L;
  }
  if (xs.size() >= 2) {
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      mx += xs[i];
      my += ys[i];
    }
    mx /= static_cast<double>(xs.size());
    my /= static_cast<double>(xs.size());
    double sxy = 0, sxx = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      sxy += (xs[i] - mx) * (ys[i] - my);
      sxx += (xs[i] - mx) * (xs[i] - mx);
    }
    rep.fitted_order = -sxy / sxx;
  } else {
    rep.fitted_order = NAN;
  }
  return rep;
}

}  // namespace bosemix
