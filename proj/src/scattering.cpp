#include "bosemix/scattering.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <ostream>

#include "bosemix/errors.hpp"
#include "bosemix/quadrature.hpp"
#include "bosemix/table.hpp"

namespace bosemix {

using nlohmann::json;
constexpr double kPi = std::numbers::pi;

namespace {

constexpr int kScaleBits = 500;

struct Step {
  double p11, p12, p21, p22;
};

// Fourth-order Magnus step for u'' = (v/2) u over [r, r + h]; exact when v
// is constant on the step.
Step magnus(const PotentialSegment& s, double r, double h) {
  constexpr double kG = 0.28867513459481288225;  // sqrt(3) / 6
  double w1 = 0.5 * s.value(r + h * (0.5 - kG));
  double w2 = 0.5 * s.value(r + h * (0.5 + kG));
  double c = (std::sqrt(3.0) / 12.0) * h * h * (w1 - w2);
  double o21 = 0.5 * h * (w1 + w2);
  double d2 = c * c + h * o21;
  double ch, shd;
  if (d2 < 1e-8) {
    ch = 1.0 + d2 / 2.0 + d2 * d2 / 24.0;
    shd = 1.0 + d2 / 6.0 + d2 * d2 / 120.0;
  } else {
    double d = std::sqrt(d2);
    ch = std::cosh(d);
    shd = std::sinh(d) / d;
  }
  return {ch + shd * c, shd * h, shd * o21, ch - shd * c};
}

double sinc(double x) { return std::abs(x) < 1e-4 ? 1.0 - x * x / 6.0 : std::sin(x) / x; }

}  // namespace

ScatteringSolution solve_scattering(const RadialPotential& v,
                                    const GridConfig& cfg) {
  if (!(cfg.resolution > 0.0)) throw ParameterError("grid resolution must be positive");
  ScatteringSolution sol;
  sol.v_ = v;
  const double R = v.support_radius();
  sol.segs_.assign(v.segments().begin(), v.segments().end());
  double end = sol.segs_.empty() ? 0.0 : sol.segs_.back().r1;
  if (end < R) sol.segs_.push_back({end, R, 0.0, 0.0});

  std::vector<double> um, dum;
  std::vector<int> expo;
  double u = 0.0, du = 1.0;
  int e = 0;
  sol.r_.push_back(0.0);
  um.push_back(u);
  dum.push_back(du);
  expo.push_back(e);
  for (std::size_t j = 0; j < sol.segs_.size(); ++j) {
    const auto& s = sol.segs_[j];
    double q = std::sqrt(0.5 * std::max(s.v0, s.v1));
    double h = cfg.resolution * R;
    if (q > 0.0) h = std::min(h, 0.5 / q);
    double len = s.r1 - s.r0;
    double n = std::ceil(len / h);
    if (n > static_cast<double>(cfg.max_steps) ||
        sol.r_.size() + n > cfg.max_steps)
      throw NumericalError("scattering solver step underflow: " +
                           std::to_string(n) + " steps needed on [" +
                           std::to_string(s.r0) + ", " + std::to_string(s.r1) + "]");
    auto steps = static_cast<std::size_t>(n);
    sol.node_r0_.push_back(sol.r_.size() - 1);
    for (std::size_t i = 0; i < steps; ++i) {
      double r = s.r0 + len * static_cast<double>(i) / static_cast<double>(steps);
      double rn = i + 1 == steps ? s.r1
                                 : s.r0 + len * static_cast<double>(i + 1) / static_cast<double>(steps);
      Step p = magnus(s, r, rn - r);
      double un = p.p11 * u + p.p12 * du;
      double dun = p.p21 * u + p.p22 * du;
      u = un;
      du = dun;
      if (std::abs(u) + std::abs(du) > std::ldexp(1.0, kScaleBits)) {
        u = std::ldexp(u, -kScaleBits);
        du = std::ldexp(du, -kScaleBits);
        ++e;
      }
      sol.seg_.push_back(static_cast<int>(j));
      sol.r_.push_back(rn);
      um.push_back(u);
      dum.push_back(du);
      expo.push_back(e);
    }
    sol.node_r1_.push_back(sol.r_.size() - 1);
  }

  // Exterior: u is exactly linear; sample it and read off c(r - a) by least
  // squares.
  double a_est = std::clamp(R - u / du, 0.0, R);
  double r_max = std::max(2.0 * R, 4.0 * a_est);
  const int ext = 200;
  double uR = u, duR = du;
  for (int i = 1; i <= ext; ++i) {
    double r = R + (r_max - R) * i / ext;
    sol.seg_.push_back(-1);
    sol.r_.push_back(r);
    um.push_back(uR + duR * (r - R));
    dum.push_back(duR);
    expo.push_back(e);
  }
  std::size_t first_ext = sol.r_.size() - ext - 1;
  double sx = 0, sy = 0, sxx = 0, sxy = 0, m = 0;
  for (std::size_t i = first_ext; i < sol.r_.size(); ++i) {
    double x = sol.r_[i], y = um[i];
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    m += 1;
  }
  double xbar = sx / m, ybar = sy / m;
  double c = (sxy - m * xbar * ybar) / (sxx - m * xbar * xbar);
  double b = ybar - c * xbar;
  double a = -b / c;
  if (!std::isfinite(a) || !(c > 0.0))
    throw NumericalError("scattering solver lost the exterior normalization");
  if (a < 0.0 && a > -1e-12 * R) a = 0.0;
  if (a > R && a < R * (1 + 1e-12)) a = R;
  sol.a_ = a;

  sol.u_.resize(sol.r_.size());
  sol.du_.resize(sol.r_.size());
  for (std::size_t i = 0; i < sol.r_.size(); ++i) {
    int shift = kScaleBits * (expo[i] - e);
    sol.u_[i] = std::ldexp(um[i], shift) / c;
    sol.du_[i] = std::ldexp(dum[i], shift) / c;
  }
  for (std::size_t i = first_ext; i < sol.r_.size(); ++i) {
    sol.u_[i] = sol.r_[i] - a;
    sol.du_[i] = 1.0;
  }

  sol.g_omega_moment_ = 4.0 * kPi * sol.integrate_interior([&](double r) {
                          double uu = sol.state_at(r).u;
                          return sol.v_(r) * (r * uu - uu * uu);
                        });
  for (int i = 0; i <= 32; ++i) {
    double k = 0.5 * i / R;
    sol.table_.push_back({k, sol.g_hat(k)});
  }
  return sol;
}

ScatteringSolution::Sample ScatteringSolution::state_at(double r) const {
  if (r <= 0.0) return {0.0, du_[0]};
  if (r >= support_radius()) return {r - a_, 1.0};
  auto it = std::upper_bound(r_.begin(), r_.end(), r);
  std::size_t i = static_cast<std::size_t>(it - r_.begin()) - 1;
  double s = r - r_[i];
  if (s == 0.0) return {u_[i], du_[i]};
  Step p = magnus(segs_[static_cast<std::size_t>(seg_[i])], r_[i], s);
  return {p.p11 * u_[i] + p.p12 * du_[i], p.p21 * u_[i] + p.p22 * du_[i]};
}

double ScatteringSolution::phi_at(double r) const {
  if (r <= 0.0) return du_[0];
  return state_at(r).u / r;
}

double ScatteringSolution::dphi_at(double r) const {
  if (r <= 0.0) return 0.0;
  auto st = state_at(r);
  return (st.du * r - st.u) / (r * r);
}

std::vector<double> ScatteringSolution::phi() const {
  std::vector<double> out(r_.size());
  for (std::size_t i = 0; i < r_.size(); ++i)
    out[i] = r_[i] == 0.0 ? du_[0] : u_[i] / r_[i];
  return out;
}

std::vector<double> ScatteringSolution::omega() const {
  auto p = phi();
  for (auto& x : p) x = 1.0 - x;
  return p;
}

std::vector<double> ScatteringSolution::g() const {
  auto p = phi();
  for (std::size_t i = 0; i < p.size(); ++i) p[i] *= v_(r_[i]);
  return p;
}

double ScatteringSolution::integrate_interior(
    const std::function<double(double)>& f) const {
  CompensatedSum total;
  for (const auto& s : segs_) {
    if (s.v0 == 0.0 && s.v1 == 0.0) continue;
    total.add(integrate(f, s.r0, s.r1).value);
  }
  return total.value();
}

double ScatteringSolution::g_hat(double k) const {
  if (!(k >= 0.0)) throw DomainError("g_hat needs k >= 0");
  const double R = support_radius();
  CompensatedSum total;
  for (std::size_t j = 0; j < segs_.size(); ++j) {
    const auto& s = segs_[j];
    if (s.v0 == 0.0 && s.v1 == 0.0) continue;
    double q = std::sqrt(0.5 * s.v0);
    double len = s.r1 - s.r0;
    if (s.constant() && q * len >= 0.05) {
      // On a constant segment u = C+ e^{q(r-r1)} + C- e^{-q(r-r0)}, so the
      // transform is elementary.
      double u0 = u_[node_r0_[j]], u1 = u_[node_r1_[j]];
      double E = std::exp(-q * len);
      double cp = (u1 - u0 * E) / (1.0 - E * E);
      double cm = (u0 - u1 * E) / (1.0 - E * E);
      double r0 = s.r0, r1 = s.r1;
      if (k * R < 1e-8) {
        double ip = (r1 / q - 1 / (q * q)) - E * (r0 / q - 1 / (q * q));
        double im = (r0 / q + 1 / (q * q)) - E * (r1 / q + 1 / (q * q));
        total.add(4.0 * kPi * s.v0 * (cp * ip + cm * im));
      } else {
        double den = q * q + k * k;
        double ip = ((q * std::sin(k * r1) - k * std::cos(k * r1)) -
                     E * (q * std::sin(k * r0) - k * std::cos(k * r0))) / den;
        double im = (E * (-q * std::sin(k * r1) - k * std::cos(k * r1)) -
                     (-q * std::sin(k * r0) - k * std::cos(k * r0))) / den;
        total.add(4.0 * kPi * s.v0 / k * (cp * ip + cm * im));
      }
      continue;
    }
    auto f = [&](double r) { return r * s.value(r) * state_at(r).u * sinc(k * r); };
    int pieces = 1 + static_cast<int>(k * len / (2.0 * kPi));
    std::vector<double> pts;
    for (int i = 0; i <= pieces; ++i) pts.push_back(s.r0 + len * i / pieces);
    total.add(4.0 * kPi * integrate_pieces(f, pts).value);
  }
  return total.value();
}

double ScatteringSolution::g_omega_hat(double k) const {
  CompensatedSum total;
  for (const auto& s : segs_) {
    if (s.v0 == 0.0 && s.v1 == 0.0) continue;
    auto f = [&](double r) {
      double uu = state_at(r).u;
      return s.value(r) * (r * uu - uu * uu) * sinc(k * r);
    };
    int pieces = 1 + static_cast<int>(k * (s.r1 - s.r0) / (2.0 * kPi));
    std::vector<double> pts;
    for (int i = 0; i <= pieces; ++i) pts.push_back(s.r0 + (s.r1 - s.r0) * i / pieces);
    total.add(integrate_pieces(f, pts).value);
  }
  return 4.0 * kPi * total.value();
}

double ScatteringSolution::v_omega_hat(double k) const {
  return fourier_radial(v_, k) - g_hat(k);
}

double ScatteringSolution::g_r_moment() const {
  return 4.0 * kPi *
         integrate_interior([&](double r) { return r * r * v_(r) * state_at(r).u; });
}

double born_series(const RadialPotential& v, int order) {
  if (order != 1 && order != 2) throw ParameterError("born_series order must be 1 or 2");
  double first = v.l1_norm();
  if (order == 1 || v.is_zero()) return first;
  const double R = v.support_radius();
  // Potential of the "charge" v at radius r (shell theorem).
  auto phi = [&](double r) {
    double inner = r > 0.0 ? radial_moment(v, 2, 0.0, r) / r : 0.0;
    return inner + radial_moment(v, 1, r, R);
  };
  CompensatedSum acc;
  for (const auto& s : v.segments()) {
    if (s.v0 == 0.0 && s.v1 == 0.0) continue;
    acc.add(integrate([&](double r) { return r * r * s.value(r) * phi(r); }, s.r0, s.r1)
                .value);
  }
  double a2 = -0.5 * 4.0 * kPi * acc.value();
  return first + a2;
}

json to_json(const ScatteringSolution& s) {
  json table = json::array();
  for (const auto& t : s.g_hat_table()) table.push_back({t.k, t.value});
  return {{"a", s.a()},
          {"support_radius", s.support_radius()},
          {"r_max", s.r_max()},
          {"g_hat_zero", s.g_hat(0.0)},
          {"g_omega_moment", s.g_omega_moment()},
          {"potential", to_json(s.potential())},
          {"radial_grid", s.radial_grid()},
          {"phi", s.phi()},
          {"omega", s.omega()},
          {"g", s.g()},
          {"g_hat_table", table}};
}

void write_profile_csv(const ScatteringSolution& s, std::ostream& out) {
  Table t({"r", "phi", "omega", "g"});
  auto phi = s.phi(), om = s.omega(), g = s.g();
  for (std::size_t i = 0; i < phi.size(); ++i)
    t.add_row({s.radial_grid()[i], phi[i], om[i], g[i]});
  t.write_csv(out);
}

}  // namespace bosemix
