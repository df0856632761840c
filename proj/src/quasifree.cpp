#include "bosemix/quasifree.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <string>

#include "bosemix/errors.hpp"
#include "bosemix/potentials.hpp"
#include "bosemix/quadrature.hpp"
#include "bosemix/scattering.hpp"

namespace bosemix {

Mat2 QuasiFreeState::gamma_sum() const {
  Mat2 acc = Mat2::Zero();
  for (const auto& m : modes) acc += m.weight * m.gamma;
  return acc;
}

QuasiFreeState explicit_state(const MixtureParams& p, const MomentumLattice& lat,
                              double n0_a, double n0_b) {
  QuasiFreeState s = vacuum_state(lat, n0_a, n0_b);
  auto p0 = p.with_densities(s.rho0_a(), s.rho0_b());
  for (auto& m : s.modes) {
    auto mode = diagonalize_mode(p0, m.k, m.k * m.k);
    auto mm = explicit_minimizers(mode);
    m.alpha = mm.alpha;
    m.gamma = mm.gamma;
  }
  return s;
}

QuasiFreeState vacuum_state(const MomentumLattice& lat, double n0_a, double n0_b) {
  if (n0_a < 0 || n0_b < 0) throw DomainError("condensate counts must be nonnegative");
  QuasiFreeState s;
  s.kind = lat.kind();
  s.side = lat.side();
  s.k_max = lat.k_max();
  s.n0_a = n0_a;
  s.n0_b = n0_b;
  for (const auto& sh : lat.shells())
    if (sh.n > 0) s.modes.push_back({sh.n, sh.k, static_cast<double>(sh.multiplicity), Mat2::Zero(), Mat2::Zero()});
  return s;
}

bool mode_admissible(const Mat2& alpha, const Mat2& gamma, double tol) {
  Eigen::Matrix4d m;
  m.topLeftCorner<2, 2>() = gamma;
  m.topRightCorner<2, 2>() = alpha;
  m.bottomLeftCorner<2, 2>() = alpha.transpose();
  m.bottomRightCorner<2, 2>() = gamma + Mat2::Identity();
  if ((alpha - alpha.transpose()).cwiseAbs().maxCoeff() > tol) return false;
  if ((gamma - gamma.transpose()).cwiseAbs().maxCoeff() > tol) return false;
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix4d> es(m, Eigen::EigenvaluesOnly);
  double scale = 1.0 + m.cwiseAbs().maxCoeff();
  return es.eigenvalues()(0) >= -tol * scale;
}

void check_admissible(const QuasiFreeState& s) {
  for (const auto& m : s.modes)
    if (!mode_admissible(m.alpha, m.gamma))
      throw AdmissibilityError("quasi-free data not admissible at k = " + std::to_string(m.k));
}

double bogoliubov_functional(const QuasiFreeState& s, const MixtureParams& p) {
  check_admissible(s);
  auto p0 = p.with_densities(s.rho0_a(), s.rho0_b());
  CompensatedSum acc;
  for (const auto& m : s.modes) {
    Mat2 b = coupling_matrix(p0, m.k);
    Mat2 a = b + m.k * m.k * Mat2::Identity();
    acc.add(m.weight * ((a * m.gamma).trace() + (b * m.alpha).trace()));
  }
  return acc.value();
}

namespace {

struct SymEig {
  double c, s;      // rotation Q = [[c, -s], [s, c]]
  double e1, e2;    // eigenvalues
};

SymEig sym_eig(const std::array<double, 3>& v) {
  double x = v[0], y = v[1], z = v[2];
  double mean = 0.5 * (x + y), half = 0.5 * (x - y);
  double r = std::hypot(half, z);
  double theta = 0.5 * std::atan2(z, half);
  return {std::cos(theta), std::sin(theta), mean + r, mean - r};
}

Mat2 rot(const SymEig& e) {
  Mat2 q;
  q << e.c, -e.s, e.s, e.c;
  return q;
}

double sinhc(double x) { return std::abs(x) < 1e-4 ? 1.0 + x * x / 6.0 : std::sinh(x) / x; }

}  // namespace

Minimizers minimizers_from_s(const std::array<double, 3>& s) {
  auto e = sym_eig(s);
  Mat2 q = rot(e);
  Vec2 g(std::pow(std::sinh(0.5 * e.e1), 2), std::pow(std::sinh(0.5 * e.e2), 2));
  Vec2 a(0.5 * std::sinh(e.e1), 0.5 * std::sinh(e.e2));
  Minimizers m;
  m.gamma = q * g.asDiagonal() * q.transpose();
  m.alpha = q * a.asDiagonal() * q.transpose();
  m.gamma(1, 0) = m.gamma(0, 1);
  m.alpha(1, 0) = m.alpha(0, 1);
  return m;
}

ModeObjective mode_objective(const std::array<double, 3>& s, const Mat2& b,
                             double tau) {
  auto e = sym_eig(s);
  Mat2 q = rot(e);
  Mat2 a = b + tau * Mat2::Identity();
  auto mm = minimizers_from_s(s);
  ModeObjective out;
  out.value = (a * mm.gamma).trace() + (b * mm.alpha).trace();
  // Frechet derivative of F(S) in the eigenbasis: divided differences.
  Mat2 at = q.transpose() * a * q, bt = q.transpose() * b * q;
  double ev[2] = {e.e1, e.e2};
  Mat2 gt;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      double mid = 0.5 * (ev[i] + ev[j]), half = 0.5 * (ev[i] - ev[j]);
      double dg = 0.5 * std::sinh(mid) * sinhc(half);
      double da = 0.5 * std::cosh(mid) * sinhc(half);
      gt(i, j) = dg * at(i, j) + da * bt(i, j);
    }
  Mat2 g = q * gt * q.transpose();
  out.gradient = {g(0, 0), g(1, 1), g(0, 1) + g(1, 0)};
  return out;
}

ModeMinimum minimize_mode(const Mat2& b, double tau) {
  if (!(tau > 0.0)) throw DomainError("minimize_mode needs tau > 0");
  ModeMinimum res;
  auto l = lambda_pm(b);
  res.closed_form = s_summand(tau, l.plus, l.minus);
  if (b.cwiseAbs().maxCoeff() == 0.0) {
    res.s = {0, 0, 0};
    res.alpha = res.gamma = Mat2::Zero();
    return res;
  }
  // Work with the problem scaled to O(1) coefficients.
  double scale = tau + b.cwiseAbs().maxCoeff();
  Mat2 bs = b / scale;
  double ts = tau / scale;
  using V3 = Eigen::Vector3d;
  auto eval = [&](const V3& x, V3& g) {
    auto o = mode_objective({x(0), x(1), x(2)}, bs, ts);
    g << o.gradient[0], o.gradient[1], o.gradient[2];
    return o.value;
  };
  // Hessian from central differences of the analytic gradient.
  auto hessian = [&](const V3& x) {
    Eigen::Matrix3d h;
    for (int j = 0; j < 3; ++j) {
      double e = 1e-5 * (1.0 + std::abs(x(j)));
      V3 xp = x, xm = x, gp, gm;
      xp(j) += e;
      xm(j) -= e;
      eval(xp, gp);
      eval(xm, gm);
      h.col(j) = (gp - gm) / (2 * e);
    }
    return Eigen::Matrix3d(0.5 * (h + h.transpose()));
  };
  // Damped Newton: the objective is smooth and strictly convex near the
  // minimum, but lambda_- << lambda_+ makes it badly conditioned for
  // first-order methods.
  const V3 starts[] = {V3::Zero(), V3(-0.5, -0.5, 0.0), V3(-1.0, 0.2, -0.3), V3(0.3, -1.0, 0.4)};
  int total_iter = 0;
  double best_grad = INFINITY;
  for (const V3& x0 : starts) {
    V3 x = x0, g;
    double f = eval(x, g);
    double damp = 0.0;
    int it = 0;
    for (; it < 400 && g.norm() >= 1e-11; ++it) {
      Eigen::Matrix3d h = hessian(x);
      Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> es(h);
      double shift = std::max(0.0, 1e-8 - es.eigenvalues()(0)) + damp;
      V3 d = -(h + shift * Eigen::Matrix3d::Identity()).ldlt().solve(g);
      V3 xn, gn;
      double fn = f;
      bool ok = false;
      double step = 1.0;
      for (int ls = 0; ls < 60; ++ls) {
        xn = x + step * d;
        fn = eval(xn, gn);
        // Near the minimum f stops resolving progress; then a shrinking
        // gradient is the acceptance test.
        bool decrease = fn <= f + 1e-4 * step * d.dot(g);
        bool flat = std::abs(fn - f) <= 1e-14 * (1 + std::abs(f)) && gn.norm() < g.norm();
        if (std::isfinite(fn) && (decrease || flat)) {
          ok = true;
          break;
        }
        step *= 0.5;
      }
      if (!ok) break;
      damp = step < 1.0 ? std::max(2 * damp, 1e-6) : 0.25 * damp;
      x = xn;
      g = gn;
      f = fn;
    }
    total_iter += it;
    best_grad = std::min(best_grad, g.norm());
    if (g.norm() < 1e-11) {
      res.s = {x(0), x(1), x(2)};
      res.value = f * scale;
      res.iterations = total_iter;
      res.gradient_norm = g.norm() * scale;
      auto mm = minimizers_from_s(res.s);
      res.alpha = mm.alpha;
      res.gamma = mm.gamma;
      return res;
    }
  }
  char msg[96];
  std::snprintf(msg, sizeof msg, "per-mode minimization did not converge; gradient norm %.3e",
                best_grad * scale);
  throw NumericalError(msg);
}

ModeMinimum minimize_per_mode(const MixtureParams& p, double k) {
  if (!(k > 0.0)) throw DomainError("minimize_per_mode needs k != 0");
  return minimize_mode(coupling_matrix(p, k), k * k);
}

Depletion depletion(const MixtureParams& p, const MomentumLattice& lat) {
  Depletion out;
  if (p.rho() == 0.0) return out;
  auto entry = [&](int i, int j) {
    RadialSummand s;
    s.f = [&, i, j](double k) { return diagonalize_mode(p, k, k * k).gamma(i, j); };
    auto l0 = lambda_pm(p, 0.0);
    s.k_far = 1e3 * std::sqrt(std::max(l0.plus, 0.0));
    // gamma ~ B^2 / (4 k^4) at large k.
    s.far_tail = [&, i, j](double K, int dim) {
      Mat2 b = coupling_matrix(p, K);
      Mat2 b2 = b * b;
      double surf = dim == 3 ? 4 * std::acos(-1.0) : dim == 2 ? 2 * std::acos(-1.0) : 2.0;
      return surf * std::pow(K, dim - 4.0) / (4.0 - dim) * b2(i, j) / 4.0;
    };
    return lattice_sum(lat, s).value;
  };
  out.aa = p.rho_a > 0 ? entry(0, 0) : 0.0;
  out.bb = p.rho_b > 0 ? entry(1, 1) : 0.0;
  out.ab = (p.rho_a > 0 && p.rho_b > 0) ? entry(0, 1) : 0.0;
  return out;
}

ExponentFit depletion_exponent(const MixtureParams& p,
                               const std::vector<double>& rho_abar3, double side) {
  if (rho_abar3.size() < 2) throw ParameterError("exponent fit needs at least two densities");
  double ab = p.a_bar();
  double frac_a = p.rho() > 0 ? p.rho_a / p.rho() : 1.0;
  ExponentFit fit;
  std::vector<double> xs, ys;
  for (double x : rho_abar3) {
    double rho = x / (ab * ab * ab);
    auto q = p.with_densities(frac_a * rho, (1 - frac_a) * rho);
    MomentumLattice lat(LatticeKind::kPeriodic, side);
    auto d = depletion(q, lat);
    double pv = (d.aa + d.bb) / lat.volume();
    fit.rho_abar3.push_back(x);
    fit.per_volume.push_back(pv);
    xs.push_back(std::log(rho * ab));
    ys.push_back(std::log(pv));
  }
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
  fit.exponent = sxy / sxx;
  return fit;
}

QuasiFreeState fix_condensate(const MixtureParams& p, const MomentumLattice& lat) {
  const double na = p.rho_a * lat.volume(), nb = p.rho_b * lat.volume();
  double n0a = na, n0b = nb;
  const double tol = 1e-10 * std::max(na + nb, 1e-300);
  for (int it = 0; it < 200; ++it) {
    auto s = explicit_state(p, lat, n0a, n0b);
    Mat2 g = s.gamma_sum();
    double ta = na - g(0, 0), tb = nb - g(1, 1);
    if (ta < 0 || tb < 0)
      throw RegimeError("condensate fixed point failed: depletion exceeds particle number");
    double next_a = 0.5 * (n0a + ta), next_b = 0.5 * (n0b + tb);
    bool done = std::abs(next_a - n0a) + std::abs(next_b - n0b) <= tol;
    n0a = next_a;
    n0b = next_b;
    if (done) return explicit_state(p, lat, n0a, n0b);
  }
  throw RegimeError("condensate fixed point did not converge in 200 iterations");
}

double FunctionalValue::get(const std::string& name) const {
  for (const auto& [k, v] : terms)
    if (k == name) return v;
  for (const auto& [k, v] : aggregates)
    if (k == name) return v;
  if (name == "total") return total;
  throw ParameterError("no functional term named " + name);
}

FunctionalValue upper_bound_energy(const QuasiFreeState& s, const MixtureParams& p,
                                   const std::array<const ScatteringSolution*, 3>& sols) {
  if (s.kind == LatticeKind::kNeumann)
    throw ParameterError("upper_bound_energy needs a signed lattice");
  for (auto* sol : sols)
    if (!sol) throw ParameterError("upper_bound_energy needs three scattering solutions");
  check_admissible(s);
  const double vol = s.volume();
  const double r0a = s.rho0_a(), r0b = s.rho0_b();
  const double r0ab = std::sqrt(r0a * r0b);
  const double na = p.rho_a * vol, nb = p.rho_b * vol;

  double vhat0[3], ghat0[3], gw0[3];
  for (int c = 0; c < 3; ++c) {
    vhat0[c] = fourier_radial(sols[c]->potential(), 0.0);
    ghat0[c] = sols[c]->g_hat(0.0);
    gw0[c] = sols[c]->g_omega_moment();
  }
  auto l0 = [&](double xa, double xb, const double* w) {
    return (xa * xa * w[0] + 2 * xa * xb * w[2] + xb * xb * w[1]) / (2 * vol);
  };

  // Per-shell transforms.
  struct ShellData {
    double g[3], vw[3], omega[3];
  };
  std::vector<ShellData> sd(s.modes.size());
  for (std::size_t i = 0; i < s.modes.size(); ++i) {
    double k = s.modes[i].k;
    for (int c = 0; c < 3; ++c) {
      double g = sols[c]->g_hat(k);
      sd[i].g[c] = g;
      sd[i].vw[c] = fourier_radial(sols[c]->potential(), k) - g;
      sd[i].omega[c] = g / (2 * k * k);
    }
  }

  CompensatedSum kin, l2g_vw, l2g_g, l2a_g;
  for (std::size_t i = 0; i < s.modes.size(); ++i) {
    const auto& m = s.modes[i];
    const auto& d = sd[i];
    kin.add(m.weight * m.k * m.k * (m.gamma(0, 0) + m.gamma(1, 1)));
    auto quad = [&](const double* w, const Mat2& x) {
      return r0a * w[0] * x(0, 0) + r0b * w[1] * x(1, 1) + 2 * r0ab * w[2] * x(0, 1);
    };
    l2g_vw.add(m.weight * quad(d.vw, m.gamma));
    l2g_g.add(m.weight * quad(d.g, m.gamma));
    l2a_g.add(m.weight * quad(d.g, m.alpha));
  }

  // Quartic forms D_v(f, f) = (1/2|Lambda|) sum_{p, q != 0} v-hat(q - p) f_p f_q
  // over all lattice points of the shells.
  const double h = s.lattice().spacing();
  std::int64_t n_max = 0;
  for (const auto& m : s.modes) n_max = std::max(n_max, m.n);
  std::vector<int> index(static_cast<std::size_t>(n_max + 1), -1);
  for (std::size_t i = 0; i < s.modes.size(); ++i) index[static_cast<std::size_t>(s.modes[i].n)] = static_cast<int>(i);
  struct Point {
    int x, y, z;
    double f[6];
  };
  std::vector<Point> pts;
  int mmax = static_cast<int>(std::floor(std::sqrt(static_cast<double>(n_max))));
  for (int x = -mmax; x <= mmax; ++x)
    for (int y = -mmax; y <= mmax; ++y)
      for (int z = -mmax; z <= mmax; ++z) {
        std::int64_t n = x * x + y * y + z * z;
        if (n == 0 || n > n_max) continue;
        int i = index[static_cast<std::size_t>(n)];
        if (i < 0) continue;
        const auto& m = s.modes[static_cast<std::size_t>(i)];
        const auto& d = sd[static_cast<std::size_t>(i)];
        pts.push_back({x, y, z,
                       {m.alpha(0, 0) + r0a * d.omega[0], m.alpha(1, 1) + r0b * d.omega[1],
                        m.alpha(0, 1) + r0ab * d.omega[2], m.gamma(0, 0), m.gamma(1, 1),
                        m.gamma(0, 1)}});
      }
  std::vector<std::array<double, 3>> vtab(static_cast<std::size_t>(4 * n_max + 1),
                                          {NAN, NAN, NAN});
  auto vhat = [&](std::int64_t n) -> const std::array<double, 3>& {
    auto& e = vtab[static_cast<std::size_t>(n)];
    if (std::isnan(e[0])) {
      double k = h * std::sqrt(static_cast<double>(n));
      for (int c = 0; c < 3; ++c) e[c] = fourier_radial(sols[c]->potential(), k);
    }
    return e;
  };
  double dsum[6] = {0, 0, 0, 0, 0, 0};
  const int chan[6] = {0, 1, 2, 0, 1, 2};
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const auto& a = pts[i];
    const auto& v0 = vhat(0);
    for (int t = 0; t < 6; ++t) dsum[t] += v0[chan[t]] * a.f[t] * a.f[t];
    for (std::size_t j = i + 1; j < pts.size(); ++j) {
      const auto& b = pts[j];
      std::int64_t dx = a.x - b.x, dy = a.y - b.y, dz = a.z - b.z;
      const auto& v = vhat(dx * dx + dy * dy + dz * dz);
      for (int t = 0; t < 6; ++t) dsum[t] += 2 * v[chan[t]] * a.f[t] * b.f[t];
    }
  }
  for (double& x : dsum) x /= 2 * vol;

  FunctionalValue out;
  auto add = [&](const char* name, double v) { out.terms.emplace_back(name, v); };
  add("L0_g", l0(na, nb, ghat0));
  add("L2gamma_vomega", l2g_vw.value());
  add("L0_gomega", l0(s.n0_a, s.n0_b, gw0));
  add("kinetic", kin.value());
  add("L2gamma_g", l2g_g.value());
  add("L2alpha_g", l2a_g.value());
  add("D_alpha_A", dsum[0]);
  add("D_alpha_B", dsum[1]);
  add("D_alpha_AB", 2 * dsum[2]);
  add("D_gamma_A", dsum[3]);
  add("D_gamma_B", dsum[4]);
  add("D_gamma_AB", 2 * dsum[5]);
  double vw0[3];
  for (int c = 0; c < 3; ++c) vw0[c] = vhat0[c] - ghat0[c];
  add("condensate_shift",
      0.5 * vol * (p.rho_a * p.rho_a - r0a * r0a) * vw0[0] +
          0.5 * vol * (p.rho_b * p.rho_b - r0b * r0b) * vw0[1] +
          vol * (p.rho_a * p.rho_b - r0a * r0b) * vw0[2]);
  CompensatedSum total;
  for (const auto& [k, v] : out.terms) total.add(v);
  out.total = total.value();
  out.aggregates.emplace_back("K_bog", out.get("kinetic") + out.get("L2gamma_g") + out.get("L2alpha_g"));
  double e = 0;
  for (const auto& [k, v] : out.terms)
    if (k.rfind("D_", 0) == 0 || k == "condensate_shift") e += v;
  out.aggregates.emplace_back("E_tilde", e);

  // Bookkeeping identity on the condensate split.
  Mat2 g = s.gamma_sum();
  double ga = g(0, 0), gb = g(1, 1);
  double lhs = l0(s.n0_a, s.n0_b, vhat0) +
               (r0a * vhat0[0] * ga + r0b * vhat0[1] * gb + vhat0[2] * (r0b * ga + r0a * gb)) +
               (vhat0[0] * ga * ga / 2 + vhat0[1] * gb * gb / 2 + vhat0[2] * ga * gb) / vol;
  double rhs = l0(s.n0_a + ga, s.n0_b + gb, vhat0);
  out.identity_residual = rhs != 0 ? std::abs(lhs - rhs) / std::abs(rhs) : std::abs(lhs);
  return out;
}

nlohmann::json to_json(const FunctionalValue& f) {
  nlohmann::json j = {{"total", f.total}, {"identity_residual", f.identity_residual}};
  for (const auto& [k, v] : f.terms) j[k] = v;
  for (const auto& [k, v] : f.aggregates) j[k] = v;
  return j;
}

}  // namespace bosemix
