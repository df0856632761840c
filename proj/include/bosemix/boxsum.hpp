#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "bosemix/mixture.hpp"
#include "bosemix/table.hpp"

namespace bosemix {

class ScatteringSolution;

enum class LatticeKind {
  kPeriodic,       // (2 pi / L) Z^3
  kNeumann,        // (pi / l) N_0^3
  kNeumannSigned,  // (pi / l) Z^3
};

struct Shell {
  std::int64_t n;             // |m|^2 in lattice units
  std::int64_t multiplicity;  // lattice points with that |m|^2
  double k;                   // spacing * sqrt(n)
};

// Number of m in Z^dim (or N_0^dim) with |m|^2 = n, for n = 0..n_max.
std::vector<std::int64_t> shell_multiplicities(int dim, std::int64_t n_max,
                                               bool nonnegative);

class MomentumLattice {
 public:
  // k_max <= 0 leaves the shell region to be chosen by the sums.
  MomentumLattice(LatticeKind kind, double side, double k_max = 0.0);

  LatticeKind kind() const { return kind_; }
  double side() const { return side_; }
  double volume() const { return side_ * side_ * side_; }
  double k_max() const { return k_max_; }
  double spacing() const;
  // Shells with 0 < |k| <= k_max.
  std::vector<Shell> shells() const;
  std::int64_t point_count() const;

 private:
  LatticeKind kind_;
  double side_;
  double k_max_;
};

// Spectral-gap regime data. Only tau_symbol reads the gap toggle.
struct GapConfig {
  double ell = 1.0;
  double k_ell = 1.0, k_h = 0.0, k_z = 10.0, m_cal = 1.0;
  double eta = 0.0, nu = 1e-4, m = 15000.0;
  bool gapped = false;

  // Parameter choices of the lower-bound construction at density rho and
  // length a_bar, with generic constant c.
  static GapConfig lower_bound_defaults(double rho, double a_bar, double eta,
                                        double c);
};

// k^2, or k^2 - pi/(2 l^2) [k != 0] - K_H / l^2 [|k| > K_H / l] when gapped.
double tau_symbol(double k, const GapConfig& cfg, bool gapped);
// Throws RegimeError when the gapped symbol is not positive on the lattice.
double min_tau_on_lattice(const MomentumLattice& lat, const GapConfig& cfg);

// A radial summand for sums over an infinite lattice.
struct RadialSummand {
  std::function<double(double)> f;
  // Integral of f over |k| > K in dim dimensions; empty means negligible.
  std::function<double(double K, int dim)> far_tail;
  double k_far = 0.0;        // where the quadrature hands over to far_tail
  double smooth_from = 0.0;  // f may be non-smooth below this
  double oscillation = 0.0;  // longest quadrature panel, if f oscillates
};

struct LatticeSumResult {
  double value = 0.0;
  double shell_part = 0.0;
  double integral_part = 0.0;
};

// Sum of f over the whole lattice minus the origin. Exact shells carry
// chi f with chi a smooth bump cut off at k_max; the remainder (1 - chi) f is
// smooth, so its lattice sum equals the density-weighted integral up to
// super-polynomially small aliasing.
LatticeSumResult lattice_sum(const MomentumLattice& lat, const RadialSummand& s);

// Plain sum over the shells inside k_max.
double finite_lattice_sum(const MomentumLattice& lat,
                          const std::function<double(double)>& f);

// 1/2 sum_pm (sqrt(tau^2 + 2 lambda tau) - tau - lambda), the per-mode
// Bogoliubov ground-state summand, and its renormalized version
// 1/2 sum_pm G(tau, lambda).
double s_summand(double tau, double lambda_plus, double lambda_minus);
double s0_summand(double tau, double lambda_plus, double lambda_minus);

// Finite-lattice S (no tail).
double sum_S(const MixtureParams& p, const MomentumLattice& lat,
             const GapConfig* gap = nullptr);
// Infinite-lattice S_0 with the tail beyond the shell region integrated.
double sum_S0(const MixtureParams& p, const MomentumLattice& lat,
              const GapConfig* gap = nullptr);

struct GOmegaResult {
  double g_omega = 0.0;        // (1/(8 l^3)) sum g-hat^2 / (2 tau)
  double g_omega_moment = 0.0; // (g omega)-hat(0) from the scattering solution
  double difference = 0.0;     // g_omega - g_omega_moment
  double scaled = 0.0;         // |difference| * l / a^2
};

GOmegaResult g_omega_lattice(const ScatteringSolution& sol, double ell,
                             const GapConfig& cfg = {});
// Same sum restricted to 0 < |k| <= K_H / l.
double low_momenta_partial_sum(const ScatteringSolution& sol, double ell,
                               const GapConfig& cfg);

struct ConvergenceReport {
  Table table{{"L", "sum", "integral", "gap", "order"}};
  double fitted_order = 0.0;
  std::vector<double> gaps;
};

// S_0 / |Lambda| against G^{5/4} I_AB over box sides; order is the local
// exponent between consecutive sizes, fitted_order the log-log slope.
ConvergenceReport sum_vs_integral_report(const MixtureParams& p,
                                         const std::vector<double>& sides,
                                         LatticeKind kind = LatticeKind::kPeriodic);

}  // namespace bosemix
