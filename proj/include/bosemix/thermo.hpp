#pragma once

#include <json.hpp>

#include <string>
#include <vector>

#include "bosemix/mixture.hpp"
#include "bosemix/table.hpp"

namespace bosemix {

// Parameters of the grand-canonical functional
//   F(r_A, r_B) = kappa (r_A^2 + r_B^2) + |Lambda|^{-3/2} G^{5/4} I(xi) - mu . r
// with kappa = (8 pi a_bar / |Lambda|)(rho a_bar^3)^{1/4} and
// G = r_A^2 a_A^2 + 2 r_A r_B a_AB^2 + r_B^2 a_B^2.
struct GrandFunctionalParams {
  double volume = 1.0;
  double a_a = 0, a_b = 0, a_ab = 0;
  double rho = 0, a_bar = 1.0;
  double mu_a = 0, mu_b = 0;
  double k_z = 10.0;
  double c = 1.0;
  double ell = 0.0;         // box length for the mu window; 0 picks the default
  bool convexifier = true;  // off only for the scan that shows why it is there

  double kappa() const;
  // Regime bound r_A + r_B <= C K_z rho |Lambda|.
  double r_max() const { return c * k_z * rho * volume; }
  double ell_or_default() const;
  void validate() const;
};

double grand_functional(double r_a, double r_b, const GrandFunctionalParams& gp);

struct Gradient {
  Vec2 value = Vec2::Zero();
  bool on_g_zero = false;  // one-sided limit at G = 0
};
struct Hessian {
  Mat2 value = Mat2::Zero();
  bool on_g_zero = false;
};
Gradient grad_F(double r_a, double r_b, const GrandFunctionalParams& gp);
Hessian hessian_F(double r_a, double r_b, const GrandFunctionalParams& gp);
// Hessian of the G^{5/4} I term alone.
Mat2 hessian_lhy_term(double r_a, double r_b, const GrandFunctionalParams& gp);

// h(xi) = mu+^{5/2} + mu-^{5/2} and its first two derivatives in xi.
struct HTerm {
  double h, dh, d2h;
};
HTerm h_of_xi(double xi);

struct ChemicalPotentials {
  double mu_a = 0, mu_b = 0;
  std::string warning;  // empty inside [0, C / ell^2]
};
// mu making (n, m) stationary.
ChemicalPotentials chemical_potentials_for(double n, double m,
                                           const GrandFunctionalParams& gp);

struct ConvexityReport {
  int grid = 0;
  double min_eigenvalue = 0;
  double scale = 0;            // largest Hessian entry on the grid
  double min_scaled = 0;       // min_eigenvalue / scale
  bool pass = false;           // min_scaled >= -1e-14
  double dominance_estimate = 0;  // 16 pi / ((15/4) C (c K_z)^{1/2} (rho a_bar^3)^{1/4})
  double dominance_measured = 0;  // 2 kappa / max |Hess of the I term|
  double worst_r_a = 0, worst_r_b = 0;
};
// n x n barycentric grid r_A = s t r_max, r_B = s (1 - t) r_max with
// s = i / n (i = 1..n), t = (j - 1/2) / n.
ConvexityReport convexity_scan(const GrandFunctionalParams& gp, int n);
nlohmann::json to_json(const ConvexityReport& r);

struct DerivativeCheck {
  double grad_rel = 0, hess_rel = 0;
};
// Analytic derivatives against Richardson-extrapolated central differences.
DerivativeCheck finite_difference_check(double r_a, double r_b,
                                        const GrandFunctionalParams& gp);

// Energy rows over a (rho_A, rho_B) grid; immiscible rows keep e_main and
// leave the LHY fields empty.
Table phase_scan(const std::vector<double>& rho_a, const std::vector<double>& rho_b,
                 double a_a, double a_b, double a_ab, double c, double eta);

}  // namespace bosemix
