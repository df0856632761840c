#pragma once

#include <json.hpp>

#include "bosemix/mixture.hpp"

namespace bosemix {

// (8 pi)^{5/2} * 2 sqrt(2) / (15 pi^2), simplified.
inline constexpr double kLhyConstant = 60.499758110908280398;  // 512 sqrt(pi) / 15

// G(x, y) = sqrt(x^2 + 2xy) - x - y + y^2 / (2x), evaluated without the
// cancellation of the textbook form (x > 0, y >= -x/2).
double bogoliubov_g(double x, double y);

double e_main(const MixtureParams& p);
double i_ab(const MixtureParams& p);
double i_ab_from_mu(double mu_plus, double mu_minus);
double i_ab_quadrature(double mu_plus, double mu_minus);
// G^{5/4} I_AB with G = rho_A^2 a_A^2 + 2 rho_A rho_B a_AB^2 + rho_B^2 a_B^2.
double e_lhy(const MixtureParams& p);
// 4 pi (16 sqrt2 / (15 sqrt pi)) sum_pm (rho_A a_A + rho_B a_B
//   pm sqrt((rho_A a_A - rho_B a_B)^2 + 4 rho_A rho_B a_AB^2))^{5/2}
double e_lhy_alternative(const MixtureParams& p);
// C (rho a_bar)^{5/2} (rho a_bar^3)^eta
double error_budget(const MixtureParams& p, double c, double eta);

struct EnergyBreakdown {
  double e_main = 0, e_lhy = 0, e_lhy_alternative = 0;
  double i_ab = 0, xi = 0, mu_plus = 0, mu_minus = 0;
  double error_budget = 0;
  double form_residual = 0;  // |e_lhy - e_lhy_alternative| / max(e_lhy, tiny)
};

EnergyBreakdown energy_breakdown(const MixtureParams& p, double c, double eta);
nlohmann::json to_json(const EnergyBreakdown& e);

}  // namespace bosemix
