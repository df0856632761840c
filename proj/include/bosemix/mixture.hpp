#pragma once

#include <Eigen/Dense>

#include <functional>
#include <memory>

namespace bosemix {

class ScatteringSolution;

using Mat2 = Eigen::Matrix2d;
using Vec2 = Eigen::Vector2d;

// Momentum-space coupling k -> g-hat(k). Either the constant surrogate
// 8 pi a or a solved scattering profile.
class Coupling {
 public:
  Coupling() = default;
  static Coupling constant(double value);
  static Coupling from_solution(std::shared_ptr<const ScatteringSolution> sol);

  double operator()(double k) const { return f_ ? f_(k) : value_; }
  double at_zero() const { return value_; }
  bool is_constant() const { return !f_; }
  const ScatteringSolution* solution() const { return sol_.get(); }

 private:
  double value_ = 0.0;
  std::function<double(double)> f_;
  std::shared_ptr<const ScatteringSolution> sol_;
};

struct MixtureParams {
  double rho_a = 0, rho_b = 0;
  double a_a = 0, a_b = 0, a_ab = 0;
  Coupling g_a, g_b, g_ab;

  // Couplings fixed at 8 pi a_#.
  static MixtureParams constant_coupling(double rho_a, double rho_b, double a_a,
                                         double a_b, double a_ab);
  // Same lengths and couplings at new densities.
  MixtureParams with_densities(double rho_a, double rho_b) const;

  double rho() const { return rho_a + rho_b; }
  double a_bar() const;
  double a_under() const;
  bool miscible() const { return a_ab * a_ab <= a_a * a_b; }
};

Mat2 coupling_matrix(const MixtureParams& p, double k);

struct LambdaPair {
  double plus = 0, minus = 0;
};

// Closed-form eigenvalues of a symmetric 2x2 matrix, plus >= minus.
LambdaPair lambda_pm(const Mat2& b);
LambdaPair lambda_pm(const MixtureParams& p, double k);

// Rows are the eigenvectors of b for (lambda+, lambda-): U b U^T = diag.
Mat2 rotation_for(const Mat2& b);

struct BogoliubovMode {
  double k = 0, tau = 0;
  Mat2 b = Mat2::Zero();
  double lambda_plus = 0, lambda_minus = 0;
  Mat2 u = Mat2::Identity();
  Vec2 d_diag = Vec2::Zero();
  Vec2 beta_diag = Vec2::Zero();
  Mat2 alpha = Mat2::Zero();
  Mat2 gamma = Mat2::Zero();
  // lambda- < 0: outside the regime the diagonalization is meant for.
  bool flagged = false;

  Mat2 d() const { return u.transpose() * d_diag.asDiagonal() * u; }
  Mat2 beta() const { return u.transpose() * beta_diag.asDiagonal() * u; }
};

BogoliubovMode diagonalize_mode(const Mat2& b, double k, double tau);
BogoliubovMode diagonalize_mode(const MixtureParams& p, double k, double tau);

struct Minimizers {
  Mat2 alpha, gamma;
};

// alpha = -(1 - beta^2)^{-1} beta, gamma = (1 - beta^2)^{-1} beta^2.
Minimizers explicit_minimizers(const BogoliubovMode& mode);

double xi_ab(double rho_a, double rho_b, double a_a, double a_b, double a_ab);
double xi_ab(const MixtureParams& p);

struct MuPair {
  double plus = 0, minus = 0;
};
MuPair mu_pm(double xi);

}  // namespace bosemix
