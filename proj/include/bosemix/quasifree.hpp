#pragma once

#include <json.hpp>

#include <array>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "bosemix/boxsum.hpp"
#include "bosemix/mixture.hpp"

namespace bosemix {

class ScatteringSolution;

struct ModeRecord {
  std::int64_t n = 0;  // |m|^2 on the lattice
  double k = 0;
  double weight = 0;   // shell multiplicity
  Mat2 alpha = Mat2::Zero();
  Mat2 gamma = Mat2::Zero();
};

// Quasi-free data on the shells of a finite momentum lattice.
struct QuasiFreeState {
  LatticeKind kind = LatticeKind::kPeriodic;
  double side = 1.0;
  double k_max = 0.0;
  double n0_a = 0.0, n0_b = 0.0;
  std::vector<ModeRecord> modes;

  double volume() const { return side * side * side; }
  MomentumLattice lattice() const { return {kind, side, k_max}; }
  // Condensate densities n0 / |Lambda|.
  double rho0_a() const { return n0_a / volume(); }
  double rho0_b() const { return n0_b / volume(); }
  // Sum of gamma over all lattice points (weights applied).
  Mat2 gamma_sum() const;
};

// Explicit minimizers at condensate counts (n0_a, n0_b) on every shell.
QuasiFreeState explicit_state(const MixtureParams& p, const MomentumLattice& lat,
                              double n0_a, double n0_b);
QuasiFreeState vacuum_state(const MomentumLattice& lat, double n0_a, double n0_b);

// [[gamma, alpha], [alpha, gamma + I]] >= 0 up to tol.
bool mode_admissible(const Mat2& alpha, const Mat2& gamma, double tol = 1e-12);
// Throws AdmissibilityError naming the first violating mode.
void check_admissible(const QuasiFreeState& s);

// Sum_k w_k [Tr((k^2 + B0) gamma) + Tr(B0 alpha)], B0 the coupling matrix at
// the condensate densities of the state.
double bogoliubov_functional(const QuasiFreeState& s, const MixtureParams& p);

// Per-mode functional f(S) = Tr((tau + B) gamma) + Tr(B alpha) with
// gamma = sinh^2(S/2), alpha = sinh(S/2) cosh(S/2); S = [[x, z], [z, y]].
struct ModeObjective {
  double value;
  std::array<double, 3> gradient;  // d/dx, d/dy, d/dz
};
ModeObjective mode_objective(const std::array<double, 3>& s, const Mat2& b,
                             double tau);
Minimizers minimizers_from_s(const std::array<double, 3>& s);

struct ModeMinimum {
  Mat2 alpha, gamma;
  std::array<double, 3> s;
  double value = 0;
  double closed_form = 0;  // 1/2 sum_pm (sqrt(tau^2 + 2 lambda tau) - tau - lambda)
  int iterations = 0;
  double gradient_norm = 0;
};

// Quasi-Newton minimization of the per-mode functional at tau = k^2.
ModeMinimum minimize_per_mode(const MixtureParams& p, double k);
ModeMinimum minimize_mode(const Mat2& b, double tau);

struct Depletion {
  double aa = 0, bb = 0, ab = 0;
};
// Sum of gamma over the infinite lattice (shell region plus k^-4 tail),
// minimizers at the densities of p.
Depletion depletion(const MixtureParams& p, const MomentumLattice& lat);

struct ExponentFit {
  std::vector<double> rho_abar3;
  std::vector<double> per_volume;  // (sum gamma_AA + gamma_BB) / |Lambda|
  double exponent = 0;             // slope against rho a_bar
};
// p's lengths and density split, total density swept over rho a_bar^3.
ExponentFit depletion_exponent(const MixtureParams& p,
                               const std::vector<double>& rho_abar3, double side);

// N0 fixed point N0 = N - Sum gamma(N0), damped by 1/2.
QuasiFreeState fix_condensate(const MixtureParams& p, const MomentumLattice& lat);

struct FunctionalValue {
  double total = 0;
  std::vector<std::pair<std::string, double>> terms;       // additive parts
  std::vector<std::pair<std::string, double>> aggregates;  // K_bog, E_tilde
  // L0^{N0}(v) + L2^(0) + L4^(0) - L0^{N}(v), relative.
  double identity_residual = 0;
  double get(const std::string& name) const;
};

// Energy bookkeeping of the quasi-free trial state: L0^N(g), L2^gamma(v omega),
// L0^{N0}(g omega), K^Bog and the remainder E~, the quartic forms evaluated as
// double sums over the lattice points inside k_max.
FunctionalValue upper_bound_energy(const QuasiFreeState& s, const MixtureParams& p,
                                   const std::array<const ScatteringSolution*, 3>& sols);

nlohmann::json to_json(const FunctionalValue& f);

}  // namespace bosemix
