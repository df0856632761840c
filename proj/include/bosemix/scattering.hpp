#pragma once

#include <json.hpp>

#include <functional>
#include <iosfwd>
#include <vector>

#include "bosemix/potentials.hpp"

namespace bosemix {

struct GridConfig {
  // Largest radial step as a fraction of the support radius.
  double resolution = 1e-3;
  std::size_t max_steps = 20'000'000;
};

// Zero-energy scattering data of one potential. The radial function
// u(r) = r phi(r) is stored on a grid normalized so that u = r - a outside
// the support; values between nodes come from the same one-step propagator
// that produced them.
class ScatteringSolution {
 public:
  double a() const { return a_; }
  const RadialPotential& potential() const { return v_; }
  double support_radius() const { return v_.support_radius(); }
  double r_max() const { return r_.back(); }

  const std::vector<double>& radial_grid() const { return r_; }
  std::vector<double> phi() const;
  std::vector<double> omega() const;
  std::vector<double> g() const;

  double phi_at(double r) const;
  double dphi_at(double r) const;

  // g-hat(k) = 4 pi int r^2 v phi sinc(kr) dr; g-hat(0) = 8 pi a.
  double g_hat(double k) const;
  // (g omega)-hat(0) = 4 pi int r^2 v phi (1 - phi) dr.
  double g_omega_moment() const { return g_omega_moment_; }
  double g_omega_hat(double k) const;
  // (v omega)-hat(k) = v-hat(k) - g-hat(k).
  double v_omega_hat(double k) const;
  // 4 pi int r^3 |g| dr, for the decay bound |g-hat(k)| <= it / k.
  double g_r_moment() const;

  struct TableEntry {
    double k, value;
  };
  const std::vector<TableEntry>& g_hat_table() const { return table_; }

 private:
  friend ScatteringSolution solve_scattering(const RadialPotential&,
                                             const GridConfig&);
  struct Sample {
    double u, du;
  };
  Sample state_at(double r) const;
  double integrate_interior(const std::function<double(double)>& f) const;

  RadialPotential v_;
  double a_ = 0.0;
  std::vector<double> r_;
  std::vector<double> u_, du_;
  std::vector<PotentialSegment> segs_;  // profile plus a zero gap up to R
  std::vector<int> seg_;                 // segment per step, -1 outside R
  std::vector<std::size_t> node_r0_, node_r1_;
  double g_omega_moment_ = 0.0;
  std::vector<TableEntry> table_;
};

ScatteringSolution solve_scattering(const RadialPotential& v,
                                    const GridConfig& cfg = {});

inline double g_hat(const ScatteringSolution& s, double k) { return s.g_hat(k); }
inline double g_omega_moment(const ScatteringSolution& s) {
  return s.g_omega_moment();
}

// Born approximation of 8 pi a: order 1 is v-hat(0), order 2 adds
// -(1/2) int int v(x) v(y) / (4 pi |x - y|).
double born_series(const RadialPotential& v, int order);

nlohmann::json to_json(const ScatteringSolution& s);
void write_profile_csv(const ScatteringSolution& s, std::ostream& out);

}  // namespace bosemix
