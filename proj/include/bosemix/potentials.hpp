#pragma once

#include <json.hpp>

#include <span>
#include <string>
#include <vector>

namespace bosemix {

class ScatteringSolution;

enum class PotentialKind { kPiecewiseConstant, kTabulated, kScaledSoft };

std::string to_string(PotentialKind kind);

// v is linear on [r0, r1]; piecewise-constant segments have v0 == v1.
struct PotentialSegment {
  double r0, r1, v0, v1;

  double value(double r) const {
    if (v0 == v1) return v0;
    return v0 + (v1 - v0) * (r - r0) / (r1 - r0);
  }
  bool constant() const { return v0 == v1; }
  bool operator==(const PotentialSegment&) const = default;
};

// A nonnegative radial potential with compact support, stored as contiguous
// linear segments starting at r = 0. Units: hbar = 1, 2m = 1.
class RadialPotential {
 public:
  RadialPotential() = default;

  double operator()(double r) const;
  double support_radius() const { return support_radius_; }
  // 4 pi int r^2 v(r) dr, exact per segment.
  double l1_norm() const { return l1_norm_; }
  PotentialKind kind() const { return kind_; }
  std::span<const PotentialSegment> segments() const { return segments_; }
  bool is_zero() const;
  bool declared_non_increasing() const { return non_increasing_; }
  // 4 pi int r^3 v(r) dr; used for the Riemann-Lebesgue bound on v-hat.
  double r_moment() const;

  const nlohmann::json& descriptor() const { return descriptor_; }

  bool operator==(const RadialPotential& o) const {
    return segments_ == o.segments_ && support_radius_ == o.support_radius_;
  }

 private:
  friend RadialPotential build_potential(std::vector<PotentialSegment>, double,
                                         PotentialKind, bool, nlohmann::json);
  std::vector<PotentialSegment> segments_;
  double support_radius_ = 0.0;
  double l1_norm_ = 0.0;
  PotentialKind kind_ = PotentialKind::kPiecewiseConstant;
  bool non_increasing_ = false;
  nlohmann::json descriptor_;
};

RadialPotential square_well(double v0, double radius);
// values[i] holds on [radii[i-1], radii[i]) with radii[-1] = 0.
RadialPotential piecewise_constant(std::span<const double> radii,
                                   std::span<const double> values,
                                   bool non_increasing = false);
// Linear interpolation between samples; r.front() must be 0.
RadialPotential tabulated(std::span<const double> r,
                          std::span<const double> v,
                          bool non_increasing = false);
// x -> (lambda / R^3) v1(|x| / R); v1 must be supported in [0, 1].
RadialPotential scaled_soft_potential(const RadialPotential& v1, double radius,
                                      double lambda);

// Descriptor: {"kind": "square_well"|"piecewise"|"tabulated"|"scaled_soft",
//              "params": {...}, "support_radius": R}
RadialPotential make_potential(const nlohmann::json& descriptor);
nlohmann::json to_json(const RadialPotential& v);

// int_a^b r^p v(r) dr, exact for the linear segments.
double radial_moment(const RadialPotential& v, int p, double a, double b);

// v-hat(k) = (4 pi / k) int r sin(kr) v(r) dr, by adaptive quadrature.
double fourier_radial(const RadialPotential& v, double k);

struct PotentialTriple {
  RadialPotential v_a, v_b, v_ab;
  double c_a = 1.0;
  double c_1 = 1.0;
  double c_r = 1.0;
  double eta = 0.0;
  double nu = 1.0;
};

struct AssumptionReport {
  double a_a = 0, a_b = 0, a_ab = 0;
  double a_bar = 0, a_under = 0;
  bool miscibility_ok = false;
  double miscibility_margin = 0;  // a_A a_B - a_AB^2
  bool ratio_ok = false;          // a_bar <= C_a a_under
  double ratio_margin = 0;        // C_a a_under - a_bar
  bool l1_ok = false;             // max ||v||_1 <= C_1 a_bar
  double l1_margin = 0;
  bool range_ok = false;          // max R <= C_R (rho a_bar^3)^-eta a_bar
  double range_margin = 0;
  double delta_a = 0, delta_b = 0, delta_ab = 0;
  bool soft_a = false, soft_b = false, soft_ab = false;
  double sigma = 0;
  double rho = 0;
};

AssumptionReport validate_assumptions(const PotentialTriple& triple,
                                      const ScatteringSolution& sol_a,
                                      const ScatteringSolution& sol_b,
                                      const ScatteringSolution& sol_ab,
                                      double rho, double sigma);

nlohmann::json to_json(const AssumptionReport& r);

}  // namespace bosemix
