#include "bosemix/potentials.hpp"

#include <cmath>
#include <numbers>

#include "bosemix/errors.hpp"
#include "bosemix/quadrature.hpp"
#include "bosemix/scattering.hpp"

namespace bosemix {

using nlohmann::json;
constexpr double kPi = std::numbers::pi;

std::string to_string(PotentialKind kind) {
  switch (kind) {
    case PotentialKind::kPiecewiseConstant:
      return "piecewise-constant";
    case PotentialKind::kTabulated:
      return "tabulated";
    case PotentialKind::kScaledSoft:
      return "scaled-soft";
  }
  return "?";
}

namespace {

// int_{r0}^{r1} r^p v(r) dr for a linear segment.
double segment_moment(const PotentialSegment& s, int p) {
  double slope = s.constant() ? 0.0 : (s.v1 - s.v0) / (s.r1 - s.r0);
  double c0 = s.v0 - slope * s.r0;
  auto prim = [&](double r) {
    return c0 * std::pow(r, p + 1) / (p + 1) + slope * std::pow(r, p + 2) / (p + 2);
  };
  return prim(s.r1) - prim(s.r0);
}

void require_finite(double x, const char* what) {
  if (!std::isfinite(x))
    throw ValidationError(std::string("non-finite ") + what);
}

}  // namespace

RadialPotential build_potential(std::vector<PotentialSegment> segs,
                                double support_radius, PotentialKind kind,
                                bool non_increasing, json descriptor) {
  require_finite(support_radius, "support radius");
  if (!(support_radius > 0.0))
    throw ValidationError("non-compact support: support radius must be positive and finite");
  double prev = 0.0;
  for (const auto& s : segs) {
    require_finite(s.r0, "radius");
    require_finite(s.r1, "radius");
    require_finite(s.v0, "potential value");
    require_finite(s.v1, "potential value");
    if (s.r0 != prev || !(s.r1 > s.r0))
      throw ValidationError("potential radii must start at 0 and increase strictly");
    if (s.v0 < 0.0 || s.v1 < 0.0)
      throw ValidationError("negative potential value at r = " +
                            std::to_string(s.v0 < 0.0 ? s.r0 : s.r1));
    prev = s.r1;
  }
  if (prev > support_radius * (1.0 + 1e-15))
    throw ValidationError("non-compact support: profile extends beyond support radius");
  if (non_increasing) {
    double last = INFINITY;
    for (const auto& s : segs) {
      if (s.v0 > last || s.v1 > s.v0)
        throw ValidationError("potential declared non-increasing is not");
      last = s.v1;
    }
  }
  RadialPotential v;
  v.segments_ = std::move(segs);
  v.support_radius_ = support_radius;
  v.kind_ = kind;
  v.non_increasing_ = non_increasing;
  double l1 = 0.0;
  for (const auto& s : v.segments_) l1 += segment_moment(s, 2);
  v.l1_norm_ = 4.0 * kPi * l1;
  v.descriptor_ = std::move(descriptor);
  return v;
}

double RadialPotential::operator()(double r) const {
  for (const auto& s : segments_)
    if (r >= s.r0 && r < s.r1) return s.value(r);
  if (!segments_.empty() && r == segments_.back().r1) return segments_.back().v1;
  return 0.0;
}

bool RadialPotential::is_zero() const {
  for (const auto& s : segments_)
    if (s.v0 != 0.0 || s.v1 != 0.0) return false;
  return true;
}

double RadialPotential::r_moment() const {
  double m = 0.0;
  for (const auto& s : segments_) m += segment_moment(s, 3);
  return 4.0 * kPi * m;
}

RadialPotential square_well(double v0, double radius) {
  require_finite(v0, "well depth");
  require_finite(radius, "well radius");
  if (v0 < 0.0) throw ValidationError("negative potential value in square well");
  if (!(radius > 0.0)) throw ValidationError("non-compact support: square well radius must be positive");
  json d = {{"kind", "square_well"},
            {"params", {{"V0", v0}, {"R", radius}}},
            {"support_radius", radius}};
  return build_potential({{0.0, radius, v0, v0}}, radius,
                         PotentialKind::kPiecewiseConstant, true, d);
}

RadialPotential piecewise_constant(std::span<const double> radii,
                                   std::span<const double> values,
                                   bool non_increasing) {
  if (radii.empty() || radii.size() != values.size())
    throw ValidationError("piecewise potential needs matching non-empty radii and values");
  std::vector<PotentialSegment> segs;
  double r0 = 0.0;
  for (std::size_t i = 0; i < radii.size(); ++i) {
    segs.push_back({r0, radii[i], values[i], values[i]});
    r0 = radii[i];
  }
  json d = {{"kind", "piecewise"},
            {"params",
             {{"radii", std::vector<double>(radii.begin(), radii.end())},
              {"values", std::vector<double>(values.begin(), values.end())}}},
            {"support_radius", radii.back()}};
  if (non_increasing) d["non_increasing"] = true;
  return build_potential(std::move(segs), radii.back(),
                         PotentialKind::kPiecewiseConstant, non_increasing, d);
}

RadialPotential tabulated(std::span<const double> r, std::span<const double> v,
                          bool non_increasing) {
  if (r.size() < 2 || r.size() != v.size())
    throw ValidationError("tabulated potential needs at least two matching samples");
  if (r.front() != 0.0) throw ValidationError("tabulated potential must start at r = 0");
  std::vector<PotentialSegment> segs;
  for (std::size_t i = 0; i + 1 < r.size(); ++i)
    segs.push_back({r[i], r[i + 1], v[i], v[i + 1]});
  json d = {{"kind", "tabulated"},
            {"params",
             {{"r", std::vector<double>(r.begin(), r.end())},
              {"v", std::vector<double>(v.begin(), v.end())}}},
            {"support_radius", r.back()}};
  if (non_increasing) d["non_increasing"] = true;
  return build_potential(std::move(segs), r.back(), PotentialKind::kTabulated,
                         non_increasing, d);
}

RadialPotential scaled_soft_potential(const RadialPotential& v1, double radius,
                                      double lambda) {
  if (!(radius > 0.0) || !std::isfinite(radius))
    throw ParameterError("scaled potential needs R > 0");
  if (!(lambda >= 0.0) || !std::isfinite(lambda))
    throw ParameterError("scaled potential needs lambda >= 0");
  if (v1.support_radius() > 1.0)
    throw ParameterError("base potential of a scaled family must be supported in [0, 1]");
  double amp = lambda / (radius * radius * radius);
  std::vector<PotentialSegment> segs;
  for (const auto& s : v1.segments())
    segs.push_back({s.r0 * radius, s.r1 * radius, amp * s.v0, amp * s.v1});
  json d = {{"kind", "scaled_soft"},
            {"params", {{"base", v1.descriptor()}, {"R", radius}, {"lambda", lambda}}},
            {"support_radius", radius}};
  return build_potential(std::move(segs), radius, PotentialKind::kScaledSoft,
                         v1.declared_non_increasing(), d);
}

namespace {

double number_at(const json& j, const char* key) {
  if (!j.contains(key) || !j.at(key).is_number())
    throw ValidationError(std::string("descriptor field '") + key + "' must be a number");
  return j.at(key).get<double>();
}

std::vector<double> numbers_at(const json& j, const char* key) {
  if (!j.contains(key) || !j.at(key).is_array())
    throw ValidationError(std::string("descriptor field '") + key + "' must be an array");
  std::vector<double> out;
  for (const auto& x : j.at(key)) {
    if (!x.is_number())
      throw ValidationError(std::string("descriptor field '") + key + "' holds a non-number");
    out.push_back(x.get<double>());
  }
  return out;
}

}  // namespace

RadialPotential make_potential(const json& d) {
  if (!d.is_object() || !d.contains("kind") || !d.at("kind").is_string())
    throw ValidationError("potential descriptor needs a string 'kind'");
  if (!d.contains("params") || !d.at("params").is_object())
    throw ValidationError("potential descriptor needs a 'params' object");
  if (!d.contains("support_radius") || !d.at("support_radius").is_number())
    throw ValidationError("non-compact support: descriptor lacks a finite 'support_radius'");
  const std::string kind = d.at("kind");
  const json& p = d.at("params");
  const double support = d.at("support_radius").get<double>();
  const bool monotone = d.value("non_increasing", false);
  RadialPotential v;
  if (kind == "square_well") {
    v = square_well(number_at(p, "V0"), number_at(p, "R"));
  } else if (kind == "piecewise") {
    auto radii = numbers_at(p, "radii");
    auto values = numbers_at(p, "values");
    v = piecewise_constant(radii, values, monotone);
  } else if (kind == "tabulated") {
    auto r = numbers_at(p, "r");
    auto vals = numbers_at(p, "v");
    v = tabulated(r, vals, monotone);
  } else if (kind == "scaled_soft") {
    if (!p.contains("base")) throw ValidationError("scaled_soft descriptor needs 'base'");
    v = scaled_soft_potential(make_potential(p.at("base")), number_at(p, "R"),
                              number_at(p, "lambda"));
  } else {
    throw ValidationError("unknown potential kind '" + kind + "'");
  }
  if (support != v.support_radius())
    throw ValidationError("non-compact support: declared support_radius does not match the profile");
  return v;
}

json to_json(const RadialPotential& v) { return v.descriptor(); }

double radial_moment(const RadialPotential& v, int p, double a, double b) {
  double m = 0.0;
  for (const auto& s : v.segments()) {
    double lo = std::max(a, s.r0), hi = std::min(b, s.r1);
    if (hi <= lo) continue;
    m += segment_moment({lo, hi, s.value(lo), s.value(hi)}, p);
  }
  return m;
}

double fourier_radial(const RadialPotential& v, double k) {
  if (!(k >= 0.0)) throw DomainError("fourier_radial needs k >= 0");
  CompensatedSum total;
  for (const auto& s : v.segments()) {
    if (s.v0 == 0.0 && s.v1 == 0.0) continue;
    auto f = [&](double r) {
      double x = k * r;
      double sinc = x < 1e-4 ? 1.0 - x * x / 6.0 : std::sin(x) / x;
      return r * r * s.value(r) * sinc;
    };
    // Split long oscillatory segments so each panel sees a few periods.
    int pieces = 1 + static_cast<int>(k * (s.r1 - s.r0) / (2.0 * kPi));
    std::vector<double> pts;
    for (int i = 0; i <= pieces; ++i) pts.push_back(s.r0 + (s.r1 - s.r0) * i / pieces);
    total.add(integrate_pieces(f, pts).value);
  }
  return 4.0 * kPi * total.value();
}

AssumptionReport validate_assumptions(const PotentialTriple& t,
                                      const ScatteringSolution& sa,
                                      const ScatteringSolution& sb,
                                      const ScatteringSolution& sab, double rho,
                                      double sigma) {
  if (!(sa.potential() == t.v_a) || !(sb.potential() == t.v_b) ||
      !(sab.potential() == t.v_ab))
    throw ConsistencyError("scattering solutions do not match the potential triple");
  if (!(t.c_a > 0 && t.c_1 > 0 && t.c_r > 0 && t.nu > 0 && t.eta >= 0))
    throw ParameterError("assumption constants must be positive (eta >= 0)");
  if (!(sigma > 0)) throw ParameterError("softness exponent sigma must be positive");
  if (!(rho > 0)) throw ParameterError("density must be positive");

  AssumptionReport r;
  r.rho = rho;
  r.sigma = sigma;
  r.a_a = sa.a();
  r.a_b = sb.a();
  r.a_ab = sab.a();
  r.a_bar = std::max({r.a_a, r.a_b, r.a_ab});
  r.a_under = std::min({r.a_a, r.a_b, r.a_ab});
  r.miscibility_margin = r.a_a * r.a_b - r.a_ab * r.a_ab;
  r.miscibility_ok = r.miscibility_margin >= 0.0;
  r.ratio_margin = t.c_a * r.a_under - r.a_bar;
  r.ratio_ok = r.ratio_margin >= 0.0;
  double l1 = std::max({t.v_a.l1_norm(), t.v_b.l1_norm(), t.v_ab.l1_norm()});
  r.l1_margin = t.c_1 * r.a_bar - l1;
  r.l1_ok = r.l1_margin >= 0.0;
  double gas = rho * std::pow(r.a_bar, 3);
  double reach = std::max({t.v_a.support_radius(), t.v_b.support_radius(),
                           t.v_ab.support_radius()});
  r.range_margin = t.c_r * std::pow(gas, -t.eta) * r.a_bar - reach;
  r.range_ok = r.range_margin >= 0.0;
  auto delta = [](const RadialPotential& v, const ScatteringSolution& s) {
    return std::abs(fourier_radial(v, 0.0) - s.g_hat(0.0));
  };
  r.delta_a = delta(t.v_a, sa);
  r.delta_b = delta(t.v_b, sb);
  r.delta_ab = delta(t.v_ab, sab);
  double w = std::pow(gas, sigma);
  r.soft_a = r.delta_a <= r.a_a * w;
  r.soft_b = r.delta_b <= r.a_b * w;
  r.soft_ab = r.delta_ab <= r.a_ab * w;
  return r;
}

json to_json(const AssumptionReport& r) {
  return {{"a_a", r.a_a},
          {"a_b", r.a_b},
          {"a_ab", r.a_ab},
          {"a_bar", r.a_bar},
          {"a_under", r.a_under},
          {"miscibility_ok", r.miscibility_ok},
          {"miscibility_margin", r.miscibility_margin},
          {"ratio_ok", r.ratio_ok},
          {"ratio_margin", r.ratio_margin},
          {"l1_ok", r.l1_ok},
          {"l1_margin", r.l1_margin},
          {"range_ok", r.range_ok},
          {"range_margin", r.range_margin},
          {"delta_a", r.delta_a},
          {"delta_b", r.delta_b},
          {"delta_ab", r.delta_ab},
          {"soft_a", r.soft_a},
          {"soft_b", r.soft_b},
          {"soft_ab", r.soft_ab},
          {"rho", r.rho},
          {"sigma", r.sigma}};
}

}  // namespace bosemix
