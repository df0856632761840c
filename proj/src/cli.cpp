#include "bosemix/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <ostream>
#include <sstream>

#include "bosemix/boxsum.hpp"
#include "bosemix/errors.hpp"
#include "bosemix/lhy.hpp"
#include "bosemix/mixture.hpp"
#include "bosemix/parallel.hpp"
#include "bosemix/potentials.hpp"
#include "bosemix/quasifree.hpp"
#include "bosemix/scattering.hpp"
#include "bosemix/table.hpp"
#include "bosemix/thermo.hpp"

namespace bosemix {

SeededUniform::SeededUniform(std::uint64_t seed) : engine_(seed) {}

double SeededUniform::operator()() {
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

namespace {

using nlohmann::json;

struct RunConfig {
  std::string command;
  std::string config_path;
  std::string out_path;
  std::string format = "csv";
  std::uint64_t seed = 0;
  std::optional<double> eta, kz;
};

json read_config(const std::string& path) {
  if (path.empty()) throw ValidationError("--config is required");
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open config " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  try {
    return json::parse(buf.str());
  } catch (const json::parse_error& e) {
    throw ValidationError("malformed JSON in " + path + " at byte " +
                          std::to_string(e.byte) + ": " + e.what());
  }
}

double num(const json& j, const char* key) {
  if (!j.contains(key) || !j[key].is_number())
    throw ValidationError(std::string("config needs a number '") + key + "'");
  return j[key].get<double>();
}

double num_or(const json& j, const char* key, double fallback) {
  if (!j.contains(key)) return fallback;
  return num(j, key);
}

// Either an explicit array or {"start", "stop", "count", "log"}.
std::vector<double> grid(const json& j, const char* key) {
  if (!j.contains(key)) throw ValidationError(std::string("config needs '") + key + "'");
  const json& g = j[key];
  std::vector<double> out;
  if (g.is_array()) {
    for (const auto& x : g) {
      if (!x.is_number()) throw ValidationError(std::string("'") + key + "' holds a non-number");
      out.push_back(x.get<double>());
    }
  } else if (g.is_object()) {
    double a = num(g, "start"), b = num(g, "stop");
    int n = static_cast<int>(num(g, "count"));
    bool log = g.value("log", false);
    if (n < 1) throw ValidationError(std::string("'") + key + "' count must be >= 1");
    if (log && (a <= 0 || b <= 0)) throw ValidationError("log grid needs positive ends");
    for (int i = 0; i < n; ++i) {
      double t = n == 1 ? 0.0 : static_cast<double>(i) / (n - 1);
      out.push_back(log ? std::exp(std::log(a) + t * (std::log(b) - std::log(a)))
                        : a + t * (b - a));
    }
  } else {
    throw ValidationError(std::string("'") + key + "' must be an array or a range object");
  }
  if (out.empty()) throw ValidationError(std::string("'") + key + "' is empty");
  return out;
}

GridConfig grid_config(const json& j) {
  GridConfig g;
  g.resolution = num_or(j, "resolution", g.resolution);
  if (!(g.resolution > 0)) throw ValidationError("resolution must be positive");
  return g;
}

// Scattering lengths in absolute units, from explicit values or by solving.
struct Lengths {
  double a_a = 0, a_b = 0, a_ab = 0;
  bool from_potentials = false;
  std::array<std::shared_ptr<const ScatteringSolution>, 3> sols;
  double a_bar() const { return std::max({a_a, a_b, a_ab}); }
};

Lengths lengths(const json& cfg) {
  Lengths l;
  if (cfg.contains("lengths")) {
    const json& j = cfg["lengths"];
    l.a_a = num(j, "a_a");
    l.a_b = num(j, "a_b");
    l.a_ab = num(j, "a_ab");
    if (l.a_a < 0 || l.a_b < 0 || l.a_ab < 0)
      throw ValidationError("scattering lengths must be nonnegative");
  } else if (cfg.contains("potentials")) {
    const json& j = cfg["potentials"];
    auto cfg_grid = grid_config(cfg);
    const char* keys[3] = {"a", "b", "ab"};
    for (int i = 0; i < 3; ++i) {
      if (!j.contains(keys[i]))
        throw ValidationError(std::string("potentials need '") + keys[i] + "'");
      l.sols[i] = std::make_shared<ScatteringSolution>(
          solve_scattering(make_potential(j[keys[i]]), cfg_grid));
    }
    l.a_a = l.sols[0]->a();
    l.a_b = l.sols[1]->a();
    l.a_ab = l.sols[2]->a();
    l.from_potentials = true;
  } else {
    throw ValidationError("config needs 'lengths' or 'potentials'");
  }
  if (!(l.a_bar() > 0)) throw ValidationError("at least one scattering length must be positive");
  return l;
}

// Densities as rho a_bar^3: either rho_a/rho_b or rho with fraction_a.
std::pair<double, double> densities(const json& cfg) {
  if (cfg.contains("rho_a_abar3") || cfg.contains("rho_b_abar3"))
    return {num_or(cfg, "rho_a_abar3", 0.0), num_or(cfg, "rho_b_abar3", 0.0)};
  double rho = num(cfg, "rho_abar3");
  double f = num_or(cfg, "fraction_a", 0.5);
  if (f < 0 || f > 1) throw ValidationError("fraction_a must lie in [0, 1]");
  return {f * rho, (1 - f) * rho};
}

// Mixture with lengths and densities in a_bar units.
MixtureParams unit_mixture(const Lengths& l, double xa, double xb) {
  if (xa < 0 || xb < 0) throw ValidationError("densities must be nonnegative");
  double ab = l.a_bar();
  return MixtureParams::constant_coupling(xa, xb, l.a_a / ab, l.a_b / ab, l.a_ab / ab);
}

void emit(const Table& t, const RunConfig& rc, std::ostream& out) {
  std::ofstream file;
  std::ostream* dst = &out;
  if (!rc.out_path.empty()) {
    file.open(rc.out_path);
    if (!file) throw ValidationError("cannot write " + rc.out_path);
    dst = &file;
  }
  if (rc.format == "json")
    *dst << t.to_json().dump(2) << "\n";
  else
    t.write_csv(*dst);
}

Table one_row(const json& obj) {
  std::vector<std::string> cols;
  std::vector<Cell> row;
  for (const auto& [k, v] : obj.items()) {
    cols.push_back(k);
    if (v.is_boolean())
      row.emplace_back(v.get<bool>());
    else if (v.is_number_integer())
      row.emplace_back(v.get<std::int64_t>());
    else if (v.is_number())
      row.emplace_back(v.get<double>());
    else if (v.is_null())
      row.emplace_back(std::nan(""));
    else
      row.emplace_back(v.is_string() ? v.get<std::string>() : v.dump());
  }
  Table t(cols);
  t.add_row(std::move(row));
  return t;
}

int cmd_scatter(const RunConfig& rc, std::ostream& out) {
  json cfg = read_config(rc.config_path);
  if (!cfg.contains("potential")) throw ValidationError("config needs 'potential'");
  auto v = make_potential(cfg["potential"]);
  auto sol = solve_scattering(v, grid_config(cfg));
  const double pi = std::acos(-1.0);
  double g0 = sol.g_hat(0.0);
  double a = sol.a();
  double residual = a > 0 ? std::abs(g0 - 8 * pi * a) / (8 * pi * a) : std::abs(g0);
  double delta = std::abs(fourier_radial(v, 0.0) - g0);
  if (!rc.out_path.empty()) {
    std::ofstream js(rc.out_path + ".json");
    std::ofstream csv(rc.out_path + ".csv");
    if (!js || !csv) throw ValidationError("cannot write " + rc.out_path + ".{json,csv}");
    js << to_json(sol).dump(2) << "\n";
    write_profile_csv(sol, csv);
  }
  Table t({"a", "g_hat0", "residual_8pi_a", "delta"});
  t.add_row({a, g0, residual, delta});
  RunConfig to_stdout = rc;
  to_stdout.out_path.clear();
  emit(t, to_stdout, out);
  return kExitOk;
}

int cmd_energy(const RunConfig& rc, std::ostream& out) {
  json cfg = read_config(rc.config_path);
  auto l = lengths(cfg);
  auto [xa, xb] = densities(cfg);
  double c = num_or(cfg, "c", 1.0);
  double eta = rc.eta.value_or(num_or(cfg, "eta", 0.0));
  auto p = unit_mixture(l, xa, xb);
  if (!p.miscible())
    throw MiscibilityError("a_AB^2 > a_A a_B: the mixture is not miscible");
  auto e = energy_breakdown(p, c, eta);
  Table t({"rho_a_abar3", "rho_b_abar3", "a_a", "a_b", "a_ab", "e_main", "e_lhy",
           "e_lhy_alternative", "form_residual", "xi", "mu_plus", "mu_minus", "i_ab",
           "error_budget"});
  t.add_row({xa, xb, p.a_a, p.a_b, p.a_ab, e.e_main, e.e_lhy, e.e_lhy_alternative,
             e.form_residual, e.xi, e.mu_plus, e.mu_minus, e.i_ab, e.error_budget});
  emit(t, rc, out);
  return kExitOk;
}

int cmd_scan(const RunConfig& rc, std::ostream& out) {
  json cfg = read_config(rc.config_path);
  auto l = lengths(cfg);
  double ab = l.a_bar();
  std::string mode = cfg.value("mode", "phase");
  if (mode == "phase") {
    double c = num_or(cfg, "c", 1.0);
    double eta = rc.eta.value_or(num_or(cfg, "eta", 0.0));
    auto t = phase_scan(grid(cfg, "rho_a_abar3"), grid(cfg, "rho_b_abar3"), l.a_a / ab,
                        l.a_b / ab, l.a_ab / ab, c, eta);
    emit(t, rc, out);
    return kExitOk;
  }
  if (mode == "convexity") {
    GrandFunctionalParams gp;
    gp.a_a = l.a_a / ab;
    gp.a_b = l.a_b / ab;
    gp.a_ab = l.a_ab / ab;
    gp.rho = num(cfg, "rho_abar3");
    gp.volume = num(cfg, "volume_abar3");
    gp.c = num_or(cfg, "c", 1.0);
    gp.k_z = rc.kz.value_or(num_or(cfg, "k_z", 10.0));
    gp.convexifier = cfg.value("convexifier", true);
    int n = static_cast<int>(num_or(cfg, "grid", 50));
    auto rep = convexity_scan(gp, n);
    emit(one_row(to_json(rep)), rc, out);
    return kExitOk;
  }
  throw ValidationError("scan mode must be 'phase' or 'convexity'");
}

LatticeKind lattice_kind(const std::string& s) {
  if (s == "periodic") return LatticeKind::kPeriodic;
  if (s == "neumann") return LatticeKind::kNeumann;
  if (s == "neumann_signed") return LatticeKind::kNeumannSigned;
  throw ValidationError("lattice kind must be periodic, neumann or neumann_signed");
}

int cmd_boxsum(const RunConfig& rc, std::ostream& out) {
  json cfg = read_config(rc.config_path);
  std::string report = cfg.value("report", "sum_vs_integral");
  if (report == "g_omega") {
    if (!cfg.contains("potential")) throw ValidationError("config needs 'potential'");
    auto sol = solve_scattering(make_potential(cfg["potential"]), grid_config(cfg));
    auto ells = grid(cfg, "ells");
    Table t({"ell", "g_omega", "g_omega_moment", "difference", "scaled"});
    std::vector<GOmegaResult> res(ells.size());
    parallel_for(ells.size(), [&](std::size_t i) { res[i] = g_omega_lattice(sol, ells[i]); });
    for (std::size_t i = 0; i < ells.size(); ++i)
      t.add_row({ells[i], res[i].g_omega, res[i].g_omega_moment, res[i].difference,
                 res[i].scaled});
    emit(t, rc, out);
    return kExitOk;
  }
  if (report != "sum_vs_integral")
    throw ValidationError("boxsum report must be 'sum_vs_integral' or 'g_omega'");
  auto l = lengths(cfg);
  auto [xa, xb] = densities(cfg);
  auto p = unit_mixture(l, xa, xb);
  auto rep = sum_vs_integral_report(p, grid(cfg, "sides_abar"),
                                    lattice_kind(cfg.value("kind", "periodic")));
  if (rc.format == "json") {
    json j = {{"table", rep.table.to_json()}, {"fitted_order", rep.fitted_order}};
    if (rc.out_path.empty()) {
      out << j.dump(2) << "\n";
    } else {
      std::ofstream f(rc.out_path);
      f << j.dump(2) << "\n";
    }
    return kExitOk;
  }
  emit(rep.table, rc, out);
  return kExitOk;
}

int cmd_minimize(const RunConfig& rc, std::ostream& out) {
  json cfg = read_config(rc.config_path);
  auto l = lengths(cfg);
  auto [xa, xb] = densities(cfg);
  auto p = unit_mixture(l, xa, xb);
  std::vector<double> ks;
  if (cfg.contains("k")) {
    ks = grid(cfg, "k");
  } else {
    int n = static_cast<int>(num(cfg, "samples"));
    if (!cfg.contains("k_range") || !cfg["k_range"].is_array() || cfg["k_range"].size() != 2)
      throw ValidationError("random sampling needs 'k_range': [k_min, k_max]");
    double lo = cfg["k_range"][0].get<double>(), hi = cfg["k_range"][1].get<double>();
    if (!(lo > 0 && hi > lo)) throw ValidationError("k_range needs 0 < k_min < k_max");
    SeededUniform u(rc.seed);
    for (int i = 0; i < n; ++i) ks.push_back(lo * std::pow(hi / lo, u()));
  }
  struct Row {
    double lp, lm, value, closed, rel, diff;
    int iter;
  };
  std::vector<Row> rows(ks.size());
  parallel_for(ks.size(), [&](std::size_t i) {
    double k = ks[i];
    auto mode = diagonalize_mode(p, k, k * k);
    auto mm = explicit_minimizers(mode);
    auto num_min = minimize_per_mode(p, k);
    double diff = std::max((num_min.alpha - mm.alpha).cwiseAbs().maxCoeff(),
                           (num_min.gamma - mm.gamma).cwiseAbs().maxCoeff());
    double rel = num_min.closed_form != 0
                     ? std::abs(num_min.value - num_min.closed_form) / std::abs(num_min.closed_form)
                     : std::abs(num_min.value);
    rows[i] = {mode.lambda_plus, mode.lambda_minus, num_min.value, num_min.closed_form, rel, diff,
               num_min.iterations};
  });
  Table t({"k", "lambda_plus", "lambda_minus", "value", "closed_form", "value_rel_diff",
           "max_entry_diff", "iterations"});
  for (std::size_t i = 0; i < ks.size(); ++i)
    t.add_row({ks[i], rows[i].lp, rows[i].lm, rows[i].value, rows[i].closed, rows[i].rel,
               rows[i].diff, static_cast<std::int64_t>(rows[i].iter)});
  emit(t, rc, out);
  return kExitOk;
}

int cmd_validate(const RunConfig& rc, std::ostream& out) {
  json cfg = read_config(rc.config_path);
  if (!cfg.contains("potentials")) throw ValidationError("config needs 'potentials'");
  auto l = lengths(cfg);
  PotentialTriple tri{l.sols[0]->potential(), l.sols[1]->potential(), l.sols[2]->potential()};
  tri.c_a = num_or(cfg, "c_a", tri.c_a);
  tri.c_1 = num_or(cfg, "c_1", tri.c_1);
  tri.c_r = num_or(cfg, "c_r", tri.c_r);
  tri.eta = rc.eta.value_or(num_or(cfg, "eta", tri.eta));
  tri.nu = num_or(cfg, "nu", tri.nu);
  double ab = l.a_bar();
  double rho = num(cfg, "rho_abar3") / (ab * ab * ab);
  auto rep = validate_assumptions(tri, *l.sols[0], *l.sols[1], *l.sols[2], rho,
                                  num_or(cfg, "sigma", 0.5));
  emit(one_row(to_json(rep)), rc, out);
  return kExitOk;
}

}  // namespace

int run_cli(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
  CLI::App app{"bosemix: energetics of dilute two-species Bose gases"};
  app.name(args.empty() ? "bosemix" : args.front());
  app.require_subcommand(1);
  RunConfig rc;
  double eta = 0, kz = 0;
  const std::pair<const char*, const char*> subs[] = {
      {"scatter", "solve the zero-energy scattering problem"},
      {"energy", "mean-field and LHY energy of a mixture"},
      {"scan", "phase table or convexity scan"},
      {"boxsum", "lattice sums against their integrals"},
      {"minimize", "per-mode minimization of the Bogoliubov functional"},
      {"validate", "check the assumptions on a potential triple"}};
  std::vector<std::pair<CLI::Option*, CLI::Option*>> flags;
  for (const auto& [name, help] : subs) {
    auto* sub = app.add_subcommand(name, help);
    sub->add_option("--config", rc.config_path, "JSON config file")->required();
    sub->add_option("--out", rc.out_path, "output path (scatter: file prefix)");
    sub->add_option("--format", rc.format, "csv or json")
        ->check(CLI::IsMember({"csv", "json"}));
    sub->add_option("--seed", rc.seed, "seed for randomized sampling");
    auto* e = sub->add_option("--eta", eta, "error exponent eta");
    auto* k = sub->add_option("--kz", kz, "regime constant K_z");
    flags.emplace_back(e, k);
    sub->callback([&rc, name = std::string(name)] { rc.command = name; });
  }
  std::vector<std::string> rev(args.begin() + (args.empty() ? 0 : 1), args.end());
  std::reverse(rev.begin(), rev.end());
  try {
    app.parse(rev);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitValidation;
  }
  for (const auto& [e, k] : flags) {
    if (e->count()) rc.eta = eta;
    if (k->count()) rc.kz = kz;
  }
  const std::map<std::string, std::function<int(const RunConfig&, std::ostream&)>> table = {
      {"scatter", cmd_scatter}, {"energy", cmd_energy},     {"scan", cmd_scan},
      {"boxsum", cmd_boxsum},   {"minimize", cmd_minimize}, {"validate", cmd_validate}};
  try {
    return table.at(rc.command)(rc, out);
  } catch (const MiscibilityError& e) {
    err << "miscibility: " << e.what() << "\n";
    return kExitMiscibility;
  } catch (const ValidationError& e) {
    err << "validation: " << e.what() << "\n";
    return kExitValidation;
  } catch (const ParameterError& e) {
    err << "parameter: " << e.what() << "\n";
    return kExitValidation;
  } catch (const DomainError& e) {
    err << "domain: " << e.what() << "\n";
    return kExitValidation;
  } catch (const nlohmann::json::exception& e) {
    err << "validation: " << e.what() << "\n";
    return kExitValidation;
  } catch (const std::exception& e) {
    err << "solver: " << e.what() << "\n";
    return kExitSolver;
  }
}

}  // namespace bosemix
