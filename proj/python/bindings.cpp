// Python bindings. Structured results cross the boundary as JSON and come
// back as plain dicts and lists.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <json.hpp>

#include <sstream>

#include "bosemix/boxsum.hpp"
#include "bosemix/cli.hpp"
#include "bosemix/errors.hpp"
#include "bosemix/lhy.hpp"
#include "bosemix/mixture.hpp"
#include "bosemix/potentials.hpp"
#include "bosemix/quasifree.hpp"
#include "bosemix/scattering.hpp"
#include "bosemix/thermo.hpp"

namespace py = pybind11;
using namespace bosemix;

namespace {

py::object to_py(const nlohmann::json& j) {
  return py::module_::import("json").attr("loads")(j.dump());
}

nlohmann::json from_py(const py::object& o) {
  return nlohmann::json::parse(py::module_::import("json").attr("dumps")(o).cast<std::string>());
}

MixtureParams mixture(double rho_a, double rho_b, double a_a, double a_b, double a_ab) {
  return MixtureParams::constant_coupling(rho_a, rho_b, a_a, a_b, a_ab);
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Energetics of dilute two-component Bose gases";
  m.attr("LHY_CONSTANT") = kLhyConstant;

  auto base = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<ValidationError>(m, "ValidationError", base.ptr());
  py::register_exception<ParameterError>(m, "ParameterError", base.ptr());
  py::register_exception<DomainError>(m, "DomainError", base.ptr());
  py::register_exception<RegimeError>(m, "RegimeError", base.ptr());
  py::register_exception<NumericalError>(m, "NumericalError", base.ptr());
  py::register_exception<ConsistencyError>(m, "ConsistencyError", base.ptr());
  py::register_exception<MiscibilityError>(m, "MiscibilityError", base.ptr());
  py::register_exception<AdmissibilityError>(m, "AdmissibilityError", base.ptr());

  m.def("scatter", [](const py::object& descriptor, double resolution) {
        auto sol = solve_scattering(make_potential(from_py(descriptor)), {resolution});
        return to_py(to_json(sol));
      },
      py::arg("potential"), py::arg("resolution") = 1e-3,
      "Solve the zero-energy scattering problem for a potential descriptor.");

  m.def("scattering_length", [](const py::object& descriptor) {
        return solve_scattering(make_potential(from_py(descriptor))).a();
      },
      py::arg("potential"));

  m.def("energy", [](double rho_a, double rho_b, double a_a, double a_b, double a_ab, double c,
                     double eta) {
        return to_py(to_json(energy_breakdown(mixture(rho_a, rho_b, a_a, a_b, a_ab), c, eta)));
      },
      py::arg("rho_a"), py::arg("rho_b"), py::arg("a_a"), py::arg("a_b"), py::arg("a_ab"),
      py::arg("c") = 1.0, py::arg("eta") = 0.0,
      "Main and LHY energy densities with constant couplings 8 pi a.");

  m.def("xi", [](double rho_a, double rho_b, double a_a, double a_b, double a_ab) {
        return xi_ab(rho_a, rho_b, a_a, a_b, a_ab);
      });
  m.def("mu_pm", [](double xi) {
    auto mu = mu_pm(xi);
    return py::make_tuple(mu.plus, mu.minus);
  });
  m.def("i_ab_from_mu", &i_ab_from_mu);
  m.def("i_ab_quadrature", &i_ab_quadrature);

  m.def("minimize_mode",
        [](double rho_a, double rho_b, double a_a, double a_b, double a_ab, double k) {
          auto r = minimize_per_mode(mixture(rho_a, rho_b, a_a, a_b, a_ab), k);
          auto mat = [](const Mat2& x) {
            return std::vector<std::vector<double>>{{x(0, 0), x(0, 1)}, {x(1, 0), x(1, 1)}};
          };
          py::dict d;
          d["value"] = r.value;
          d["closed_form"] = r.closed_form;
          d["alpha"] = mat(r.alpha);
          d["gamma"] = mat(r.gamma);
          d["iterations"] = r.iterations;
          return d;
        },
        py::arg("rho_a"), py::arg("rho_b"), py::arg("a_a"), py::arg("a_b"), py::arg("a_ab"),
        py::arg("k"));

  m.def("sum_vs_integral",
        [](double rho, double a, const std::vector<double>& sides) {
          auto rep = sum_vs_integral_report(mixture(rho, 0.0, a, 0.0, 0.0), sides);
          py::dict d;
          d["table"] = to_py(rep.table.to_json());
          d["gaps"] = rep.gaps;
          d["fitted_order"] = rep.fitted_order;
          return d;
        },
        py::arg("rho"), py::arg("a"), py::arg("sides"));

  m.def("convexity_scan",
        [](double rho, double volume, double a_a, double a_b, double a_ab, double k_z, int n) {
          GrandFunctionalParams gp;
          gp.rho = rho;
          gp.volume = volume;
          gp.a_a = a_a;
          gp.a_b = a_b;
          gp.a_ab = a_ab;
          gp.a_bar = std::max({a_a, a_b, a_ab});
          gp.k_z = k_z;
          return to_py(to_json(convexity_scan(gp, n)));
        },
        py::arg("rho"), py::arg("volume"), py::arg("a_a"), py::arg("a_b"), py::arg("a_ab"),
        py::arg("k_z") = 10.0, py::arg("n") = 50);

  m.def("run_cli", [](std::vector<std::string> args) {
        std::ostringstream out, err;
        args.insert(args.begin(), "bosemix");
        int code = run_cli(args, out, err);
        return py::make_tuple(code, out.str(), err.str());
      },
      py::arg("args"), "Run a CLI command in-process; returns (exit code, stdout, stderr).");
}
