// Python bindings for the main operations: load scenarios, solve one
// instance, sweep the drift rate, compute limit predictions, verify.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <json.hpp>

#include "floqeig/floquet.hpp"
#include "floqeig/limits.hpp"
#include "floqeig/scenario.hpp"
#include "floqeig/subdomain.hpp"
#include "floqeig/temporal.hpp"
#include "floqeig/verify.hpp"

namespace py = pybind11;
using namespace floqeig;

namespace {

py::dict eigen_dict(const EigenResult& r) {
    py::dict d;
    d["lambda"] = r.lambda;
    d["residual"] = r.residual;
    d["iterations"] = r.iterations;
    return d;
}

py::list sweep_list(const SweepTable& table) {
    py::list rows;
    for (const SweepRow& row : table.rows) {
        py::dict d;
        d["alpha"] = row.alpha;
        d["lambda"] = row.lambda;
        d["residual"] = row.residual;
        d["iterations"] = row.iterations;
        d["nx"] = row.nx;
        d["nt"] = row.nt;
        d["ok"] = row.ok;
        rows.append(d);
    }
    return rows;
}

}  // namespace

PYBIND11_MODULE(_floqeig, m) {
    m.doc() = "Principal eigenvalues of time-periodic advection-diffusion problems";

    py::class_<Scenario>(m, "Scenario")
        .def_property_readonly("name", [](const Scenario& s) { return s.name; })
        .def_property_readonly("T", [](const Scenario& s) { return s.coefficients.T; })
        .def("serialize", &serialize_scenario);

    m.def("load_scenario", &load_scenario, py::arg("path"));
    m.def("parse_scenario", &parse_scenario, py::arg("text"));
    m.def("catalog_names", [] {
        std::vector<std::string> names;
        for (const Scenario& s : builtin_catalog()) names.push_back(s.name);
        return names;
    });
    m.def("catalog_scenario", &catalog_scenario, py::arg("name"));

    m.def(
        "solve",
        [](const Scenario& scenario, double alpha, int nx, int nt, double tol, long max_iter,
           double theta) {
            const SpaceTimeGrid grid(nx, nt, scenario.coefficients.T);
            const MonodromyOperator monodromy = build_monodromy(scenario, grid, alpha, theta);
            return eigen_dict(principal_eigenvalue(monodromy, tol, max_iter));
        },
        py::arg("scenario"), py::arg("alpha"), py::arg("nx") = 201, py::arg("nt") = 400,
        py::arg("tol") = 1e-10, py::arg("max_iter") = 100000, py::arg("theta") = 1.0);

    m.def(
        "sweep",
        [](const Scenario& scenario, const std::vector<double>& alphas, double tol, int jobs) {
            return sweep_list(alpha_sweep(scenario, alphas, GridPolicy{}, tol, 100000, jobs));
        },
        py::arg("scenario"), py::arg("alphas"), py::arg("tol") = 1e-10, py::arg("jobs") = 1);

    m.def(
        "limit",
        [](const Scenario& scenario, const std::string& mode, int nx, int nt) {
            const SpaceTimeGrid grid(nx, nt, scenario.coefficients.T);
            std::string text;
            if (mode == "nondegenerate") {
                text = predict_limit_nondegenerate(scenario).to_json();
            } else if (mode == "spatial") {
                text = predict_limit_spatial(scenario, grid).to_json();
            } else if (mode == "temporal") {
                const EigenResult r = limit_eigenvalue_temporal(scenario, grid);
                nlohmann::json j{{"minimum", r.lambda}, {"argmin", "piecewise_period_problem"}};
                text = j.dump();
            } else {
                throw std::invalid_argument("mode must be nondegenerate|spatial|temporal");
            }
            py::module_ json_mod = py::module_::import("json");
            return json_mod.attr("loads")(text);
        },
        py::arg("scenario"), py::arg("mode"), py::arg("nx") = 401, py::arg("nt") = 800);

    m.def(
        "verify",
        [](const Scenario& scenario, const std::vector<double>& alphas, double gap_tol) {
            VerifyOptions options;
            if (!alphas.empty()) options.alphas = alphas;
            options.gap_tol = gap_tol;
            const VerifyReport report = run_verify(scenario, options);
            py::module_ json_mod = py::module_::import("json");
            return json_mod.attr("loads")(report.to_json());
        },
        py::arg("scenario"), py::arg("alphas") = std::vector<double>{},
        py::arg("gap_tol") = 5e-2);
}
