#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "zomd/app.hpp"
#include "zomd/certify.hpp"
#include "zomd/conic.hpp"
#include "zomd/descent.hpp"
#include "zomd/fields.hpp"
#include "zomd/geometry.hpp"
#include "zomd/report.hpp"

namespace py = pybind11;
using namespace zomd;

namespace {

MirrorMap mirror_by_name(const std::string& name) {
  if (name == "euclidean") return euclidean_mirror();
  if (name == "entropy") return entropy_mirror();
  throw std::invalid_argument("unknown mirror '" + name + "' (expected euclidean | entropy)");
}

/// Finite-difference mirror descent on a Python objective. Returns (trajectory rows, csv text).
py::dict run_callable(const py::function& f, const Vector& x1, const std::string& mirror, double epsilon,
                      double c, const std::string& rule, double eta0, std::size_t t_max) {
  ObjectiveOracle oracle(x1.size(), [f](const Vector& x) { return f(x).cast<double>(); }, "python");
  const MirrorMap map = mirror_by_name(mirror);
  if (map.domain() == DomainKind::PositiveOrthant) {
    oracle.with_domain([](const Vector& x) { return (x.array() > 0.0).all(); });
  }
  StepConfig step;
  step.rule = parse_step_rule(rule);
  step.eta0 = eta0;
  RunOptions options;
  options.t_max = t_max;
  const TrajectoryRecord rec =
      run(map, oracle, fd_coordinate_field(FiniteDiffField{&oracle, epsilon, c, true}), step, x1, options);

  std::vector<Vector> xs;
  std::vector<double> fs, etas;
  std::vector<bool> passes;
  for (const TrajectoryRow& row : rec.rows) {
    xs.push_back(row.x);
    fs.push_back(row.f);
    if (row.eta) {
      etas.push_back(*row.eta);
      passes.push_back(*row.cert_pass);
    }
  }
  py::dict out;
  out["x"] = xs;
  out["f"] = fs;
  out["eta"] = etas;
  out["certified"] = passes;
  out["status"] = std::string(to_string(rec.status));
  out["message"] = rec.message;
  out["evaluations"] = oracle.eval_count();
  out["csv"] = trajectory_csv(rec);
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Certified zeroth-order mirror descent";

  py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
  py::register_exception<InfeasibleError>(m, "InfeasibleError", PyExc_ValueError);
  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);

  m.def("compute_alpha", &compute_alpha, py::arg("M"), py::arg("R"), py::arg("c"),
        "Cone-robust scaling 1 + R(1+s)/(M(rho-s)).");
  m.def("star_c", &star_c_from_mu_L, py::arg("mu"), py::arg("L"));
  m.def("kantorovich_cos", &certify::kantorovich_cos, py::arg("mu"), py::arg("L"));
  m.def("floor_radius", &certify::floor_radius, py::arg("mu"), py::arg("L"), py::arg("epsilon"),
        py::arg("d"));
  m.def(
      "eta_feasible_max",
      [](double sigma, double beta, double L, double delta) {
        return certify::eta_feasible_max({sigma, beta, L, delta});
      },
      py::arg("sigma"), py::arg("beta"), py::arg("L"), py::arg("delta"));
  m.def(
      "tight_dominance_alpha", &conic::tight_dominance_alpha, py::arg("m_norm"), py::arg("R"),
      py::arg("c"));

  m.def(
      "mirror_step",
      [](const std::string& mirror, const Vector& x, const Vector& omega, double eta) {
        return mirror_step(mirror_by_name(mirror), x, omega, eta);
      },
      py::arg("mirror"), py::arg("x"), py::arg("omega"), py::arg("eta"));
  m.def(
      "bregman",
      [](const std::string& mirror, const Vector& x, const Vector& y) {
        return mirror_by_name(mirror).bregman(x, y);
      },
      py::arg("mirror"), py::arg("x"), py::arg("y"));

  m.def(
      "_run_config",
      [](const std::string& text) { return app::execute_run(parse_config(text)).report.dump(); },
      py::arg("text"), py::call_guard<py::gil_scoped_release>());
  m.def(
      "_certify_config", [](const std::string& text) { return app::certify_checks(parse_config(text)).dump(); },
      py::arg("text"), py::call_guard<py::gil_scoped_release>());

  m.def("minimize", &run_callable, py::arg("f"), py::arg("x1"), py::arg("mirror") = "euclidean",
        py::arg("epsilon") = 1e-3, py::arg("c") = 1.0, py::arg("rule") = "backtracking",
        py::arg("eta0") = 0.1, py::arg("t_max") = 100,
        "Finite-difference mirror descent on a Python objective with per-step certificates.");
}
