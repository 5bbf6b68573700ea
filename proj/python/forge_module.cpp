#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>

#include "forge/catalog.hpp"
#include "forge/hamiltonian.hpp"

namespace py = pybind11;
using namespace forge;

namespace {

std::string check(const std::string& model_json, const std::vector<std::string>& checks, std::optional<int> samples,
                  std::optional<std::uint64_t> seed, std::optional<double> tol) {
  AlgebroidModel m = parse_model(model_json);
  SampleDomain& d = m.algebroid.chart.domain;
  if (samples) d.samples = *samples;
  if (seed) d.seed = *seed;
  if (tol) d.tol = *tol;
  try {
    d.validate();
  } catch (const std::invalid_argument& e) {
    throw ModelError(e.what());
  }
  py::gil_scoped_release release;
  return report_json(run_checks(m, checks));
}

std::string synthesize(const std::string& model_json, const std::vector<std::string>& vref) {
  AlgebroidModel m = parse_model(model_json);
  if (!m.omega || !m.momentum) throw ModelError("synthesis needs omega and momentum");
  std::vector<Expr> comps;
  for (const auto& v : vref) comps.push_back(m.chart().parse(v));
  SynthesisResult r = synthesize_tangent_connection(m.chart(), *m.omega, *m.momentum, VectorField(comps));
  m.algebroid = tangent_algebroid(m.chart());
  m.connection = r.connection;
  return dump_model(m);
}

}  // namespace

PYBIND11_MODULE(_forge, m) {
  m.doc() = "verification engine for hamiltonian Lie algebroids";

  py::register_exception<ModelError>(m, "ModelError", PyExc_ValueError);
  py::register_exception<UnknownCheck>(m, "UnknownCheck", PyExc_KeyError);
  py::register_exception<CatalogError>(m, "CatalogError", PyExc_KeyError);
  py::register_exception<SynthesisError>(m, "SynthesisError", PyExc_RuntimeError);
  py::register_exception<SamplingExhausted>(m, "SamplingExhausted", PyExc_RuntimeError);

  m.def("check_names", &check_names);
  m.def("catalog_names", &catalog_names);
  m.def("check", &check, py::arg("model_json"), py::arg("checks") = std::vector<std::string>{},
        py::arg("samples") = py::none(), py::arg("seed") = py::none(), py::arg("tol") = py::none(),
        "Run checks on a model given as JSON text; returns the JSON report.");
  m.def(
      "catalog_model", [](const std::string& name) { return dump_model(catalog_entry(name).model); },
      py::arg("name"));
  m.def(
      "catalog_run",
      [](const std::vector<std::string>& names) {
        py::gil_scoped_release release;
        return catalog_json(run_catalog(names));
      },
      py::arg("names") = std::vector<std::string>{});
  m.def(
      "normalize_model", [](const std::string& model_json) { return dump_model(parse_model(model_json)); },
      py::arg("model_json"));
  m.def("synthesize", &synthesize, py::arg("model_json"), py::arg("vref"));
}
