#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "jspec/experiments.hpp"
#include "jspec/finitegap.hpp"
#include "jspec/inverse.hpp"
#include "jspec/scattering.hpp"
#include "jspec/weyl.hpp"

namespace py = pybind11;
using namespace jspec;
using operators::CoefficientModel;
using experiments::json;

namespace {

CoefficientModel model_from(const py::object& spec) {
  if (py::isinstance<CoefficientModel>(spec)) return spec.cast<CoefficientModel>();
  auto dumps = py::module_::import("json").attr("dumps");
  return experiments::parse_model(json::parse(dumps(spec).cast<std::string>()));
}

py::object to_python(const json& j) { return py::module_::import("json").attr("loads")(j.dump()); }

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Jacobi operator spectral toolkit";
  m.attr("__version__") = experiments::kVersion;

  PYBIND11_CONSTINIT static py::gil_safe_call_once_and_store<py::object> error_type;
  error_type.call_once_and_store_result([] {
    return py::reinterpret_steal<py::object>(PyErr_NewException("jspec._core.Error", PyExc_ValueError, nullptr));
  });
  m.attr("Error") = error_type.get_stored();
  // jspec.Error carries the error kind name in .kind
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      const py::object& type = error_type.get_stored();
      py::object inst = type(e.what());
      inst.attr("kind") = to_string(e.kind());
      PyErr_SetObject(type.ptr(), inst.ptr());
    }
  });

  py::class_<CoefficientModel>(m, "Model")
      .def(py::init([](const py::object& spec) { return model_from(spec); }), py::arg("spec"),
           "Build a model from a config-style dict, e.g. {'kind': 'free'}.")
      .def("coeff", [](const CoefficientModel& c, long n) {
        auto v = c.coeff(n);
        return py::make_tuple(v.a, v.b);
      })
      .def("describe", &CoefficientModel::describe)
      .def("__repr__", [](const CoefficientModel& c) { return "<jspec.Model " + c.describe() + ">"; });

  m.def("m_plus", [](const py::object& model, long n, cplx z) { return weyl::m_plus(model_from(model), n, z).z(); },
        py::arg("model"), py::arg("n"), py::arg("z"));
  m.def("m_minus",
        [](const py::object& model, long n, cplx z) { return weyl::m_minus_wholeline(model_from(model), n, z).z(); },
        py::arg("model"), py::arg("n"), py::arg("z"));
  m.def("green_diag", [](const py::object& model, long n, cplx z) { return weyl::green_diag(model_from(model), n, z); },
        py::arg("model"), py::arg("n"), py::arg("z"));

  m.def(
      "scattering",
      [](const py::object& model, double phi) {
        auto d = scattering::scattering_coefficients(model_from(model), phi);
        return py::make_tuple(d.T, d.R, d.unitarity_defect);
      },
      py::arg("model"), py::arg("phi"), "Transmission T, reflection R and ||T|^2 + |R|^2 - 1| at E = 2 cos(phi).");

  m.def(
      "coefficients_from_measure",
      [](std::vector<double> t, std::vector<double> w, int n_max) {
        if (t.size() != w.size()) fail(ErrorKind::invalid_argument, "nodes and weights differ in length");
        auto r = inverse::coefficients_from_measure({std::move(t), std::move(w)}, n_max);
        return py::make_tuple(r.a, r.b);
      },
      py::arg("nodes"), py::arg("weights"), py::arg("n_max") = 40);

  m.def(
      "torus_point",
      [](std::vector<std::pair<double, double>> bands, std::vector<std::pair<double, int>> mu, int n_max) {
        finitegap::BandSet E;
        for (auto [lo, hi] : bands) E.bands.push_back({lo, hi});
        E.validate();
        finitegap::DirichletData d;
        for (auto [x, s] : mu) d.push_back({x, s});
        return finitegap::torus_point(E, d, n_max);
      },
      py::arg("bands"), py::arg("mu"), py::arg("n_max") = 40);

  m.def("experiment_names", &experiments::experiment_names);
  m.def(
      "run",
      [](const std::string& name, const py::dict& config, std::uint64_t seed) {
        auto dumps = py::module_::import("json").attr("dumps");
        const auto cfg = json::parse(dumps(config).cast<std::string>());
        experiments::Table t = [&] {
          py::gil_scoped_release release;
          return experiments::run(name, cfg, seed);
        }();
        py::list cols;
        for (const auto& c : t.columns) cols.append(py::make_tuple(c.name, c.unit));
        py::dict out;
        out["experiment"] = t.experiment;
        out["columns"] = cols;
        out["rows"] = t.rows;
        out["summary"] = to_python(t.summary);
        out["config_hash"] = experiments::config_hash(cfg);
        return out;
      },
      py::arg("name"), py::arg("config") = py::dict(), py::arg("seed") = 0);
}
