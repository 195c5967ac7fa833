#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cstdio>

#include "vacrabi/config.hpp"
#include "vacrabi/dynamics.hpp"
#include "vacrabi/experiment.hpp"
#include "vacrabi/liouvillian.hpp"
#include "vacrabi/oracle.hpp"
#include "vacrabi/spectral.hpp"

namespace py = pybind11;
using namespace vacrabi;

namespace {

py::dict comparison_dict(const oracle::ComparisonReport& r) {
  py::dict d;
  d["spectral_vs_rk4"] = r.spectral_vs_rk4;
  d["spectral_vs_expm"] = r.spectral_vs_expm;
  d["rk4_vs_expm"] = r.rk4_vs_expm;
  d["max_trace_drift"] = r.max_trace_drift;
  d["min_eigenvalue"] = r.min_eigenvalue;
  d["max_hermiticity_error"] = r.max_hermiticity_error;
  return d;
}

Frame frame_of(const std::string& s) {
  if (s == "lab") return Frame::lab;
  if (s == "rotating") return Frame::rotating;
  throw py::value_error("frame must be 'lab' or 'rotating'");
}

TimeMode mode_of(const std::string& s) {
  if (s == "raw") return TimeMode::raw;
  if (s == "effective") return TimeMode::effective;
  throw py::value_error("mode must be 'raw' or 'effective'");
}

}  // namespace

PYBIND11_MODULE(vacrabi, m) {
  m.doc() = "Damped vacuum Rabi oscillations in a dressed-state Lindblad model";

  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<DataError>(m, "DataError", PyExc_ValueError);
  py::register_exception<oracle::OracleError>(m, "OracleError", PyExc_RuntimeError);

  py::class_<PhysicalParams>(m, "PhysicalParams")
      .def(py::init<>())
      .def_readwrite("omega0", &PhysicalParams::omega0)
      .def_readwrite("g", &PhysicalParams::g)
      .def_readwrite("temperature", &PhysicalParams::temperature)
      .def_readwrite("geometry_ratio", &PhysicalParams::geometry_ratio);

  py::class_<RateTable>(m, "RateTable")
      .def(py::init<>())
      .def_readwrite("gamma1", &RateTable::gamma1)
      .def_readwrite("gamma2", &RateTable::gamma2)
      .def_readwrite("gamma3", &RateTable::gamma3)
      .def_readwrite("gamma_a", &RateTable::gamma_a)
      .def_readwrite("gamma_b", &RateTable::gamma_b)
      .def_readwrite("gamma_c", &RateTable::gamma_c)
      .def_readwrite("gamma4", &RateTable::gamma4)
      .def_readwrite("gamma5", &RateTable::gamma5)
      .def_readwrite("gamma6", &RateTable::gamma6)
      .def_readwrite("gamma7", &RateTable::gamma7)
      .def_readwrite("gamma8", &RateTable::gamma8)
      .def_readwrite("gamma_e", &RateTable::gamma_e);

  py::class_<ModelConfig>(m, "ModelConfig")
      .def_readwrite("params", &ModelConfig::params)
      .def_readwrite("rates", &ModelConfig::rates)
      .def_readwrite("nbar", &ModelConfig::nbar)
      .def_readwrite("renormalize_thermal", &ModelConfig::renormalize_thermal);

  m.def("default_config", &default_config);
  m.def("parse_config", [](const std::string& text) { return parse_config(text); }, py::arg("text"));
  m.def("load_config", [](const std::string& path) { return load_config(path); }, py::arg("path"));
  m.def("reference_rates", [](const PhysicalParams& p) { return reference_rates(p); }, py::arg("params"));

  m.def(
      "thermal_weights",
      [](double nbar, int max_photons, bool renormalize) {
        return thermal_weights(nbar, max_photons, renormalize).weights;
      },
      py::arg("nbar"), py::arg("max_photons"), py::arg("renormalize") = false);
  m.def("boltzmann_factor", &boltzmann_factor, py::arg("gap"), py::arg("temperature"));

  m.def(
      "population_generator",
      [](const PhysicalParams& p, const RateTable& r, int doublets) {
        return build_generator(DressedLadder(p, doublets), r).population_block;
      },
      py::arg("params"), py::arg("rates"), py::arg("doublets") = 2);
  m.def(
      "superoperator",
      [](const PhysicalParams& p, const RateTable& r, int doublets, const std::string& frame) {
        return build_generator(DressedLadder(p, doublets), r, frame_of(frame)).superoperator;
      },
      py::arg("params"), py::arg("rates"), py::arg("doublets") = 2, py::arg("frame") = "rotating");
  m.def(
      "closed_form_eigenvalues",
      [](const PhysicalParams& p, const RateTable& r, const std::string& frame) {
        return closed_form_eigenvalues(DressedLadder(p, 2), r, frame_of(frame)).all();
      },
      py::arg("params"), py::arg("rates"), py::arg("frame") = "lab");

  m.def(
      "rabi_curve",
      [](const PhysicalParams& p, const RateTable& r, std::vector<double> t, int doublets,
         std::vector<double> weights, const std::string& mode) {
        RabiModel model;
        model.params = p;
        model.rates = r;
        model.doublets = doublets;
        model.initial_weights = std::move(weights);
        model.mode = mode_of(mode);
        return model.evaluate(t).p_g;
      },
      py::arg("params"), py::arg("rates"), py::arg("t"), py::arg("doublets") = 2,
      py::arg("weights") = std::vector<double>{0.95, 0.05}, py::arg("mode") = "effective");

  m.def(
      "compare_propagators",
      [](const PhysicalParams& p, const RateTable& r, std::vector<double> t, int doublets, double dt) {
        const DressedLadder ladder(p, doublets);
        const Generator gen = build_generator(ladder, r);
        return comparison_dict(oracle::compare_propagators(gen, two_doublet_initial_state(ladder), t, {dt}));
      },
      py::arg("params"), py::arg("rates"), py::arg("t"), py::arg("doublets") = 2, py::arg("dt") = 5e-9);

  m.def(
      "fit_gamma_cavity",
      [](std::vector<double> t_eff, std::vector<double> p_g, const PhysicalParams& p) {
        if (t_eff.size() != p_g.size()) throw py::value_error("t_eff and p_g differ in length");
        std::string csv = "t_eff_s,p_g\n";
        char line[80];
        for (std::size_t k = 0; k < t_eff.size(); ++k) {
          std::snprintf(line, sizeof line, "%.17g,%.17g\n", t_eff[k], p_g[k]);
          csv += line;
        }
        FitConfig cfg;
        cfg.params = p;
        cfg.free = {FitParameter::gamma_cavity};
        const FitResult r = fit_parameters(parse_dataset(csv, p.geometry_ratio), cfg);
        py::dict d;
        d["gamma_cavity"] = r.best.gamma_cavity;
        d["chi2"] = r.chi2;
        d["q_energy"] = r.q.energy;
        d["q_field"] = r.q.field;
        d["converged"] = r.converged;
        return d;
      },
      py::arg("t_eff"), py::arg("p_g"), py::arg("params") = PhysicalParams{});

  m.def(
      "q_factor",
      [](const PhysicalParams& p, double gamma) {
        const QFactor q = q_factor(p, gamma);
        return py::make_tuple(q.energy, q.field);
      },
      py::arg("params"), py::arg("gamma_cavity"));
}
