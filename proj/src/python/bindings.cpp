#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "arealaw/bounds.hpp"
#include "arealaw/config.hpp"
#include "arealaw/entangle.hpp"
#include "arealaw/heatfit.hpp"
#include "arealaw/pipeline.hpp"
#include "arealaw/spectral.hpp"
#include "arealaw/thermo.hpp"

namespace py = pybind11;
using namespace arealaw;

namespace {

// Model spectrum together with the ground state and the site count.
struct PySpectrum {
  HamiltonianSpec spec;
  SpectralData sd;
  int n_sites = 1;

  static PySpectrum from_config(const std::string& yaml, bool allow_large) {
    const RunConfig cfg = parse_config(yaml, "<python>");
    PySpectrum s;
    s.spec = build_model(cfg.model);
    s.n_sites = s.spec.lattice.site_count();
    const std::size_t cap = allow_large ? kLargeDimensionCap : kDefaultDimensionCap;
    DiagonalizeOptions opts;
    opts.dimension_cap = cap;
    opts.degeneracy_tol = cfg.model.degeneracy_tol;
    s.sd = diagonalize(assemble_full(s.spec, cap), opts);
    return s;
  }
};

HeatCapFit fit_samples(const std::vector<double>& T, const std::vector<double>& c, FitRegime regime, double delta) {
  if (T.size() != c.size()) throw ValidationError("T and c must have the same length");
  std::vector<HeatSample> samples;
  for (std::size_t i = 0; i < T.size(); ++i) samples.push_back({T[i], c[i]});
  FitOptions opts;
  opts.delta = delta;
  return regime == FitRegime::exponential ? fit_exponential(samples, opts) : fit_polynomial(samples, opts);
}

py::object to_python(const Json& j) { return py::module_::import("json").attr("loads")(j.dump()); }

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Area-law certificates from exact spectra and heat-capacity data";
  m.attr("__version__") = kToolVersion;

  static py::exception<UnsatisfiableError> unsatisfiable(m, "UnsatisfiableError", PyExc_ValueError);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const UnsatisfiableError& e) {
      py::set_error(unsatisfiable, e.what());
    } catch (const ValidationError& e) {
      py::set_error(PyExc_ValueError, e.what());
    } catch (const NumericError& e) {
      py::set_error(PyExc_ArithmeticError, e.what());
    }
  });

  py::class_<PySpectrum>(m, "Spectrum")
      .def_static("from_config", &PySpectrum::from_config, py::arg("yaml"), py::arg("allow_large") = false,
                  "Builds and diagonalizes the model block of a YAML configuration.")
      .def_property_readonly("eigenvalues", [](const PySpectrum& s) { return s.sd.eigenvalues; })
      .def_property_readonly("ground_energy", [](const PySpectrum& s) { return s.sd.ground_energy; })
      .def_property_readonly("gap", [](const PySpectrum& s) { return s.sd.gap(); })
      .def_property_readonly("degeneracy", [](const PySpectrum& s) { return s.sd.degeneracy; })
      .def_property_readonly("n_sites", [](const PySpectrum& s) { return s.n_sites; })
      .def("energy_density", [](const PySpectrum& s, double T) { return energy_density(s.sd, T, s.n_sites); })
      .def("entropy_density", [](const PySpectrum& s, double T) { return entropy_density(s.sd, T, s.n_sites); })
      .def("specific_heat", [](const PySpectrum& s, double T) { return specific_heat_spectral(s.sd, T, s.n_sites); })
      .def("log_specific_heat", [](const PySpectrum& s, double T) { return log_specific_heat(s.sd, T, s.n_sites); })
      .def("solve_Tc", [](const PySpectrum& s, double target) { return solve_Tc(s.sd, s.n_sites, target); })
      .def("trace_distance_to_groundspace",
           [](const PySpectrum& s, double T) { return trace_distance_to_groundspace(s.sd, T); })
      .def(
          "entropy_scan",
          [](const PySpectrum& s, const std::vector<int>& edges) {
            const auto rows = entropy_scan(ground_state(s.sd), s.spec.lattice, s.spec.local_dim(), edges);
            return to_python(to_json(std::span<const ScanRow>(rows)));
          },
          py::arg("edges"), "Entropies of l-cubes in the ground state (groundspace mixture if degenerate).");

  m.def(
      "run_config",
      [](const std::string& yaml, bool allow_large) {
        RunOptions opts;
        opts.allow_large = allow_large;
        RunResult res;
        {
          py::gil_scoped_release release;
          res = run_pipeline(parse_config(yaml, "<python>"), opts);
        }
        return to_python(res.record);
      },
      py::arg("yaml"), py::arg("allow_large") = false, "Full pipeline; returns the run record as a dict.");

  m.def(
      "fit",
      [](const std::vector<double>& T, const std::vector<double>& c, const std::string& regime, double delta) {
        return to_python(to_json(fit_samples(T, c, fit_regime_from_string(regime), delta)));
      },
      py::arg("T"), py::arg("c"), py::arg("regime") = "exponential", py::arg("delta") = 1.0,
      "Least-squares fit inflated to dominate every sample.");

  m.def(
      "prop1_constant",
      [](const std::string& regime, double k, double gamma, double delta, double budget_total, int l) {
        const Prop1Constant p = prop1_constant(fit_regime_from_string(regime), k, gamma, delta, budget_total, l);
        return p.F;
      },
      py::arg("regime"), py::arg("k"), py::arg("gamma"), py::arg("delta"), py::arg("budget_total"), py::arg("l"));

  m.def("pepo_eta", &pepo_eta, py::arg("k"), py::arg("nu"), py::arg("gap"), py::arg("delta"), py::arg("n"),
        py::arg("d"));

  m.def(
      "certify_from_data",
      [](const std::vector<double>& T, const std::vector<double>& c, int d, int r, int l, int n, double C, double h,
         double s0, const std::string& regime) {
        if (T.size() != c.size()) throw ValidationError("T and c must have the same length");
        std::vector<HeatSample> samples;
        for (std::size_t i = 0; i < T.size(); ++i) samples.push_back({T[i], c[i]});
        DataCertInputs in;
        in.d = d;
        in.r = r;
        in.l = l;
        in.n = n;
        in.C = C;
        in.h = h;
        in.s0 = s0;
        in.regime = fit_regime_from_string(regime);
        return to_python(data_certificate_record(samples, in, "<python>"));
      },
      py::arg("T"), py::arg("c"), py::arg("d") = 1, py::arg("r") = 1, py::arg("l"), py::arg("n"), py::arg("C") = 1.0,
      py::arg("h") = 0.0, py::arg("s0") = 0.0, py::arg("regime") = "exponential");
}
