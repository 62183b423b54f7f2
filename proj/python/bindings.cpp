#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "prethermal/analysis.hpp"
#include "prethermal/classical.hpp"
#include "prethermal/ensembles.hpp"
#include "prethermal/errors.hpp"
#include "prethermal/floquet.hpp"
#include "prethermal/lattice.hpp"
#include "prethermal/propagator.hpp"
#include "prethermal/tdse.hpp"
#include "prethermal/units.hpp"

namespace py = pybind11;
using namespace prethermal;

namespace {

py::dict series_to_dict(const TimeSeries& s) {
  py::dict out;
  out["time"] = s.times;
  for (const auto& name : s.channel_names()) out[py::str(name)] = s.channel(name);
  return out;
}

py::dict map_to_dict(const ParameterMap& m) {
  py::dict out;
  out["alpha"] = m.alpha_axis();
  out["omega"] = m.omega_axis();
  for (const auto& name : m.channel_names()) out[py::str(name)] = m.channel(name);
  py::list failed;
  for (const auto& f : m.failures) failed.append(py::make_tuple(f.alpha_index, f.omega_index, f.reason));
  out["failures"] = failed;
  py::list flagged;
  for (const auto& f : m.flags) flagged.append(py::make_tuple(f.alpha_index, f.omega_index, f.reason));
  out["flags"] = flagged;
  return out;
}

CellSettings settings(double v0, int m_max, Eigen::Index b_max, double phase, int steps) {
  CellSettings s;
  s.v0 = v0;
  s.m_max = m_max;
  s.b_max = b_max;
  s.phase = phase;
  s.steps = steps;
  return s;
}

}  // namespace

PYBIND11_MODULE(_prethermal, m) {
  m.doc() = "Floquet and classical-stability tools for a driven optical lattice.";
  m.attr("__version__") = PRETHERMAL_VERSION;

  py::register_exception<TruncationError>(m, "TruncationError", PyExc_ValueError);
  py::register_exception<ConvergenceError>(m, "ConvergenceError", PyExc_ArithmeticError);
  py::register_exception<DimensionMismatch>(m, "DimensionMismatch", PyExc_ValueError);

  py::class_<DriveParams>(m, "Drive")
      .def(py::init<double, double, double, double>(), py::arg("v0"), py::arg("alpha"),
           py::arg("omega_rel"), py::arg("phase") = 0.0)
      .def_property_readonly("v0", &DriveParams::v0)
      .def_property_readonly("alpha", &DriveParams::alpha)
      .def_property_readonly("omega_rel", &DriveParams::omega_rel)
      .def_property_readonly("phase", &DriveParams::phase)
      .def_property_readonly("omega0", &DriveParams::omega0)
      .def_property_readonly("omega", &DriveParams::omega)
      .def_property_readonly("period", &DriveParams::period)
      .def("depth", &DriveParams::depth)
      .def("__repr__", [](const DriveParams& d) {
        return "Drive(v0=" + std::to_string(d.v0()) + ", alpha=" + std::to_string(d.alpha()) +
               ", omega_rel=" + std::to_string(d.omega_rel()) + ")";
      });

  m.def(
      "bloch_bands",
      [](double v0, double q, int m_max) {
        const auto b = bloch_bands(v0, q, m_max);
        return py::make_tuple(b.energies, b.states);
      },
      py::arg("v0"), py::arg("q") = 0.0, py::arg("m_max") = 16,
      "Static band energies (ascending) and plane-wave eigenvectors as columns.");

  m.def(
      "microseconds_to_recoil",
      [](double us, double recoil_hz) { return PhysicalUnits(recoil_hz).microseconds_to_recoil(us); },
      py::arg("us"), py::arg("recoil_frequency_hz") = PhysicalUnits::lithium7_1064nm().recoil_frequency_hz());

  m.def(
      "period_propagator",
      [](const DriveParams& d, double q, int m_max, int steps) {
        return DrivePropagator(d, PlaneWaveBasis(m_max, q), steps > 0 ? steps : default_steps(d)).period_propagator();
      },
      py::arg("drive"), py::arg("q") = 0.0, py::arg("m_max") = 16, py::arg("steps") = 0);

  m.def(
      "evaluate_cell",
      [](double alpha, double omega_rel, double v0, int m_max, Eigen::Index b_max, double phase, int steps) {
        const auto r = evaluate_cell(alpha, omega_rel, settings(v0, m_max, b_max, phase, steps));
        py::dict out;
        out["occupations"] = r.occupations.fractions;
        out["ipr"] = r.ipr;
        out["steps"] = r.steps;
        out["odd_total"] = r.occupations.odd_total();
        out["near_degenerate_pairs"] = r.near_degenerate_pairs;
        return out;
      },
      py::arg("alpha"), py::arg("omega_rel"), py::arg("v0") = 10.0, py::arg("m_max") = 16,
      py::arg("b_max") = 12, py::arg("phase") = 0.0, py::arg("steps") = 0,
      "Diagonal-ensemble band occupations and IPR for one drive.");

  m.def(
      "pge_map",
      [](std::vector<double> alpha, std::vector<double> omega, double v0, int m_max, Eigen::Index b_max,
         std::vector<Eigen::Index> bands, bool diagnostics, unsigned workers) {
        PgeMapOptions o;
        o.cell = settings(v0, m_max, b_max, 0.0, 0);
        o.bands = std::move(bands);
        o.diagnostics = diagnostics;
        o.workers = workers;
        ParameterMap map = [&] {
          py::gil_scoped_release release;
          return pge_map(MapGrid{std::move(alpha), std::move(omega)}, o);
        }();
        return map_to_dict(map);
      },
      py::arg("alpha"), py::arg("omega"), py::arg("v0") = 10.0, py::arg("m_max") = 16,
      py::arg("b_max") = 12, py::arg("bands") = std::vector<Eigen::Index>{0, 2, 4, 6, 8, 10, 12},
      py::arg("diagnostics") = false, py::arg("workers") = 0u);

  m.def(
      "stability_map",
      [](std::vector<double> alpha, std::vector<double> omega, int steps, unsigned workers) {
        ParameterMap map = [&] {
          py::gil_scoped_release release;
          return stability_map(MapGrid{std::move(alpha), std::move(omega)}, steps, workers);
        }();
        return map_to_dict(map);
      },
      py::arg("alpha"), py::arg("omega"), py::arg("steps") = 256, py::arg("workers") = 0u);

  m.def(
      "monodromy",
      [](const DriveParams& d) {
        const auto r = linearized_monodromy(d);
        return py::make_tuple(r.matrix, r.trace, r.stable);
      },
      py::arg("drive"), "Linearized pendulum monodromy: (matrix, trace, stable).");

  m.def(
      "mathieu_monodromy",
      [](double a, double q) {
        const auto r = mathieu_monodromy(a, q);
        return py::make_tuple(r.matrix, r.trace, r.stable);
      },
      py::arg("a"), py::arg("q"));

  m.def(
      "mathieu_parameters",
      [](double alpha, double omega_rel) {
        const auto p = mathieu_parameters(alpha, omega_rel);
        return py::make_tuple(p.a, p.q);
      },
      py::arg("alpha"), py::arg("omega_rel"));

  m.def(
      "evolve",
      [](const DriveParams& d, double periods, int m_max, Eigen::Index b_max, bool stroboscopic, int stride) {
        const PlaneWaveBasis basis(m_max, 0.0);
        const auto psi0 = bloch_bands(d.v0(), basis).state(0);
        SampleSpec spec;
        spec.mode = stroboscopic ? Sampling::stroboscopic : Sampling::uniform;
        spec.stride = stride;
        spec.b_max = b_max;
        TimeSeries s = [&] {
          py::gil_scoped_release release;
          return evolve(psi0, d, basis, periods * d.period(), spec);
        }();
        return series_to_dict(s);
      },
      py::arg("drive"), py::arg("periods"), py::arg("m_max") = 16, py::arg("b_max") = 12,
      py::arg("stroboscopic") = true, py::arg("stride") = 16,
      "Evolve the q = 0 ground band; returns time plus one array per channel.");

  m.def(
      "fit_power_law",
      [](const std::vector<double>& t, const std::vector<double>& y, double t_min, double t_max) {
        const auto f = fit_power_law(t, y, t_min, t_max);
        py::dict out;
        out["exponent"] = f.exponent;
        out["amplitude"] = f.amplitude;
        out["residual"] = f.residual;
        out["samples"] = f.samples;
        return out;
      },
      py::arg("t"), py::arg("y"), py::arg("t_min"), py::arg("t_max"));
}
