// Python module exposing the main operations of the library: configuration,
// propagation, the two scan drivers, spectra, fits, and config-file I/O.
// Vectors are returned as numpy arrays (copies); density-matrix trajectories
// come back as dicts of arrays keyed by element name.

#include <pybind11/complex.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <complex>
#include <optional>
#include <utility>
#include <vector>

#include "mb1d/analysis.hpp"
#include "mb1d/bloch.hpp"
#include "mb1d/config_io.hpp"
#include "mb1d/medium.hpp"
#include "mb1d/pulse.hpp"
#include "mb1d/solver.hpp"

namespace py = pybind11;
using namespace mb1d;

namespace {

py::array_t<double> to_array(const std::vector<double>& v) {
  return py::array_t<double>(static_cast<py::ssize_t>(v.size()), v.data());
}

py::array_t<std::complex<double>> to_array(const std::vector<complexd>& v) {
  return py::array_t<std::complex<double>>(static_cast<py::ssize_t>(v.size()),
                                           v.data());
}

py::dict trajectory_dict(const std::vector<BlochState>& traj) {
  std::vector<double> aa, bb, xx;
  std::vector<complexd> ax, ba, bx;
  aa.reserve(traj.size());
  for (const BlochState& s : traj) {
    aa.push_back(s.rho_aa);
    bb.push_back(s.rho_bb);
    xx.push_back(s.rho_xx());
    ax.push_back(s.rho_ax);
    ba.push_back(s.rho_ba);
    bx.push_back(s.rho_bx);
  }
  py::dict d;
  d["rho_aa"] = to_array(aa);
  d["rho_bb"] = to_array(bb);
  d["rho_xx"] = to_array(xx);
  d["rho_ax"] = to_array(ax);
  d["rho_ba"] = to_array(ba);
  d["rho_bx"] = to_array(bx);
  return d;
}

std::vector<double> as_vector(py::array_t<double, py::array::c_style |
                                                      py::array::forcecast>
                                  arr) {
  const auto r = arr.unchecked<1>();
  std::vector<double> v(static_cast<std::size_t>(r.shape(0)));
  for (py::ssize_t i = 0; i < r.shape(0); ++i)
    v[static_cast<std::size_t>(i)] = r(i);
  return v;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() =
      "1-D pulse propagation through a three-level ionic medium: coherence "
      "storage on the 800 nm channel and delayed two-photon readout into a "
      "UV signal.";

  py::enum_<PulseRole>(m, "PulseRole")
      .value("pump", PulseRole::pump)
      .value("read", PulseRole::read)
      .value("seed", PulseRole::seed);

  py::class_<MediumParams>(m, "MediumParams")
      .def(py::init<>())
      .def_readwrite("dipole_ax", &MediumParams::dipole_ax)
      .def_readwrite("dipole_ia", &MediumParams::dipole_ia)
      .def_readwrite("dipole_bi", &MediumParams::dipole_bi)
      .def_readwrite("dipole_bx", &MediumParams::dipole_bx)
      .def_readwrite("gamma_a", &MediumParams::gamma_a)
      .def_readwrite("gamma_b", &MediumParams::gamma_b)
      .def_readwrite("gamma_col", &MediumParams::gamma_col)
      .def_readwrite("delta", &MediumParams::delta)
      .def_readwrite("density", &MediumParams::density)
      .def_readwrite("lambda_ax", &MediumParams::lambda_ax)
      .def_readwrite("lambda_bx", &MediumParams::lambda_bx)
      .def_readwrite("length", &MediumParams::length)
      .def("validate", &MediumParams::validate);

  py::class_<DerivedRates>(m, "DerivedRates")
      .def_readonly("gamma_ax", &DerivedRates::gamma_ax)
      .def_readonly("gamma_ba", &DerivedRates::gamma_ba)
      .def_readonly("gamma_bx", &DerivedRates::gamma_bx)
      .def_readonly("eta_ax", &DerivedRates::eta_ax)
      .def_readonly("eta_bx", &DerivedRates::eta_bx);
  m.def("derive_rates", &derive_rates, py::arg("medium"));

  py::class_<PulseSpec>(m, "PulseSpec")
      .def(py::init<>())
      .def_readwrite("role", &PulseSpec::role)
      .def_readwrite("peak_amplitude", &PulseSpec::peak_amplitude)
      .def_readwrite("duration_fwhm", &PulseSpec::duration_fwhm)
      .def_readwrite("center_time", &PulseSpec::center_time)
      .def("active", &PulseSpec::active)
      .def("validate", &PulseSpec::validate);
  m.def("envelope_at", &envelope_at, py::arg("pulse"), py::arg("t"),
        "Field envelope at time t, V/m.");

  py::class_<GridSpec>(m, "GridSpec")
      .def(py::init<>())
      .def_readwrite("dt", &GridSpec::dt)
      .def_readwrite("nz", &GridSpec::nz)
      .def_readwrite("tail_window", &GridSpec::tail_window)
      .def_readwrite("lead_widths", &GridSpec::lead_widths)
      .def("validate", &GridSpec::validate);

  py::class_<BlochState>(m, "BlochState")
      .def(py::init<>())
      .def_readwrite("rho_aa", &BlochState::rho_aa)
      .def_readwrite("rho_bb", &BlochState::rho_bb)
      .def_readwrite("rho_ax", &BlochState::rho_ax)
      .def_readwrite("rho_ba", &BlochState::rho_ba)
      .def_readwrite("rho_bx", &BlochState::rho_bx)
      .def_property_readonly("rho_xx", &BlochState::rho_xx);

  py::class_<RunConfig>(m, "RunConfig")
      .def(py::init<>())
      .def_readwrite("medium", &RunConfig::medium)
      .def_readwrite("pump", &RunConfig::pump)
      .def_readwrite("read", &RunConfig::read)
      .def_readwrite("seed", &RunConfig::seed)
      .def_readwrite("delay_tau", &RunConfig::delay_tau)
      .def_readwrite("initial_state", &RunConfig::initial_state)
      .def_readwrite("grid", &RunConfig::grid)
      .def("apply_delay", &RunConfig::apply_delay)
      .def("validate", &RunConfig::validate);

  py::class_<SimulationGrid>(m, "SimulationGrid")
      .def_readonly("nz", &SimulationGrid::nz)
      .def_readonly("nt", &SimulationGrid::nt)
      .def_readonly("dz", &SimulationGrid::dz)
      .def_readonly("dt", &SimulationGrid::dt)
      .def_readonly("t_start", &SimulationGrid::t_start)
      .def("time_at", &SimulationGrid::time_at, py::arg("i"));

  py::class_<SimulationRecord>(m, "SimulationRecord")
      .def_readonly("grid", &SimulationRecord::grid)
      .def_readonly("config", &SimulationRecord::config)
      .def_property_readonly(
          "time", [](const SimulationRecord& r) { return to_array(r.time); })
      .def_property_readonly(
          "omega1_in",
          [](const SimulationRecord& r) { return to_array(r.omega1_in); })
      .def_property_readonly(
          "omega_s_in",
          [](const SimulationRecord& r) { return to_array(r.omega_s_in); })
      .def_property_readonly(
          "omega1_out",
          [](const SimulationRecord& r) { return to_array(r.omega1_out); })
      .def_property_readonly(
          "omega_s_out",
          [](const SimulationRecord& r) { return to_array(r.omega_s_out); })
      .def_property_readonly(
          "omega2",
          [](const SimulationRecord& r) { return to_array(r.omega2); })
      .def_property_readonly(
          "rho_z0",
          [](const SimulationRecord& r) { return trajectory_dict(r.rho_z0); })
      .def_property_readonly(
          "rho_zl",
          [](const SimulationRecord& r) { return trajectory_dict(r.rho_zl); });

  m.def("propagate", &propagate, py::arg("config"),
        py::call_guard<py::gil_scoped_release>(),
        "Run one simulation and return the full record.");
  m.def("integrated_exit_signal", &integrated_exit_signal, py::arg("record"));

  py::class_<ConvergenceReport>(m, "ConvergenceReport")
      .def_readonly("base_integral", &ConvergenceReport::base_integral)
      .def_readonly("refined_integral", &ConvergenceReport::refined_integral)
      .def_readonly("rel_change", &ConvergenceReport::rel_change)
      .def_readonly("passed", &ConvergenceReport::passed);
  m.def("convergence_check", &convergence_check, py::arg("config"),
        py::arg("refinement_factor") = 2,
        py::call_guard<py::gil_scoped_release>());

  py::class_<Spectrum>(m, "Spectrum")
      .def_property_readonly(
          "freq_offset",
          [](const Spectrum& s) { return to_array(s.freq_offset); })
      .def_property_readonly(
          "power", [](const Spectrum& s) { return to_array(s.power); })
      .def_readonly("fwhm", &Spectrum::fwhm)
      .def_readonly("peak_offset", &Spectrum::peak_offset)
      .def_readonly("n_fft", &Spectrum::n_fft);

  m.def(
      "power_spectrum",
      [](py::array_t<std::complex<double>,
                     py::array::c_style | py::array::forcecast>
             series,
         double dt) {
        const auto r = series.unchecked<1>();
        std::vector<complexd> v(static_cast<std::size_t>(r.shape(0)));
        for (py::ssize_t i = 0; i < r.shape(0); ++i)
          v[static_cast<std::size_t>(i)] = r(i);
        return power_spectrum(v, dt);
      },
      py::arg("series"), py::arg("dt"));
  m.def("spectral_asymmetry", &spectral_asymmetry, py::arg("spectrum"));
  m.def("integrated_signal", &integrated_signal, py::arg("record"));
  m.def("tail_peak_ratio", &tail_peak_ratio, py::arg("record"),
        py::arg("tail_start"));
  m.def("default_tail_start", &default_tail_start, py::arg("config"));

  py::class_<ExpFitResult>(m, "ExpFitResult")
      .def_readonly("amplitude", &ExpFitResult::amplitude)
      .def_readonly("rate", &ExpFitResult::rate)
      .def_readonly("residual", &ExpFitResult::residual);
  m.def(
      "exp_fit",
      [](py::array_t<double, py::array::c_style | py::array::forcecast> t,
         py::array_t<double, py::array::c_style | py::array::forcecast> y) {
        return exp_fit(as_vector(std::move(t)), as_vector(std::move(y)));
      },
      py::arg("t"), py::arg("y"),
      "Least-squares fit of y ~ amplitude * exp(-rate * t).");

  py::class_<ScanRow>(m, "ScanRow")
      .def_readonly("swept", &ScanRow::swept)
      .def_readonly("integral", &ScanRow::integral)
      .def_readonly("max_abs_rho_ba", &ScanRow::max_abs_rho_ba);
  py::class_<ScanResult>(m, "ScanResult")
      .def_readonly("rows", &ScanResult::rows)
      .def_readonly("fit", &ScanResult::fit);

  m.def(
      "delay_scan",
      [](const RunConfig& base,
         py::array_t<double, py::array::c_style | py::array::forcecast> taus,
         int jobs, std::optional<std::pair<double, double>> fit_range) {
        const std::vector<double> v = as_vector(std::move(taus));
        py::gil_scoped_release release;
        return delay_scan(base, v, jobs, fit_range);
      },
      py::arg("base"), py::arg("taus"), py::arg("jobs") = 1,
      py::arg("fit_range") = std::nullopt);
  m.def(
      "population_scan",
      [](const RunConfig& base,
         py::array_t<double, py::array::c_style | py::array::forcecast>
             values,
         int jobs) {
        const std::vector<double> v = as_vector(std::move(values));
        py::gil_scoped_release release;
        return population_scan(base, v, jobs);
      },
      py::arg("base"), py::arg("rho_bb_values"), py::arg("jobs") = 1);

  py::class_<SweepSettings>(m, "SweepSettings")
      .def(py::init<>())
      .def_readwrite("tau_start", &SweepSettings::tau_start)
      .def_readwrite("tau_stop", &SweepSettings::tau_stop)
      .def_readwrite("tau_step", &SweepSettings::tau_step)
      .def_readwrite("rho_bb", &SweepSettings::rho_bb)
      .def_readwrite("fixed_tau", &SweepSettings::fixed_tau)
      .def_readwrite("fit_from", &SweepSettings::fit_from)
      .def_readwrite("fit_to", &SweepSettings::fit_to)
      .def("taus", &SweepSettings::taus);

  py::class_<LoadedConfig>(m, "LoadedConfig")
      .def_readonly("run", &LoadedConfig::run)
      .def_readonly("sweep", &LoadedConfig::sweep)
      .def_readonly("digest", &LoadedConfig::digest);
  m.def("parse_config", &parse_config, py::arg("text"), py::arg("origin"));
  m.def("load_config_file", &load_config_file, py::arg("path"));
  m.def("dump_config", &dump_config, py::arg("run"), py::arg("sweep"));

  py::class_<TwoPhotonTerms>(m, "TwoPhotonTerms")
      .def_readonly("coupling", &TwoPhotonTerms::coupling)
      .def_readonly("stark", &TwoPhotonTerms::stark);
  m.def("two_photon_terms", &two_photon_terms, py::arg("e1"), py::arg("e2"),
        py::arg("medium"),
        "Effective B<->A coupling and differential light shift produced by "
        "the eliminated intermediate level at field amplitudes e1, e2.");
}
