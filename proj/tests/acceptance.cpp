// Release acceptance suite.
//
// Each numbered criterion prints exactly one [PASS]/[FAIL] line together
// with the measured numbers it was judged on; the process exits nonzero if
// any criterion fails. argv[1] must name the command-line binary, which the
// determinism and timing criteria drive end to end; everything else calls
// the library directly.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "mb1d/analysis.hpp"
#include "mb1d/bloch.hpp"
#include "mb1d/constants.hpp"
#include "mb1d/fourlevel.hpp"
#include "mb1d/medium.hpp"
#include "mb1d/pulse.hpp"
#include "mb1d/solver.hpp"

namespace fs = std::filesystem;
using namespace mb1d;
using clock_type = std::chrono::steady_clock;

namespace {

int criteria_passed = 0;

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

bool report(int index, const std::string& name, bool ok,
            const std::string& detail) {
  std::printf("[%s] %2d. %s -- %s\n", ok ? "PASS" : "FAIL", index,
              name.c_str(), detail.c_str());
  std::fflush(stdout);
  if (ok) ++criteria_passed;
  return ok;
}

double seconds_since(clock_type::time_point t0) {
  return std::chrono::duration<double>(clock_type::now() - t0).count();
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

// Manifest text with the wall-time line removed, for rerun comparison.
std::string without_wall_time(const std::string& text) {
  std::istringstream in(text);
  std::string line, out;
  while (std::getline(in, line))
    if (line.rfind("wall_time_s", 0) != 0) out += line + "\n";
  return out;
}

double tail_energy(const SimulationRecord& rec, double t_min) {
  double e = 0.0;
  for (std::size_t i = 0; i < rec.time.size(); ++i)
    if (rec.time[i] >= t_min) e += std::norm(rec.omega1_out[i]) * rec.grid.dt;
  return e;
}

double max_abs_rho_ax_after(const SimulationRecord& rec, double t_min) {
  double m = 0.0;
  for (std::size_t i = 0; i < rec.time.size(); ++i)
    if (rec.time[i] >= t_min)
      m = std::max(m, std::abs(rec.rho_z0[i].rho_ax));
  return m;
}

double rel_err(double a, double b) { return std::abs(a - b) / std::abs(b); }

}  // namespace

int main(int argc, char** argv) {
  if (argc < 2) {
    std::fprintf(stderr, "usage: %s <path-to-cli-binary>\n", argv[0]);
    return 2;
  }
  const std::string cli = argv[1];
  const MediumParams med;
  const DerivedRates rates = derive_rates(med);

  // ---- shared simulations ------------------------------------------------
  // Prompt-read ladder over the initial B population (read at zero delay).
  const double ladder[] = {0.0, 0.1, 0.2, 0.4};
  std::vector<SimulationRecord> prompt(4);
  double prompt_seconds[4] = {};
  for (int i = 0; i < 4; ++i) {
    RunConfig c;
    c.initial_state.rho_bb = ladder[i];
    c.apply_delay();
    const auto t0 = clock_type::now();
    prompt[i] = propagate(c);
    prompt_seconds[i] = seconds_since(t0);
  }
  RunConfig pump_defaults;  // for pulse timing constants below
  const double pump_center = pump_defaults.pump.center_time;
  const double pump_fwhm = pump_defaults.pump.duration_fwhm;

  // Delayed-read base (read 1 ps after the pump).
  RunConfig delayed_base;
  delayed_base.delay_tau = 1e-12;
  delayed_base.apply_delay();
  const ScanResult delayed_ladder = population_scan(delayed_base, ladder, 4);

  // ---- 1. retention tail magnitude ---------------------------------------
  {
    double ratios[4], worst_seconds = 0.0;
    for (int i = 0; i < 4; ++i) {
      ratios[i] = tail_peak_ratio(prompt[i], pump_center + 250e-15);
      worst_seconds = std::max(worst_seconds, prompt_seconds[i]);
    }
    const double lo = *std::min_element(ratios, ratios + 4);
    const double hi = *std::max_element(ratios, ratios + 4);
    const bool in_band = lo >= 1e-9 && hi <= 1e-6;
    const bool ok = in_band && hi / lo <= 3.0 && worst_seconds <= 60.0;
    report(1, "re-emitted tail intensity band and uniformity", ok,
           "tail/peak = {" + num(ratios[0]) + ", " + num(ratios[1]) + ", " +
               num(ratios[2]) + ", " + num(ratios[3]) +
               "} (band 1e-9..1e-6), spread = " + num(hi / lo) +
               " (limit 3), slowest run " + num(worst_seconds) +
               " s (limit 60)");
  }

  // ---- 2. delayed-readout suppression at empty B -------------------------
  {
    const double prompt_empty = integrated_signal(prompt[0]);
    const double delayed_empty = delayed_ladder.rows[0].integral;
    const double ratio = delayed_empty / prompt_empty;
    report(2, "delayed readout suppressed without stored population",
           ratio <= 1e-8,
           "delayed/prompt integrated signal = " + num(ratio) +
               " (limit 1e-8)");
  }

  // ---- 3. population enhancement ------------------------------------------
  {
    bool increasing = true;
    std::string ints, bas;
    for (int i = 0; i < 4; ++i) {
      const ScanRow& r = delayed_ladder.rows[i];
      if (i) {
        increasing = increasing &&
                     r.integral > delayed_ladder.rows[i - 1].integral &&
                     r.max_abs_rho_ba > delayed_ladder.rows[i - 1].max_abs_rho_ba;
        ints += " < ";
        bas += " < ";
      }
      ints += num(r.integral);
      bas += num(r.max_abs_rho_ba);
    }
    report(3, "stored population strictly enhances the delayed readout",
           increasing, "integrals " + ints + "; max|rho_BA| " + bas);
  }

  // ---- 4. spectral narrowing and asymmetry --------------------------------
  {
    RunConfig c = delayed_base;
    c.initial_state.rho_bb = 0.2;
    const SimulationRecord delayed_ref = propagate(c);
    const Spectrum sp = power_spectrum(prompt[2].omega_s_out,
                                       prompt[2].grid.dt);
    const Spectrum sd = power_spectrum(delayed_ref.omega_s_out,
                                       delayed_ref.grid.dt);
    const double ap = spectral_asymmetry(sp);
    const double ad = spectral_asymmetry(sd);
    const bool ok = sd.fwhm < sp.fwhm / 3.0 && ap > 0.1 && ad < 0.05;
    report(4, "delayed readout narrows and symmetrizes the line", ok,
           "fwhm prompt = " + num(sp.fwhm) + " Hz, delayed = " + num(sd.fwhm) +
               " Hz (need < " + num(sp.fwhm / 3.0) +
               "); asymmetry prompt = " + num(ap) +
               " (need > 0.1), delayed = " + num(ad) + " (need < 0.05)");
  }

  // ---- 5. retention decay law ---------------------------------------------
  {
    RunConfig base;
    base.initial_state.rho_bb = 0.4;
    base.apply_delay();
    std::vector<double> taus;
    for (int i = 0; i <= 10; ++i) taus.push_back(0.5e-12 + i * 0.15e-12);
    const ScanResult scan =
        delay_scan(base, taus, 4, std::make_pair(0.4e-12, 2.1e-12));
    const double target = 2.0 * rates.gamma_ax;
    const bool ok = scan.fit && rel_err(scan.fit->rate, target) <= 0.20;
    report(5, "delay-scan decay rate matches twice the X-A dephasing rate",
           ok,
           std::string("fit rate = ") +
               (scan.fit ? num(scan.fit->rate) : "none") + " 1/s, target " +
               num(target) + " +-20% over " + num(double(scan.rows.size())) +
               " delays in [0.5, 2] ps");
  }

  // ---- 6. two-level flopping closed form ----------------------------------
  {
    MediumParams two_level = med;
    two_level.dipole_ia = two_level.dipole_bi = two_level.dipole_bx = 0.0;
    const double omega1 = 2e13;
    const int n = 3000;
    const double dt = 1e-16;
    std::vector<FieldTriple> fields(n);
    for (FieldTriple& f : fields) f.omega1 = omega1;
    const DerivedRates no_decay{0.0, 0.0, 0.0, 0.0, 0.0};
    const auto traj =
        integrate_slice(fields, BlochState{}, no_decay, two_level, dt);
    double worst = 0.0;
    for (int i = 0; i < n; ++i) {
      const double expect = std::pow(std::sin(omega1 * (i * dt) / 2.0), 2);
      worst = std::max(worst, std::abs(traj[i].rho_aa - expect));
    }
    report(6, "two-level reduction reproduces sin^2 population transfer",
           worst < 1e-6, "max |rho_AA - sin^2| = " + num(worst) +
                             " (limit 1e-6 absolute)");
  }

  // ---- 7. frozen-medium growth closed form --------------------------------
  {
    RunConfig c;
    c.freeze_medium = true;
    c.frozen_rho_bx = 0.01;
    c.apply_delay();
    const SimulationRecord rec = propagate(c);
    double measured = 0.0;
    for (const complexd& v : rec.omega_s_out)
      measured = std::max(measured, std::abs(v));
    const double expect = rates.eta_bx * c.frozen_rho_bx * c.medium.length;
    const double rel = rel_err(measured, expect);
    report(7, "frozen-medium signal growth matches eta_BX * rho_BX * L",
           rel <= 1e-10, "|omega_s(L)| = " + num(measured) + ", expected " +
                             num(expect) + ", relative error " + num(rel) +
                             " (limit 1e-10)");
  }

  // ---- 8. weak-field linearity --------------------------------------------
  {
    RunConfig w;
    w.read.peak_amplitude = 0.0;
    w.initial_state.rho_bb = 0.0;
    w.apply_delay();
    RunConfig w2 = w, w3 = w;
    w2.pump.peak_amplitude = w.pump.peak_amplitude * 1e-2;
    w3.pump.peak_amplitude = w.pump.peak_amplitude * 1e-3;
    const SimulationRecord r2 = propagate(w2);
    const SimulationRecord r3 = propagate(w3);
    const double t_lin = pump_center + 3.0 * pump_fwhm;
    const double amp_ratio = max_abs_rho_ax_after(r2, t_lin) /
                             max_abs_rho_ax_after(r3, t_lin);
    const double energy_ratio = tail_energy(r2, pump_center + 250e-15) /
                                tail_energy(r3, pump_center + 250e-15);
    const bool ok =
        rel_err(amp_ratio, 10.0) <= 0.01 && rel_err(energy_ratio, 100.0) <= 0.02;
    report(8, "weak pump: linear coherence, quadratic tail energy", ok,
           "max|rho_AX| ratio = " + num(amp_ratio) +
               " (want 10 +-1%), tail energy ratio = " + num(energy_ratio) +
               " (want 100 +-2%)");
  }

  // ---- 9. explicit intermediate level vs reduced equations ----------------
  {
    RunConfig c;  // full-strength overlapped pump + read
    const double t_start = -150e-15, dt = 1e-16;
    const int n = 5501;
    const FourLevelResult full = integrate_four_level(
        c.pump, c.read, c.initial_state, med, t_start, dt, n);
    std::vector<FieldTriple> fields(n);
    for (int i = 0; i < n; ++i) {
      const double t = t_start + i * dt;
      fields[i].omega1 =
          med.dipole_ax * envelope_at(c.pump, t) / constants::hbar;
      fields[i].omega2 =
          med.dipole_bi * envelope_at(c.read, t) / constants::hbar;
    }
    const auto reduced =
        integrate_slice(fields, c.initial_state, rates, med, dt);
    double scale = 0.0, worst = 0.0;
    for (int i = 0; i < n; ++i)
      scale = std::max(scale, std::abs(reduced[i].rho_ba));
    for (int i = 0; i < n; ++i)
      if (t_start + i * dt >= 150e-15)
        worst = std::max(worst, std::abs(std::abs(full.rho_ba[i]) -
                                         std::abs(reduced[i].rho_ba)));
    const double ratio = worst / scale;
    report(9, "explicit fourth level matches the reduced rho_BA envelope",
           ratio <= 0.05,
           "sup envelope difference after overlap = " + num(worst) +
               ", peak |rho_BA| = " + num(scale) + ", ratio = " + num(ratio) +
               " (limit 0.05)");
  }

  // ---- 10. determinism and convergence ------------------------------------
  {
    const fs::path tmp = fs::temp_directory_path() / "mb1d_acceptance";
    fs::remove_all(tmp);
    fs::create_directories(tmp);
    const fs::path cfg = tmp / "reference.ini";
    std::ofstream(cfg) << "# built-in defaults\n";

    const auto shell = [&](const std::string& args) {
      return std::system((cli + " " + args + " > /dev/null 2>&1").c_str());
    };
    const int rc1 = shell("run \"" + cfg.string() + "\" --out \"" +
                          (tmp / "a").string() + "\"");
    const int rc2 = shell("run \"" + cfg.string() + "\" --out \"" +
                          (tmp / "b").string() + "\"");
    bool reruns_identical = rc1 == 0 && rc2 == 0;
    for (const char* f : {"omega1_out.csv", "omega_s_out.csv",
                          "rho_probes.csv"})
      reruns_identical =
          reruns_identical && slurp(tmp / "a" / f) == slurp(tmp / "b" / f) &&
          !slurp(tmp / "a" / f).empty();
    reruns_identical = reruns_identical &&
                       without_wall_time(slurp(tmp / "a" / "manifest.txt")) ==
                           without_wall_time(slurp(tmp / "b" / "manifest.txt"));

    const int rj1 = shell("delay-scan \"" + cfg.string() +
                          "\" --taus 500:1400:300 --jobs 1 --out \"" +
                          (tmp / "j1").string() + "\"");
    const int rj8 = shell("delay-scan \"" + cfg.string() +
                          "\" --taus 500:1400:300 --jobs 8 --out \"" +
                          (tmp / "j8").string() + "\"");
    const bool jobs_identical =
        rj1 == 0 && rj8 == 0 &&
        slurp(tmp / "j1" / "scan.csv") == slurp(tmp / "j8" / "scan.csv") &&
        !slurp(tmp / "j1" / "scan.csv").empty();

    RunConfig c;
    c.apply_delay();
    const ConvergenceReport conv = convergence_check(c, 2);
    const bool ok =
        reruns_identical && jobs_identical && conv.rel_change < 0.01;
    report(10, "bit-identical reruns, worker-count invariance, convergence",
           ok,
           std::string("reruns ") +
               (reruns_identical ? "identical" : "DIFFER") + "; jobs 1 vs 8 " +
               (jobs_identical ? "identical" : "DIFFER") +
               "; x2 refinement changes the integral by " +
               num(conv.rel_change) + " (limit 0.01)");
  }

  // ---- 11. check-suite runtime ---------------------------------------------
  {
    const fs::path tmp = fs::temp_directory_path() / "mb1d_acceptance";
    fs::create_directories(tmp);
    const auto t0 = clock_type::now();
    const int rc = std::system(
        (cli + " validate --jobs 4 > \"" + (tmp / "validate_out.txt").string() +
         "\" 2>&1")
            .c_str());
    const double secs = seconds_since(t0);
    report(11, "full check suite finishes within ten minutes",
           rc == 0 && secs <= 600.0,
           "completed in " + num(secs) + " s (limit 600), exit status " +
               num(double(rc)));
  }

  std::printf("acceptance: %d/11 criteria passed\n", criteria_passed);
  return criteria_passed == 11 ? 0 : 1;
}
