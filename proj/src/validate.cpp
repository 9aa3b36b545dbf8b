#include "mb1d/validate.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <cstring>
#include <functional>
#include <numbers>
#include <utility>

#include "mb1d/analysis.hpp"
#include "mb1d/bloch.hpp"
#include "mb1d/config_io.hpp"
#include "mb1d/constants.hpp"
#include "mb1d/fourlevel.hpp"
#include "mb1d/output.hpp"
#include "mb1d/solver.hpp"
#include "mb1d/theory.hpp"

namespace mb1d {

int ValidationReport::failure_count() const {
  int n = 0;
  for (const CheckResult& c : checks) n += c.passed ? 0 : 1;
  return n;
}

namespace {

std::string g(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

double rel_err(double measured, double expected) {
  const double denom = std::max(std::abs(expected), 1e-300);
  return std::abs(measured - expected) / denom;
}

using Body = std::function<std::pair<bool, std::string>()>;

void run_check(ValidationReport& report, std::string name, const Body& body) {
  CheckResult r{std::move(name), false, {}};
  try {
    auto [ok, detail] = body();
    r.passed = ok;
    r.detail = std::move(detail);
  } catch (const std::exception& e) {
    r.detail = std::string("aborted: ") + e.what();
  }
  report.checks.push_back(std::move(r));
}

double max_abs_rho_ax(std::span<const BlochState> traj,
                      std::span<const double> time, double t_min) {
  double best = 0.0;
  for (std::size_t i = 0; i < traj.size(); ++i)
    if (time[i] >= t_min) best = std::max(best, std::abs(traj[i].rho_ax));
  return best;
}

double max_abs_rho_ba(std::span<const BlochState> traj) {
  double best = 0.0;
  for (const BlochState& s : traj) best = std::max(best, std::abs(s.rho_ba));
  return best;
}

double tail_energy(const SimulationRecord& rec, double t_min) {
  double sum = 0.0;
  for (std::size_t i = 0; i < rec.time.size(); ++i)
    if (rec.time[i] >= t_min) sum += std::norm(rec.omega1_out[i]);
  return sum * rec.grid.dt;
}

bool bit_equal(std::span<const complexd> a, std::span<const complexd> b) {
  return a.size() == b.size() &&
         (a.empty() || std::memcmp(a.data(), b.data(),
                                   a.size() * sizeof(complexd)) == 0);
}

// The suite's shared simulation set. Computed once, failures surface in
// whichever check first touches the missing record.
struct SharedRuns {
  RunConfig ref;  // reference configuration (prompt read)
  SimulationRecord ref_a, ref_b;  // same config twice (determinism)
  RunConfig tau1;                 // read delayed 1 ps
  SimulationRecord bb0, bb01, bb02, bb04;  // initial rho_BB ladder at 1 ps
  RunConfig weak_base;
  SimulationRecord weak2, weak3;  // pump scaled by 1e-2 / 1e-3, read off
  ScanResult pop_scan;            // {0.1, 0.4} via the worker pool
};

SharedRuns compute_shared(int jobs) {
  SharedRuns s;
  s.ref.apply_delay();
  s.ref_a = propagate(s.ref);
  s.ref_b = propagate(s.ref);

  s.tau1.delay_tau = 1e-12;
  // Wide lead: the causality scan needs samples well before the pump. With
  // the read a full picosecond away its envelope underflows to exactly zero
  // there, so nothing can feed the signal channel that early.
  s.tau1.grid.lead_widths = 5.0;
  s.tau1.apply_delay();
  RunConfig c = s.tau1;
  c.initial_state.rho_bb = 0.0;
  s.bb0 = propagate(c);
  c.initial_state.rho_bb = 0.1;
  s.bb01 = propagate(c);
  c.initial_state.rho_bb = 0.2;
  s.bb02 = propagate(c);
  c.initial_state.rho_bb = 0.4;
  s.bb04 = propagate(c);

  s.weak_base.read.peak_amplitude = 0.0;
  s.weak_base.initial_state.rho_bb = 0.0;
  s.weak_base.apply_delay();
  RunConfig w = s.weak_base;
  w.pump.peak_amplitude = s.weak_base.pump.peak_amplitude * 1e-2;
  s.weak2 = propagate(w);
  w.pump.peak_amplitude = s.weak_base.pump.peak_amplitude * 1e-3;
  s.weak3 = propagate(w);

  const double bbs[] = {0.1, 0.4};
  s.pop_scan = population_scan(s.tau1, bbs, jobs);
  return s;
}

}  // namespace

ValidationReport run_validate_suite(int jobs, bool inject_fault) {
  using clock = std::chrono::steady_clock;
  const auto t0 = clock::now();
  ValidationReport report;
  const auto check = [&report](const char* name, const Body& body) {
    run_check(report, name, body);
  };

  const MediumParams med;  // reference medium throughout

  // ---- closed-form oracles on the building blocks ----

  check("dephasing rates from decay inputs", [&]() -> std::pair<bool, std::string> {
    const DerivedRates r = derive_rates(med);
    const bool ok = r.gamma_ax == med.gamma_a / 2 + med.gamma_col &&
                    r.gamma_ba ==
                        (med.gamma_a + med.gamma_b) / 2 + med.gamma_col &&
                    r.gamma_bx == med.gamma_b / 2 + med.gamma_col &&
                    rel_err(r.gamma_ax, 1.005e9) < 1e-12 &&
                    rel_err(r.gamma_ba, 1.01e9) < 1e-12;
    return {ok, "gamma_ax=" + g(r.gamma_ax) + " gamma_ba=" + g(r.gamma_ba) +
                    " gamma_bx=" + g(r.gamma_bx)};
  });

  check("field-coupling constants", [&]() -> std::pair<bool, std::string> {
    const DerivedRates r = derive_rates(med);
    const double ax = 3.0 * med.density * med.lambda_ax * med.lambda_ax *
                      med.gamma_a / (8.0 * constants::pi);
    const double bx = 3.0 * med.density * med.lambda_bx * med.lambda_bx *
                      med.gamma_b / (8.0 * constants::pi);
    const bool ok = r.eta_ax == ax && r.eta_bx == bx &&
                    rel_err(r.eta_ax, 3.0558e16) < 1e-3 &&
                    rel_err(r.eta_bx, 5.1776e15) < 1e-3;
    return {ok, "eta_ax=" + g(r.eta_ax) + " eta_bx=" + g(r.eta_bx)};
  });

  check("two-photon coupling magnitude", [&]() -> std::pair<bool, std::string> {
    const TwoPhotonTerms tp = two_photon_terms(3e10, 0.7e10, med);
    const bool ok = rel_err(std::abs(tp.coupling), 1.88829e13) < 1e-3;
    return {ok, "|coupling|=" + g(std::abs(tp.coupling))};
  });

  check("light-shift magnitude and sign", [&]() -> std::pair<bool, std::string> {
    const TwoPhotonTerms tp = two_photon_terms(3e10, 0.7e10, med);
    const bool ok = tp.stark < 0.0 && rel_err(tp.stark, -7.65205e13) < 1e-3;
    return {ok, "stark=" + g(tp.stark)};
  });

  check("two-photon scaling laws", [&]() -> std::pair<bool, std::string> {
    const TwoPhotonTerms base = two_photon_terms(1.3e10, 0.6e10, med);
    const TwoPhotonTerms lin = two_photon_terms(2 * 1.3e10, 3 * 0.6e10, med);
    const TwoPhotonTerms quad = two_photon_terms(2 * 1.3e10, 2 * 0.6e10, med);
    const bool ok =
        std::abs(lin.coupling - 6.0 * base.coupling) <=
            1e-12 * std::abs(base.coupling) &&
        std::abs(quad.stark - 4.0 * base.stark) <= 1e-12 * std::abs(base.stark);
    return {ok, "coupling ratio=" + g(std::abs(lin.coupling / base.coupling)) +
                    " stark ratio=" + g(quad.stark / base.stark)};
  });

  check("ground state is stationary", [&]() -> std::pair<bool, std::string> {
    const BlochState d =
        bloch_rhs(BlochState{}, FieldTriple{}, {}, 0.0, derive_rates(med), med);
    const bool ok = d.rho_aa == 0.0 && d.rho_bb == 0.0 &&
                    d.rho_ax == complexd{} && d.rho_ba == complexd{} &&
                    d.rho_bx == complexd{};
    return {ok, ""};
  });

  check("field-free decay rates", [&]() -> std::pair<bool, std::string> {
    const DerivedRates r = derive_rates(med);
    BlochState state;
    state.rho_aa = 0.3;
    state.rho_bb = 0.2;
    state.rho_ax = {0.1, -0.05};
    state.rho_ba = {-0.02, 0.04};
    state.rho_bx = {0.03, 0.01};
    const BlochState d = bloch_rhs(state, FieldTriple{}, {}, 0.0, r, med);
    const bool ok =
        rel_err(d.rho_aa, -med.gamma_a * state.rho_aa) < 1e-12 &&
        rel_err(d.rho_bb, -med.gamma_b * state.rho_bb) < 1e-12 &&
        std::abs(d.rho_ax - (-r.gamma_ax) * state.rho_ax) <
            1e-12 * std::abs(state.rho_ax) * r.gamma_ax &&
        std::abs(d.rho_bx - (-r.gamma_bx) * state.rho_bx) <
            1e-12 * std::abs(state.rho_bx) * r.gamma_bx;
    return {ok, "d(rho_aa)=" + g(d.rho_aa)};
  });

  check("pump source linear at ground", [&]() -> std::pair<bool, std::string> {
    const DerivedRates r = derive_rates(med);
    FieldTriple f1, f2;
    f1.omega1 = {2e14, 3e13};
    f2.omega1 = f1.omega1 * 2.0;
    const BlochState d1 = bloch_rhs(BlochState{}, f1, {}, 0.0, r, med);
    const BlochState d2 = bloch_rhs(BlochState{}, f2, {}, 0.0, r, med);
    // From the ground state the X-A source is i*g1*(rho_xx - rho_aa), where
    // g1 is the (already halved) drive the integrator hands over in
    // FieldTriple. At this layer the factor is identity.
    const complexd expect = complexd{0, 1} * f1.omega1;
    const bool ok = d2.rho_ax == 2.0 * d1.rho_ax &&
                    std::abs(d1.rho_ax - expect) < 1e-3 * std::abs(expect);
    return {ok, "d(rho_ax)=" + g(d1.rho_ax.real()) + "+" +
                    g(d1.rho_ax.imag()) + "i"};
  });

  check("conjugation symmetry of trajectories",
        [&]() -> std::pair<bool, std::string> {
          // Pump-only drive with a complex envelope: flipping the envelope's
          // sign and conjugating it must conjugate every coherence and leave
          // the populations untouched, sample for sample, bit for bit.
          const int n = 400;
          const double dt = 1e-16;
          std::vector<FieldTriple> fa(n), fb(n);
          for (int i = 0; i < n; ++i) {
            const double t = (i - n / 2) * dt;
            const complexd env =
                2.3e14 * std::exp(-t * t / (2e-29)) *
                std::exp(complexd{0, 1} * (3e13 * t + 0.4));
            fa[i].omega1 = env;
            fb[i].omega1 = -std::conj(env);
          }
          BlochState init;
          init.rho_aa = 0.1;
          init.rho_bb = 0.25;
          const DerivedRates r = derive_rates(med);
          const auto ta = integrate_slice(fa, init, r, med, dt);
          const auto tb = integrate_slice(fb, init, r, med, dt);
          for (int i = 0; i < n; ++i) {
            if (ta[i].rho_aa != tb[i].rho_aa || ta[i].rho_bb != tb[i].rho_bb ||
                ta[i].rho_ax != std::conj(tb[i].rho_ax))
              return {false, "first mismatch at sample " + std::to_string(i)};
          }
          return {true, ""};
        });

  check("resonant flopping closed form", [&]() -> std::pair<bool, std::string> {
    // Two-level reduction: only the pump dipole is nonzero, all decay is
    // switched off, the drive is constant. Population must follow
    // sin^2(omega1 * t / 2) exactly (to integrator accuracy).
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
    return {worst < 1e-6, "max |rho_aa - sin^2|=" + g(worst)};
  });

  check("light-shift rotation direction", [&]() -> std::pair<bool, std::string> {
    // A lone read field shifts the B-A coherence and makes an initial
    // rho_BA phasor rotate at the shift rate. The measured rotation must
    // match the computed shift in size and, critically, in direction.
    // (inject_fault flips the sign inside the integrator; this probe is the
    // check that proves such a fault cannot go unnoticed.)
    const double e2 = 0.7e10;
    const int n = 2000;
    const double dt = 1e-16;
    std::vector<FieldTriple> fields(n);
    for (FieldTriple& f : fields)
      f.omega2 = med.dipole_bi * e2 / constants::hbar;
    BlochState init;
    init.rho_aa = 0.5;
    init.rho_bb = 0.5;
    init.rho_ba = {0.4, 0.0};
    const auto traj = integrate_slice(fields, init, derive_rates(med), med, dt,
                                      inject_fault);
    const int i1 = n / 2, i2 = n - 1;
    const double drift =
        std::arg(traj[i2].rho_ba) - std::arg(traj[i1].rho_ba);
    // Drive at half the field amplitude, so the shift seen by the equations
    // is the one evaluated at e2/2.
    const double expect =
        two_photon_terms(0.0, e2 / 2.0, med).stark * (i2 - i1) * dt;
    const bool ok = drift * expect > 0.0 && rel_err(drift, expect) < 0.01;
    return {ok, "phase drift=" + g(drift) + " expected=" + g(expect)};
  });

  check("explicit intermediate level agrees",
        [&]() -> std::pair<bool, std::string> {
          // Brute-force four-level integration (far-detuned level kept as a
          // real state) against the reduced equations, compared on the B-A
          // coherence envelope once the pulses have passed. The reduction
          // neglects the I-X coherence, which carries a two-photon route
          // into rho_BX whose weight grows with pump area, so the models can
          // only be expected to agree where the pump area is small. The
          // full-strength comparison is part of the acceptance suite.
          RunConfig c;  // overlapped pump+read, rho_BB(0)=0.2
          c.pump.peak_amplitude = 3e8;
          c.read.peak_amplitude = 7e8;
          const double t_start = -150e-15, dt = 1e-16;
          const int n = 5501;  // through +400 fs
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
          const auto reduced = integrate_slice(fields, c.initial_state,
                                               derive_rates(med), med, dt);
          double scale = 0.0;
          for (const BlochState& s : reduced)
            scale = std::max(scale, std::abs(s.rho_ba));
          double worst = 0.0;
          for (int i = 0; i < n; ++i)
            if (t_start + i * dt >= 150e-15)
              worst = std::max(worst, std::abs(std::abs(full.rho_ba[i]) -
                                              std::abs(reduced[i].rho_ba)));
          const bool ok = scale > 0.0 && worst <= 0.05 * scale;
          return {ok, "sup diff=" + g(worst) + " scale=" + g(scale) +
                          " ratio=" + g(scale > 0 ? worst / scale : 0.0)};
        });

  // ---- closed-form estimate layer ----

  const PerturbativeInputs pin{2.5e14, 50e-15, 1.0, 0.0, 0.2, 1.005e9, 7e13};

  check("first-order coherence is imaginary",
        [&]() -> std::pair<bool, std::string> {
          const complexd c1 = perturbative_coherence(pin, 0.0);
          const complexd c2 = perturbative_coherence(pin, 0.7e-9);
          const bool ok = c1.real() == 0.0 && c2.real() == 0.0 &&
                          c1.imag() > 0.0;
          return {ok, "coherence(0)=" + g(c1.real()) + "+" + g(c1.imag()) + "i"};
        });

  check("stored-intensity decay law", [&]() -> std::pair<bool, std::string> {
    const double i0 = retained_intensity(pin, 0.0);
    bool ok = i0 > 0.0;
    std::string detail;
    for (double t : {0.3e-9, 1.0e-9}) {
      const double ratio = retained_intensity(pin, t) / i0;
      const double expect = std::exp(-2.0 * pin.gamma_ax * t);
      ok = ok && rel_err(ratio, expect) < 1e-12;
      detail = "ratio(" + g(t) + ")=" + g(ratio);
    }
    return {ok, detail};
  });

  check("readout estimate even in population difference",
        [&]() -> std::pair<bool, std::string> {
          PerturbativeInputs a = pin, b = pin;
          a.rho_xx0 = 1.0;
          a.rho_aa0 = 0.2;
          b.rho_aa0 = 0.2;
          b.rho_xx0 = a.rho_aa0 - (a.rho_xx0 - a.rho_aa0);  // flipped diff
          const double ra = tpa_rate_estimate(a, 1e-12);
          const double rb = tpa_rate_estimate(b, 1e-12);
          return {rel_err(ra, rb) < 1e-12, "forward=" + g(ra) + " flipped=" + g(rb)};
        });

  // ---- spectrum / fit utilities ----

  check("spectrum preserves total power", [&]() -> std::pair<bool, std::string> {
    std::vector<complexd> series(777);
    double sum = 0.0;
    for (std::size_t i = 0; i < series.size(); ++i) {
      const double t = static_cast<double>(i);
      series[i] = std::exp(complexd{0, 0.05} * t) *
                  std::exp(-std::pow((t - 300.0) / 120.0, 2)) *
                  (1.0 + 0.3 * std::sin(0.4 * t));
      sum += std::norm(series[i]);
    }
    const Spectrum sp = power_spectrum(series, 1e-15);
    double total = 0.0;
    for (double p : sp.power) total += p;
    const double err = rel_err(total, sum * sp.n_fft);
    return {err < 1e-9, "relative Parseval error=" + g(err)};
  });

  check("constant series peaks at zero frequency",
        [&]() -> std::pair<bool, std::string> {
          std::vector<complexd> series(64, complexd{1.0, 0.0});
          const Spectrum sp = power_spectrum(series, 1e-15);
          double best = 0.0;
          for (std::size_t i = 0; i < sp.power.size(); ++i)
            best = std::max(best, sp.power[i]);
          std::size_t peak = 0;
          for (std::size_t i = 0; i < sp.power.size(); ++i)
            if (sp.power[i] == best) peak = i;
          const bool ok = sp.peak_offset == 0.0 && sp.freq_offset[peak] == 0.0;
          return {ok, "peak offset=" + g(sp.peak_offset)};
        });

  check("exponential fit recovers a known decay",
        [&]() -> std::pair<bool, std::string> {
          std::vector<double> t, y, yk;
          // Sample the decay over its natural 1/rate scale so the fit is
          // well conditioned and the tight equivariance bound is meaningful.
          for (int i = 0; i < 12; ++i) {
            t.push_back(0.05e-9 + i * 0.15e-9);
            y.push_back(3.7 * std::exp(-2.01e9 * t.back()));
            yk.push_back(y.back() * 5.0);
          }
          const ExpFitResult f = exp_fit(t, y);
          const ExpFitResult fk = exp_fit(t, yk);
          const bool ok = rel_err(f.rate, 2.01e9) < 1e-9 &&
                          rel_err(f.amplitude, 3.7) < 1e-9 &&
                          rel_err(fk.rate, f.rate) < 1e-12 &&
                          rel_err(fk.amplitude, 5.0 * f.amplitude) < 1e-12;
          return {ok, "rate=" + g(f.rate) + " amplitude=" + g(f.amplitude)};
        });

  // ---- exact round-trips ----

  check("numeric formatting round-trips", [&]() -> std::pair<bool, std::string> {
    const double values[] = {0.1,     1.0 / 3.0, 6.02214076e23, 1e-300,
                             2.64e10, -7.65e13,  123456.789,    0.0};
    for (double v : values) {
      if (parse_scaled(format_double(v), 0) != v)
        return {false, "plain round-trip broke at " + g(v)};
      for (int p : {-15, -9, -3, 6, 9})
        if (parse_scaled(format_scaled(v, p), p) != v)
          return {false, "scaled round-trip broke at " + g(v) +
                             " power " + std::to_string(p)};
    }
    return {true, ""};
  });

  check("configuration text round-trip", [&]() -> std::pair<bool, std::string> {
    RunConfig r;
    SweepSettings s;
    r.pump.duration_fwhm = 47.3e-15;
    r.medium.delta = 1.23456789e15;
    r.medium.density = 3.3e22;
    r.initial_state.rho_bb = 1.0 / 3.0;
    r.apply_delay();
    const std::string text = dump_config(r, s);
    const LoadedConfig back = parse_config(text, "round-trip");
    const bool exact =
        back.run.pump.duration_fwhm == r.pump.duration_fwhm &&
        back.run.medium.delta == r.medium.delta &&
        back.run.medium.density == r.medium.density &&
        back.run.initial_state.rho_bb == r.initial_state.rho_bb &&
        back.run.medium.length == r.medium.length &&
        back.run.grid.dt == r.grid.dt;
    const bool stable = dump_config(back.run, back.sweep) == text;
    return {exact && stable,
            exact ? (stable ? "" : "re-dump differs") : "parsed values differ"};
  });

  // ---- end-to-end propagation ----

  SharedRuns runs;
  bool shared_ok = false;
  std::string shared_error;
  try {
    runs = compute_shared(jobs);
    shared_ok = true;
  } catch (const std::exception& e) {
    shared_error = e.what();
  }
  const auto need_runs = [&](const Body& body) {
    return [&, body]() -> std::pair<bool, std::string> {
      if (!shared_ok) return {false, "simulation set failed: " + shared_error};
      return body();
    };
  };

  check("repeated run is bit-identical", need_runs([&]() -> std::pair<bool, std::string> {
    const bool ok = bit_equal(runs.ref_a.omega1_out, runs.ref_b.omega1_out) &&
                    bit_equal(runs.ref_a.omega_s_out, runs.ref_b.omega_s_out);
    return {ok, ""};
  }));

  check("populations stay physical", need_runs([&]() -> std::pair<bool, std::string> {
    double lo = 1.0, hi = 0.0;
    for (const SimulationRecord* rec :
         {&runs.ref_a, &runs.bb0, &runs.bb04, &runs.weak2}) {
      for (const auto* traj : {&rec->rho_z0, &rec->rho_zl}) {
        for (const BlochState& s : *traj) {
          lo = std::min(lo, s.rho_xx());
          hi = std::max(hi, s.rho_xx());
        }
      }
    }
    const bool ok = lo >= -1e-9 && hi <= 1.0 + 1e-9;
    return {ok, "rho_xx range [" + g(lo) + ", " + g(hi) + "]"};
  }));

  check("no signal before the pump", need_runs([&]() -> std::pair<bool, std::string> {
    double pump_peak = 0.0;
    for (const complexd& v : runs.bb02.omega1_in)
      pump_peak = std::max(pump_peak, std::abs(v));
    const double cutoff =
        runs.tau1.pump.center_time - 3.0 * runs.tau1.pump.duration_fwhm;
    double worst = 0.0;
    for (std::size_t i = 0; i < runs.bb02.time.size(); ++i)
      if (runs.bb02.time[i] < cutoff)
        worst = std::max(worst, std::abs(runs.bb02.omega_s_out[i]));
    const bool ok = worst <= 1e-30 * pump_peak;
    return {ok, "max early |omega_s|/pump peak=" + g(worst / pump_peak)};
  }));

  check("weak pump responds linearly", need_runs([&]() -> std::pair<bool, std::string> {
    const double t_min = runs.weak_base.pump.center_time +
                         3.0 * runs.weak_base.pump.duration_fwhm;
    const double m2 = max_abs_rho_ax(runs.weak2.rho_z0, runs.weak2.time, t_min);
    const double m3 = max_abs_rho_ax(runs.weak3.rho_z0, runs.weak3.time, t_min);
    const double ratio = m2 / m3;
    return {rel_err(ratio, 10.0) < 0.01, "amplitude ratio=" + g(ratio)};
  }));

  check("weak pump tail scales quadratically",
        need_runs([&]() -> std::pair<bool, std::string> {
          const double t_min = runs.weak_base.pump.center_time + 250e-15;
          const double e2 = tail_energy(runs.weak2, t_min);
          const double e3 = tail_energy(runs.weak3, t_min);
          const double ratio = e2 / e3;
          return {rel_err(ratio, 100.0) < 0.02, "energy ratio=" + g(ratio)};
        }));

  check("first-order estimate matches weak run",
        need_runs([&]() -> std::pair<bool, std::string> {
          PerturbativeInputs in;
          RunConfig w = runs.weak_base;
          w.pump.peak_amplitude *= 1e-2;
          in.peak_rabi_pump = w.medium.dipole_ax * w.pump.peak_amplitude / constants::hbar;
          in.duration_fwhm = w.pump.duration_fwhm;
          in.rho_xx0 = 1.0;
          in.rho_aa0 = 0.0;
          in.gamma_ax = derive_rates(w.medium).gamma_ax;
          const double t_probe = w.pump.center_time + 300e-15;
          double measured = 0.0;
          for (std::size_t i = 0; i < runs.weak2.time.size(); ++i)
            if (runs.weak2.time[i] >= t_probe) {
              measured = std::abs(runs.weak2.rho_z0[i].rho_ax);
              break;
            }
          const double expect = std::abs(perturbative_coherence(
              in, t_probe - w.pump.center_time));
          return {rel_err(measured, expect) < 0.10,
                  "measured=" + g(measured) + " estimate=" + g(expect)};
        }));

  check("retention tail within expected band",
        need_runs([&]() -> std::pair<bool, std::string> {
          const double ratio = tail_peak_ratio(
              runs.ref_a, runs.ref.pump.center_time + 250e-15);
          const bool ok = ratio >= 1e-9 && ratio <= 1e-6;
          return {ok, "tail/peak intensity=" + g(ratio)};
        }));

  check("re-emitted tail rings at a collective rate", need_runs([&]() -> std::pair<bool, std::string> {
    // Fit ln|omega1_out| past the pulse. At this density-length product the
    // stored coherence re-radiates as absorption ringing, so the exit tail
    // must decay faster than the bare X-A dephasing rate but cannot outrun
    // the total field-coupling scale eta_AX * L.
    const double t_min = default_tail_start(runs.ref);
    std::vector<double> t, y;
    for (std::size_t i = 0; i < runs.ref_a.time.size(); ++i) {
      const double a = std::abs(runs.ref_a.omega1_out[i]);
      if (runs.ref_a.time[i] >= t_min && a > 0.0) {
        t.push_back(runs.ref_a.time[i]);
        y.push_back(a);
      }
    }
    const ExpFitResult fit = exp_fit(t, y);
    const DerivedRates rates = derive_rates(runs.ref.medium);
    const double lo = rates.gamma_ax;
    const double hi = rates.eta_ax * runs.ref.medium.length;
    const bool ok = fit.rate > lo && fit.rate < hi;
    return {ok, "fit rate=" + g(fit.rate) + " bounds=(" + g(lo) + ", " +
                    g(hi) + ")"};
  }));

  check("readout requires stored population",
        need_runs([&]() -> std::pair<bool, std::string> {
          const double empty = integrated_signal(runs.bb0);
          const double stored = integrated_signal(runs.bb04);
          const bool ok = stored > 0.0 && empty <= 1e-6 * stored;
          return {ok, "empty/stored=" + g(empty / stored)};
        }));

  check("readout grows with stored population",
        need_runs([&]() -> std::pair<bool, std::string> {
          const double i0 = integrated_signal(runs.bb0);
          const double i1 = integrated_signal(runs.bb01);
          const double i2 = integrated_signal(runs.bb02);
          const double i4 = integrated_signal(runs.bb04);
          const double b1 = max_abs_rho_ba(runs.bb01.rho_zl);
          const double b2 = max_abs_rho_ba(runs.bb02.rho_zl);
          const double b4 = max_abs_rho_ba(runs.bb04.rho_zl);
          const bool ok = i0 < i1 && i1 < i2 && i2 < i4 && b1 < b2 && b2 < b4;
          return {ok, "integrals " + g(i0) + " < " + g(i1) + " < " + g(i2) +
                          " < " + g(i4)};
        }));

  check("parallel scan matches serial runs",
        need_runs([&]() -> std::pair<bool, std::string> {
          if (runs.pop_scan.rows.size() != 2)
            return {false, "expected 2 scan rows"};
          const bool ok =
              runs.pop_scan.rows[0].integral == integrated_signal(runs.bb01) &&
              runs.pop_scan.rows[1].integral == integrated_signal(runs.bb04) &&
              runs.pop_scan.rows[0].max_abs_rho_ba ==
                  max_abs_rho_ba(runs.bb01.rho_zl) &&
              runs.pop_scan.rows[1].max_abs_rho_ba ==
                  max_abs_rho_ba(runs.bb04.rho_zl);
          return {ok, ""};
        }));

  check("delayed readout smooths the line shape",
        need_runs([&]() -> std::pair<bool, std::string> {
          // The prompt signal carries interference between the burst emitted
          // during pulse overlap and the long coherent tail, which skews its
          // spectrum; a delayed readout has no overlap burst, so its spectrum
          // must be closer to symmetric.
          const Spectrum prompt =
              power_spectrum(runs.ref_a.omega_s_out, runs.ref_a.grid.dt);
          const Spectrum delayed =
              power_spectrum(runs.bb02.omega_s_out, runs.bb02.grid.dt);
          const double a0 = spectral_asymmetry(prompt);
          const double a1 = spectral_asymmetry(delayed);
          const bool ok = prompt.fwhm > 0.0 && delayed.fwhm > 0.0 &&
                          std::abs(a1) < std::abs(a0);
          return {ok, "prompt asym=" + g(a0) + " delayed asym=" + g(a1)};
        }));

  check("frozen-medium growth closed form", [&]() -> std::pair<bool, std::string> {
    RunConfig c;
    c.freeze_medium = true;
    c.frozen_rho_bx = 0.01;
    c.apply_delay();
    const SimulationRecord rec = propagate(c);
    double measured = 0.0;
    for (const complexd& v : rec.omega_s_out)
      measured = std::max(measured, std::abs(v));
    const double expect =
        derive_rates(c.medium).eta_bx * c.frozen_rho_bx * c.medium.length;
    return {rel_err(measured, expect) < 1e-10,
            "|omega_s(L)|=" + g(measured) + " expected=" + g(expect)};
  });

  check("self-convergence under refinement", [&]() -> std::pair<bool, std::string> {
    RunConfig c;
    c.apply_delay();
    const ConvergenceReport r = convergence_check(c, 2);
    return {r.passed, "relative change=" + g(r.rel_change)};
  });

  report.wall_seconds =
      std::chrono::duration<double>(clock::now() - t0).count();
  return report;
}

}  // namespace mb1d
