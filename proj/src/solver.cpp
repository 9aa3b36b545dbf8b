#include "mb1d/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "mb1d/constants.hpp"
#include "mb1d/rk4.hpp"

namespace mb1d {

namespace {

constexpr complexd kImag{0.0, 1.0};

void require(bool ok, const std::string& what) {
  if (!ok) throw std::invalid_argument(what);
}

// Everything bloch_rhs needs for one RK4 stage.
struct StageDrive {
  FieldTriple half;  // half-envelope drives
  complexd tp{};
  double stark = 0.0;
};

// The one place where full Rabi envelopes become equation drives: each
// channel couples at half its envelope, and the two-photon terms are formed
// from the half field amplitudes reconstructed through the channel dipoles.
StageDrive make_drive(const FieldTriple& full, const MediumParams& m,
                      bool flip_stark_sign) {
  StageDrive d;
  d.half.omega1 = 0.5 * full.omega1;
  d.half.omega2 = 0.5 * full.omega2;
  d.half.omega_s = 0.5 * full.omega_s;
  const complexd e1_half = constants::hbar * d.half.omega1 / m.dipole_ax;
  const complexd e2_half =
      m.dipole_bi != 0.0
          ? complexd{constants::hbar * d.half.omega2 / m.dipole_bi}
          : complexd{};
  const TwoPhotonTerms tt = two_photon_terms(e1_half, e2_half, m);
  d.tp = tt.coupling;
  d.stark = flip_stark_sign ? -tt.stark : tt.stark;
  return d;
}

bool plausible(const BlochState& s) {
  const auto ok_pop = [](double p) { return p > -0.5 && p < 1.5; };
  const auto ok_coh = [](const complexd& c) {
    return std::abs(c.real()) < 2.0 && std::abs(c.imag()) < 2.0;
  };
  return ok_pop(s.rho_aa) && ok_pop(s.rho_bb) && ok_coh(s.rho_ax) &&
         ok_coh(s.rho_ba) && ok_coh(s.rho_bx);
}

struct SliceWork {
  std::vector<BlochState> states;
  std::vector<complexd> source_ax, source_bx;
};

void integrate_slice_core(std::span<const FieldTriple> fields,
                          const BlochState& initial, const DerivedRates& rates,
                          const MediumParams& params, double dt,
                          bool flip_stark_sign, SliceWork& out) {
  const int nt = static_cast<int>(fields.size());
  require(nt >= 1, "integrate_slice: field series is empty");
  require(dt > 0.0 && std::isfinite(dt), "integrate_slice: dt must be positive");
  out.states.resize(nt);
  out.source_ax.resize(nt);
  out.source_bx.resize(nt);

  BlochState s = initial;
  out.states[0] = s;
  for (int i = 0; i + 1 < nt; ++i) {
    const FieldTriple& f0 = fields[i];
    const FieldTriple& f1 = fields[i + 1];
    const FieldTriple fm{0.5 * (f0.omega1 + f1.omega1),
                         0.5 * (f0.omega2 + f1.omega2),
                         0.5 * (f0.omega_s + f1.omega_s)};
    const StageDrive d0 = make_drive(f0, params, flip_stark_sign);
    const StageDrive dm = make_drive(fm, params, flip_stark_sign);
    const StageDrive d1 = make_drive(f1, params, flip_stark_sign);
    s = rk4_step(s, dt, [&](const BlochState& y, int stage) {
      const StageDrive& d = stage == 0 ? d0 : (stage == 3 ? d1 : dm);
      return bloch_rhs(y, d.half, d.tp, d.stark, rates, params);
    });
    if (!plausible(s)) {
      throw std::runtime_error(
          "density-matrix integration diverged at time index " +
          std::to_string(i + 1) + "; decrease grid.dt");
    }
    out.states[i + 1] = s;
  }
  for (int i = 0; i < nt; ++i) {
    out.source_ax[i] = kImag * rates.eta_ax * out.states[i].rho_ax;
    out.source_bx[i] = kImag * rates.eta_bx * out.states[i].rho_bx;
  }
}

double peak_drive_rate(const RunConfig& c) {
  const double w1 = std::abs(c.medium.dipole_ax * c.pump.peak_amplitude) /
                    constants::hbar;
  const double w2 = std::abs(c.medium.dipole_bi * c.read.peak_amplitude) /
                    constants::hbar;
  const double ws = std::abs(c.medium.dipole_bx * c.seed.peak_amplitude) /
                    constants::hbar;
  const TwoPhotonTerms tt =
      two_photon_terms(0.5 * c.pump.peak_amplitude,
                       0.5 * c.read.peak_amplitude, c.medium);
  return std::max({w1, w2, ws, std::abs(tt.coupling), std::abs(tt.stark)});
}

}  // namespace

void GridSpec::validate() const {
  require(std::isfinite(dt) && dt > 0.0, "GridSpec.dt must be positive");
  require(nz >= 1, "GridSpec.nz must be at least 1");
  require(std::isfinite(tail_window) && tail_window >= 0.0,
          "GridSpec.tail_window must be non-negative");
  require(std::isfinite(lead_widths) && lead_widths >= 3.0,
          "GridSpec.lead_widths must be at least 3");
}

SimulationGrid SimulationGrid::from_config(const RunConfig& config) {
  config.grid.validate();
  const PulseSpec* pulses[] = {&config.pump, &config.read, &config.seed};
  double t0 = std::numeric_limits<double>::infinity();
  double t_last = -std::numeric_limits<double>::infinity();
  bool any_active = false;
  for (int pass = 0; pass < 2 && !any_active; ++pass) {
    for (const PulseSpec* p : pulses) {
      if (pass == 0 && !p->active()) continue;
      if (pass == 0) any_active = true;
      t0 = std::min(t0, p->center_time -
                            config.grid.lead_widths * p->duration_fwhm);
      t_last = std::max(t_last, p->center_time);
    }
    if (pass == 1) break;  // fallback pass ran because nothing was active
  }
  const double t_end = t_last + config.grid.tail_window;

  SimulationGrid g;
  g.nz = config.grid.nz;
  g.dz = config.medium.length / g.nz;
  g.dt = config.grid.dt;
  g.t_start = t0;
  g.nt = static_cast<int>(std::ceil((t_end - t0) / g.dt - 1e-9)) + 1;
  g.nt = std::max(g.nt, 2);
  return g;
}

void RunConfig::validate() const {
  medium.validate();
  pump.validate();
  read.validate();
  seed.validate();
  grid.validate();
  require(std::isfinite(delay_tau), "RunConfig.delay_tau must be finite");
  require(read.center_time == pump.center_time + delay_tau,
          "RunConfig.delay_tau is inconsistent with read.center_time; call "
          "apply_delay() after changing either");
  const double aa = initial_state.rho_aa;
  const double bb = initial_state.rho_bb;
  require(aa >= 0.0 && aa <= 1.0,
          "RunConfig.initial_state.rho_aa must lie in [0,1]");
  require(bb >= 0.0 && bb <= 1.0,
          "RunConfig.initial_state.rho_bb must lie in [0,1]");
  require(aa + bb <= 1.0 + 1e-12,
          "RunConfig.initial_state populations must sum to at most 1");
  require(std::abs(initial_state.rho_ax) <= 1.0 &&
              std::abs(initial_state.rho_ba) <= 1.0 &&
              std::abs(initial_state.rho_bx) <= 1.0,
          "RunConfig.initial_state coherence magnitudes must be at most 1");
  require(std::isfinite(frozen_rho_bx) && std::abs(frozen_rho_bx) <= 1.0,
          "RunConfig.frozen_rho_bx must lie in [-1,1]");
}

std::vector<BlochState> integrate_slice(std::span<const FieldTriple> fields,
                                        const BlochState& initial,
                                        const DerivedRates& rates,
                                        const MediumParams& params, double dt,
                                        bool flip_stark_sign) {
  SliceWork work;
  integrate_slice_core(fields, initial, rates, params, dt, flip_stark_sign,
                       work);
  return std::move(work.states);
}

SimulationRecord propagate(const RunConfig& config) {
  config.validate();
  const DerivedRates rates = derive_rates(config.medium);

  SimulationRecord rec;
  rec.grid = SimulationGrid::from_config(config);
  rec.config = config;
  const int nt = rec.grid.nt;
  const double dt = rec.grid.dt;
  const double dz = rec.grid.dz;

  const double rate_max = peak_drive_rate(config);
  if (dt * rate_max >= 0.1) {
    throw std::invalid_argument(
        "grid.dt violates the stability bound: dt * peak drive rate = " +
        std::to_string(dt * rate_max) + " but must stay below 0.1");
  }

  rec.time.resize(nt);
  rec.omega1_in.resize(nt);
  rec.omega_s_in.resize(nt);
  rec.omega2.resize(nt);
  const double to_rabi_1 = config.medium.dipole_ax / constants::hbar;
  const double to_rabi_2 = config.medium.dipole_bi / constants::hbar;
  const double to_rabi_s = config.medium.dipole_bx / constants::hbar;
  for (int i = 0; i < nt; ++i) {
    const double t = rec.grid.time_at(i);
    rec.time[i] = t;
    rec.omega1_in[i] = to_rabi_1 * envelope_at(config.pump, t);
    rec.omega2[i] = to_rabi_2 * envelope_at(config.read, t);
    rec.omega_s_in[i] = to_rabi_s * envelope_at(config.seed, t);
  }

  if (config.freeze_medium) {
    // Held medium: the field equations integrate to straight lines in z.
    BlochState frozen{};
    frozen.rho_bx = {config.frozen_rho_bx, 0.0};
    rec.rho_z0.assign(nt, frozen);
    rec.rho_zl.assign(nt, frozen);
    rec.omega1_out = rec.omega1_in;
    rec.omega_s_out.resize(nt);
    const complexd gain =
        kImag * rates.eta_bx * frozen.rho_bx * config.medium.length;
    for (int i = 0; i < nt; ++i)
      rec.omega_s_out[i] = rec.omega_s_in[i] + gain;
    return rec;
  }

  std::vector<FieldTriple> fields(nt), predicted(nt);
  for (int i = 0; i < nt; ++i)
    fields[i] = {rec.omega1_in[i], rec.omega2[i], rec.omega_s_in[i]};

  SliceWork here, ahead;
  const auto run_slice = [&](std::span<const FieldTriple> f, SliceWork& out,
                             int iz) {
    try {
      integrate_slice_core(f, config.initial_state, rates, config.medium, dt,
                           config.flip_stark_sign, out);
    } catch (const std::runtime_error& e) {
      throw std::runtime_error(std::string(e.what()) + " (z slice " +
                               std::to_string(iz) + ")");
    }
  };

  for (int iz = 0; iz < rec.grid.nz; ++iz) {
    run_slice(fields, here, iz);
    if (iz == 0) rec.rho_z0 = here.states;
    for (int i = 0; i < nt; ++i) {
      predicted[i].omega1 = fields[i].omega1 + dz * here.source_ax[i];
      predicted[i].omega2 = fields[i].omega2;
      predicted[i].omega_s = fields[i].omega_s + dz * here.source_bx[i];
    }
    run_slice(predicted, ahead, iz);
    for (int i = 0; i < nt; ++i) {
      fields[i].omega1 +=
          0.5 * dz * (here.source_ax[i] + ahead.source_ax[i]);
      fields[i].omega_s +=
          0.5 * dz * (here.source_bx[i] + ahead.source_bx[i]);
      if (!std::isfinite(fields[i].omega1.real()) ||
          !std::isfinite(fields[i].omega1.imag()) ||
          !std::isfinite(fields[i].omega_s.real()) ||
          !std::isfinite(fields[i].omega_s.imag())) {
        throw std::runtime_error("field became non-finite at z slice " +
                                 std::to_string(iz) + ", time index " +
                                 std::to_string(i));
      }
    }
  }
  run_slice(fields, here, rec.grid.nz);
  rec.rho_zl = std::move(here.states);

  rec.omega1_out.resize(nt);
  rec.omega_s_out.resize(nt);
  for (int i = 0; i < nt; ++i) {
    rec.omega1_out[i] = fields[i].omega1;
    rec.omega_s_out[i] = fields[i].omega_s;
  }
  return rec;
}

double integrated_exit_signal(const SimulationRecord& record) {
  double sum = 0.0;
  for (const complexd& w : record.omega_s_out) sum += std::norm(w);
  return sum * record.grid.dt;
}

ConvergenceReport convergence_check(const RunConfig& config,
                                    int refinement_factor) {
  require(refinement_factor >= 2, "refinement_factor must be at least 2");
  const SimulationRecord base = propagate(config);
  RunConfig fine = config;
  fine.grid.dt = config.grid.dt / refinement_factor;
  fine.grid.nz = config.grid.nz * refinement_factor;
  const SimulationRecord refined = propagate(fine);

  ConvergenceReport report;
  report.base_integral = integrated_exit_signal(base);
  report.refined_integral = integrated_exit_signal(refined);
  const double denom =
      std::max(std::abs(report.base_integral), std::abs(report.refined_integral));
  report.rel_change =
      denom == 0.0
          ? 0.0
          : std::abs(report.refined_integral - report.base_integral) / denom;
  report.passed = report.rel_change < 1e-2;
  return report;
}

}  // namespace mb1d
