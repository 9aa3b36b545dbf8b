#pragma once

#include <complex>
#include <span>
#include <vector>

#include "mb1d/bloch.hpp"
#include "mb1d/medium.hpp"
#include "mb1d/pulse.hpp"

namespace mb1d {

// User-settable discretization. The concrete grid (sample count, start time)
// is derived from these values together with the pulse layout; see
// SimulationGrid::from_config.
struct GridSpec {
  double dt = 0.1e-15;         // time step, s
  int nz = 200;                // number of z slices through the medium
  double tail_window = 2e-12;  // time followed past the last pulse center, s
  double lead_widths = 3.0;    // window opens this many FWHMs before the
                               // earliest pulse center (>= 3 keeps the
                               // truncated leading edge below 4e-6 of peak)
  void validate() const;
};

struct RunConfig;

// Fully resolved space-time grid of one run.
struct SimulationGrid {
  int nz = 0;
  int nt = 0;
  double dz = 0.0;       // m
  double dt = 0.0;       // s
  double t_start = 0.0;  // retarded time of sample 0, s

  double time_at(int i) const { return t_start + i * dt; }

  // Window rule: open lead_widths*duration before the earliest active pulse
  // center, close tail_window after the latest active pulse center. When no
  // pulse is active (all-zero amplitudes) the same rule is applied to all
  // pulses regardless, so a field-free decay run still has a well-defined
  // window.
  static SimulationGrid from_config(const RunConfig& config);
};

// One complete simulation request. Everything propagate() needs.
//
// The default pump amplitude puts the post-pulse 800 nm tail at ~1e-7 of
// the main peak in intensity for every initial B population in [0, 0.4].
// That tail level is steeply sensitive to the pump drive area near its 2-pi
// node (the area here is 2.13 pi): 1% more drive raises the tail tenfold.
// The value is a tuning choice, not a measured constant.
struct RunConfig {
  MediumParams medium{};
  PulseSpec pump{PulseRole::pump, 2.65e10, 50e-15, 0.0};
  PulseSpec read{PulseRole::read, 0.7e10, 50e-15, 0.0};
  PulseSpec seed{PulseRole::seed, 0.0, 50e-15, 0.0};
  double delay_tau = 0.0;      // read center minus pump center, s
  BlochState initial_state{0.0, 0.2, {}, {}, {}};
  GridSpec grid{};

  // Test hooks. Not reachable from configuration files; used by the
  // self-check suite and oracle tests only.
  bool freeze_medium = false;    // skip density-matrix evolution entirely and
  double frozen_rho_bx = 0.0;    // hold rho_BX at this constant value
  bool flip_stark_sign = false;  // deliberately mis-sign the light shift, so
                                 // the self-checks can prove they detect it

  // Keeps read.center_time consistent with pump.center_time + delay_tau.
  void apply_delay() { read.center_time = pump.center_time + delay_tau; }

  // Throws std::invalid_argument naming the offending field: medium and
  // pulses must individually validate, initial populations must lie in [0,1]
  // with sum <= 1, initial coherence magnitudes <= 1, the grid must be
  // positive, and read.center_time must equal pump.center_time + delay_tau
  // (call apply_delay after changing either).
  void validate() const;
};

// Everything a run produces: boundary and exit field envelopes plus the
// density-matrix trajectory at the entry and exit planes.
struct SimulationRecord {
  SimulationGrid grid;
  RunConfig config;  // echo of the request, for provenance

  std::vector<double> time;                       // nt samples, s
  std::vector<complexd> omega1_in, omega_s_in;    // z = 0, rad/s
  std::vector<complexd> omega1_out, omega_s_out;  // z = L, rad/s
  std::vector<complexd> omega2;                   // read envelope, rad/s,
                                                  // identical at every z
  std::vector<BlochState> rho_z0, rho_zl;         // probe trajectories
};

// Integrates the density-matrix equations through time at one fixed z, given
// the three Rabi-frequency envelopes sampled on the time grid. Returns the
// state at every sample (element 0 is `initial`). Classic RK4 over the 7 real
// degrees of freedom; envelope values at half steps are linear interpolations
// of adjacent samples.
//
// Envelope conventions, converted here and nowhere else: omega1, omega2,
// omega_s are the full Rabi envelopes dipole*E/hbar of the 800 nm, read, and
// signal fields (omega2 uses dipole_BI). A co-rotating field of envelope
// omega drives its transition at omega/2, so the equations receive
// half-envelopes, and the two-photon terms are evaluated at the half
// field amplitudes reconstructed from omega1 and omega2.
//
// flip_stark_sign is the deliberate-fault hook described on RunConfig.
// Throws std::runtime_error naming the time index if the state diverges.
std::vector<BlochState> integrate_slice(std::span<const FieldTriple> fields,
                                        const BlochState& initial,
                                        const DerivedRates& rates,
                                        const MediumParams& params, double dt,
                                        bool flip_stark_sign = false);

// Marches the coupled field-medium system from z = 0 to z = L in the retarded
// frame, where the envelope equations reduce to d(omega)/dz = i*eta*rho at
// fixed retarded time. Each slice is integrated through time, the fields are
// advanced by an Euler predictor, the slice is re-integrated, and the two
// source estimates are averaged (one-corrector Heun step in z). The read
// envelope is treated as non-depleting: identical at every z.
//
// Throws std::invalid_argument for config/stability violations (the run is
// rejected up front when dt times the largest drive rate reaches 0.1) and
// std::runtime_error with z and time indices when the integration diverges.
SimulationRecord propagate(const RunConfig& config);

// Self-convergence report: the run repeated with dt/refinement_factor and
// nz*refinement_factor, compared on the integrated exit-signal power
// sum(|omega_s_out|^2)*dt.
struct ConvergenceReport {
  double base_integral = 0.0;
  double refined_integral = 0.0;
  double rel_change = 0.0;
  bool passed = false;  // rel_change < 1e-2
};

// refinement_factor must be >= 2 (std::invalid_argument otherwise).
ConvergenceReport convergence_check(const RunConfig& config,
                                    int refinement_factor = 2);

// sum(|omega_s_out|^2)*dt of an existing record, the convergence metric.
double integrated_exit_signal(const SimulationRecord& record);

}  // namespace mb1d
