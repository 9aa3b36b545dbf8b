#pragma once

#include <complex>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "mb1d/solver.hpp"

namespace mb1d {

// Power spectrum of a complex envelope time series. freq_offset is the
// envelope frequency relative to the carrier, ascending, in Hz; positive
// offsets correspond to envelope phase evolving as exp(+i*2*pi*f*t).
// Normalization: sum(power) equals sum(|series|^2) * n_fft (so that
// sum(power)/n_fft matches the time-domain power sum exactly).
struct Spectrum {
  std::vector<double> freq_offset;  // Hz
  std::vector<double> power;        // arbitrary units, >= 0
  double fwhm = 0.0;                // Hz; 0 when no half-max crossing exists
  double peak_offset = 0.0;         // Hz
  int n_fft = 0;                    // transform length after padding
};

// DFT of the series zero-padded to 8x the next power of two, rectangular
// window, squared magnitude. fwhm comes from linear interpolation at half
// max on both sides of the global peak. series.size() must be >= 16
// (std::invalid_argument otherwise).
Spectrum power_spectrum(std::span<const complexd> series, double dt);

// (power above the peak - power below the peak) / total power, the peak bin
// itself excluded. Positive values mean the high-frequency side is heavier.
// A symmetric line gives ~0; a one-sided shoulder pushes it toward +-1.
double spectral_asymmetry(const Spectrum& spectrum);

// sum(|omega_s_out|^2)*dt, the delayed-readout observable.
double integrated_signal(const SimulationRecord& record);

// Peak re-emitted 800 nm intensity in the tail relative to the global peak:
//   max |omega1_out(t >= tail_start)|^2 / max |omega1_out|^2.
// Throws std::invalid_argument when no sample lies at or after tail_start or
// when the output is identically zero.
double tail_peak_ratio(const SimulationRecord& record, double tail_start);

// Default tail start: pump center + 5 amplitude-FWHMs (= 5*sqrt(2) intensity
// FWHMs), which clears the direct pulse by more than ten orders of magnitude.
double default_tail_start(const RunConfig& config);

struct ScanRow {
  double swept = 0.0;
  double integral = 0.0;        // integrated_signal of the run
  double max_abs_rho_ba = 0.0;  // peak |rho_BA| at the exit probe
};

struct ExpFitResult {
  double amplitude = 0.0;  // y ~= amplitude * exp(-rate * t)
  double rate = 0.0;       // 1/s, positive for decay
  double residual = 0.0;   // RMS misfit in ln-space
};

struct ScanResult {
  std::vector<ScanRow> rows;
  std::optional<ExpFitResult> fit;
};

// Least-squares line fit on (t, ln y). Throws std::invalid_argument on fewer
// than 3 rows, non-positive y, or degenerate (constant) t.
ExpFitResult exp_fit(std::span<const double> t, std::span<const double> y);

// One propagate per tau (read delay), rows in input order. taus must be
// strictly increasing. When fit_range = (from, to) is given, rows with
// from <= tau <= to feed an exponential fit of the integral column.
// jobs > 1 runs the independent simulations on a worker pool; results are
// identical to the serial ones (assembly is by index).
ScanResult delay_scan(const RunConfig& base, std::span<const double> taus,
                      int jobs = 1,
                      std::optional<std::pair<double, double>> fit_range = {});

// One propagate per initial rho_BB value at the base config's delay. Values
// must be strictly increasing and within [0,1]. Empty input gives an empty
// result.
ScanResult population_scan(const RunConfig& base,
                           std::span<const double> rho_bb_values,
                           int jobs = 1);

}  // namespace mb1d
