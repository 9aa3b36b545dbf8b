#pragma once

#include <complex>

namespace mb1d {

enum class PulseRole { pump, read, seed };

// One laser pulse, described by its field envelope. duration_fwhm is the FWHM
// of the *intensity* profile; the amplitude envelope used below is then
//   E(t) = peak_amplitude * exp(-2 ln2 ((t - center_time)/duration_fwhm)^2).
struct PulseSpec {
  PulseRole role = PulseRole::pump;
  double peak_amplitude = 0.0;  // V/m; 0 means the pulse is absent
  double duration_fwhm = 50e-15;  // s
  double center_time = 0.0;       // s

  bool active() const { return peak_amplitude != 0.0; }

  // Throws std::invalid_argument naming the field when the duration is not
  // positive or a value is not finite.
  void validate() const;
};

// Field envelope at time t, V/m. Returned as complex for uniformity with the
// propagated envelopes; the phase is identically zero (transform-limited
// Gaussian input pulses).
std::complex<double> envelope_at(const PulseSpec& pulse, double t);

}  // namespace mb1d
