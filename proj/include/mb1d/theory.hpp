#pragma once

#include "mb1d/bloch.hpp"

namespace mb1d {

// Inputs for the closed-form weak-excitation estimates. peak_rabi_* are full
// Rabi envelope peaks (dipole*E_peak/hbar); duration_fwhm is the intensity
// FWHM shared by the pulses; gamma_ax is the X-A coherence dephasing rate.
struct PerturbativeInputs {
  double peak_rabi_pump = 0.0;  // rad/s
  double duration_fwhm = 0.0;   // s
  double rho_xx0 = 1.0;
  double rho_aa0 = 0.0;
  double rho_bb0 = 0.0;
  double gamma_ax = 0.0;  // 1/s
  double peak_rabi_read = 0.0;  // rad/s
};

// First-order pulse area of the drive: a field of envelope Omega(t) drives
// its transition at Omega(t)/2, and the Gaussian amplitude envelope with
// intensity FWHM d integrates to peak*d*sqrt(pi/(2 ln2)). So
//   A = (peak_rabi_pump/2) * duration_fwhm * sqrt(pi/(2 ln2)).
// This makes perturbative_coherence an absolute prediction, not just a shape;
// if a magnitude tolerance ever fails, look here first.
double pulse_area_constant(const PerturbativeInputs& in);

// Coherence left on the X-A transition a time t after the pump:
//   i * A * (rho_xx0 - rho_aa0) * exp(-gamma_ax * t).
// Purely imaginary times a decaying real factor for a real pump envelope.
complexd perturbative_coherence(const PerturbativeInputs& in, double t);

// |perturbative_coherence|^2: the re-emitted intensity, decaying at exactly
// 2*gamma_ax.
double retained_intensity(const PerturbativeInputs& in, double t);

// Relative strength of the delayed two-photon readout at delay tau:
//   (W1p * W2p * d^2)^2 * (rho_xx0-rho_aa0)^2 * (rho_bb0-rho_aa0)^2
//     * exp(-2*gamma_ax*tau),
// arbitrary units. Only ratios and orderings of this estimate are meaningful.
double tpa_rate_estimate(const PerturbativeInputs& in, double tau);

}  // namespace mb1d
