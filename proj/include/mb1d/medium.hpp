#pragma once

#include <string>

namespace mb1d {

// Static properties of the three-level ionic medium (levels X, A, B plus a
// far-detuned intermediate level I that only enters through two-photon
// combinations). All values SI.
struct MediumParams {
  // transition dipole moments, C*m
  double dipole_ax = 1.0e-30;  // X <-> A (pump channel)
  double dipole_ia = 1.0e-30;  // A <-> I (pump leg of the two-photon drive)
  double dipole_bi = 1.0e-30;  // I <-> B (read leg of the two-photon drive)
  double dipole_bx = 1.0e-30;  // X <-> B (signal channel)

  // population decay rates of A and B, and the collisional dephasing rate, 1/s
  double gamma_a = 1.0e7;
  double gamma_b = 1.0e7;
  double gamma_col = 1.0e9;

  double delta = 1.0e15;    // detuning of the intermediate level I, rad/s
  double density = 4.0e22;  // ion number density, 1/m^3
  double lambda_ax = 800.0e-9;   // X-A transition wavelength, m
  double lambda_bx = 329.3e-9;   // X-B transition wavelength, m
  double length = 0.15e-3;       // medium length, m

  // Throws std::invalid_argument naming the offending field. Decay rates,
  // density, wavelengths and length must be positive; the detuning must be
  // nonzero and large against all dephasing rates (the two-photon reduction
  // assumes it); dipole_ax must be nonzero (the pump channel must exist) while
  // the other dipoles may be zero, which is how the two-level reduction used
  // by the oracle tests is expressed.
  void validate() const;
};

// Rates and couplings derived from MediumParams; computed once per run.
struct DerivedRates {
  double gamma_ax;  // X-A coherence dephasing, gamma_a/2 + gamma_col
  double gamma_ba;  // A-B coherence dephasing, (gamma_a+gamma_b)/2 + gamma_col
  double gamma_bx;  // X-B coherence dephasing, gamma_b/2 + gamma_col
  double eta_ax;    // field-coherence coupling on the 800 nm channel, 1/(s*m)
  double eta_bx;    // field-coherence coupling on the 329.3 nm channel, 1/(s*m)
};

// eta_iX = 3 * density * lambda_iX^2 * gamma_i / (8*pi). Validates the input.
DerivedRates derive_rates(const MediumParams& medium);

}  // namespace mb1d
