#pragma once

#include <complex>

#include "mb1d/medium.hpp"

namespace mb1d {

using complexd = std::complex<double>;

// Density-matrix elements actually integrated. rho_XX is never a degree of
// freedom: the closure rho_XX = 1 - rho_AA - rho_BB holds structurally, so
// population lost from A and B (rates gamma_a, gamma_b) lands back in X.
struct BlochState {
  double rho_aa = 0.0;
  double rho_bb = 0.0;
  complexd rho_ax{};  // <A|rho|X>
  complexd rho_ba{};  // <B|rho|A>
  complexd rho_bx{};  // <B|rho|X>

  double rho_xx() const { return 1.0 - rho_aa - rho_bb; }

  // linear-space arithmetic so the generic RK4 stepper applies
  friend BlochState operator+(const BlochState& a, const BlochState& b) {
    return {a.rho_aa + b.rho_aa, a.rho_bb + b.rho_bb, a.rho_ax + b.rho_ax,
            a.rho_ba + b.rho_ba, a.rho_bx + b.rho_bx};
  }
  friend BlochState operator*(const BlochState& a, double s) {
    return {a.rho_aa * s, a.rho_bb * s, a.rho_ax * s, a.rho_ba * s,
            a.rho_bx * s};
  }
};

// Complex Rabi-frequency envelopes (dipole * field envelope / hbar, rad/s) for
// the three optical channels as seen by the density-matrix equations: omega1
// drives X-A, omega_s drives X-B, omega2 is the read field. omega2 never
// appears in the equations of motion directly -- the read field acts only
// through the precomputed two-photon terms -- but it is carried for
// diagnostics (intermediate-level coherences).
struct FieldTriple {
  complexd omega1{};
  complexd omega2{};
  complexd omega_s{};
};

// The two quantities through which the eliminated intermediate level I acts on
// the B-A coherence: the complex two-photon coupling
//   dipole_bi*e2 * dipole_ia*e1 / (hbar^2 * delta)            (rad/s)
// and the real differential Stark shift
//   (|dipole_bi*e2|^2 - |dipole_ia*e1|^2) / (hbar^2 * delta)  (rad/s).
struct TwoPhotonTerms {
  complexd coupling{};
  double stark = 0.0;
};

// e1, e2 are the field envelopes (V/m) of the 800 nm and read pulses at one
// instant. Bilinear in (e1, e2) for the coupling, quadratic for the shift.
TwoPhotonTerms two_photon_terms(complexd e1, complexd e2,
                                const MediumParams& medium);

// Right-hand side of the density-matrix equations at one instant. fields and
// the two-photon terms must be evaluated for the same instant. Pure function:
// no state, safe to call from any thread.
BlochState bloch_rhs(const BlochState& state, const FieldTriple& fields,
                     complexd tp_coupling, double stark,
                     const DerivedRates& rates, const MediumParams& medium);

// Steady-state coherences of the eliminated intermediate level,
// (rho_IA, rho_BI), valid when |delta| dwarfs every other rate. Diagnostic
// only; nothing feeds back into the integration through these.
struct IntermediateCoherences {
  complexd rho_ia{};
  complexd rho_bi{};
};
IntermediateCoherences intermediate_coherences(const BlochState& state,
                                               complexd e1, complexd e2,
                                               const MediumParams& medium);

}  // namespace mb1d
