#pragma once

#include <vector>

#include "mb1d/bloch.hpp"
#include "mb1d/medium.hpp"
#include "mb1d/pulse.hpp"

namespace mb1d {

// Brute-force reference integrator that keeps the far-detuned intermediate
// level I as an explicit fourth level instead of reducing it to two-photon
// terms. Deliberately simple and slow; it exists only so the production
// equations can be checked against an independent derivation.
//
// Levels are X=0, A=1, B=2, I=3. In the rotating frame of the (exactly
// resonant) drives the Hamiltonian is
//   H/hbar = delta |I><I|
//            - [ g_ax |A><X| + g_ia |I><A| + g_bi |B><I| + h.c. ]
// with half-envelope couplings g = dipole * E(t) / (2 hbar); the signal
// channel X<->B carries no drive here (slice-level comparison, no generated
// field). Populations decay A->X and B->X; each off-diagonal element dephases
// at the mean of its two levels' population decay rates plus gamma_col.
struct FourLevelResult {
  std::vector<double> time;
  std::vector<complexd> rho_ax, rho_ba, rho_ia, rho_bi;
  std::vector<double> rho_xx, rho_aa, rho_bb, rho_ii;
};

// Integrates nt samples of step dt starting at t_start from the diagonal
// state implied by `initial` (rho_II = 0, coherences copied over).
FourLevelResult integrate_four_level(const PulseSpec& pump,
                                     const PulseSpec& read,
                                     const BlochState& initial,
                                     const MediumParams& medium,
                                     double t_start, double dt, int nt);

}  // namespace mb1d
