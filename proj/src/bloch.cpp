#include "mb1d/bloch.hpp"

#include "mb1d/constants.hpp"

namespace mb1d {

namespace {
constexpr complexd kImag{0.0, 1.0};
}

TwoPhotonTerms two_photon_terms(complexd e1, complexd e2,
                                const MediumParams& medium) {
  const double hbar2_delta =
      constants::hbar * constants::hbar * medium.delta;
  const complexd leg_up = medium.dipole_ia * e1;    // A -> I
  const complexd leg_down = medium.dipole_bi * e2;  // I -> B
  TwoPhotonTerms out;
  out.coupling = leg_down * leg_up / hbar2_delta;
  out.stark = (std::norm(leg_down) - std::norm(leg_up)) / hbar2_delta;
  return out;
}

BlochState bloch_rhs(const BlochState& state, const FieldTriple& fields,
                     complexd tp_coupling, double stark,
                     const DerivedRates& rates, const MediumParams& medium) {
  const complexd g1 = fields.omega1;
  const complexd gs = fields.omega_s;
  const complexd tp = tp_coupling;

  const double w_ax = state.rho_xx() - state.rho_aa;  // X-A inversion
  const double w_bx = state.rho_xx() - state.rho_bb;  // X-B inversion
  const double w_ba = state.rho_aa - state.rho_bb;    // A-B inversion

  BlochState d;
  d.rho_ax = -rates.gamma_ax * state.rho_ax + kImag * g1 * w_ax -
             kImag * gs * std::conj(state.rho_ba);
  d.rho_ba = (-rates.gamma_ba + kImag * stark) * state.rho_ba +
             kImag * tp * w_ba - kImag * std::conj(g1) * state.rho_bx +
             kImag * gs * std::conj(state.rho_ax);
  d.rho_bx = -rates.gamma_bx * state.rho_bx + kImag * gs * w_bx -
             kImag * g1 * state.rho_ba;
  d.rho_bb = -medium.gamma_b * state.rho_bb +
             2.0 * std::real(kImag * tp * std::conj(state.rho_ba) +
                             kImag * gs * std::conj(state.rho_bx));
  d.rho_aa = -medium.gamma_a * state.rho_aa +
             2.0 * std::real(-kImag * tp * std::conj(state.rho_ba) +
                             kImag * g1 * std::conj(state.rho_ax));
  return d;
}

IntermediateCoherences intermediate_coherences(const BlochState& state,
                                               complexd e1, complexd e2,
                                               const MediumParams& medium) {
  const double hbar_delta = constants::hbar * medium.delta;
  const complexd leg_up = medium.dipole_ia * e1;
  const complexd leg_down = medium.dipole_bi * e2;
  IntermediateCoherences out;
  out.rho_ia = (leg_up * state.rho_aa + std::conj(leg_down) * state.rho_ba) /
               hbar_delta;
  out.rho_bi = (leg_down * state.rho_bb + std::conj(leg_up) * state.rho_ba) /
               hbar_delta;
  return out;
}

}  // namespace mb1d
