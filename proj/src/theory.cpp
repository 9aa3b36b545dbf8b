#include "mb1d/theory.hpp"

#include <cmath>

#include "mb1d/constants.hpp"

namespace mb1d {

double pulse_area_constant(const PerturbativeInputs& in) {
  constexpr double ln2 = 0.6931471805599453;
  return 0.5 * in.peak_rabi_pump * in.duration_fwhm *
         std::sqrt(constants::pi / (2.0 * ln2));
}

complexd perturbative_coherence(const PerturbativeInputs& in, double t) {
  const double mag = pulse_area_constant(in) * (in.rho_xx0 - in.rho_aa0) *
                     std::exp(-in.gamma_ax * t);
  return {0.0, mag};
}

double retained_intensity(const PerturbativeInputs& in, double t) {
  return std::norm(perturbative_coherence(in, t));
}

double tpa_rate_estimate(const PerturbativeInputs& in, double tau) {
  const double drive = in.peak_rabi_pump * in.peak_rabi_read *
                       in.duration_fwhm * in.duration_fwhm;
  const double pump_weight = in.rho_xx0 - in.rho_aa0;
  const double read_weight = in.rho_bb0 - in.rho_aa0;
  return drive * drive * pump_weight * pump_weight * read_weight *
         read_weight * std::exp(-2.0 * in.gamma_ax * tau);
}

}  // namespace mb1d
