#include "mb1d/pulse.hpp"

#include <cmath>
#include <stdexcept>

namespace mb1d {

void PulseSpec::validate() const {
  if (!std::isfinite(peak_amplitude))
    throw std::invalid_argument("PulseSpec.peak_amplitude must be finite");
  if (!std::isfinite(duration_fwhm) || duration_fwhm <= 0.0)
    throw std::invalid_argument("PulseSpec.duration_fwhm must be positive");
  if (!std::isfinite(center_time))
    throw std::invalid_argument("PulseSpec.center_time must be finite");
}

std::complex<double> envelope_at(const PulseSpec& pulse, double t) {
  if (!pulse.active()) return {0.0, 0.0};
  const double u = (t - pulse.center_time) / pulse.duration_fwhm;
  // 2 ln2 in the exponent: |E|^2 then has FWHM = duration_fwhm exactly.
  constexpr double two_ln2 = 1.3862943611198906;
  return {pulse.peak_amplitude * std::exp(-two_ln2 * u * u), 0.0};
}

}  // namespace mb1d
