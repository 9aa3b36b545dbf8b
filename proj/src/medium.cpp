#include "mb1d/medium.hpp"

#include <cmath>
#include <stdexcept>

#include "mb1d/constants.hpp"

namespace mb1d {

namespace {

void require(bool ok, const std::string& field, const std::string& why) {
  if (!ok) throw std::invalid_argument("MediumParams." + field + " " + why);
}

}  // namespace

void MediumParams::validate() const {
  require(std::isfinite(dipole_ax) && dipole_ax != 0.0, "dipole_ax",
          "must be finite and nonzero");
  require(std::isfinite(dipole_ia), "dipole_ia", "must be finite");
  require(std::isfinite(dipole_bi), "dipole_bi", "must be finite");
  require(std::isfinite(dipole_bx), "dipole_bx", "must be finite");
  require(std::isfinite(gamma_a) && gamma_a > 0.0, "gamma_a", "must be positive");
  require(std::isfinite(gamma_b) && gamma_b > 0.0, "gamma_b", "must be positive");
  require(std::isfinite(gamma_col) && gamma_col >= 0.0, "gamma_col",
          "must be non-negative");
  require(std::isfinite(density) && density > 0.0, "density", "must be positive");
  require(std::isfinite(lambda_ax) && lambda_ax > 0.0, "lambda_ax",
          "must be positive");
  require(std::isfinite(lambda_bx) && lambda_bx > 0.0, "lambda_bx",
          "must be positive");
  require(std::isfinite(length) && length > 0.0, "length", "must be positive");
  require(std::isfinite(delta) && delta != 0.0, "delta", "must be nonzero");
  // The steady-state elimination of level I is only meaningful far off
  // resonance; demand two orders of magnitude against the fastest dephasing.
  const double max_dephasing =
      std::max(gamma_a, std::max(gamma_b, gamma_col)) + gamma_col;
  require(std::abs(delta) > 100.0 * max_dephasing, "delta",
          "must dominate the dephasing rates (|delta| > 100*max rate)");
}

DerivedRates derive_rates(const MediumParams& medium) {
  medium.validate();
  DerivedRates r{};
  r.gamma_ax = 0.5 * medium.gamma_a + medium.gamma_col;
  r.gamma_ba = 0.5 * (medium.gamma_a + medium.gamma_b) + medium.gamma_col;
  r.gamma_bx = 0.5 * medium.gamma_b + medium.gamma_col;
  const double k = 3.0 * medium.density / (8.0 * constants::pi);
  r.eta_ax = k * medium.lambda_ax * medium.lambda_ax * medium.gamma_a;
  r.eta_bx = k * medium.lambda_bx * medium.lambda_bx * medium.gamma_b;
  return r;
}

}  // namespace mb1d
