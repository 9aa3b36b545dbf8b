#pragma once

// Physical constants (SI, CODATA 2018). Fixed here so every module and every
// test agrees bit-for-bit; nothing in the code reads them from elsewhere.
namespace mb1d::constants {

inline constexpr double hbar = 1.054571817e-34;  // J*s
inline constexpr double c_light = 2.99792458e8;  // m/s
inline constexpr double pi = 3.14159265358979323846;

}  // namespace mb1d::constants
