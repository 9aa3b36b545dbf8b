#pragma once

#include <string>
#include <vector>

#include "mb1d/solver.hpp"

namespace mb1d {

// Sweep-section settings consumed by the scan subcommands. Delays/fits in
// seconds (SI), like everything in memory.
struct SweepSettings {
  double tau_start = 500e-15;
  double tau_stop = 2000e-15;
  double tau_step = 100e-15;
  std::vector<double> rho_bb{0.0, 0.1, 0.2, 0.4};
  double fixed_tau = 1000e-15;  // population-scan read delay
  double fit_from = 500e-15;
  double fit_to = 2000e-15;

  // tau_start, tau_start+tau_step, ... up to tau_stop (inclusive within half
  // a step). Throws std::invalid_argument for non-positive step or an empty
  // range.
  std::vector<double> taus() const;
};

struct LoadedConfig {
  RunConfig run;
  SweepSettings sweep;
  std::string digest;  // fnv1a-64 of the raw config text, 16 hex digits
};

// INI-style configuration: [section] headers, key = value lines, '#'
// comments. Sections: medium, pulses, grid, run, sweep. File values carry
// fixed per-key units (fs, nm, mm, V/m, 1/ns, cm^-3) and are converted to SI
// here and nowhere else; unit conversion shifts the textual decimal exponent,
// so values survive a dump/parse cycle bit-exactly. Unknown sections or keys
// and malformed numbers are std::invalid_argument naming origin and line.
// Missing keys keep the built-in defaults (the reference configuration).
// Parsing does not validate physics; callers run RunConfig::validate().
LoadedConfig parse_config(const std::string& text, const std::string& origin);

// Reads the file and parses it; std::invalid_argument when unreadable.
LoadedConfig load_config_file(const std::string& path);

// All sections and keys of the resolved configuration, reloadable verbatim:
// parse_config(dump_config(run, sweep)) reproduces every SI value exactly.
std::string dump_config(const RunConfig& run, const SweepSettings& sweep);

// FNV-1a 64-bit hash, fixed-width lowercase hex.
std::string fnv1a64_hex(const std::string& bytes);

}  // namespace mb1d
