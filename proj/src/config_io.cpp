#include "mb1d/config_io.hpp"

#include <cmath>
#include <cstdint>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <stdexcept>

#include "mb1d/output.hpp"

namespace mb1d {

std::vector<double> SweepSettings::taus() const {
  if (!(tau_step > 0.0))
    throw std::invalid_argument("sweep tau step must be positive");
  std::vector<double> out;
  for (int i = 0;; ++i) {
    const double tau = tau_start + i * tau_step;
    if (tau > tau_stop + tau_step * 0.5) break;
    out.push_back(tau);
  }
  if (out.empty())
    throw std::invalid_argument("sweep tau range is empty");
  return out;
}

std::string fnv1a64_hex(const std::string& bytes) {
  std::uint64_t hash = 14695981039346656037ULL;
  for (unsigned char c : bytes) {
    hash ^= c;
    hash *= 1099511628211ULL;
  }
  static const char digits[] = "0123456789abcdef";
  std::string hex(16, '0');
  for (int i = 15; i >= 0; --i) {
    hex[i] = digits[hash & 0xF];
    hash >>= 4;
  }
  return hex;
}

namespace {

std::string trim(std::string_view s) {
  const std::size_t a = s.find_first_not_of(" \t\r");
  if (a == std::string_view::npos) return {};
  const std::size_t b = s.find_last_not_of(" \t\r");
  return std::string(s.substr(a, b - a + 1));
}

// Decimal exponent shift applied when converting a file value to SI:
// SI = display * 10^power. Keys in femtoseconds shift by -15, nanometres by
// -9, millimetres by -3, per-nanosecond rates by +9, per-cm^3 densities by
// +6 (cm^-3 -> m^-3), and raw SI keys by 0.
enum Unit : int {
  kRaw = 0,
  kFemtoseconds = -15,
  kNanometres = -9,
  kMillimetres = -3,
  kPerNanosecond = 9,
  kPerCubicCentimetre = 6,
};

struct Context {
  const std::string& origin;
  std::size_t line = 0;

  [[noreturn]] void fail(const std::string& message) const {
    throw std::invalid_argument(origin + ":" + std::to_string(line) + ": " +
                                message);
  }

  double number(const std::string& value, Unit unit) const {
    try {
      return parse_scaled(value, unit);
    } catch (const std::invalid_argument& e) {
      fail(e.what());
    }
  }
};

std::vector<double> parse_list(const std::string& value, Unit unit,
                               const Context& ctx) {
  std::vector<double> out;
  std::stringstream ss(value);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const std::string t = trim(item);
    if (t.empty()) ctx.fail("empty list element");
    out.push_back(ctx.number(t, unit));
  }
  if (out.empty()) ctx.fail("empty list");
  return out;
}

// "start:stop:step" in the key's unit.
void parse_range(const std::string& value, Unit unit, const Context& ctx,
                 double& start, double& stop, double& step) {
  std::stringstream ss(value);
  std::string part;
  std::vector<double> parts;
  while (std::getline(ss, part, ':')) {
    const std::string t = trim(part);
    if (t.empty()) ctx.fail("empty range element");
    parts.push_back(ctx.number(t, unit));
  }
  if (parts.size() != 3) ctx.fail("range must be start:stop:step");
  start = parts[0];
  stop = parts[1];
  step = parts[2];
}

}  // namespace

LoadedConfig parse_config(const std::string& text, const std::string& origin) {
  LoadedConfig loaded;
  loaded.digest = fnv1a64_hex(text);
  RunConfig& run = loaded.run;
  SweepSettings& sweep = loaded.sweep;

  using Setter = std::function<void(const std::string&, const Context&)>;
  const auto set = [](double& field, Unit unit) {
    return [&field, unit](const std::string& v, const Context& ctx) {
      field = ctx.number(v, unit);
    };
  };

  const std::map<std::string, std::map<std::string, Setter>> sections = {
      {"medium",
       {
           {"dipole_ax", set(run.medium.dipole_ax, kRaw)},
           {"dipole_ia", set(run.medium.dipole_ia, kRaw)},
           {"dipole_bi", set(run.medium.dipole_bi, kRaw)},
           {"dipole_bx", set(run.medium.dipole_bx, kRaw)},
           {"gamma_a_per_ns", set(run.medium.gamma_a, kPerNanosecond)},
           {"gamma_b_per_ns", set(run.medium.gamma_b, kPerNanosecond)},
           {"gamma_col_per_ns", set(run.medium.gamma_col, kPerNanosecond)},
           {"delta_rad_per_s", set(run.medium.delta, kRaw)},
           {"density_per_cm3", set(run.medium.density, kPerCubicCentimetre)},
           {"lambda_ax_nm", set(run.medium.lambda_ax, kNanometres)},
           {"lambda_bx_nm", set(run.medium.lambda_bx, kNanometres)},
           {"length_mm", set(run.medium.length, kMillimetres)},
       }},
      {"pulses",
       {
           {"pump_peak_v_per_m", set(run.pump.peak_amplitude, kRaw)},
           {"pump_fwhm_fs", set(run.pump.duration_fwhm, kFemtoseconds)},
           {"pump_center_fs", set(run.pump.center_time, kFemtoseconds)},
           {"read_peak_v_per_m", set(run.read.peak_amplitude, kRaw)},
           {"read_fwhm_fs", set(run.read.duration_fwhm, kFemtoseconds)},
           {"seed_peak_v_per_m", set(run.seed.peak_amplitude, kRaw)},
           {"seed_fwhm_fs", set(run.seed.duration_fwhm, kFemtoseconds)},
           {"seed_center_fs", set(run.seed.center_time, kFemtoseconds)},
       }},
      {"grid",
       {
           {"dt_fs", set(run.grid.dt, kFemtoseconds)},
           {"nz",
            [&run](const std::string& v, const Context& ctx) {
              const double n = ctx.number(v, kRaw);
              if (n < 1 || n != std::floor(n) || n > 1e9)
                ctx.fail("nz must be a positive integer");
              run.grid.nz = static_cast<int>(n);
            }},
           {"tail_window_fs", set(run.grid.tail_window, kFemtoseconds)},
           {"lead_widths", set(run.grid.lead_widths, kRaw)},
       }},
      {"run",
       {
           {"delay_tau_fs", set(run.delay_tau, kFemtoseconds)},
           {"rho_aa0", set(run.initial_state.rho_aa, kRaw)},
           {"rho_bb0", set(run.initial_state.rho_bb, kRaw)},
       }},
      {"sweep",
       {
           {"taus_fs",
            [&sweep](const std::string& v, const Context& ctx) {
              parse_range(v, kFemtoseconds, ctx, sweep.tau_start,
                          sweep.tau_stop, sweep.tau_step);
            }},
           {"tau_fs", set(sweep.fixed_tau, kFemtoseconds)},
           {"rho_bb_list",
            [&sweep](const std::string& v, const Context& ctx) {
              sweep.rho_bb = parse_list(v, kRaw, ctx);
            }},
           {"fit_from_fs", set(sweep.fit_from, kFemtoseconds)},
           {"fit_to_fs", set(sweep.fit_to, kFemtoseconds)},
       }},
  };

  Context ctx{origin};
  std::stringstream stream(text);
  std::string line;
  const std::map<std::string, Setter>* section = nullptr;
  std::string section_name;
  while (std::getline(stream, line)) {
    ++ctx.line;
    const std::size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const std::string body = trim(line);
    if (body.empty()) continue;

    if (body.front() == '[') {
      if (body.back() != ']') ctx.fail("unterminated section header");
      section_name = trim(body.substr(1, body.size() - 2));
      const auto it = sections.find(section_name);
      if (it == sections.end())
        ctx.fail("unknown section '" + section_name + "'");
      section = &it->second;
      continue;
    }

    const std::size_t eq = body.find('=');
    if (eq == std::string::npos) ctx.fail("expected 'key = value'");
    if (section == nullptr) ctx.fail("key before any [section] header");
    const std::string key = trim(body.substr(0, eq));
    const std::string value = trim(body.substr(eq + 1));
    if (key.empty()) ctx.fail("empty key");
    if (value.empty()) ctx.fail("empty value for '" + key + "'");
    const auto it = section->find(key);
    if (it == section->end())
      ctx.fail("unknown key '" + key + "' in section [" + section_name + "]");
    it->second(value, ctx);
  }

  run.apply_delay();
  return loaded;
}

LoadedConfig load_config_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::invalid_argument("cannot read config file: " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_config(buffer.str(), path);
}

std::string dump_config(const RunConfig& run, const SweepSettings& sweep) {
  std::ostringstream out;
  const auto kv = [&](const char* key, double value, int power10) {
    out << key << " = " << format_scaled(value, power10) << "\n";
  };
  out << "[medium]\n";
  kv("dipole_ax", run.medium.dipole_ax, kRaw);
  kv("dipole_ia", run.medium.dipole_ia, kRaw);
  kv("dipole_bi", run.medium.dipole_bi, kRaw);
  kv("dipole_bx", run.medium.dipole_bx, kRaw);
  kv("gamma_a_per_ns", run.medium.gamma_a, kPerNanosecond);
  kv("gamma_b_per_ns", run.medium.gamma_b, kPerNanosecond);
  kv("gamma_col_per_ns", run.medium.gamma_col, kPerNanosecond);
  kv("delta_rad_per_s", run.medium.delta, kRaw);
  kv("density_per_cm3", run.medium.density, kPerCubicCentimetre);
  kv("lambda_ax_nm", run.medium.lambda_ax, kNanometres);
  kv("lambda_bx_nm", run.medium.lambda_bx, kNanometres);
  kv("length_mm", run.medium.length, kMillimetres);
  out << "\n[pulses]\n";
  kv("pump_peak_v_per_m", run.pump.peak_amplitude, kRaw);
  kv("pump_fwhm_fs", run.pump.duration_fwhm, kFemtoseconds);
  kv("pump_center_fs", run.pump.center_time, kFemtoseconds);
  kv("read_peak_v_per_m", run.read.peak_amplitude, kRaw);
  kv("read_fwhm_fs", run.read.duration_fwhm, kFemtoseconds);
  kv("seed_peak_v_per_m", run.seed.peak_amplitude, kRaw);
  kv("seed_fwhm_fs", run.seed.duration_fwhm, kFemtoseconds);
  kv("seed_center_fs", run.seed.center_time, kFemtoseconds);
  out << "\n[grid]\n";
  kv("dt_fs", run.grid.dt, kFemtoseconds);
  out << "nz = " << run.grid.nz << "\n";
  kv("tail_window_fs", run.grid.tail_window, kFemtoseconds);
  kv("lead_widths", run.grid.lead_widths, kRaw);
  out << "\n[run]\n";
  kv("delay_tau_fs", run.delay_tau, kFemtoseconds);
  kv("rho_aa0", run.initial_state.rho_aa, kRaw);
  kv("rho_bb0", run.initial_state.rho_bb, kRaw);
  out << "\n[sweep]\n";
  out << "taus_fs = " << format_scaled(sweep.tau_start, kFemtoseconds) << ":"
      << format_scaled(sweep.tau_stop, kFemtoseconds) << ":"
      << format_scaled(sweep.tau_step, kFemtoseconds) << "\n";
  kv("tau_fs", sweep.fixed_tau, kFemtoseconds);
  out << "rho_bb_list = ";
  for (std::size_t i = 0; i < sweep.rho_bb.size(); ++i)
    out << (i ? ", " : "") << format_double(sweep.rho_bb[i]);
  out << "\n";
  kv("fit_from_fs", sweep.fit_from, kFemtoseconds);
  kv("fit_to_fs", sweep.fit_to, kFemtoseconds);
  return out.str();
}

}  // namespace mb1d
