#include "mb1d/output.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "mb1d/version.hpp"

namespace mb1d {

namespace {

std::ofstream open_for_write(const std::filesystem::path& path) {
  if (path.has_parent_path())
    std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);  // '\n' line ends everywhere
  if (!out)
    throw std::invalid_argument("cannot open for writing: " + path.string());
  return out;
}

// Splits a decimal literal into mantissa text and exponent value.
struct DecimalParts {
  std::string mantissa;
  int exponent = 0;
};

DecimalParts split_exponent(std::string_view text) {
  const std::size_t e = text.find_first_of("eE");
  DecimalParts parts;
  if (e == std::string_view::npos) {
    parts.mantissa.assign(text);
    return parts;
  }
  parts.mantissa.assign(text.substr(0, e));
  std::string_view exp_text = text.substr(e + 1);
  if (!exp_text.empty() && exp_text.front() == '+')
    exp_text.remove_prefix(1);  // to_chars writes e+300; int from_chars
                                // rejects the explicit plus
  int value = 0;
  const auto* first = exp_text.data();
  const auto* last = exp_text.data() + exp_text.size();
  const auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc{} || ptr != last)
    throw std::invalid_argument("malformed exponent in number: " +
                                std::string(text));
  parts.exponent = value;
  return parts;
}

double parse_double_strict(std::string_view text) {
  double value = 0.0;
  const auto* first = text.data();
  const auto* last = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc{} || ptr != last || !std::isfinite(value))
    throw std::invalid_argument("malformed number: '" + std::string(text) +
                                "'");
  return value;
}

// Renders mantissa-text times 10^exponent in whichever of fixed or
// scientific notation is shorter. Pure digit shuffling: the decimal value
// (and therefore the parsed double) is unchanged.
std::string render_decimal(const std::string& mantissa, int exponent) {
  std::string digits = mantissa;
  std::string sign;
  if (!digits.empty() && (digits[0] == '-' || digits[0] == '+')) {
    if (digits[0] == '-') sign = "-";
    digits.erase(0, 1);
  }
  int point = static_cast<int>(digits.size());
  const std::size_t dot = digits.find('.');
  if (dot != std::string::npos) {
    point = static_cast<int>(dot);
    digits.erase(dot, 1);
  }
  point += exponent;
  while (digits.size() > 1 && digits.front() == '0') {
    digits.erase(0, 1);
    --point;
  }
  while (digits.size() > 1 && digits.back() == '0') digits.pop_back();
  if (digits == "0") return sign + "0";

  std::string fixed;
  if (point <= 0) {
    fixed = "0." + std::string(static_cast<std::size_t>(-point), '0') + digits;
  } else if (point >= static_cast<int>(digits.size())) {
    fixed = digits +
            std::string(static_cast<std::size_t>(point) - digits.size(), '0');
  } else {
    fixed = digits.substr(0, static_cast<std::size_t>(point)) + "." +
            digits.substr(static_cast<std::size_t>(point));
  }

  std::string sci = digits.substr(0, 1);
  if (digits.size() > 1) sci += "." + digits.substr(1);
  sci += "e" + std::to_string(point - 1);

  return sign + (fixed.size() <= sci.size() ? fixed : sci);
}

}  // namespace

std::string format_double(double value) {
  char buf[32];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  if (ec != std::errc{})
    throw std::runtime_error("number formatting failed");
  return std::string(buf, ptr);
}

std::string format_scaled(double value, int power10) {
  if (!std::isfinite(value))
    throw std::invalid_argument("cannot format non-finite value");
  if (value == 0.0) return format_double(value);
  DecimalParts parts = split_exponent(format_double(value));
  parts.exponent -= power10;
  return render_decimal(parts.mantissa, parts.exponent);
}

double parse_scaled(std::string_view text, int power10) {
  if (text.empty()) throw std::invalid_argument("empty number");
  if (power10 == 0) return parse_double_strict(text);
  DecimalParts parts = split_exponent(text);
  parse_double_strict(parts.mantissa);  // syntax check before recombining
  parts.exponent += power10;
  return parse_double_strict(parts.mantissa + "e" +
                             std::to_string(parts.exponent));
}

void write_complex_series_csv(const std::filesystem::path& path,
                              std::string_view header,
                              std::span<const double> time_s,
                              std::span<const complexd> series) {
  if (time_s.size() != series.size())
    throw std::invalid_argument("csv series and time lengths differ");
  std::ofstream out = open_for_write(path);
  out << "# " << header << "\n";
  for (std::size_t i = 0; i < time_s.size(); ++i) {
    out << format_scaled(time_s[i], -15) << ',' << format_double(series[i].real())
        << ',' << format_double(series[i].imag()) << ','
        << format_double(std::norm(series[i])) << "\n";
  }
}

ComplexSeries read_complex_series_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot read: " + path.string());
  ComplexSeries result;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    std::stringstream row(line);
    std::string cell;
    std::vector<double> cols;
    bool first = true;
    while (std::getline(row, cell, ',')) {
      const std::size_t a = cell.find_first_not_of(" \t\r");
      const std::size_t b = cell.find_last_not_of(" \t\r");
      if (a == std::string::npos)
        throw std::invalid_argument(path.string() + ":" +
                                    std::to_string(line_no) + ": empty cell");
      try {
        cols.push_back(
            parse_scaled(cell.substr(a, b - a + 1), first ? -15 : 0));
      } catch (const std::invalid_argument& e) {
        throw std::invalid_argument(path.string() + ":" +
                                    std::to_string(line_no) + ": " + e.what());
      }
      first = false;
    }
    if (cols.size() < 3)
      throw std::invalid_argument(path.string() + ":" +
                                  std::to_string(line_no) +
                                  ": expected at least t, re, im columns");
    result.time.push_back(cols[0]);
    result.values.emplace_back(cols[1], cols[2]);
  }
  if (result.time.empty())
    throw std::invalid_argument(path.string() + ": no data rows");
  return result;
}

void write_scan_csv(const std::filesystem::path& path, std::string_view header,
                    std::span<const ScanRow> rows, bool with_rho_ba_column) {
  std::ofstream out = open_for_write(path);
  out << "# " << header << "\n";
  for (const ScanRow& row : rows) {
    out << format_double(row.swept) << ',' << format_double(row.integral);
    if (with_rho_ba_column) out << ',' << format_double(row.max_abs_rho_ba);
    out << "\n";
  }
}

void write_spectrum_csv(const std::filesystem::path& path,
                        const Spectrum& spectrum,
                        std::span<const std::string> comment_lines) {
  std::ofstream out = open_for_write(path);
  for (const std::string& c : comment_lines) out << "# " << c << "\n";
  out << "# offset_THz, power, normalized_power\n";
  const double peak =
      spectrum.power.empty()
          ? 1.0
          : *std::max_element(spectrum.power.begin(), spectrum.power.end());
  const double norm = peak > 0.0 ? peak : 1.0;
  for (std::size_t i = 0; i < spectrum.power.size(); ++i) {
    out << format_scaled(spectrum.freq_offset[i], 12) << ','
        << format_double(spectrum.power[i]) << ','
        << format_double(spectrum.power[i] / norm) << "\n";
  }
}

void write_manifest(const std::filesystem::path& path,
                    const SimulationRecord& record, const std::string& digest,
                    double wall_seconds) {
  const RunConfig& c = record.config;
  std::ofstream out = open_for_write(path);
  out << "artifact_version = " << kVersion << "\n";
  out << "config_digest = " << digest << "\n";
  out << "wall_time_s = " << format_double(wall_seconds) << "\n";
  out << "grid.nt = " << record.grid.nt << "\n";
  out << "grid.nz = " << record.grid.nz << "\n";
  out << "grid.dt_s = " << format_double(record.grid.dt) << "\n";
  out << "grid.dz_m = " << format_double(record.grid.dz) << "\n";
  out << "grid.t_start_s = " << format_double(record.grid.t_start) << "\n";
  const auto kv = [&](const char* key, double v) {
    out << key << " = " << format_double(v) << "\n";
  };
  kv("medium.dipole_ax_Cm", c.medium.dipole_ax);
  kv("medium.dipole_ia_Cm", c.medium.dipole_ia);
  kv("medium.dipole_bi_Cm", c.medium.dipole_bi);
  kv("medium.dipole_bx_Cm", c.medium.dipole_bx);
  kv("medium.gamma_a_per_s", c.medium.gamma_a);
  kv("medium.gamma_b_per_s", c.medium.gamma_b);
  kv("medium.gamma_col_per_s", c.medium.gamma_col);
  kv("medium.delta_rad_per_s", c.medium.delta);
  kv("medium.density_per_m3", c.medium.density);
  kv("medium.lambda_ax_m", c.medium.lambda_ax);
  kv("medium.lambda_bx_m", c.medium.lambda_bx);
  kv("medium.length_m", c.medium.length);
  kv("pulses.pump_peak_V_per_m", c.pump.peak_amplitude);
  kv("pulses.pump_fwhm_s", c.pump.duration_fwhm);
  kv("pulses.pump_center_s", c.pump.center_time);
  kv("pulses.read_peak_V_per_m", c.read.peak_amplitude);
  kv("pulses.read_fwhm_s", c.read.duration_fwhm);
  kv("pulses.read_center_s", c.read.center_time);
  kv("pulses.seed_peak_V_per_m", c.seed.peak_amplitude);
  kv("pulses.seed_fwhm_s", c.seed.duration_fwhm);
  kv("pulses.seed_center_s", c.seed.center_time);
  kv("run.delay_tau_s", c.delay_tau);
  kv("run.rho_aa0", c.initial_state.rho_aa);
  kv("run.rho_bb0", c.initial_state.rho_bb);
}

void write_fit_txt(const std::filesystem::path& path, const ExpFitResult& fit) {
  std::ofstream out = open_for_write(path);
  out << "rate_per_ns = " << format_scaled(fit.rate, 9) << "\n";
  out << "rate_per_s = " << format_double(fit.rate) << "\n";
  out << "amplitude = " << format_double(fit.amplitude) << "\n";
  out << "residual_ln = " << format_double(fit.residual) << "\n";
}

void write_svg_chart(const std::filesystem::path& path, std::string_view title,
                     std::string_view x_label, std::string_view y_label,
                     std::span<const double> xs, std::span<const double> ys,
                     bool logy) {
  if (xs.size() != ys.size() || xs.empty())
    throw std::invalid_argument("svg chart needs equal, nonempty x/y series");

  std::vector<double> y(ys.begin(), ys.end());
  if (logy) {
    double min_pos = 0.0;
    for (double v : y)
      if (v > 0.0 && (min_pos == 0.0 || v < min_pos)) min_pos = v;
    if (min_pos == 0.0) min_pos = 1e-300;
    for (double& v : y) v = std::log10(std::max(v, min_pos * 1e-3));
  }

  const double x_min = *std::min_element(xs.begin(), xs.end());
  const double x_max = *std::max_element(xs.begin(), xs.end());
  const double y_min = *std::min_element(y.begin(), y.end());
  const double y_max = *std::max_element(y.begin(), y.end());
  const double x_span = x_max > x_min ? x_max - x_min : 1.0;
  const double y_span = y_max > y_min ? y_max - y_min : 1.0;

  constexpr double w = 800.0, h = 500.0;
  constexpr double ml = 80.0, mr = 25.0, mt = 45.0, mb = 55.0;
  const auto px = [&](double v) {
    return ml + (v - x_min) / x_span * (w - ml - mr);
  };
  const auto py = [&](double v) {
    return h - mb - (v - y_min) / y_span * (h - mt - mb);
  };
  const auto num = [](double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.4g", v);
    return std::string(buf);
  };

  std::ofstream out = open_for_write(path);
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w
      << "\" height=\"" << h << "\" viewBox=\"0 0 " << w << " " << h
      << "\">\n";
  out << "<rect width=\"" << w << "\" height=\"" << h
      << "\" fill=\"white\"/>\n";
  out << "<text x=\"" << w / 2 << "\" y=\"25\" text-anchor=\"middle\" "
         "font-family=\"sans-serif\" font-size=\"16\">"
      << title << "</text>\n";
  // axes
  out << "<line x1=\"" << ml << "\" y1=\"" << h - mb << "\" x2=\"" << w - mr
      << "\" y2=\"" << h - mb << "\" stroke=\"black\"/>\n";
  out << "<line x1=\"" << ml << "\" y1=\"" << mt << "\" x2=\"" << ml
      << "\" y2=\"" << h - mb << "\" stroke=\"black\"/>\n";
  for (int i = 0; i <= 4; ++i) {
    const double fx = x_min + x_span * i / 4.0;
    const double fy = y_min + y_span * i / 4.0;
    out << "<line x1=\"" << px(fx) << "\" y1=\"" << h - mb << "\" x2=\""
        << px(fx) << "\" y2=\"" << h - mb + 5 << "\" stroke=\"black\"/>\n";
    out << "<text x=\"" << px(fx) << "\" y=\"" << h - mb + 20
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
           "font-size=\"12\">"
        << num(fx) << "</text>\n";
    out << "<line x1=\"" << ml - 5 << "\" y1=\"" << py(fy) << "\" x2=\"" << ml
        << "\" y2=\"" << py(fy) << "\" stroke=\"black\"/>\n";
    out << "<text x=\"" << ml - 8 << "\" y=\"" << py(fy) + 4
        << "\" text-anchor=\"end\" font-family=\"sans-serif\" "
           "font-size=\"12\">"
        << num(fy) << "</text>\n";
  }
  out << "<text x=\"" << (ml + w - mr) / 2 << "\" y=\"" << h - 10
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
         "font-size=\"13\">"
      << x_label << "</text>\n";
  out << "<text x=\"18\" y=\"" << (mt + h - mb) / 2
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
         "font-size=\"13\" transform=\"rotate(-90 18 "
      << (mt + h - mb) / 2 << ")\">" << y_label
      << (logy ? " (log10)" : "") << "</text>\n";
  out << "<polyline fill=\"none\" stroke=\"#0057b7\" stroke-width=\"1.5\" "
         "points=\"";
  for (std::size_t i = 0; i < xs.size(); ++i)
    out << px(xs[i]) << ',' << py(y[i]) << ' ';
  out << "\"/>\n</svg>\n";
}

}  // namespace mb1d
