#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "mb1d/analysis.hpp"
#include "mb1d/solver.hpp"

namespace mb1d {

// Shortest decimal representation that parses back to exactly the same
// double. All numeric file output goes through this.
std::string format_double(double value);

// Shifts the decimal exponent of a finite double by power10 *textually*, so
// the operation is exact: format_scaled(x, p) prints x/10^p in the sense that
// parse_scaled(format_scaled(x, p), p) == x bit-for-bit.
std::string format_scaled(double value, int power10);

// Parses text as a decimal number times 10^power10 (again textually, so the
// result is the correctly rounded double of the full decimal). Throws
// std::invalid_argument on malformed or non-finite input.
double parse_scaled(std::string_view text, int power10);

// One '#' header line, then comma-separated rows: t_fs, re, im, abs2.
void write_complex_series_csv(const std::filesystem::path& path,
                              std::string_view header,
                              std::span<const double> time_s,
                              std::span<const complexd> series);

// Reads a CSV written by write_complex_series_csv (or any file whose first
// two numeric columns after t_fs are re and im). Returns times in seconds.
struct ComplexSeries {
  std::vector<double> time;
  std::vector<complexd> values;
};
ComplexSeries read_complex_series_csv(const std::filesystem::path& path);

// Scan table: swept, integral[, max_abs_rho_ba].
void write_scan_csv(const std::filesystem::path& path, std::string_view header,
                    std::span<const ScanRow> rows, bool with_rho_ba_column);

// Spectrum table (offset_THz, power, normalized_power) preceded by the given
// extra '#' comment lines (metrics such as fwhm and asymmetry).
void write_spectrum_csv(const std::filesystem::path& path,
                        const Spectrum& spectrum,
                        std::span<const std::string> comment_lines);

// Run manifest: artifact version, input-config digest, wall time, resolved
// grid, and every SI parameter of the run. Reruns differ only in the
// wall_time_s line.
void write_manifest(const std::filesystem::path& path,
                    const SimulationRecord& record, const std::string& digest,
                    double wall_seconds);

void write_fit_txt(const std::filesystem::path& path, const ExpFitResult& fit);

// Minimal standalone SVG polyline chart (linear or log10 y). Non-positive y
// values are clamped to a small floor in log mode.
void write_svg_chart(const std::filesystem::path& path, std::string_view title,
                     std::string_view x_label, std::string_view y_label,
                     std::span<const double> xs, std::span<const double> ys,
                     bool logy);

}  // namespace mb1d
