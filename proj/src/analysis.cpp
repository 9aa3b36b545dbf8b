#include "mb1d/analysis.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <string>
#include <thread>

#include "mb1d/constants.hpp"

namespace mb1d {

namespace {

void require(bool ok, const std::string& what) {
  if (!ok) throw std::invalid_argument(what);
}

// In-place iterative radix-2 transform, X_k = sum_n x_n exp(-2 pi i n k / N).
void fft_pow2(std::vector<complexd>& x) {
  const std::size_t n = x.size();
  for (std::size_t i = 1, j = 0; i < n; ++i) {
    std::size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(x[i], x[j]);
  }
  for (std::size_t len = 2; len <= n; len <<= 1) {
    const double ang = -2.0 * constants::pi / static_cast<double>(len);
    const complexd wl{std::cos(ang), std::sin(ang)};
    for (std::size_t i = 0; i < n; i += len) {
      complexd w{1.0, 0.0};
      for (std::size_t k = 0; k < len / 2; ++k) {
        const complexd u = x[i + k];
        const complexd v = x[i + k + len / 2] * w;
        x[i + k] = u + v;
        x[i + k + len / 2] = u - v;
        w *= wl;
      }
    }
  }
}

// Runs work(0..n-1) on up to `jobs` threads; any exception is rethrown on the
// caller thread, lowest index first, so failures are deterministic.
void run_indexed(int n, int jobs, const std::function<void(int)>& work) {
  if (n <= 0) return;
  jobs = std::clamp(jobs, 1, n);
  if (jobs == 1) {
    for (int i = 0; i < n; ++i) work(i);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::exception_ptr> errors(static_cast<std::size_t>(n));
  const auto worker = [&] {
    for (int i = next.fetch_add(1); i < n; i = next.fetch_add(1)) {
      try {
        work(i);
      } catch (...) {
        errors[static_cast<std::size_t>(i)] = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(jobs));
  for (int j = 0; j < jobs; ++j) pool.emplace_back(worker);
  for (std::thread& t : pool) t.join();
  for (const std::exception_ptr& e : errors)
    if (e) std::rethrow_exception(e);
}

double max_abs_rho_ba(const SimulationRecord& record) {
  double best = 0.0;
  for (const BlochState& s : record.rho_zl)
    best = std::max(best, std::abs(s.rho_ba));
  return best;
}

// propagate with errors retagged by the swept value, preserving the
// invalid_argument vs runtime_error distinction (it drives exit codes).
SimulationRecord propagate_tagged(const RunConfig& config,
                                  const std::string& tag) {
  try {
    return propagate(config);
  } catch (const std::invalid_argument& e) {
    throw std::invalid_argument(tag + e.what());
  } catch (const std::runtime_error& e) {
    throw std::runtime_error(tag + e.what());
  }
}

void require_strictly_increasing(std::span<const double> v,
                                 const std::string& name) {
  for (std::size_t i = 1; i < v.size(); ++i)
    require(v[i] > v[i - 1], name + " values must be strictly increasing");
}

}  // namespace

Spectrum power_spectrum(std::span<const complexd> series, double dt) {
  require(series.size() >= 16,
          "power_spectrum needs at least 16 samples, got " +
              std::to_string(series.size()));
  require(dt > 0.0 && std::isfinite(dt), "power_spectrum: dt must be positive");

  std::size_t pow2 = 1;
  while (pow2 < series.size()) pow2 <<= 1;
  const std::size_t n = pow2 * 8;

  std::vector<complexd> buf(n, complexd{});
  std::copy(series.begin(), series.end(), buf.begin());
  fft_pow2(buf);

  Spectrum sp;
  sp.n_fft = static_cast<int>(n);
  sp.freq_offset.resize(n);
  sp.power.resize(n);
  const double df = 1.0 / (static_cast<double>(n) * dt);
  // reorder to ascending frequency: bins n/2..n-1 are the negative offsets
  std::size_t out = 0;
  for (std::size_t k = n / 2; k < n; ++k, ++out) {
    sp.freq_offset[out] = (static_cast<double>(k) - static_cast<double>(n)) * df;
    sp.power[out] = std::norm(buf[k]);
  }
  for (std::size_t k = 0; k < n / 2; ++k, ++out) {
    sp.freq_offset[out] = static_cast<double>(k) * df;
    sp.power[out] = std::norm(buf[k]);
  }

  const auto peak_it = std::max_element(sp.power.begin(), sp.power.end());
  const std::size_t peak = static_cast<std::size_t>(peak_it - sp.power.begin());
  sp.peak_offset = sp.freq_offset[peak];

  const double half = sp.power[peak] / 2.0;
  double left = sp.freq_offset.front();
  bool have_left = false;
  for (std::size_t i = peak; i-- > 0;) {
    if (sp.power[i] < half) {
      const double frac = (half - sp.power[i]) / (sp.power[i + 1] - sp.power[i]);
      left = sp.freq_offset[i] + frac * df;
      have_left = true;
      break;
    }
  }
  double right = sp.freq_offset.back();
  bool have_right = false;
  for (std::size_t i = peak + 1; i < sp.power.size(); ++i) {
    if (sp.power[i] < half) {
      const double frac = (sp.power[i - 1] - half) / (sp.power[i - 1] - sp.power[i]);
      right = sp.freq_offset[i - 1] + frac * df;
      have_right = true;
      break;
    }
  }
  sp.fwhm = (have_left && have_right) ? right - left : 0.0;
  return sp;
}

double spectral_asymmetry(const Spectrum& spectrum) {
  double above = 0.0, below = 0.0, total = 0.0;
  for (std::size_t i = 0; i < spectrum.power.size(); ++i) {
    total += spectrum.power[i];
    if (spectrum.freq_offset[i] > spectrum.peak_offset)
      above += spectrum.power[i];
    else if (spectrum.freq_offset[i] < spectrum.peak_offset)
      below += spectrum.power[i];
  }
  return total > 0.0 ? (above - below) / total : 0.0;
}

double integrated_signal(const SimulationRecord& record) {
  return integrated_exit_signal(record);
}

double tail_peak_ratio(const SimulationRecord& record, double tail_start) {
  double global = 0.0;
  for (const complexd& w : record.omega1_out) global = std::max(global, std::norm(w));
  require(global > 0.0,
          "tail_peak_ratio undefined: the 800 nm output is identically zero");
  double tail = -1.0;
  for (std::size_t i = 0; i < record.time.size(); ++i) {
    if (record.time[i] >= tail_start)
      tail = std::max(tail, std::norm(record.omega1_out[i]));
  }
  require(tail >= 0.0, "tail_peak_ratio: no samples at or after tail_start");
  return tail / global;
}

double default_tail_start(const RunConfig& config) {
  constexpr double sqrt2 = 1.4142135623730951;
  return config.pump.center_time + 5.0 * sqrt2 * config.pump.duration_fwhm;
}

ExpFitResult exp_fit(std::span<const double> t, std::span<const double> y) {
  require(t.size() == y.size(), "exp_fit: t and y lengths differ");
  require(t.size() >= 3, "exp_fit needs at least 3 rows");
  const auto [tmin, tmax] = std::minmax_element(t.begin(), t.end());
  require(*tmin < *tmax, "exp_fit: degenerate fit, all t values equal");

  const double n = static_cast<double>(t.size());
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < t.size(); ++i) {
    require(y[i] > 0.0, "exp_fit requires y > 0, got " + std::to_string(y[i]));
    const double ly = std::log(y[i]);
    sx += t[i];
    sy += ly;
    sxx += t[i] * t[i];
    sxy += t[i] * ly;
  }
  const double denom = n * sxx - sx * sx;
  const double slope = (n * sxy - sx * sy) / denom;
  const double intercept = (sy - slope * sx) / n;

  double ss = 0.0;
  for (std::size_t i = 0; i < t.size(); ++i) {
    const double r = std::log(y[i]) - (intercept + slope * t[i]);
    ss += r * r;
  }
  ExpFitResult fit;
  fit.amplitude = std::exp(intercept);
  fit.rate = -slope;
  fit.residual = std::sqrt(ss / n);
  return fit;
}

ScanResult delay_scan(const RunConfig& base, std::span<const double> taus,
                      int jobs,
                      std::optional<std::pair<double, double>> fit_range) {
  require_strictly_increasing(taus, "delay_scan tau");
  ScanResult out;
  out.rows.resize(taus.size());
  run_indexed(static_cast<int>(taus.size()), jobs, [&](int i) {
    RunConfig c = base;
    c.delay_tau = taus[static_cast<std::size_t>(i)];
    c.apply_delay();
    const SimulationRecord rec = propagate_tagged(
        c, "delay_scan at tau = " + std::to_string(c.delay_tau) + " s: ");
    out.rows[static_cast<std::size_t>(i)] = {c.delay_tau,
                                             integrated_signal(rec),
                                             max_abs_rho_ba(rec)};
  });
  if (fit_range) {
    std::vector<double> ft, fy;
    for (const ScanRow& row : out.rows) {
      if (row.swept >= fit_range->first && row.swept <= fit_range->second) {
        ft.push_back(row.swept);
        fy.push_back(row.integral);
      }
    }
    out.fit = exp_fit(ft, fy);
  }
  return out;
}

ScanResult population_scan(const RunConfig& base,
                           std::span<const double> rho_bb_values, int jobs) {
  require_strictly_increasing(rho_bb_values, "population_scan rho_BB");
  for (double v : rho_bb_values)
    require(v >= 0.0 && v <= 1.0,
            "population_scan rho_BB values must lie in [0,1]");
  ScanResult out;
  out.rows.resize(rho_bb_values.size());
  run_indexed(static_cast<int>(rho_bb_values.size()), jobs, [&](int i) {
    RunConfig c = base;
    c.initial_state.rho_bb = rho_bb_values[static_cast<std::size_t>(i)];
    const SimulationRecord rec = propagate_tagged(
        c, "population_scan at rho_BB = " +
               std::to_string(c.initial_state.rho_bb) + ": ");
    out.rows[static_cast<std::size_t>(i)] = {c.initial_state.rho_bb,
                                             integrated_signal(rec),
                                             max_abs_rho_ba(rec)};
  });
  return out;
}

}  // namespace mb1d
