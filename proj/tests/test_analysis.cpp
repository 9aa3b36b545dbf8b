#include <cmath>
#include <complex>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "doctest.h"
#include "mb1d/analysis.hpp"

using namespace mb1d;

namespace {

std::vector<complexd> pure_tone(double freq, double dt, int n,
                                double amplitude = 1.0, double phase = 0.0) {
  std::vector<complexd> s(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) {
    const double arg = 2.0 * 3.141592653589793 * freq * k * dt + phase;
    s[static_cast<std::size_t>(k)] =
        amplitude * complexd{std::cos(arg), std::sin(arg)};
  }
  return s;
}

double total_power(const Spectrum& sp) {
  double sum = 0.0;
  for (double p : sp.power) sum += p;
  return sum;
}

bool message_contains(const std::invalid_argument& e, const std::string& part) {
  return std::string(e.what()).find(part) != std::string::npos;
}

RunConfig scan_config() {
  RunConfig c;
  c.pump.peak_amplitude = 1e10;
  c.read.peak_amplitude = 0.7e10;
  c.initial_state.rho_bb = 0.2;
  c.grid.nz = 6;
  c.grid.dt = 1e-16;
  c.grid.tail_window = 0.25e-12;
  c.apply_delay();
  return c;
}

}  // namespace

TEST_CASE("power spectrum rejects short series and bad steps") {
  const std::vector<complexd> short_series(15, complexd{1.0, 0.0});
  CHECK_THROWS_AS(power_spectrum(short_series, 1e-15), std::invalid_argument);
  const std::vector<complexd> ok(16, complexd{1.0, 0.0});
  CHECK_THROWS_AS(power_spectrum(ok, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(power_spectrum(ok, -1e-15), std::invalid_argument);
  CHECK_NOTHROW(power_spectrum(ok, 1e-15));
}

TEST_CASE("a positive-frequency tone peaks at a positive offset") {
  const double dt = 1e-15;
  const int n = 512;                      // pads to 4096
  const double df = 1.0 / (4096.0 * dt);  // bin spacing after padding
  const auto s = pure_tone(100.0 * df, dt, n);
  const Spectrum sp = power_spectrum(s, dt);
  CHECK(sp.n_fft == 4096);
  CHECK(sp.peak_offset == 100.0 * df);
  CHECK(sp.fwhm > 0.0);

  const auto neg = pure_tone(-100.0 * df, dt, n);
  CHECK(power_spectrum(neg, dt).peak_offset == -100.0 * df);
}

TEST_CASE("spectrum preserves total power") {
  const double dt = 2e-16;
  auto s = pure_tone(3e12, dt, 300, 2.5, 0.3);
  for (std::size_t k = 0; k < s.size(); ++k)
    s[k] += 0.3 * complexd{std::sin(0.01 * static_cast<double>(k)), -0.2};
  double time_sum = 0.0;
  for (const complexd& v : s) time_sum += std::norm(v);
  const Spectrum sp = power_spectrum(s, dt);
  CHECK(total_power(sp) / static_cast<double>(sp.n_fft) ==
        doctest::Approx(time_sum).epsilon(1e-9));
}

TEST_CASE("spectrum is invariant under a global phase") {
  const double dt = 1e-15;
  auto s = pure_tone(2e12, dt, 256, 1.0);
  auto rotated = s;
  const complexd phase{std::cos(1.1), std::sin(1.1)};
  for (complexd& v : rotated) v *= phase;
  const Spectrum a = power_spectrum(s, dt);
  const Spectrum b = power_spectrum(rotated, dt);
  CHECK(a.peak_offset == b.peak_offset);
  CHECK(a.fwhm == doctest::Approx(b.fwhm).epsilon(1e-9));
  CHECK(total_power(a) == doctest::Approx(total_power(b)).epsilon(1e-12));
}

TEST_CASE("transform-limited Gaussian has the expected time-bandwidth product") {
  const double dt = 1e-15;
  const int n = 1024;
  const double d = 40e-15;  // intensity FWHM in time
  const double center = 512e-15;
  std::vector<complexd> s(static_cast<std::size_t>(n));
  constexpr double two_ln2 = 1.3862943611198906;
  for (int k = 0; k < n; ++k) {
    const double t = k * dt - center;
    s[static_cast<std::size_t>(k)] = {std::exp(-two_ln2 * (t / d) * (t / d)),
                                      0.0};
  }
  const Spectrum sp = power_spectrum(s, dt);
  // Fourier-limited Gaussian: (intensity FWHM in f) * (intensity FWHM in t)
  // = 2 ln2 / pi ~= 0.4413
  const double product = sp.fwhm * d;
  CHECK(product == doctest::Approx(2.0 * 0.6931471805599453 /
                                   3.141592653589793)
                       .epsilon(0.02));
  CHECK(std::abs(sp.peak_offset) < 2.0 / (static_cast<double>(sp.n_fft) * dt));
}

TEST_CASE("asymmetry is signed by which side of the peak holds the power") {
  const double dt = 1e-15;
  const int n = 512;
  const double df = 1.0 / (4096.0 * dt);

  auto base = pure_tone(100.0 * df, dt, n);
  auto high_shoulder = base;
  auto low_shoulder = base;
  const auto up = pure_tone(400.0 * df, dt, n, 0.5);
  const auto down = pure_tone(-200.0 * df, dt, n, 0.5);
  for (int k = 0; k < n; ++k) {
    high_shoulder[static_cast<std::size_t>(k)] += up[static_cast<std::size_t>(k)];
    low_shoulder[static_cast<std::size_t>(k)] += down[static_cast<std::size_t>(k)];
  }

  CHECK(std::abs(spectral_asymmetry(power_spectrum(base, dt))) < 0.01);
  CHECK(spectral_asymmetry(power_spectrum(high_shoulder, dt)) > 0.1);
  CHECK(spectral_asymmetry(power_spectrum(low_shoulder, dt)) < -0.1);
}

TEST_CASE("integrated signal is the exit-power sum times the step") {
  SimulationRecord rec;
  rec.grid.dt = 2e-15;
  rec.omega_s_out = {complexd{1.0, 0.0}, complexd{0.0, 1.0}, complexd{1.0, 1.0},
                     complexd{3.0, 0.0}};
  CHECK(integrated_signal(rec) == doctest::Approx(13.0 * 2e-15).epsilon(1e-12));

  SimulationRecord rotated = rec;
  const complexd phase{std::cos(0.7), std::sin(0.7)};
  for (complexd& v : rotated.omega_s_out) v *= phase;
  CHECK(integrated_signal(rotated) ==
        doctest::Approx(integrated_signal(rec)).epsilon(1e-12));
}

TEST_CASE("tail / peak ratio on a synthetic record") {
  SimulationRecord rec;
  rec.grid.dt = 1e-15;
  rec.time = {0.0, 1e-15, 2e-15, 3e-15, 4e-15};
  rec.omega1_out = {complexd{1.0, 0.0}, complexd{10.0, 0.0}, complexd{2.0, 0.0},
                    complexd{0.0, 0.5}, complexd{0.1, 0.0}};

  CHECK(tail_peak_ratio(rec, 2.5e-15) ==
        doctest::Approx(0.25 / 100.0).epsilon(1e-12));
  // window containing the global peak gives exactly 1
  CHECK(tail_peak_ratio(rec, 0.0) == 1.0);

  SUBCASE("empty tail window") {
    CHECK_THROWS_AS(tail_peak_ratio(rec, 5e-15), std::invalid_argument);
  }
  SUBCASE("identically zero output") {
    SimulationRecord zero = rec;
    for (complexd& v : zero.omega1_out) v = complexd{};
    CHECK_THROWS_AS(tail_peak_ratio(zero, 0.0), std::invalid_argument);
  }
}

TEST_CASE("default tail start clears the pump by five amplitude widths") {
  RunConfig c;
  c.pump.center_time = 0.1e-12;
  c.pump.duration_fwhm = 50e-15;
  constexpr double sqrt2 = 1.4142135623730951;
  CHECK(default_tail_start(c) ==
        doctest::Approx(0.1e-12 + 5.0 * sqrt2 * 50e-15).epsilon(1e-12));
}

TEST_CASE("exponential fit recovers exact and perturbed decays") {
  std::vector<double> t, y;
  const double rate = 2e9, amp = 3.0;
  for (int i = 0; i < 10; ++i) {
    t.push_back(i * 1e-10);
    y.push_back(amp * std::exp(-rate * t.back()));
  }

  SUBCASE("exact data") {
    const ExpFitResult fit = exp_fit(t, y);
    CHECK(fit.rate == doctest::Approx(rate).epsilon(1e-12));
    CHECK(fit.amplitude == doctest::Approx(amp).epsilon(1e-12));
    CHECK(fit.residual <= 1e-12);
  }
  SUBCASE("seeded 5% multiplicative noise leaves the rate within 10%") {
    std::mt19937 rng(12345u);
    std::uniform_real_distribution<double> jitter(-0.05, 0.05);
    std::vector<double> nt, ny;
    for (int i = 0; i < 20; ++i) {
      nt.push_back(i * (2.0 / rate) / 19.0);  // spans two decay times
      ny.push_back(amp * std::exp(-rate * nt.back()) * (1.0 + jitter(rng)));
    }
    const ExpFitResult fit = exp_fit(nt, ny);
    CHECK(fit.rate == doctest::Approx(rate).epsilon(0.10));
    CHECK(fit.residual < 0.1);
  }
  SUBCASE("alternating relative perturbation") {
    auto noisy = y;
    for (std::size_t i = 0; i < noisy.size(); ++i)
      noisy[i] *= (i % 2 ? 1.001 : 0.999);
    const ExpFitResult fit = exp_fit(t, noisy);
    CHECK(fit.rate == doctest::Approx(rate).epsilon(1e-3));
    CHECK(fit.residual > 0.0);
    CHECK(fit.residual < 2e-3);
  }
  SUBCASE("scaling y rescales only the amplitude") {
    auto scaled = y;
    for (double& v : scaled) v *= 1e12;
    const ExpFitResult a = exp_fit(t, y);
    const ExpFitResult b = exp_fit(t, scaled);
    CHECK(b.rate == doctest::Approx(a.rate).epsilon(1e-12));
    CHECK(b.amplitude == doctest::Approx(a.amplitude * 1e12).epsilon(1e-12));
  }
  SUBCASE("scaling t rescales only the rate") {
    auto stretched = t;
    for (double& v : stretched) v *= 4.0;
    const ExpFitResult fit = exp_fit(stretched, y);
    CHECK(fit.rate == doctest::Approx(rate / 4.0).epsilon(1e-12));
  }
  SUBCASE("rejects unusable inputs") {
    const std::vector<double> two_t{0.0, 1.0}, two_y{1.0, 0.5};
    CHECK_THROWS_AS(exp_fit(two_t, two_y), std::invalid_argument);
    auto bad = y;
    bad[4] = 0.0;
    CHECK_THROWS_AS(exp_fit(t, bad), std::invalid_argument);
    const std::vector<double> flat_t(10, 1e-10);
    CHECK_THROWS_AS(exp_fit(flat_t, y), std::invalid_argument);
    const std::vector<double> short_y{1.0, 0.5, 0.25};
    CHECK_THROWS_AS(exp_fit(t, short_y), std::invalid_argument);
  }
}

TEST_CASE("delay scan matches direct runs and is order-independent") {
  const RunConfig base = scan_config();

  SUBCASE("single delay equals a direct propagation") {
    const ScanResult scan = delay_scan(base, std::vector<double>{0.2e-12});
    REQUIRE(scan.rows.size() == 1);
    CHECK_FALSE(scan.fit.has_value());

    RunConfig direct = base;
    direct.delay_tau = 0.2e-12;
    direct.apply_delay();
    const SimulationRecord rec = propagate(direct);
    CHECK(scan.rows[0].swept == 0.2e-12);
    CHECK(scan.rows[0].integral == integrated_signal(rec));
    double best = 0.0;
    for (const BlochState& s : rec.rho_zl)
      best = std::max(best, std::abs(s.rho_ba));
    CHECK(scan.rows[0].max_abs_rho_ba == best);
  }

  SUBCASE("worker pool returns the serial rows bit for bit") {
    const std::vector<double> taus{0.0, 0.2e-12, 0.4e-12};
    const ScanResult serial = delay_scan(base, taus, 1);
    const ScanResult parallel = delay_scan(base, taus, 3);
    REQUIRE(serial.rows.size() == parallel.rows.size());
    for (std::size_t i = 0; i < serial.rows.size(); ++i) {
      CHECK(serial.rows[i].swept == parallel.rows[i].swept);
      CHECK(serial.rows[i].integral == parallel.rows[i].integral);
      CHECK(serial.rows[i].max_abs_rho_ba == parallel.rows[i].max_abs_rho_ba);
    }
  }

  SUBCASE("fit block reproduces a direct fit of the kept rows") {
    const std::vector<double> taus{0.0, 0.2e-12, 0.4e-12, 0.6e-12};
    const ScanResult scan =
        delay_scan(base, taus, 2, std::make_pair(0.15e-12, 0.7e-12));
    REQUIRE(scan.fit.has_value());
    std::vector<double> ft, fy;
    for (const ScanRow& row : scan.rows) {
      if (row.swept >= 0.15e-12 && row.swept <= 0.7e-12) {
        ft.push_back(row.swept);
        fy.push_back(row.integral);
      }
    }
    REQUIRE(ft.size() == 3);
    const ExpFitResult direct = exp_fit(ft, fy);
    CHECK(scan.fit->rate == direct.rate);
    CHECK(scan.fit->amplitude == direct.amplitude);
    CHECK(scan.fit->residual == direct.residual);
  }

  SUBCASE("rejects non-increasing delays") {
    const std::vector<double> taus{0.2e-12, 0.2e-12};
    CHECK_THROWS_AS(delay_scan(base, taus), std::invalid_argument);
  }

  SUBCASE("a broken run reports which delay failed") {
    RunConfig bad = base;
    bad.initial_state.rho_bb = 1.5;
    try {
      delay_scan(bad, std::vector<double>{0.1e-12});
      FAIL("expected invalid_argument");
    } catch (const std::invalid_argument& e) {
      CHECK(message_contains(e, "delay_scan at tau"));
    }
  }
}

TEST_CASE("population scan sweeps the stored population") {
  const RunConfig base = scan_config();

  SUBCASE("empty input gives an empty result") {
    const ScanResult scan = population_scan(base, std::vector<double>{});
    CHECK(scan.rows.empty());
    CHECK_FALSE(scan.fit.has_value());
  }

  SUBCASE("rows follow the requested values, serial and parallel alike") {
    const std::vector<double> values{0.0, 0.3};
    const ScanResult serial = population_scan(base, values, 1);
    const ScanResult parallel = population_scan(base, values, 4);
    REQUIRE(serial.rows.size() == 2);
    CHECK(serial.rows[0].swept == 0.0);
    CHECK(serial.rows[1].swept == 0.3);
    for (std::size_t i = 0; i < serial.rows.size(); ++i) {
      CHECK(serial.rows[i].integral == parallel.rows[i].integral);
      CHECK(serial.rows[i].max_abs_rho_ba == parallel.rows[i].max_abs_rho_ba);
    }
  }

  SUBCASE("rejects values outside [0,1] and non-increasing lists") {
    CHECK_THROWS_AS(population_scan(base, std::vector<double>{-0.1}),
                    std::invalid_argument);
    CHECK_THROWS_AS(population_scan(base, std::vector<double>{0.5, 1.2}),
                    std::invalid_argument);
    CHECK_THROWS_AS(population_scan(base, std::vector<double>{0.4, 0.4}),
                    std::invalid_argument);
  }
}
