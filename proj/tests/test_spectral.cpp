#include <doctest.h>

#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include "spinmech/constants.hpp"
#include "spinmech/errors.hpp"
#include "spinmech/spectral.hpp"

using namespace spinmech;
using constants::two_pi;

namespace {

std::array<ModeParams, 2> paper_modes() {
  std::array<ModeParams, 2> modes;
  modes[0].omega = two_pi * 5.99e6;
  modes[0].damping = two_pi * 180e3;
  modes[0].mass = 1e-15;
  modes[0].orientation = Vec2::UnitX();
  modes[1].omega = two_pi * 6.29e6;
  modes[1].damping = two_pi * 190e3;
  modes[1].mass = 1e-15;
  modes[1].orientation = Vec2::UnitY();
  return modes;
}

// lambda along e2, 0.5 MHz/nm
CouplingVector paper_coupling() {
  CouplingVector cv;
  cv.lambda = Vec2(0.0, two_pi * 5e14);
  return cv;
}

size_t argmax_above(const Spectrum& s, double f_min) {
  size_t best = 0;
  double best_v = -1.0;
  for (size_t k = 0; k < s.size(); ++k) {
    if (s.frequency(k) > f_min && s.magnitude[k] > best_v) {
      best_v = s.magnitude[k];
      best = k;
    }
  }
  return best;
}

} // namespace

TEST_SUITE("spectral") {

TEST_CASE("pure on-bin tone transforms to a single peak") {
  const int n = 4096;
  const double dt = 1e-8;
  const int cycle_bins = 64;
  const double f0 = cycle_bins / (n * dt);
  std::vector<double> x(n);
  for (int k = 0; k < n; ++k) x[k] = std::cos(two_pi * f0 * k * dt);
  const Spectrum s = rabi_spectrum(dt, x, 1);
  const size_t peak = argmax_above(s, 0.0);
  CHECK(s.frequency(peak) == doctest::Approx(f0).epsilon(1e-12));
  CHECK(s.magnitude[peak] == doctest::Approx(n / 2.0).epsilon(1e-10));
  for (size_t k = 0; k < s.size(); ++k)
    if (k != peak) CHECK(s.magnitude[k] < 1e-10 * s.magnitude[peak]);
}

TEST_CASE("constant series transforms to zero") {
  const std::vector<double> x(256, 0.7);
  const Spectrum s = rabi_spectrum(1e-8, x, 2);
  for (const double m : s.magnitude) CHECK(m < 1e-12);
}

TEST_CASE("non-uniform time grid rejected") {
  std::vector<double> t(128), x(128, 0.0);
  for (size_t k = 0; k < t.size(); ++k) t[k] = k * 1e-8;
  t[100] += 3e-9;
  CHECK_THROWS_AS(rabi_spectrum(t, x, 8), NonUniformSampling);
}

TEST_CASE("damped cosine matches the analytic transform") {
  const double dt = 1e-8, f0 = 2e6, gamma = two_pi * 100e3;
  const int n = 2000;
  std::vector<double> x(n);
  for (int k = 0; k < n; ++k) x[k] = std::exp(-gamma * k * dt) * std::cos(two_pi * f0 * k * dt);
  const Spectrum s = rabi_spectrum(dt, x, 8);
  const size_t peak = argmax_above(s, 0.5e6);
  CHECK(s.frequency(peak) == doctest::Approx(f0).epsilon(2e-3));
  // |X(f0)| = 1/(2 gamma); the DFT sum approximates X(f)/dt
  CHECK(s.magnitude[peak] == doctest::Approx(0.5 / gamma / dt).epsilon(0.02));
  // magnitude (not power) profile: half max at sqrt(3) * gamma / 2pi
  const double half = s.magnitude[peak] / 2.0;
  double hwhm = 0.0;
  for (size_t k = peak; k < s.size(); ++k)
    if (s.magnitude[k] < half) {
      hwhm = s.frequency(k) - f0;
      break;
    }
  CHECK(hwhm == doctest::Approx(std::sqrt(3.0) * gamma / two_pi).epsilon(0.10));
}

TEST_CASE("synthetic triplet detection") {
  Spectrum s;
  s.df = 5e3;
  s.magnitude.resize(2001);
  auto bump = [&](double f0, double amp) {
    for (size_t k = 0; k < s.magnitude.size(); ++k) {
      const double d = (s.frequency(k) - f0) / 30e3;
      s.magnitude[k] += amp * std::exp(-0.5 * d * d);
    }
  };
  bump(6.29e6, 1.0);
  bump(5.04e6, 0.6);
  bump(7.54e6, 0.6);
  const TripletFit fit = detect_triplet(s, 6.29e6, 4e6);
  CHECK(fit.quality == TripletQuality::good);
  CHECK(fit.center == doctest::Approx(6.29e6).epsilon(1e-3));
  CHECK(fit.separation == doctest::Approx(2.50e6).epsilon(5e-3));
  CHECK(fit.amplitudes[1] > fit.amplitudes[0]);
  CHECK(fit.amplitudes[1] > fit.amplitudes[2]);
}

TEST_CASE("single peak degrades the fit") {
  Spectrum s;
  s.df = 5e3;
  s.magnitude.resize(2001);
  for (size_t k = 0; k < s.magnitude.size(); ++k) {
    const double d = (s.frequency(k) - 6.29e6) / 30e3;
    s.magnitude[k] = std::exp(-0.5 * d * d);
  }
  const TripletFit fit = detect_triplet(s, 6.29e6, 4e6);
  CHECK(fit.quality == TripletQuality::degraded);
  CHECK(fit.separation == 0.0);
}

TEST_CASE("dressed-state splitting law") {
  CHECK(mollow_splitting(6.29e6, 6.29e6, 2e6) == doctest::Approx(1e6).epsilon(1e-12));
  CHECK(mollow_splitting(6.29e6, 5.29e6, 0.0) == doctest::Approx(1e6).epsilon(1e-12));
  CHECK(mollow_splitting(10.0, 7.0, 8.0) == doctest::Approx(5.0).epsilon(1e-12));
  SUBCASE("even in the Rabi detuning") {
    CHECK(mollow_splitting(6e6, 6e6 + 1.3e6, 2e6) ==
          doctest::Approx(mollow_splitting(6e6, 6e6 - 1.3e6, 2e6)).epsilon(1e-12));
  }
  SUBCASE("monotone in the depth") {
    double prev = 0.0;
    for (double depth = 0.0; depth <= 5e6; depth += 0.5e6) {
      const double d = mollow_splitting(6e6, 5e6, depth);
      CHECK(d >= prev);
      prev = d;
    }
  }
}

TEST_CASE("modulation depth") {
  const auto modes = paper_modes();
  SUBCASE("coupling orthogonal to the excited mode gives zero") {
    DriveSpec d;
    d.force = 1e-10;
    d.direction = Vec2::UnitY();
    d.omega = modes[1].omega;
    CouplingVector cv;
    cv.lambda = Vec2(two_pi * 5e14, 0.0); // along e1 only
    CHECK(modulation_depth(modes, d, cv) == doctest::Approx(0.0).epsilon(1e-15));
  }
  SUBCASE("9 nm resonant drive reaches 4.5 MHz") {
    DriveSpec d;
    d.direction = Vec2::UnitY();
    d.omega = modes[1].omega;
    d.force = 9e-9 / std::abs(susceptibility(modes[1], modes[1].omega));
    CHECK(modulation_depth(modes, d, paper_coupling()) == doctest::Approx(4.5e6).epsilon(1e-3));
  }
  SUBCASE("identity with the driven response") {
    std::mt19937 rng(42);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int k = 0; k < 1000; ++k) {
      DriveSpec d;
      d.force = 1e-12 + 1e-9 * u(rng);
      const double a = two_pi * u(rng);
      d.direction = Vec2(std::cos(a), std::sin(a));
      d.omega = two_pi * (5e6 + 2e6 * u(rng));
      d.phase = two_pi * u(rng);
      CouplingVector cv;
      cv.lambda = two_pi * 1e15 * Vec2(u(rng) - 0.5, u(rng) - 0.5);
      const PlanePhasor dr = driven_response(modes, d);
      const std::complex<double> dot = dr(0) * cv.lambda.x() + dr(1) * cv.lambda.y();
      const double expected = std::abs(dot) / two_pi;
      CHECK(modulation_depth(modes, d, cv) == doctest::Approx(expected).epsilon(1e-12));
    }
  }
}

TEST_CASE("simulated resonant triplet splits by the modulation depth") {
  TripletSettings settings;
  const TripletAnalysis a = analyze_triplet(6.29e6, 6.29e6, 2e6, settings);
  CHECK(a.fit.quality == TripletQuality::good);
  CHECK(a.fit.separation / 2e6 > 0.95);
  CHECK(a.fit.separation / 2e6 < 1.05);
}

TEST_CASE("spin synchronizes on the oscillator tone") {
  TripletSettings settings;
  settings.phase_average = false; // single run, phase 0
  const TripletAnalysis a = analyze_triplet(6.29e6, 6.29e6, 2e6, settings);
  const size_t peak = argmax_above(a.spectrum, 1e6);
  const double df_raw = 1.0 / settings.duration;
  CHECK(std::abs(a.spectrum.frequency(peak) - 6.29e6) <= df_raw / 2);
  CHECK(std::abs(a.refined_center - 6.29e6) <= a.spectrum.df);
}

TEST_CASE("bimodal sweep prediction") {
  const auto modes = paper_modes();
  DriveSpec drive;
  drive.force = 2.36e-10;
  drive.direction = Vec2(0.6, 0.8); // generic orientation
  std::vector<double> freqs;
  for (int k = 0; k <= 180; ++k) freqs.push_back(5.7e6 + 0.9e6 * k / 180);
  SweepSettings settings;
  SUBCASE("two maxima at the eigenfrequencies") {
    CouplingVector both;
    both.lambda = two_pi * 5e14 * Vec2(0.6, 0.8);
    const auto p2 = bimodal_sweep(modes, drive, both, freqs, settings);
    std::vector<double> maxima;
    for (size_t i = 1; i + 1 < p2.size(); ++i)
      if (p2[i].depth > p2[i - 1].depth && p2[i].depth >= p2[i + 1].depth)
        maxima.push_back(p2[i].drive_freq);
    REQUIRE(maxima.size() == 2);
    CHECK(std::abs(maxima[0] - 5.99e6) <= 180e3 / 2);
    CHECK(std::abs(maxima[1] - 6.29e6) <= 190e3 / 2);
    for (const SweepPoint& p : p2) {
      CHECK(p.sideband_lo == doctest::Approx(p.drive_freq - p.depth / 2).epsilon(1e-12));
      CHECK(p.sideband_hi == doctest::Approx(p.drive_freq + p.depth / 2).epsilon(1e-12));
    }
  }
  SUBCASE("coupling along e1 only leaves one maximum") {
    CouplingVector cv;
    cv.lambda = Vec2(two_pi * 5e14, 0.0);
    const auto points = bimodal_sweep(modes, drive, cv, freqs, settings);
    std::vector<double> maxima;
    for (size_t i = 1; i + 1 < points.size(); ++i)
      if (points[i].depth > points[i - 1].depth && points[i].depth >= points[i + 1].depth)
        maxima.push_back(points[i].drive_freq);
    REQUIRE(maxima.size() == 1);
    CHECK(std::abs(maxima[0] - 5.99e6) <= 180e3 / 2);
  }
}

TEST_CASE("derived coupling scales") {
  const double lambda = two_pi * 5e14; // 0.5 MHz/nm
  ModeParams mode;
  mode.omega = two_pi * 6e6;
  mode.damping = two_pi * 180e3;
  mode.mass = 1e-15;
  CHECK(thermal_modulation(lambda, mode, 300.0) / 1e3 == doctest::Approx(26.0).epsilon(0.08));
  CHECK(quantum_coupling_rate(lambda, mode) == doctest::Approx(18.0).epsilon(0.05));
  CHECK(mollow_resolution_length(100e3, lambda) == doctest::Approx(200e-12).epsilon(1e-9));
  CHECK_THROWS_AS(mollow_resolution_length(100e3, 0.0), DivisionByZeroCoupling);
}

} // TEST_SUITE
