#include <doctest.h>

#include <cmath>
#include <vector>

#include "spinmech/bloch.hpp"
#include "spinmech/constants.hpp"
#include "spinmech/errors.hpp"

using namespace spinmech;
using constants::two_pi;

namespace {

RabiRun bare_rabi(double rabi_hz, double duration) {
  RabiRun run;
  run.rabi = two_pi * rabi_hz;
  run.duration = duration;
  run.dt = 2e-9;
  run.sample_stride = 1;
  return run;
}

} // namespace

TEST_SUITE("bloch") {

TEST_CASE("modulation waveform") {
  RabiRun run;
  run.detuning = two_pi * 1e5;
  run.depth = two_pi * 2e6;
  run.drive_omega = two_pi * 6.29e6;
  SUBCASE("zero depth is the static detuning") {
    RabiRun flat = run;
    flat.depth = 0.0;
    CHECK(modulation_waveform(flat, 1.23e-6) == doctest::Approx(flat.detuning).epsilon(1e-15));
  }
  SUBCASE("t=0, zero phase adds the full depth") {
    RabiRun centered = run;
    centered.detuning = 0.0;
    CHECK(modulation_waveform(centered, 0.0) == doctest::Approx(run.depth).epsilon(1e-15));
  }
  SUBCASE("integer-period average returns the static detuning") {
    const int n = 1 << 16;
    const double period = two_pi / run.drive_omega;
    double sum = 0.0;
    for (int k = 0; k < n; ++k) sum += modulation_waveform(run, 5.0 * period * k / n);
    CHECK(sum / n == doctest::Approx(run.detuning).epsilon(1e-12));
  }
}

TEST_CASE("derivative is the Rabi torque at the pole") {
  RabiRun run;
  run.rabi = two_pi * 6e6;
  const BlochState d = bloch_derivative(BlochState{0, 0, 1}, run, 0.0);
  CHECK(d.x == 0.0);
  CHECK(d.y == doctest::Approx(-run.rabi).epsilon(1e-15));
  CHECK(d.z == 0.0);
}

TEST_CASE("free precession keeps s_z and rotates the transverse spin") {
  RabiRun run = bare_rabi(0.0, 2e-6);
  run.detuning = two_pi * 1e6;
  run.initial = BlochState{1, 0, 0};
  const TimeSeries out = integrate_rabi(run);
  for (size_t k = 0; k < out.samples.size(); ++k) {
    const double t = k * out.sample_dt;
    CHECK(out.samples[k].z == doctest::Approx(0.0).epsilon(1e-9));
    CHECK(out.samples[k].x == doctest::Approx(std::cos(run.detuning * t)).epsilon(1e-7));
    CHECK(out.samples[k].y == doctest::Approx(std::sin(run.detuning * t)).epsilon(1e-7));
  }
}

TEST_CASE("pure Rabi oscillation matches cos to 1e-6 over 10 us") {
  RabiRun run = bare_rabi(6.29e6, 10e-6);
  run.dt = 4e-10; // phase accuracy 1e-6 over ~63 cycles needs a fine step
  run.sample_stride = 5;
  const TimeSeries out = integrate_rabi(run);
  for (size_t k = 0; k < out.samples.size(); ++k) {
    const double t = k * out.sample_dt;
    CHECK(std::abs(out.samples[k].z - std::cos(run.rabi * t)) < 1e-6);
  }
}

TEST_CASE("detuned Rabi matches the generalized analytic solution") {
  RabiRun run = bare_rabi(4e6, 5e-6);
  run.dt = 4e-10;
  run.sample_stride = 5;
  run.detuning = two_pi * 3e6;
  const double og = std::hypot(run.rabi, run.detuning);
  const TimeSeries out = integrate_rabi(run);
  for (size_t k = 0; k < out.samples.size(); ++k) {
    const double t = k * out.sample_dt;
    const double s = std::sin(og * t / 2);
    const double expected = 1.0 - 2.0 * (run.rabi * run.rabi / (og * og)) * s * s;
    CHECK(std::abs(out.samples[k].z - expected) < 1e-6);
  }
}

TEST_CASE("norm conserved under modulation without decay") {
  RabiRun run = bare_rabi(6.29e6, 10e-6);
  run.dt = 4e-10;
  run.sample_stride = 5;
  run.drive_omega = two_pi * 6.29e6;
  run.depth = two_pi * 2e6;
  run.phase = 0.9;
  const TimeSeries out = integrate_rabi(run);
  for (const BlochState& s : out.samples) {
    CHECK(std::abs(s.norm() - 1.0) < 1e-6);
    CHECK(s.z >= -1.0 - 1e-6);
    CHECK(s.z <= 1.0 + 1e-6);
  }
}

TEST_CASE("time reversal returns to the initial state") {
  RabiRun fwd = bare_rabi(5e6, 4e-6);
  fwd.dt = 4e-10;
  fwd.detuning = two_pi * 1.5e6;
  const TimeSeries out = integrate_rabi(fwd);
  RabiRun bwd = fwd;
  bwd.rabi = -fwd.rabi;
  bwd.detuning = -fwd.detuning;
  bwd.initial = out.samples.back();
  const BlochState s0 = integrate_rabi(bwd).samples.back();
  CHECK(std::abs(s0.x) < 1e-6);
  CHECK(std::abs(s0.y) < 1e-6);
  CHECK(std::abs(s0.z - 1.0) < 1e-6);
}

TEST_CASE("step-size invariant enforced") {
  RabiRun run = bare_rabi(6.29e6, 1e-6);
  run.dt = 1e-8; // only ~16 steps per Rabi cycle
  CHECK_THROWS_AS(integrate_rabi(run), StepTooLarge);
}

TEST_CASE("halve-step error estimate and order") {
  RabiRun run = bare_rabi(6.29e6, 10e-6);
  run.drive_omega = two_pi * 6.29e6;
  run.depth = two_pi * 2e6;
  CHECK(halve_step_check(run) < 1e-5);
  // order check in the asymptotic regime
  RabiRun base = run;
  base.dt = 5e-10;
  const double e1 = halve_step_check(base);
  RabiRun fine = base;
  fine.dt /= 2;
  const double e2 = halve_step_check(fine);
  CHECK(e1 / e2 > 11.0);
  CHECK(e1 / e2 < 23.0);
  RabiRun empty = run;
  empty.duration = 0.0;
  CHECK(halve_step_check(empty) == 0.0);
}

TEST_CASE("decay envelope follows the configured spin decay rate") {
  RabiRun run = bare_rabi(6.29e6, 10e-6);
  run.gamma1 = run.gamma2 = two_pi * 100e3;
  const TimeSeries out = integrate_rabi(run);
  const double g = run.gamma1;
  const double sz_ss = g * g / (g * g + run.rabi * run.rabi);
  // log-linear fit of the oscillation peaks of s_z - s_z_ss
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int n = 0;
  for (size_t k = 1; k + 1 < out.samples.size(); ++k) {
    const double a = out.samples[k - 1].z, b = out.samples[k].z, c = out.samples[k + 1].z;
    if (b > a && b >= c && b - sz_ss > 0.05) {
      const double t = k * out.sample_dt;
      const double y = std::log(b - sz_ss);
      sx += t;
      sy += y;
      sxx += t * t;
      sxy += t * y;
      ++n;
    }
  }
  REQUIRE(n > 20);
  const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  const double tau = -1.0 / slope;
  CHECK(tau == doctest::Approx(1.0 / (two_pi * 100e3)).epsilon(0.03));
}

TEST_CASE("parametric modulation sustains the oscillation") {
  RabiRun plain = bare_rabi(6.29e6, 40e-6);
  plain.sample_stride = 8;
  plain.gamma1 = plain.gamma2 = two_pi * 100e3;
  RabiRun modulated = plain;
  modulated.drive_omega = two_pi * 6.29e6;
  modulated.depth = two_pi * 2e6;
  const TimeSeries a = integrate_rabi(plain);
  const TimeSeries b = integrate_rabi(modulated);
  // Both traces share the same decaying transient; only past ~8 decay
  // constants has it dropped below the sustained limit-cycle oscillation.
  auto late_power = [&](const TimeSeries& s) {
    const double t0 = 8.0 / (two_pi * 100e3);
    double mean = 0.0;
    int n = 0;
    for (size_t k = 0; k < s.samples.size(); ++k)
      if (k * s.sample_dt > t0) {
        mean += s.samples[k].z;
        ++n;
      }
    mean /= n;
    double power = 0.0;
    for (size_t k = 0; k < s.samples.size(); ++k)
      if (k * s.sample_dt > t0) power += (s.samples[k].z - mean) * (s.samples[k].z - mean);
    return power / n;
  };
  CHECK(late_power(b) >= 5.0 * late_power(a));
}

} // TEST_SUITE
