#include "spinmech/bloch.hpp"

#include <algorithm>
#include <cmath>

#include "spinmech/constants.hpp"
#include "spinmech/errors.hpp"

namespace spinmech {

double BlochState::norm() const { return std::sqrt(x * x + y * y + z * z); }

double modulation_waveform(const RabiRun& run, double t) {
  return run.detuning + run.depth * std::cos(run.drive_omega * t + run.phase);
}

BlochState bloch_derivative(const BlochState& s, const RabiRun& run, double t) {
  const double delta = modulation_waveform(run, t);
  return {-delta * s.y - run.gamma2 * s.x,
          delta * s.x - run.rabi * s.z - run.gamma2 * s.y,
          run.rabi * s.y - run.gamma1 * (s.z - run.sz_eq)};
}

namespace {

BlochState axpy(const BlochState& s, double h, const BlochState& d) {
  return {s.x + h * d.x, s.y + h * d.y, s.z + h * d.z};
}

void check_step(const RabiRun& run) {
  const double fastest = std::max({run.rabi, run.drive_omega, run.depth,
                                   std::abs(run.detuning)});
  if (run.dt <= 0.0) throw StepTooLarge("integrator dt must be positive");
  if (run.dt * fastest / constants::two_pi > 0.02)
    throw StepTooLarge("dt too large: fewer than 50 steps per fastest cycle");
}

} // namespace

TimeSeries integrate_rabi(const RabiRun& run) {
  check_step(run);
  const long steps = std::lround(run.duration / run.dt);
  const int stride = std::max(run.sample_stride, 1);

  TimeSeries out;
  out.sample_dt = run.dt * stride;
  out.samples.reserve(steps / stride + 1);
  BlochState s = run.initial;
  out.samples.push_back(s);
  for (long i = 0; i < steps; ++i) {
    const double t = i * run.dt;
    const BlochState k1 = bloch_derivative(s, run, t);
    const BlochState k2 = bloch_derivative(axpy(s, 0.5 * run.dt, k1), run, t + 0.5 * run.dt);
    const BlochState k3 = bloch_derivative(axpy(s, 0.5 * run.dt, k2), run, t + 0.5 * run.dt);
    const BlochState k4 = bloch_derivative(axpy(s, run.dt, k3), run, t + run.dt);
    s.x += run.dt / 6.0 * (k1.x + 2.0 * k2.x + 2.0 * k3.x + k4.x);
    s.y += run.dt / 6.0 * (k1.y + 2.0 * k2.y + 2.0 * k3.y + k4.y);
    s.z += run.dt / 6.0 * (k1.z + 2.0 * k2.z + 2.0 * k3.z + k4.z);
    if ((i + 1) % stride == 0) out.samples.push_back(s);
  }
  return out;
}

double halve_step_check(const RabiRun& run) {
  if (run.duration <= 0.0) return 0.0;
  const TimeSeries coarse = integrate_rabi(run);
  RabiRun fine_run = run;
  fine_run.dt = 0.5 * run.dt;
  fine_run.sample_stride = 2 * std::max(run.sample_stride, 1);
  const TimeSeries fine = integrate_rabi(fine_run);

  const size_t n = std::min(coarse.samples.size(), fine.samples.size());
  double err = 0.0;
  for (size_t i = 0; i < n; ++i)
    err = std::max(err, std::abs(coarse.samples[i].z - fine.samples[i].z));
  return err;
}

std::vector<double> TimeSeries::sz() const {
  std::vector<double> out(samples.size());
  for (size_t i = 0; i < samples.size(); ++i) out[i] = samples[i].z;
  return out;
}

std::vector<double> TimeSeries::times() const {
  std::vector<double> out(samples.size());
  for (size_t i = 0; i < samples.size(); ++i) out[i] = i * sample_dt;
  return out;
}

} // namespace spinmech
