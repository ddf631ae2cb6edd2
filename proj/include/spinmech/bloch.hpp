#pragma once

#include <vector>

namespace spinmech {

// Bloch-vector expectation values of the driven qubit, dimensionless.
struct BlochState {
  double x = 0.0;
  double y = 0.0;
  double z = 1.0;

  double norm() const;
};

// One Rabi experiment in the microwave rotating frame. All rates angular
// (rad/s). The instantaneous detuning is
//   delta(t) = detuning + depth * cos(drive_omega * t + phase).
struct RabiRun {
  double rabi = 0.0;        // Omega_R
  double detuning = 0.0;    // static MW detuning Delta_mw
  double depth = 0.0;       // parametric modulation depth delta_omega0
  double drive_omega = 0.0; // Omega_d
  double phase = 0.0;       // phi
  double gamma1 = 0.0;      // longitudinal decay, rad/s
  double gamma2 = 0.0;      // transverse decay, rad/s
  double sz_eq = 1.0;       // relaxation target for s_z
  double duration = 0.0;    // s
  double dt = 1e-9;         // integrator step, s
  int sample_stride = 1;    // output every sample_stride steps
  BlochState initial{0.0, 0.0, 1.0};
};

double modulation_waveform(const RabiRun& run, double t);

BlochState bloch_derivative(const BlochState& state, const RabiRun& run, double t);

struct TimeSeries {
  double sample_dt = 0.0; // spacing between stored samples, s
  std::vector<BlochState> samples;

  std::vector<double> sz() const;
  std::vector<double> times() const;
};

// Fixed-step RK4 from the initial state. Throws StepTooLarge when the dt
// invariant (>= 50 steps per fastest cycle) is violated.
TimeSeries integrate_rabi(const RabiRun& run);

// Max pointwise |s_z| difference between dt and dt/2 integrations.
double halve_step_check(const RabiRun& run);

} // namespace spinmech
