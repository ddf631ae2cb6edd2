#pragma once

#include <array>
#include <complex>
#include <span>
#include <vector>

#include "spinmech/geometry.hpp"

namespace spinmech {

// One flexural eigenmode. Angular quantities in rad/s, orientation a unit
// 2-vector in the oscillation plane.
struct ModeParams {
  double omega = 0.0;   // Omega_m, rad/s
  double damping = 0.0; // Gamma_m, rad/s
  double mass = 0.0;    // M_eff, kg
  Vec2 orientation = Vec2::UnitX();
};

struct DriveSpec {
  double force = 0.0;            // N
  Vec2 direction = Vec2::UnitX();
  double omega = 0.0;            // Omega_d, rad/s
  double phase = 0.0;            // rad
};

// Complex deflection phasor along the plane basis; trajectory convention
// dr(t) = Re(dr[Omega] e^{-i Omega t}).
using PlanePhasor = CVec2;

// chi[Omega] = 1 / (M_eff (Omega_m^2 - Omega^2 - i Omega Gamma_m)), m/N.
std::complex<double> susceptibility(const ModeParams& mode, double omega);

// Deterministic driven response dr[Omega_d] = sum_m chi_m (dF e^{i phi} e_F·e_m) e_m.
PlanePhasor driven_response(const std::array<ModeParams, 2>& modes, const DriveSpec& drive);

std::vector<Vec2> trajectory_samples(const PlanePhasor& phasor, double omega,
                                     std::span<const double> times);

// rms thermal spread (k_B T / M Omega^2)^{1/2} and zero-point spread
// (hbar / 2 M Omega)^{1/2}, meters.
double thermal_spread(const ModeParams& mode, double temperature);
double zero_point(const ModeParams& mode);

} // namespace spinmech
