#include "spinmech/mechanics.hpp"

#include <cmath>
#include <stdexcept>

#include "spinmech/constants.hpp"

namespace spinmech {

std::complex<double> susceptibility(const ModeParams& mode, double omega) {
  if (omega < 0.0) throw std::invalid_argument("susceptibility frequency must be non-negative");
  const std::complex<double> denom(mode.omega * mode.omega - omega * omega,
                                   -omega * mode.damping);
  return 1.0 / (mode.mass * denom);
}

PlanePhasor driven_response(const std::array<ModeParams, 2>& modes, const DriveSpec& drive) {
  const std::complex<double> force =
      drive.force * std::exp(std::complex<double>(0.0, drive.phase));
  PlanePhasor dr = PlanePhasor::Zero();
  for (const auto& mode : modes) {
    const double projection = drive.direction.dot(mode.orientation);
    const std::complex<double> amp = susceptibility(mode, drive.omega) * force * projection;
    dr += amp * mode.orientation.cast<std::complex<double>>();
  }
  return dr;
}

std::vector<Vec2> trajectory_samples(const PlanePhasor& phasor, double omega,
                                     std::span<const double> times) {
  if (times.empty()) throw std::invalid_argument("trajectory needs at least one sample time");
  std::vector<Vec2> out;
  out.reserve(times.size());
  for (const double t : times) {
    const std::complex<double> rot = std::exp(std::complex<double>(0.0, -omega * t));
    out.emplace_back((phasor * rot).real());
  }
  return out;
}

double thermal_spread(const ModeParams& mode, double temperature) {
  if (temperature < 0.0) throw std::invalid_argument("temperature must be non-negative");
  return std::sqrt(constants::k_boltzmann * temperature / (mode.mass * mode.omega * mode.omega));
}

double zero_point(const ModeParams& mode) {
  return std::sqrt(constants::hbar / (2.0 * mode.mass * mode.omega));
}

} // namespace spinmech
