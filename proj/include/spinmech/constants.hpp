#pragma once

namespace spinmech::constants {

inline constexpr double mu0_over_4pi = 1e-7;        // T·m/A, exact
inline constexpr double mu0 = 4e-7 * 3.14159265358979323846;
inline constexpr double k_boltzmann = 1.380649e-23; // J/K
inline constexpr double hbar = 1.054571817e-34;     // J·s
inline constexpr double pi = 3.14159265358979323846;
inline constexpr double two_pi = 2.0 * pi;

} // namespace spinmech::constants
