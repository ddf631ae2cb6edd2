#pragma once

#include <vector>

#include "spinmech/geometry.hpp"
#include "spinmech/magnetostatics.hpp"

namespace spinmech {

// Which ground-state transition defines the working qubit frequency.
enum class Branch { lower, upper }; // m_s = 0 -> -1 resp. 0 -> +1 at axial field

// Spin-1 ground state model: H/h = D Sz^2 + gamma B·S, quantized along
// quantization_axis. All frequencies in Hz (cycles), fields in tesla.
struct QubitModel {
  double zero_field_splitting = 2.870e9; // D, Hz
  double gyromagnetic_ratio = 28.0e9;    // gamma, Hz/T
  Vec3 quantization_axis = Vec3::UnitZ();
  Branch branch = Branch::upper;
  Vec3 rest_position = Vec3::Zero(); // m
  double decay_rate = 100e3;         // Gamma_spin, Hz
};

struct TransitionPair {
  double lower; // Hz
  double upper; // Hz
};

// Exact 3x3 Hermitian diagonalization; transitions measured from the
// eigenstate adiabatically connected to m_s = 0.
TransitionPair spin_transition_frequencies(const QubitModel& qubit, const Vec3& field);

// Phenomenological readout contrast |<0~|0>|^4 in [0,1]; unity for fields
// aligned with the quantization axis, degraded by transverse mixing.
double readout_contrast(const QubitModel& qubit, const Vec3& field);

double qubit_frequency(const QubitModel& qubit, const Vec3& field);

struct ScalarMap {
  PlaneSpec plane;
  GridSpec grid;
  std::vector<double> values; // row-major
};

// Map of the configured-branch transition frequency omega0(r)/2pi over a
// scan plane, Hz.
ScalarMap qubit_frequency_map(const QubitModel& qubit, const MagnetModel& magnet,
                              const PlaneSpec& plane, const GridSpec& grid);

// Simulated fluorescence rate map under a single MW tone:
//   rate = R0 * (1 - dip_depth*Q(B)*L(omega0(r) - omega_mw)) * Q(B)
// with L a unit-peak Lorentzian of the given FWHM and Q the readout
// contrast. Arbitrary units (R0 = 1).
ScalarMap resonance_image(const QubitModel& qubit, const MagnetModel& magnet,
                          const PlaneSpec& plane, const GridSpec& grid, double mw_frequency,
                          double linewidth, double dip_depth = 0.3);

// In-plane qubit frequency gradient lambda = grad omega0, rad/s per m.
struct CouplingVector {
  Vec2 lambda = Vec2::Zero(); // rad·s^-1/m, components along (e1, e2)

  double magnitude() const { return lambda.norm(); }
  Vec2 orientation() const {
    const double n = lambda.norm();
    return n > 0.0 ? Vec2(lambda / n) : Vec2::Zero();
  }
};

// Central finite difference of omega0 along the two in-plane directions.
CouplingVector coupling_vector_at(const QubitModel& qubit, const MagnetModel& magnet,
                                  const Vec3& r0, const Vec3& e1, const Vec3& e2, double step);

} // namespace spinmech
