#include "spinmech/nv_spin.hpp"

#include <array>
#include <cmath>
#include <complex>

#include "spinmech/constants.hpp"

namespace spinmech {

namespace {

using Mat3c = Eigen::Matrix3cd;
using std::complex;

// Spin-1 matrices in the {|+1>, |0>, |-1>} basis.
const Mat3c& spin_z() {
  static const Mat3c m = [] {
    Mat3c s = Mat3c::Zero();
    s(0, 0) = 1.0;
    s(2, 2) = -1.0;
    return s;
  }();
  return m;
}

const Mat3c& spin_x() {
  static const Mat3c m = [] {
    Mat3c s = Mat3c::Zero();
    const double q = 1.0 / std::sqrt(2.0);
    s(0, 1) = s(1, 0) = s(1, 2) = s(2, 1) = q;
    return s;
  }();
  return m;
}

const Mat3c& spin_y() {
  static const Mat3c m = [] {
    Mat3c s = Mat3c::Zero();
    const complex<double> iq(0.0, 1.0 / std::sqrt(2.0));
    s(1, 0) = s(2, 1) = iq;
    s(0, 1) = s(1, 2) = -iq;
    return s;
  }();
  return m;
}

// Field components in the qubit frame: (transverse1, transverse2, axial).
Vec3 field_in_axis_frame(const QubitModel& qubit, const Vec3& field) {
  const Vec3 w = qubit.quantization_axis.normalized();
  Vec3 seed = std::abs(w.x()) < 0.9 ? Vec3::UnitX() : Vec3::UnitY();
  const Vec3 u = (seed - seed.dot(w) * w).normalized();
  const Vec3 v = w.cross(u);
  return {field.dot(u), field.dot(v), field.dot(w)};
}

struct EigenSystem {
  Eigen::Vector3d energies;      // Hz, ascending
  Eigen::Matrix3cd states;       // columns
  int zero_index;                // eigenstate connected to m_s = 0
};

EigenSystem diagonalize(const QubitModel& qubit, const Vec3& field) {
  const Vec3 b = field_in_axis_frame(qubit, field);
  const double g = qubit.gyromagnetic_ratio;
  Mat3c h = qubit.zero_field_splitting * (spin_z() * spin_z()).eval();
  h += g * (b.x() * spin_x() + b.y() * spin_y() + b.z() * spin_z());

  Eigen::SelfAdjointEigenSolver<Mat3c> solver(h);
  EigenSystem sys{solver.eigenvalues(), solver.eigenvectors(), 0};
  double best = -1.0;
  for (int k = 0; k < 3; ++k) {
    const double overlap = std::norm(sys.states(1, k)); // row 1 = |m_s=0>
    if (overlap > best) {
      best = overlap;
      sys.zero_index = k;
    }
  }
  return sys;
}

} // namespace

TransitionPair spin_transition_frequencies(const QubitModel& qubit, const Vec3& field) {
  const EigenSystem sys = diagonalize(qubit, field);
  std::array<double, 2> t{};
  int n = 0;
  for (int k = 0; k < 3; ++k)
    if (k != sys.zero_index) t[n++] = sys.energies(k) - sys.energies(sys.zero_index);
  if (t[0] > t[1]) std::swap(t[0], t[1]);
  return {t[0], t[1]};
}

double readout_contrast(const QubitModel& qubit, const Vec3& field) {
  const EigenSystem sys = diagonalize(qubit, field);
  const double overlap2 = std::norm(sys.states(1, sys.zero_index));
  return overlap2 * overlap2;
}

double qubit_frequency(const QubitModel& qubit, const Vec3& field) {
  const TransitionPair t = spin_transition_frequencies(qubit, field);
  return qubit.branch == Branch::lower ? t.lower : t.upper;
}

ScalarMap qubit_frequency_map(const QubitModel& qubit, const MagnetModel& magnet,
                              const PlaneSpec& plane, const GridSpec& grid) {
  plane.validate();
  grid.validate();
  ScalarMap map{plane, grid, {}};
  map.values.resize(grid.size());
  for (int i = 0; i < grid.nu; ++i) {
    for (int j = 0; j < grid.nv; ++j) {
      const long idx = grid.index(i, j);
      const Vec3 r = plane.point(grid.u(i), grid.v(j));
      try {
        map.values[idx] = qubit_frequency(qubit, dipole_field(magnet, r));
      } catch (const EvaluationInsideMagnet&) {
        throw EvaluationInsideMagnet("grid point inside magnet exclusion zone at index " +
                                         std::to_string(idx),
                                     idx);
      }
    }
  }
  return map;
}

ScalarMap resonance_image(const QubitModel& qubit, const MagnetModel& magnet,
                          const PlaneSpec& plane, const GridSpec& grid, double mw_frequency,
                          double linewidth, double dip_depth) {
  if (linewidth <= 0.0) throw std::invalid_argument("linewidth must be positive");
  plane.validate();
  grid.validate();
  ScalarMap map{plane, grid, {}};
  map.values.resize(grid.size());
  const double hwhm = 0.5 * linewidth;
  for (int i = 0; i < grid.nu; ++i) {
    for (int j = 0; j < grid.nv; ++j) {
      const long idx = grid.index(i, j);
      const Vec3 r = plane.point(grid.u(i), grid.v(j));
      Vec3 field;
      try {
        field = dipole_field(magnet, r);
      } catch (const EvaluationInsideMagnet&) {
        throw EvaluationInsideMagnet("grid point inside magnet exclusion zone at index " +
                                         std::to_string(idx),
                                     idx);
      }
      const double quench = readout_contrast(qubit, field);
      const double detune = qubit_frequency(qubit, field) - mw_frequency;
      const double lorentz = 1.0 / (1.0 + (detune / hwhm) * (detune / hwhm));
      map.values[idx] = (1.0 - dip_depth * quench * lorentz) * quench;
    }
  }
  return map;
}

CouplingVector coupling_vector_at(const QubitModel& qubit, const MagnetModel& magnet,
                                  const Vec3& r0, const Vec3& e1, const Vec3& e2, double step) {
  if (step <= 0.0) throw std::invalid_argument("finite-difference step must be positive");
  auto freq = [&](const Vec3& r) { return qubit_frequency(qubit, dipole_field(magnet, r)); };
  CouplingVector cv;
  const Vec3 dirs[2] = {e1.normalized(), e2.normalized()};
  for (int k = 0; k < 2; ++k) {
    const double fp = freq(r0 + step * dirs[k]);
    const double fm = freq(r0 - step * dirs[k]);
    cv.lambda[k] = constants::two_pi * (fp - fm) / (2.0 * step);
  }
  return cv;
}

} // namespace spinmech
