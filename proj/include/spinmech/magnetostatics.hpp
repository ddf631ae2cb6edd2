#pragma once

#include <vector>

#include "spinmech/geometry.hpp"

namespace spinmech {

// Point-dipole model of the hard magnetic microsphere. The sphere radius
// only defines an exclusion zone around the dipole position; the field is
// purely dipolar everywhere outside it.
struct MagnetModel {
  Vec3 moment = Vec3::Zero();   // A·m²
  Vec3 position = Vec3::Zero(); // m
  double radius = 0.0;          // m, exclusion zone
};

// B(r) of the point dipole, tesla. Throws EvaluationInsideMagnet when the
// evaluation point is inside the exclusion sphere.
Vec3 dipole_field(const MagnetModel& magnet, const Vec3& r);

// Gradient tensor dB_i/dx_j, T/m. Symmetric and traceless for any valid
// point (static, source-free field).
Mat3 dipole_gradient(const MagnetModel& magnet, const Vec3& r);

// Dipole moment of a uniformly magnetized sphere: |m| = Br·(4/3)πr³/μ0,
// directed along easy_axis (normalized internally).
Vec3 calibrate_moment(double radius, double remanence, const Vec3& easy_axis);

struct FieldMap {
  PlaneSpec plane;
  GridSpec grid;
  std::vector<Vec3> values; // row-major, grid.size() entries
};

FieldMap field_map(const MagnetModel& magnet, const PlaneSpec& plane, const GridSpec& grid);

} // namespace spinmech
