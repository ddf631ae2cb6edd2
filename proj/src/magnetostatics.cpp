#include "spinmech/magnetostatics.hpp"

#include <cmath>
#include <string>

#include "spinmech/constants.hpp"

namespace spinmech {

namespace {

void check_outside(const MagnetModel& magnet, const Vec3& r, long grid_index = -1) {
  if ((r - magnet.position).norm() <= magnet.radius)
    throw EvaluationInsideMagnet("evaluation point inside magnet exclusion zone", grid_index);
}

} // namespace

Vec3 dipole_field(const MagnetModel& magnet, const Vec3& r) {
  check_outside(magnet, r);
  const Vec3 d = r - magnet.position;
  const double dist = d.norm();
  const Vec3 n = d / dist;
  const double mn = magnet.moment.dot(n);
  return constants::mu0_over_4pi * (3.0 * mn * n - magnet.moment) / (dist * dist * dist);
}

Mat3 dipole_gradient(const MagnetModel& magnet, const Vec3& r) {
  check_outside(magnet, r);
  const Vec3 d = r - magnet.position;
  const double dist = d.norm();
  const Vec3 n = d / dist;
  const Vec3& m = magnet.moment;
  const double mn = m.dot(n);
  const double c = 3.0 * constants::mu0_over_4pi / (dist * dist * dist * dist);
  Mat3 g = c * (m * n.transpose() + n * m.transpose()
                + mn * (Mat3::Identity() - 5.0 * n * n.transpose()));
  return g;
}

Vec3 calibrate_moment(double radius, double remanence, const Vec3& easy_axis) {
  if (radius <= 0.0) throw std::invalid_argument("magnet radius must be positive");
  if (remanence < 0.0) throw std::invalid_argument("remanence must be non-negative");
  if (remanence == 0.0) return Vec3::Zero();
  const double volume = 4.0 / 3.0 * constants::pi * radius * radius * radius;
  return remanence * volume / constants::mu0 * easy_axis.normalized();
}

FieldMap field_map(const MagnetModel& magnet, const PlaneSpec& plane, const GridSpec& grid) {
  plane.validate();
  grid.validate();
  FieldMap map{plane, grid, {}};
  map.values.resize(grid.size());
  for (int i = 0; i < grid.nu; ++i) {
    for (int j = 0; j < grid.nv; ++j) {
      const long idx = grid.index(i, j);
      const Vec3 r = plane.point(grid.u(i), grid.v(j));
      try {
        map.values[idx] = dipole_field(magnet, r);
      } catch (const EvaluationInsideMagnet&) {
        throw EvaluationInsideMagnet("grid point inside magnet exclusion zone at index " +
                                         std::to_string(idx),
                                     idx);
      }
    }
  }
  return map;
}

} // namespace spinmech
