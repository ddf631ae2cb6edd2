#pragma once

#include <Eigen/Dense>

#include "spinmech/errors.hpp"

namespace spinmech {

using Vec3 = Eigen::Vector3d;
using Vec2 = Eigen::Vector2d;
using Mat3 = Eigen::Matrix3d;
using CVec2 = Eigen::Vector2cd;

// A scan plane embedded in 3-space: origin plus two orthonormal in-plane
// directions. Grid coordinates (u, v) map to origin + u*e1 + v*e2.
struct PlaneSpec {
  Vec3 origin = Vec3::Zero();
  Vec3 e1 = Vec3::UnitX();
  Vec3 e2 = Vec3::UnitY();

  void validate() const {
    if (std::abs(e1.norm() - 1.0) > 1e-9 || std::abs(e2.norm() - 1.0) > 1e-9)
      throw GridSpecError("plane basis vectors must be unit length");
    if (std::abs(e1.dot(e2)) > 1e-9)
      throw GridSpecError("plane basis vectors must be orthogonal");
  }

  Vec3 point(double u, double v) const { return origin + u * e1 + v * e2; }
};

// Row-major rectangular grid over plane coordinates, nu x nv points
// spanning [u_min, u_max] x [v_min, v_max] inclusive.
struct GridSpec {
  int nu = 2;
  int nv = 2;
  double u_min = 0.0, u_max = 1.0;
  double v_min = 0.0, v_max = 1.0;

  void validate() const {
    if (nu < 2 || nv < 2)
      throw GridSpecError("grid must have at least 2x2 points");
    if (!(u_max > u_min) || !(v_max > v_min))
      throw GridSpecError("grid extents must be strictly increasing");
  }

  double u(int i) const { return u_min + (u_max - u_min) * i / (nu - 1); }
  double v(int j) const { return v_min + (v_max - v_min) * j / (nv - 1); }
  long size() const { return static_cast<long>(nu) * nv; }
  long index(int i, int j) const { return static_cast<long>(i) * nv + j; }
};

} // namespace spinmech
