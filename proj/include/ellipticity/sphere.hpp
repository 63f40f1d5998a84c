#pragma once

#include <cmath>
#include <numbers>
#include <utility>
#include <vector>

#include "ellipticity/tensor.hpp"

namespace ellipticity {

// Fibonacci lattice: n near-uniform unit vectors on the full sphere.
inline std::vector<Vec3> fibonacci_sphere(int n) {
  std::vector<Vec3> pts;
  pts.reserve(static_cast<std::size_t>(n));
  const double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
  for (int i = 0; i < n; ++i) {
    const double z = 1.0 - (2.0 * i + 1.0) / n;
    const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
    const double phi = golden * i;
    Vec3 p(r * std::cos(phi), r * std::sin(phi), z);
    pts.push_back(p.normalized());
  }
  return pts;
}

// Same lattice restricted to the upper hemisphere z > 0; suffices for even
// functions of y.
inline std::vector<Vec3> fibonacci_hemisphere(int n) {
  std::vector<Vec3> pts;
  pts.reserve(static_cast<std::size_t>(n));
  const double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
  for (int i = 0; i < n; ++i) {
    const double z = 1.0 - (i + 0.5) / n;
    const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
    const double phi = golden * i;
    Vec3 p(r * std::cos(phi), r * std::sin(phi), z);
    pts.push_back(p.normalized());
  }
  return pts;
}

// Orthonormal pair spanning the plane orthogonal to unit d.
inline std::pair<Vec3, Vec3> tangent_basis(const Vec3& d) {
  const Vec3 helper = std::abs(d.x()) < 0.9 ? Vec3::UnitX() : Vec3::UnitY();
  const Vec3 t1 = d.cross(helper).normalized();
  return {t1, d.cross(t1).normalized()};
}

// Angle between the lines spanned by a and b, in [0, pi/2].
inline double line_angle(const Vec3& a, const Vec3& b) {
  return std::atan2(a.cross(b).norm(), std::abs(a.dot(b)));
}

}  // namespace ellipticity
