#pragma once

#include <array>
#include <cmath>
#include <cstdint>

#include "zollfunk/errors.hpp"

namespace zollfunk {

/// Point or tangent vector in the ambient R^{n+1}, n in {2,3}.
/// Fixed capacity 4; unused trailing components stay zero, so dot products
/// and norms are safe regardless of the ambient dimension in play.
struct Vec {
  std::array<double, 4> c{0.0, 0.0, 0.0, 0.0};

  Vec() = default;
  Vec(double x, double y, double z) : c{x, y, z, 0.0} {}
  Vec(double x, double y, double z, double w) : c{x, y, z, w} {}

  double& operator[](int i) { return c[static_cast<size_t>(i)]; }
  double operator[](int i) const { return c[static_cast<size_t>(i)]; }

  Vec& operator+=(const Vec& o) {
    for (int i = 0; i < 4; ++i) c[i] += o.c[i];
    return *this;
  }
  Vec& operator-=(const Vec& o) {
    for (int i = 0; i < 4; ++i) c[i] -= o.c[i];
    return *this;
  }
  Vec& operator*=(double s) {
    for (int i = 0; i < 4; ++i) c[i] *= s;
    return *this;
  }
};

inline Vec operator+(Vec a, const Vec& b) { return a += b; }
inline Vec operator-(Vec a, const Vec& b) { return a -= b; }
inline Vec operator*(double s, Vec a) { return a *= s; }
inline Vec operator*(Vec a, double s) { return a *= s; }
inline Vec operator-(Vec a) { return a *= -1.0; }

inline double dot(const Vec& a, const Vec& b) {
  return a.c[0] * b.c[0] + a.c[1] * b.c[1] + a.c[2] * b.c[2] + a.c[3] * b.c[3];
}
inline double norm(const Vec& a) { return std::sqrt(dot(a, a)); }

inline Vec normalized(const Vec& a) {
  const double r = norm(a);
  if (r < 1e-300) throw NumericalError("normalized: zero vector");
  return (1.0 / r) * a;
}

/// Cross product of the first three components (ambient R^3 only).
inline Vec cross3(const Vec& a, const Vec& b) {
  return Vec(a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2],
             a[0] * b[1] - a[1] * b[0]);
}

/// Component of a orthogonal to the unit vector u.
inline Vec reject(const Vec& a, const Vec& u) { return a - dot(a, u) * u; }

/// Geodesic distance on S^n.
inline double sphere_distance(const Vec& a, const Vec& b) {
  double d = dot(a, b);
  if (d > 1.0) d = 1.0;
  if (d < -1.0) d = -1.0;
  return std::acos(d);
}

/// Distance on RP^n between [a] and [b].
inline double projective_distance(const Vec& a, const Vec& b) {
  double d = std::fabs(dot(a, b));
  if (d > 1.0) d = 1.0;
  return std::acos(d);
}

/// area(S^n) for the dimensions we support.
inline double sphere_area(int n) {
  switch (n) {
    case 1: return 2.0 * M_PI;
    case 2: return 4.0 * M_PI;
    case 3: return 2.0 * M_PI * M_PI;
    default: throw UsageError("sphere_area: unsupported dimension");
  }
}

}  // namespace zollfunk
