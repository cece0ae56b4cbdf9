#pragma once

#include <cmath>
#include <numbers>

namespace eqflow {

/// Point or vector in the profile plane. Doubles as the complex number x + iy.
struct PlanarPoint {
  double x = 0.0;
  double y = 0.0;

  constexpr PlanarPoint& operator+=(const PlanarPoint& o) {
    x += o.x;
    y += o.y;
    return *this;
  }
  constexpr PlanarPoint& operator-=(const PlanarPoint& o) {
    x -= o.x;
    y -= o.y;
    return *this;
  }
  constexpr PlanarPoint& operator*=(double s) {
    x *= s;
    y *= s;
    return *this;
  }

  friend constexpr bool operator==(const PlanarPoint&, const PlanarPoint&) = default;
};

constexpr PlanarPoint operator+(PlanarPoint a, const PlanarPoint& b) { return a += b; }
constexpr PlanarPoint operator-(PlanarPoint a, const PlanarPoint& b) { return a -= b; }
constexpr PlanarPoint operator-(const PlanarPoint& a) { return {-a.x, -a.y}; }
constexpr PlanarPoint operator*(PlanarPoint a, double s) { return a *= s; }
constexpr PlanarPoint operator*(double s, PlanarPoint a) { return a *= s; }
constexpr PlanarPoint operator/(const PlanarPoint& a, double s) { return {a.x / s, a.y / s}; }

constexpr double dot(const PlanarPoint& a, const PlanarPoint& b) { return a.x * b.x + a.y * b.y; }
constexpr double cross(const PlanarPoint& a, const PlanarPoint& b) { return a.x * b.y - a.y * b.x; }
constexpr double norm2(const PlanarPoint& a) { return dot(a, a); }
inline double norm(const PlanarPoint& a) { return std::hypot(a.x, a.y); }
inline double arg(const PlanarPoint& a) { return std::atan2(a.y, a.x); }

/// Rotation by +90 degrees (multiplication by i).
constexpr PlanarPoint perp(const PlanarPoint& a) { return {-a.y, a.x}; }

inline PlanarPoint rotate(const PlanarPoint& a, double angle) {
  const double c = std::cos(angle);
  const double s = std::sin(angle);
  return {c * a.x - s * a.y, s * a.x + c * a.y};
}

inline bool is_finite(const PlanarPoint& a) { return std::isfinite(a.x) && std::isfinite(a.y); }

/// Representative of an angle in (-pi, pi].
inline double wrap_angle(double a) {
  constexpr double two_pi = 2.0 * std::numbers::pi;
  double r = std::remainder(a, two_pi);
  if (r <= -std::numbers::pi) r += two_pi;
  return r;
}

}  // namespace eqflow
