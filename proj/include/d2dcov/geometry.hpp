#pragma once

#include <cmath>
#include <stdexcept>

namespace d2dcov {

struct Point2 {
  double x = 0.0;
  double y = 0.0;

  double radius() const { return std::hypot(x, y); }
  double radius_sq() const { return x * x + y * y; }
};

inline double distance(const Point2& a, const Point2& b) {
  return std::hypot(a.x - b.x, a.y - b.y);
}

inline double distance_sq(const Point2& a, const Point2& b) {
  const double dx = a.x - b.x;
  const double dy = a.y - b.y;
  return dx * dx + dy * dy;
}

/// Annular region R0 <= r <= R centered on the origin (the base station).
struct Annulus {
  double inner_radius = 0.0;
  double outer_radius = 0.0;

  Annulus() = default;
  Annulus(double inner, double outer) : inner_radius(inner), outer_radius(outer) {
    if (!(inner >= 0.0) || !(outer > inner))
      throw std::invalid_argument("Annulus: require 0 <= inner < outer");
  }

  double area() const {
    return M_PI * (outer_radius * outer_radius - inner_radius * inner_radius);
  }

  bool contains(const Point2& p) const {
    const double r2 = p.radius_sq();
    return r2 >= inner_radius * inner_radius && r2 <= outer_radius * outer_radius;
  }
};

/// Position in polar form; convenient for the cell user, whose distance to
/// the base station enters the coverage expressions directly.
struct PolarPosition {
  double radius = 0.0;
  double angle = 0.0;

  Point2 to_cartesian() const {
    return {radius * std::cos(angle), radius * std::sin(angle)};
  }
};

}  // namespace d2dcov
