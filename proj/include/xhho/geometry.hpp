#pragma once

#include <Eigen/Dense>
#include <cmath>

namespace xhho {

using Point2 = Eigen::Vector2d;

/// z-component of the cross product of two plane vectors.
inline double cross2(const Point2& a, const Point2& b) {
  return a.x() * b.y() - a.y() * b.x();
}

/// Rotate a vector by -90 degrees (outward normal of a CCW edge a->b is
/// rot_minus90(b-a) normalised).
inline Point2 rot_minus90(const Point2& v) { return Point2(v.y(), -v.x()); }

/// Distance from a point to a closed segment [a,b].
inline double point_segment_distance(const Point2& p, const Point2& a, const Point2& b) {
  const Point2 d = b - a;
  const double len2 = d.squaredNorm();
  if (len2 == 0.0) return (p - a).norm();
  double t = (p - a).dot(d) / len2;
  t = std::clamp(t, 0.0, 1.0);
  return (p - (a + t * d)).norm();
}

/// Winding-number test for a point strictly inside a simple polygon.
bool point_strictly_inside(const Point2& p, const std::vector<Point2>& poly);

/// Distance from a point to a simple polygon (0 if inside or on boundary).
double point_polygon_distance(const Point2& p, const std::vector<Point2>& poly);

} // namespace xhho
