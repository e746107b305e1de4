#pragma once

#include <cmath>

namespace frostgrid {

/// A point in orchard coordinates, meters.
struct Point2D {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Point2D&, const Point2D&) = default;
};

inline double distance(Point2D a, Point2D b) {
  const double dx = a.x - b.x;
  const double dy = a.y - b.y;
  return std::sqrt(dx * dx + dy * dy);
}

inline bool is_finite(Point2D p) { return std::isfinite(p.x) && std::isfinite(p.y); }

}  // namespace frostgrid
