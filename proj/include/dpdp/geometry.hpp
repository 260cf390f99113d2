#pragma once

namespace dpdp {

struct Point2D {
  double x = 0.0;
  double y = 0.0;

  bool operator==(const Point2D&) const = default;
};

/// Axis-aligned rectangle, closed on all sides.
struct Rect {
  Point2D min;
  Point2D max;

  bool operator==(const Rect&) const = default;

  bool contains(Point2D p) const noexcept {
    return min.x <= p.x && p.x <= max.x && min.y <= p.y && p.y <= max.y;
  }
  bool well_formed() const noexcept { return min.x <= max.x && min.y <= max.y; }
  double width() const noexcept { return max.x - min.x; }
  double height() const noexcept { return max.y - min.y; }
};

bool is_finite(Point2D p) noexcept;

/// Straight-line Euclidean distance.
double distance(Point2D a, Point2D b) noexcept;

/// True when the closed segment ab touches the closed rectangle r.
bool segment_intersects_rect(Point2D a, Point2D b, const Rect& r) noexcept;

/// Point at `length` along the segment from `from` toward `to`, clamped at `to`.
Point2D move_toward(Point2D from, Point2D to, double length) noexcept;

}  // namespace dpdp
