#include "dpdp/geometry.hpp"

#include <cmath>

namespace dpdp {

bool is_finite(Point2D p) noexcept { return std::isfinite(p.x) && std::isfinite(p.y); }

double distance(Point2D a, Point2D b) noexcept {
  const double dx = a.x - b.x;
  const double dy = a.y - b.y;
  return std::sqrt(dx * dx + dy * dy);
}

namespace {

// One Liang-Barsky slab test. Narrows [t0, t1] to the part of the segment on
// the inner side of the boundary; returns false once the interval is empty.
bool clip(double p, double q, double& t0, double& t1) noexcept {
  if (p == 0.0) return q >= 0.0;
  const double r = q / p;
  if (p < 0.0) {
    if (r > t1) return false;
    if (r > t0) t0 = r;
  } else {
    if (r < t0) return false;
    if (r < t1) t1 = r;
  }
  return true;
}

}  // namespace

bool segment_intersects_rect(Point2D a, Point2D b, const Rect& r) noexcept {
  if (r.contains(a) || r.contains(b)) return true;
  const double dx = b.x - a.x;
  const double dy = b.y - a.y;
  double t0 = 0.0;
  double t1 = 1.0;
  return clip(-dx, a.x - r.min.x, t0, t1) && clip(dx, r.max.x - a.x, t0, t1) &&
         clip(-dy, a.y - r.min.y, t0, t1) && clip(dy, r.max.y - a.y, t0, t1) && t0 <= t1;
}

Point2D move_toward(Point2D from, Point2D to, double length) noexcept {
  const double total = distance(from, to);
  if (length >= total || total == 0.0) return to;
  const double f = length / total;
  return {from.x + (to.x - from.x) * f, from.y + (to.y - from.y) * f};
}

}  // namespace dpdp
