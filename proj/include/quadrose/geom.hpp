#pragma once

#include <cstddef>
#include <vector>

namespace quadrose {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;
};

inline Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
inline Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
inline Vec2 operator*(double s, Vec2 a) { return {s * a.x, s * a.y}; }

double norm(Vec2 a);
double dist(Vec2 a, Vec2 b);

/// Angle of the vector in (-pi, pi].
double heading(Vec2 d);

using Polyline = std::vector<Vec2>;

Polyline reversed(const Polyline& p);

/// Shoelace area of a closed loop; the last point connects back to the first.
/// Positive for counterclockwise loops.
double signed_area(const Polyline& loop);

/// Winding number of a closed loop around z, by signed crossings of the
/// vertical ray going down from z. z must not lie on the loop.
int winding_number(const Polyline& loop, Vec2 z);

double point_segment_dist(Vec2 z, Vec2 a, Vec2 b);
double point_polyline_dist(Vec2 z, const Polyline& p);

enum class SegCross {
  none,
  proper,   // interior-interior crossing, or collinear overlap
  endpoint, // touch involving at least one segment endpoint
};

SegCross segment_intersection(Vec2 a, Vec2 b, Vec2 c, Vec2 d);

/// Does segment a->b cross the open downward ray {x = rx, y < ry}?
/// Returns +1 for a crossing in the +x direction, -1 for -x, 0 for none.
/// Uses the half-open rule (p.x < rx) != (q.x < rx), so segment endpoints
/// exactly on the ray line are counted consistently once.
int down_ray_crossing(Vec2 a, Vec2 b, double rx, double ry, double* t_out = nullptr);

struct BBox {
  bool empty = true;
  Vec2 lo, hi;
  void add(Vec2 p);
  void add(const Polyline& p);
  double width() const { return empty ? 0.0 : hi.x - lo.x; }
  double height() const { return empty ? 0.0 : hi.y - lo.y; }
};

}  // namespace quadrose
