#include "quadrose/geom.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace quadrose {

double norm(Vec2 a) { return std::hypot(a.x, a.y); }
double dist(Vec2 a, Vec2 b) { return norm(a - b); }

double heading(Vec2 d) { return std::atan2(d.y, d.x); }

Polyline reversed(const Polyline& p) { return Polyline(p.rbegin(), p.rend()); }

double signed_area(const Polyline& loop) {
  double twice = 0.0;
  const std::size_t n = loop.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2 a = loop[i];
    const Vec2 b = loop[(i + 1) % n];
    twice += a.x * b.y - b.x * a.y;
  }
  return 0.5 * twice;
}

int down_ray_crossing(Vec2 a, Vec2 b, double rx, double ry, double* t_out) {
  const bool left_a = a.x < rx;
  const bool left_b = b.x < rx;
  if (left_a == left_b) return 0;
  const double t = (rx - a.x) / (b.x - a.x);
  const double y = a.y + t * (b.y - a.y);
  if (y >= ry) return 0;
  if (t_out) *t_out = t;
  return left_a ? +1 : -1;
}

int winding_number(const Polyline& loop, Vec2 z) {
  int w = 0;
  const std::size_t n = loop.size();
  for (std::size_t i = 0; i < n; ++i)
    w += down_ray_crossing(loop[i], loop[(i + 1) % n], z.x, z.y);
  return w;
}

double point_segment_dist(Vec2 z, Vec2 a, Vec2 b) {
  const Vec2 ab = b - a;
  const double len2 = ab.x * ab.x + ab.y * ab.y;
  if (len2 == 0.0) return dist(z, a);
  double t = ((z.x - a.x) * ab.x + (z.y - a.y) * ab.y) / len2;
  t = std::clamp(t, 0.0, 1.0);
  return dist(z, a + t * ab);
}

double point_polyline_dist(Vec2 z, const Polyline& p) {
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i + 1 < p.size(); ++i)
    best = std::min(best, point_segment_dist(z, p[i], p[i + 1]));
  return best;
}

namespace {

// Twice the signed area of triangle abc.
double cross3(Vec2 a, Vec2 b, Vec2 c) {
  return (b.x - a.x) * (c.y - a.y) - (b.y - a.y) * (c.x - a.x);
}

bool on_segment(Vec2 a, Vec2 b, Vec2 p) {
  return std::min(a.x, b.x) <= p.x && p.x <= std::max(a.x, b.x) &&
         std::min(a.y, b.y) <= p.y && p.y <= std::max(a.y, b.y);
}

}  // namespace

SegCross segment_intersection(Vec2 a, Vec2 b, Vec2 c, Vec2 d) {
  const double d1 = cross3(c, d, a);
  const double d2 = cross3(c, d, b);
  const double d3 = cross3(a, b, c);
  const double d4 = cross3(a, b, d);

  if (((d1 > 0 && d2 < 0) || (d1 < 0 && d2 > 0)) &&
      ((d3 > 0 && d4 < 0) || (d3 < 0 && d4 > 0)))
    return SegCross::proper;

  const bool t1 = d1 == 0 && on_segment(c, d, a);
  const bool t2 = d2 == 0 && on_segment(c, d, b);
  const bool t3 = d3 == 0 && on_segment(a, b, c);
  const bool t4 = d4 == 0 && on_segment(a, b, d);
  if (!(t1 || t2 || t3 || t4)) return SegCross::none;

  // Collinear overlap in more than one point counts as a proper violation.
  if (d1 == 0 && d2 == 0 && d3 == 0 && d4 == 0) {
    int touches = int(t1) + int(t2) + int(t3) + int(t4);
    if (touches > 2) return SegCross::proper;
    // Two touches can still be a single shared endpoint.
    if (touches == 2) {
      Vec2 p1, p2;
      bool first = true;
      auto note = [&](bool hit, Vec2 p) {
        if (!hit) return;
        if (first) { p1 = p; first = false; } else { p2 = p; }
      };
      note(t1, a); note(t2, b); note(t3, c); note(t4, d);
      if (p1.x != p2.x || p1.y != p2.y) return SegCross::proper;
    }
  }
  return SegCross::endpoint;
}

void BBox::add(Vec2 p) {
  if (empty) {
    lo = hi = p;
    empty = false;
    return;
  }
  lo.x = std::min(lo.x, p.x);
  lo.y = std::min(lo.y, p.y);
  hi.x = std::max(hi.x, p.x);
  hi.y = std::max(hi.y, p.y);
}

void BBox::add(const Polyline& p) {
  for (Vec2 q : p) add(q);
}

}  // namespace quadrose
