#pragma once

#include <algorithm>
#include <array>
#include <cmath>

namespace junction {

constexpr double kPi = 3.14159265358979323846;

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  Vec2 operator+(const Vec2& o) const { return {x + o.x, y + o.y}; }
  Vec2 operator-(const Vec2& o) const { return {x - o.x, y - o.y}; }
  Vec2 operator*(double s) const { return {x * s, y * s}; }
  double dot(const Vec2& o) const { return x * o.x + y * o.y; }
  double cross(const Vec2& o) const { return x * o.y - y * o.x; }
  double norm() const { return std::hypot(x, y); }
};

inline Vec2 heading_dir(double heading) { return {std::cos(heading), std::sin(heading)}; }

// Wraps an angle into [-pi, pi).
inline double wrap_angle(double a) {
  a = std::fmod(a + kPi, 2.0 * kPi);
  if (a < 0.0) a += 2.0 * kPi;
  return a - kPi;
}

// Rotates v by -heading (world frame -> frame whose +x axis points along heading).
inline Vec2 into_frame(const Vec2& v, double heading) {
  const double c = std::cos(heading), s = std::sin(heading);
  return {c * v.x + s * v.y, -s * v.x + c * v.y};
}

// Rectangle with arbitrary orientation; length runs along the heading axis.
struct OrientedRect {
  Vec2 center;
  double heading = 0.0;
  double length = 0.0;
  double width = 0.0;

  std::array<Vec2, 4> corners() const {
    const Vec2 ax = heading_dir(heading);
    const Vec2 ay{-ax.y, ax.x};
    const Vec2 dl = ax * (0.5 * length);
    const Vec2 dw = ay * (0.5 * width);
    return {center + dl + dw, center + dl - dw, center - dl - dw, center - dl + dw};
  }

  bool contains(const Vec2& p) const {
    const Vec2 rel = into_frame(p - center, heading);
    return std::abs(rel.x) <= 0.5 * length && std::abs(rel.y) <= 0.5 * width;
  }
};

namespace detail {
inline bool separating_axis(const std::array<Vec2, 4>& a, const std::array<Vec2, 4>& b,
                            const Vec2& axis) {
  double amin = 1e300, amax = -1e300, bmin = 1e300, bmax = -1e300;
  for (const Vec2& p : a) {
    const double d = p.dot(axis);
    amin = std::min(amin, d);
    amax = std::max(amax, d);
  }
  for (const Vec2& p : b) {
    const double d = p.dot(axis);
    bmin = std::min(bmin, d);
    bmax = std::max(bmax, d);
  }
  return amax < bmin || bmax < amin;
}
}  // namespace detail

// Separating-axis overlap test for two oriented rectangles.
inline bool rects_overlap(const OrientedRect& a, const OrientedRect& b) {
  const auto ca = a.corners();
  const auto cb = b.corners();
  const Vec2 axes[4] = {heading_dir(a.heading),
                        {-std::sin(a.heading), std::cos(a.heading)},
                        heading_dir(b.heading),
                        {-std::sin(b.heading), std::cos(b.heading)}};
  for (const Vec2& ax : axes) {
    if (detail::separating_axis(ca, cb, ax)) return false;
  }
  return true;
}

// Axis-aligned rectangle (used for occluders).
struct AaRect {
  Vec2 lo;
  Vec2 hi;

  bool contains(const Vec2& p) const {
    return p.x >= lo.x && p.x <= hi.x && p.y >= lo.y && p.y <= hi.y;
  }
};

// Slab-clips the segment a->b against the rectangle; true iff a point of the
// segment lies inside (touching counts).
inline bool segment_intersects_aarect(const Vec2& a, const Vec2& b, const AaRect& r) {
  double t0 = 0.0, t1 = 1.0;
  const Vec2 d = b - a;
  const double lo[2] = {r.lo.x, r.lo.y};
  const double hi[2] = {r.hi.x, r.hi.y};
  const double p[2] = {a.x, a.y};
  const double v[2] = {d.x, d.y};
  for (int k = 0; k < 2; ++k) {
    if (std::abs(v[k]) < 1e-300) {
      if (p[k] < lo[k] || p[k] > hi[k]) return false;
    } else {
      double ta = (lo[k] - p[k]) / v[k];
      double tb = (hi[k] - p[k]) / v[k];
      if (ta > tb) std::swap(ta, tb);
      t0 = std::max(t0, ta);
      t1 = std::min(t1, tb);
      if (t0 > t1) return false;
    }
  }
  return true;
}

}  // namespace junction
