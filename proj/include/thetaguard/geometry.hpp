#pragma once

// Planar primitives: points, angles, robust orientation, bounding boxes.

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace thetaguard {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTau = 2.0 * std::numbers::pi;

struct Point {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Point& a, const Point& b) { return a.x == b.x && a.y == b.y; }
  friend bool operator!=(const Point& a, const Point& b) { return !(a == b); }
};

enum class Side { Left, Right };

inline Point operator+(Point a, Point b) { return {a.x + b.x, a.y + b.y}; }
inline Point operator-(Point a, Point b) { return {a.x - b.x, a.y - b.y}; }
inline Point operator*(double s, Point a) { return {s * a.x, s * a.y}; }
inline Point operator*(Point a, double s) { return {s * a.x, s * a.y}; }
inline Point operator/(Point a, double s) { return {a.x / s, a.y / s}; }

inline double dot(Point a, Point b) { return a.x * b.x + a.y * b.y; }
inline double cross(Point a, Point b) { return a.x * b.y - a.y * b.x; }
// Rotated +90 degrees.
inline Point perp(Point a) { return {-a.y, a.x}; }
inline double norm2(Point a) { return dot(a, a); }
inline double norm(Point a) { return std::hypot(a.x, a.y); }
inline double dist(Point a, Point b) { return norm(a - b); }

inline bool lex_less(Point a, Point b) { return a.x < b.x || (a.x == b.x && a.y < b.y); }

inline bool finite(Point p) { return std::isfinite(p.x) && std::isfinite(p.y); }

inline Point unit(Point a) {
  double n = norm(a);
  if (n == 0.0) throw std::invalid_argument("unit(): zero vector");
  return a / n;
}

inline Point rotate(Point v, double ang) {
  double c = std::cos(ang), s = std::sin(ang);
  return {c * v.x - s * v.y, s * v.x + c * v.y};
}

// Unit vector at a given direction angle.
inline Point dir(double ang) { return {std::cos(ang), std::sin(ang)}; }

// Normalize to [0, 2*pi).
inline double norm_angle(double a) {
  a = std::fmod(a, kTau);
  if (a < 0) a += kTau;
  if (a == kTau) a = 0.0;
  return a;
}

// Direction angle of a vector in [0, 2*pi).
inline double angle_of(Point v) { return norm_angle(std::atan2(v.y, v.x)); }

// Counterclockwise angular distance from `from` to `to`, in [0, 2*pi).
inline double ccw_delta(double from, double to) { return norm_angle(to - from); }

// Signed smallest difference a-b normalized to (-pi, pi].
inline double signed_angle_diff(double a, double b) {
  double d = std::fmod(a - b, kTau);
  if (d <= -kPi) d += kTau;
  if (d > kPi) d -= kTau;
  return d;
}

// Is angle `a` within the ccw span [start, start+sweep], with angular slack.
inline bool angle_in_span(double a, double start, double sweep, double tol = 0.0) {
  double d = ccw_delta(start, a);
  if (d <= sweep + tol) return true;
  return d >= kTau - tol;  // just below the start seam
}

struct BBox {
  Point lo{std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity()};
  Point hi{-std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity()};

  bool valid() const { return lo.x <= hi.x && lo.y <= hi.y; }
  void expand(Point p) {
    lo.x = std::min(lo.x, p.x);
    lo.y = std::min(lo.y, p.y);
    hi.x = std::max(hi.x, p.x);
    hi.y = std::max(hi.y, p.y);
  }
  void merge(const BBox& b) {
    expand(b.lo);
    expand(b.hi);
  }
  void pad(double m) {
    lo.x -= m;
    lo.y -= m;
    hi.x += m;
    hi.y += m;
  }
  double width() const { return hi.x - lo.x; }
  double height() const { return hi.y - lo.y; }
  double diameter() const { return valid() ? std::hypot(width(), height()) : 0.0; }
  Point center() const { return {(lo.x + hi.x) / 2, (lo.y + hi.y) / 2}; }
  bool contains(Point p) const { return p.x >= lo.x && p.x <= hi.x && p.y >= lo.y && p.y <= hi.y; }
  bool contains_strict(Point p) const {
    return p.x > lo.x && p.x < hi.x && p.y > lo.y && p.y < hi.y;
  }
  bool overlaps(const BBox& b) const {
    return lo.x <= b.hi.x && b.lo.x <= hi.x && lo.y <= b.hi.y && b.lo.y <= hi.y;
  }
};

inline BBox bbox_of(const std::vector<Point>& pts) {
  BBox b;
  for (const Point& p : pts) b.expand(p);
  return b;
}

// Relative tolerance used across the library, scaled by instance size.
// Overridable once at startup (CLI --eps); not meant to change mid-run.
inline double kEps = 1e-9;

namespace detail {

// Exact rounding-error helpers (Knuth two-sum, fma two-product).
inline void two_sum(double a, double b, double& s, double& err) {
  s = a + b;
  double bv = s - a;
  err = (a - (s - bv)) + (b - bv);
}

inline void two_prod(double a, double b, double& p, double& err) {
  p = a * b;
  err = std::fma(a, b, -p);
}

// Grow an expansion (nonoverlapping, increasing magnitude) by one term.
inline void expansion_add(std::array<double, 24>& e, int& n, double b) {
  double q = b;
  int j = 0;
  for (int i = 0; i < n; ++i) {
    double s, err;
    two_sum(q, e[i], s, err);
    if (err != 0.0) e[j++] = err;
    q = s;
  }
  if (q != 0.0 || j == 0) e[j++] = q;
  n = j;
}

inline int expansion_sign(const std::array<double, 24>& e, int n) {
  double top = e[n - 1];
  if (top > 0) return 1;
  if (top < 0) return -1;
  return 0;
}

// Exact sign of the 3x3 orientation determinant.
inline int orient_exact(Point a, Point b, Point c) {
  // det = bx*cy - bx*ay - ax*cy - by*cx + by*ax + ay*cx
  std::array<double, 24> e;
  int n = 0;
  double p, err;
  auto add_prod = [&](double u, double v) {
    two_prod(u, v, p, err);
    if (err != 0.0) expansion_add(e, n, err);
    expansion_add(e, n, p);
  };
  add_prod(b.x, c.y);
  add_prod(-b.x, a.y);
  add_prod(-a.x, c.y);
  add_prod(-b.y, c.x);
  add_prod(b.y, a.x);
  add_prod(a.y, c.x);
  return expansion_sign(e, n);
}

}  // namespace detail

// Orientation of the triple (a, b, c): +1 counterclockwise, -1 clockwise, 0 collinear.
// Filtered double evaluation with an exact-sign fallback near the error bound.
inline int orientation(Point a, Point b, Point c) {
  double detleft = (a.x - c.x) * (b.y - c.y);
  double detright = (a.y - c.y) * (b.x - c.x);
  double det = detleft - detright;
  double detsum;
  if (detleft > 0) {
    if (detright <= 0) return det > 0 ? 1 : (det < 0 ? -1 : 0);
    detsum = detleft + detright;
  } else if (detleft < 0) {
    if (detright >= 0) return det > 0 ? 1 : (det < 0 ? -1 : 0);
    detsum = -detleft - detright;
  } else {
    return det > 0 ? 1 : (det < 0 ? -1 : 0);
  }
  constexpr double errbound = 3.3306690738754716e-16;
  if (det >= errbound * detsum || -det >= errbound * detsum) return det > 0 ? 1 : -1;
  return detail::orient_exact(a, b, c);
}

// Unsigned wedge angle at p spanned by l and r, in [0, pi].
inline double angle_at(Point p, Point l, Point r) {
  Point u = l - p, v = r - p;
  if ((u.x == 0 && u.y == 0) || (v.x == 0 && v.y == 0))
    throw std::invalid_argument("angle_at(): coincident points");
  return std::atan2(std::abs(cross(u, v)), dot(u, v));
}

inline double dist_point_segment(Point p, Point a, Point b) {
  Point d = b - a;
  double l2 = norm2(d);
  if (l2 == 0.0) return dist(p, a);
  double t = std::clamp(dot(p - a, d) / l2, 0.0, 1.0);
  return dist(p, a + t * d);
}

}  // namespace thetaguard
