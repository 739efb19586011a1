#pragma once

// Circular arcs with inscribed-angle provenance, circular segments, and
// arc/arc and arc/segment intersection.

#include <optional>
#include <stdexcept>
#include <vector>

#include "thetaguard/geometry.hpp"

namespace thetaguard {

// Directed guard pair (l, r) whose inscribed-angle arc this is. Apexes of the
// empty cones lie left of the directed chord l->r.
struct ArcProvenance {
  Point l;
  Point r;
  double inscribed = 0.0;
};

// Arc stored as (start, sweep) with positive counterclockwise sweep, which
// keeps the 0/2pi seam unambiguous.
struct CircularArc {
  Point center;
  double radius = 0.0;
  double start_angle = 0.0;  // position angle of the start point, [0, 2pi)
  double sweep = 0.0;        // ccw, (0, 2pi]
  std::optional<ArcProvenance> provenance;

  double end_angle() const { return norm_angle(start_angle + sweep); }
  Point point_at_angle(double ang) const { return center + radius * dir(ang); }
  Point point_at(double t) const { return point_at_angle(start_angle + t * sweep); }
  Point start_point() const { return point_at_angle(start_angle); }
  Point end_point() const { return point_at_angle(end_angle()); }

  double angular_tol(double tol) const { return radius > 0 ? tol / radius : 0.0; }

  // ccw offset of a position angle from the start (may exceed sweep).
  double offset_of(double ang) const { return ccw_delta(start_angle, ang); }

  bool contains_angle(double ang, double tol_len = 0.0) const {
    return angle_in_span(ang, start_angle, sweep, angular_tol(tol_len));
  }

  bool contains_point(Point p, double tol_len) const {
    if (std::abs(dist(p, center) - radius) > tol_len) return false;
    return contains_angle(angle_of(p - center), tol_len);
  }

  // Sub-arc from position angle a0 ccw to a1; both are clamped into the span.
  CircularArc sub_arc(double a0, double a1) const {
    double o0 = std::min(offset_of(a0), sweep);
    double o1 = std::min(offset_of(a1), sweep);
    if (o1 < o0) std::swap(o0, o1);
    CircularArc out = *this;
    out.start_angle = norm_angle(start_angle + o0);
    out.sweep = o1 - o0;
    return out;
  }

  double length() const { return radius * sweep; }

  BBox bbox() const {
    BBox b;
    b.expand(start_point());
    b.expand(end_point());
    for (int q = 0; q < 4; ++q) {
      double a = q * kPi / 2;
      if (contains_angle(a)) b.expand(point_at_angle(a));
    }
    return b;
  }
};

// Arc through l and r from which the chord subtends `theta`, on the requested
// side of the directed chord l->r. Radius |lr| / (2 sin theta); the center sits
// at signed offset R cos(theta) along the side normal, so acute angles give the
// major arc and obtuse ones the minor arc.
inline CircularArc inscribed_arc(Point l, Point r, double theta, Side side = Side::Left) {
  if (l == r) throw std::invalid_argument("degenerate chord");
  if (!(theta > 0.0 && theta < kPi)) throw std::invalid_argument("invalid inscribed angle");
  if (side == Side::Right) {
    CircularArc a = inscribed_arc(r, l, theta, Side::Left);
    a.provenance = ArcProvenance{l, r, theta};
    return a;
  }
  Point chord = r - l;
  double d = norm(chord);
  double radius = d / (2.0 * std::sin(theta));
  Point n = perp(chord / d);              // left normal of l->r
  Point mid = 0.5 * (l + r);
  Point center = mid + (radius * std::cos(theta)) * n;
  CircularArc a;
  a.center = center;
  a.radius = radius;
  a.start_angle = angle_of(r - center);   // ccw from r to l stays left of l->r
  a.sweep = ccw_delta(a.start_angle, angle_of(l - center));
  a.provenance = ArcProvenance{l, r, theta};
  return a;
}

// Closed region bounded by an inscribed arc and its chord.
struct CircularSegment {
  CircularArc arc;         // from inscribed_arc(l, r, theta, Side::Left)
  Point l, r;
  double theta = 0.0;

  // Geometric route: left of the chord and inside the supporting circle.
  bool contains(Point p, double tol = 0.0) const {
    double side = cross(r - l, p - l);
    if (side < -tol * norm(r - l)) return false;
    return dist(p, arc.center) <= arc.radius + tol;
  }

  // Angle route: left of the chord and seeing it at angle >= theta.
  bool contains_by_angle(Point p, double tol = 0.0) const {
    if (p == l || p == r) return true;
    double side = cross(r - l, p - l);
    if (side < -tol * norm(r - l)) return false;
    double ang_tol = arc.radius > 0 ? tol / arc.radius : 0.0;
    return angle_at(p, l, r) >= theta - ang_tol;
  }
};

inline CircularSegment circular_segment(Point l, Point r, double theta) {
  return CircularSegment{inscribed_arc(l, r, theta, Side::Left), l, r, theta};
}

struct ArcIntersections {
  std::vector<Point> points;
  std::vector<CircularArc> overlaps;  // co-circular overlap pieces
  bool has_overlap() const { return !overlaps.empty(); }
};

namespace detail {

// Intersection position angles on circle a of circles a and b. Empty if the
// circles are disjoint, nested, or coincident.
inline std::vector<double> circle_circle_angles(Point ca, double ra, Point cb, double rb,
                                                double tol) {
  std::vector<double> out;
  Point d = cb - ca;
  double dd = norm(d);
  if (dd <= tol) return out;  // concentric
  if (dd > ra + rb + tol) return out;
  if (dd < std::abs(ra - rb) - tol) return out;
  double a = (dd * dd + ra * ra - rb * rb) / (2.0 * dd);
  double h2 = ra * ra - a * a;
  double h = h2 > 0 ? std::sqrt(h2) : 0.0;
  Point u = d / dd;
  Point base = ca + a * u;
  Point off = h * perp(u);
  out.push_back(angle_of(base + off - ca));
  if (h > 0) out.push_back(angle_of(base - off - ca));
  return out;
}

inline double default_tol(const CircularArc& a, const CircularArc& b) {
  double s = a.radius + b.radius + dist(a.center, b.center);
  return kEps * std::max(s, 1.0);
}

}  // namespace detail

inline ArcIntersections arc_arc_intersections(const CircularArc& a, const CircularArc& b,
                                              double tol = -1.0) {
  if (tol < 0) tol = detail::default_tol(a, b);
  ArcIntersections res;
  bool same_circle =
      dist(a.center, b.center) <= tol && std::abs(a.radius - b.radius) <= tol;
  if (same_circle) {
    // Overlap of the two spans on the (shared) circle.
    double s0 = a.offset_of(b.start_angle);
    double atol = a.angular_tol(tol);
    struct Iv {
      double lo, hi;
    };
    std::vector<Iv> ivs;
    // b relative to a's span: [s0, s0 + b.sweep] intersect [0, a.sweep]
    double lo = s0, hi = s0 + b.sweep;
    auto clip = [&](double l, double h) {
      l = std::max(l, 0.0);
      h = std::min(h, a.sweep);
      if (h - l > atol) ivs.push_back({l, h});
    };
    clip(lo, hi);
    clip(lo - kTau, hi - kTau);
    for (const Iv& iv : ivs) {
      CircularArc piece = a;
      piece.start_angle = norm_angle(a.start_angle + iv.lo);
      piece.sweep = iv.hi - iv.lo;
      res.overlaps.push_back(piece);
    }
    if (res.overlaps.empty()) {
      // Spans may still touch at single points.
      for (Point p : {b.start_point(), b.end_point(), a.start_point(), a.end_point()}) {
        if (!a.contains_point(p, tol) || !b.contains_point(p, tol)) continue;
        bool dup = false;
        for (Point q : res.points) dup = dup || dist(p, q) <= tol;
        if (!dup) res.points.push_back(p);
      }
    }
    return res;
  }
  for (double ang : detail::circle_circle_angles(a.center, a.radius, b.center, b.radius, tol)) {
    Point p = a.point_at_angle(ang);
    if (a.contains_angle(ang, tol) && b.contains_angle(angle_of(p - b.center), tol))
      res.points.push_back(p);
  }
  return res;
}

// Intersections of an arc with the segment (s, e); set segment_only=false to
// treat (s, e) as an infinite line.
inline std::vector<Point> arc_line_intersections(const CircularArc& a, Point s, Point e,
                                                 bool segment_only = true, double tol = -1.0) {
  if (s == e) throw std::invalid_argument("degenerate segment");
  if (tol < 0) tol = kEps * std::max({a.radius, dist(s, e), 1.0});
  std::vector<Point> out;
  Point d = e - s;
  double A = norm2(d);
  double B = 2.0 * dot(d, s - a.center);
  double C = norm2(s - a.center) - a.radius * a.radius;
  double disc = B * B - 4 * A * C;
  double len = std::sqrt(A);
  if (disc < 0) {
    // allow grazing tangency within tolerance
    if (disc < -4 * A * tol * std::max(a.radius, tol)) return out;
    disc = 0;
  }
  double sq = std::sqrt(disc);
  for (double t : {(-B - sq) / (2 * A), (-B + sq) / (2 * A)}) {
    if (segment_only && (t < -tol / len || t > 1 + tol / len)) continue;
    Point p = s + t * d;
    if (!a.contains_angle(angle_of(p - a.center), tol)) continue;
    bool dup = false;
    for (Point q : out) dup = dup || dist(p, q) <= tol;
    if (!dup) out.push_back(p);
  }
  return out;
}

}  // namespace thetaguard
