#pragma once

// The theta-region as a set of closed boundary chains of segment and arc
// edges, plus point-membership and boundary-distance queries used by the
// verification suites.

#include <vector>

#include "thetaguard/arc.hpp"

namespace thetaguard {

struct RegionEdge {
  enum class Kind { Segment, Arc };
  Kind kind = Kind::Segment;
  Point from, to;
  // Arc only: supporting circle and travel orientation from->to.
  Point center;
  double radius = 0.0;
  bool ccw = true;

  static RegionEdge segment(Point a, Point b) {
    RegionEdge e;
    e.kind = Kind::Segment;
    e.from = a;
    e.to = b;
    return e;
  }
  static RegionEdge arc(Point a, Point b, Point center, double radius, bool ccw) {
    RegionEdge e;
    e.kind = Kind::Arc;
    e.from = a;
    e.to = b;
    e.center = center;
    e.radius = radius;
    e.ccw = ccw;
    return e;
  }

  // Angular sweep along travel direction, in (0, 2pi].
  double sweep() const {
    if (kind == Kind::Segment) return 0.0;
    double a0 = angle_of(from - center), a1 = angle_of(to - center);
    double s = ccw ? ccw_delta(a0, a1) : ccw_delta(a1, a0);
    return s == 0.0 ? kTau : s;
  }

  double length() const {
    return kind == Kind::Segment ? dist(from, to) : radius * sweep();
  }

  Point point_at(double t) const {
    if (kind == Kind::Segment) return from + t * (to - from);
    double a0 = angle_of(from - center);
    double s = sweep();
    return center + radius * dir(a0 + (ccw ? t * s : -t * s));
  }

  Point midpoint() const { return point_at(0.5); }

  double distance(Point p) const {
    if (kind == Kind::Segment) return dist_point_segment(p, from, to);
    double a0 = angle_of(from - center);
    double s = sweep();
    double start = ccw ? a0 : norm_angle(a0 - s);
    double ang = angle_of(p - center);
    if (angle_in_span(ang, start, s)) return std::abs(dist(p, center) - radius);
    return std::min(dist(p, from), dist(p, to));
  }

  // Area term of the shoelace integral 1/2 (x dy - y dx) along this edge.
  double area_term() const {
    if (kind == Kind::Segment) return 0.5 * cross(from, to);
    double s = sweep() * (ccw ? 1.0 : -1.0);
    return 0.5 * cross(center, to - from) + 0.5 * radius * radius * s;
  }

  // Signed angle swept by the vector (edge point - p) along the travel, exact
  // for arcs via the chord term plus a full-turn correction when p lies in
  // the sliver between chord and arc. Pieces start below pi/2 and split
  // further whenever p falls onto a decomposition chord, where the correction
  // side test would be unstable.
  double subtended(Point p) const {
    if (kind == Kind::Segment)
      return signed_angle_diff(angle_of(to - p), angle_of(from - p));
    const double s = sweep();
    const double a0 = angle_of(from - center);
    const double sgn = ccw ? 1.0 : -1.0;
    auto piece = [&](double o0, double o1, auto&& self, int depth) -> double {
      Point a = center + radius * dir(a0 + sgn * o0);
      Point b = center + radius * dir(a0 + sgn * o1);
      double base = signed_angle_diff(angle_of(b - p), angle_of(a - p));
      if (dist(p, center) >= radius) return base;
      double side_p = cross(b - a, p - a);
      double side_c = cross(b - a, center - a);
      // p effectively on this chord: split so the side test is decisive;
      // the threshold scales with the chord so the recursion stays shallow
      if (depth < 60 && std::abs(side_p) <= 1e-9 * norm2(b - a)) {
        double mid = 0.5 * (o0 + o1);
        return self(o0, mid, self, depth + 1) + self(mid, o1, self, depth + 1);
      }
      if (side_p * side_c < 0) base += sgn * kTau;
      return base;
    };
    int pieces = std::max(1, static_cast<int>(std::ceil(s / (kPi / 2))));
    double total = 0.0;
    for (int i = 0; i < pieces; ++i)
      total += piece(s * i / pieces, s * (i + 1) / pieces, piece, 0);
    return total;
  }
};

struct RegionComponent {
  std::vector<RegionEdge> edges;

  double signed_area() const {
    double a = 0.0;
    for (const RegionEdge& e : edges) a += e.area_term();
    return a;
  }

  double winding(Point p) const {
    double total = 0.0;
    for (const RegionEdge& e : edges) total += e.subtended(p);
    return total / kTau;
  }

  BBox bbox() const {
    BBox b;
    for (const RegionEdge& e : edges) {
      if (e.kind == RegionEdge::Kind::Segment) {
        b.expand(e.from);
        b.expand(e.to);
      } else {
        double a0 = angle_of(e.from - e.center);
        double s = e.sweep();
        CircularArc arc{e.center, e.radius, e.ccw ? a0 : norm_angle(a0 - s), s, std::nullopt};
        b.merge(arc.bbox());
      }
    }
    return b;
  }
};

struct Region {
  std::vector<RegionComponent> components;
  bool whole_plane = false;

  bool empty() const { return !whole_plane && components.empty(); }

  bool contains(Point p) const {
    if (whole_plane) return true;
    for (const RegionComponent& c : components)
      if (std::lround(c.winding(p)) != 0) return true;
    return false;
  }

  double boundary_distance(Point p) const {
    double d = std::numeric_limits<double>::infinity();
    for (const RegionComponent& c : components)
      for (const RegionEdge& e : c.edges) d = std::min(d, e.distance(p));
    return d;
  }

  std::size_t edge_count() const {
    std::size_t n = 0;
    for (const RegionComponent& c : components) n += c.edges.size();
    return n;
  }
};

}  // namespace thetaguard
