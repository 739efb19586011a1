#pragma once

// The theta-region for theta in [pi, 2pi): the convex hull at exactly pi, and
// for larger angles the rotating-cone boundary made of inscribed arcs of angle
// beta = 2pi - theta between hull tangent pairs.
//
// A point p outside the hull has f(p) = 2pi - w(p), where w(p) is the wedge
// width of the hull seen from p, attained at the two tangent vertices. The
// boundary {w = beta} therefore consists of pieces of the inscribed arcs
// C^beta over tangent pairs (t, s). The pair (t, s) is the tangent pair at p
// exactly when p lies inside the four supporting half-planes of the edges
// adjacent to t and s, so each candidate arc is clipped by those four lines
// and the surviving pieces are chained into the closed boundary.

#include <map>
#include <vector>

#include "thetaguard/convex_hull.hpp"
#include "thetaguard/guard_set.hpp"
#include "thetaguard/region.hpp"

namespace thetaguard {

namespace detail {

inline Region lens_region(Point a, Point b, double beta) {
  Region out;
  RegionComponent comp;
  CircularArc left = inscribed_arc(a, b, beta, Side::Left);   // ccw from b to a
  CircularArc right = inscribed_arc(b, a, beta, Side::Left);  // ccw from a to b
  comp.edges.push_back(RegionEdge::arc(b, a, left.center, left.radius, true));
  comp.edges.push_back(RegionEdge::arc(a, b, right.center, right.radius, true));
  if (comp.signed_area() < 0)
    for (RegionEdge& e : comp.edges) {
      std::swap(e.from, e.to);
      e.ccw = !e.ccw;
    }
  out.components.push_back(std::move(comp));
  return out;
}

// Pieces of the inscribed arc over tangent pair (t, s) inside the pair's
// tangency zone.
inline void tangent_pair_pieces(const ConvexHull& hull, std::size_t ti, std::size_t si,
                                double beta, double tol, std::vector<CircularArc>& out) {
  const auto& h = hull.vertices;
  const std::size_t m = h.size();
  const Point t = h[ti], s = h[si];
  CircularArc arc = inscribed_arc(t, s, beta, Side::Left);
  struct Constraint {
    Point a, b;
    int sign;  // +1: need cross(b-a, p-a) >= 0; -1: <= 0
  };
  const Constraint cons[4] = {
      {t, h[(ti + m - 1) % m], +1},  // p left of t -> prev(t)
      {t, h[(ti + 1) % m], +1},      // p left of t -> next(t)
      {s, h[(si + m - 1) % m], -1},  // p right of s -> prev(s)
      {s, h[(si + 1) % m], -1},      // p right of s -> next(s)
  };
  std::vector<double> offs = {0.0, arc.sweep};
  for (const Constraint& c : cons) {
    if (c.a == c.b) continue;
    for (Point x : arc_line_intersections(arc, c.a, c.b, /*segment_only=*/false, tol))
      offs.push_back(std::min(arc.offset_of(angle_of(x - arc.center)), arc.sweep));
  }
  std::sort(offs.begin(), offs.end());
  const double atol = arc.angular_tol(tol);
  for (std::size_t i = 0; i + 1 < offs.size(); ++i) {
    if (offs[i + 1] - offs[i] <= atol) continue;
    Point mid = arc.point_at_angle(arc.start_angle + 0.5 * (offs[i] + offs[i + 1]));
    bool ok = !hull.contains(mid, /*closed=*/false);
    for (const Constraint& c : cons) {
      if (!ok) break;
      if (c.a == c.b) continue;
      double v = cross(c.b - c.a, mid - c.a);
      ok = c.sign > 0 ? v >= -tol : v <= tol;
    }
    if (!ok) continue;
    CircularArc piece = arc;
    piece.start_angle = norm_angle(arc.start_angle + offs[i]);
    piece.sweep = offs[i + 1] - offs[i];
    if (!out.empty()) {  // merge with an adjacent kept piece
      CircularArc& last = out.back();
      if (last.center == piece.center &&
          std::abs(ccw_delta(last.start_angle, piece.start_angle) - last.sweep) <= atol) {
        last.sweep += piece.sweep;
        continue;
      }
    }
    out.push_back(piece);
  }
}

}  // namespace detail

// Boundary of the theta-region for theta in [pi, 2pi). Exactly pi yields the
// hull polygon (empty for degenerate hulls, matching the open region).
inline Region region_theta_ge_pi(const GuardSet& G, double theta) {
  if (G.size() < 2) throw std::invalid_argument("need at least two guards");
  if (!(theta >= kPi && theta < kTau)) throw std::invalid_argument("theta out of range");
  ConvexHull hull = convex_hull(G.guards());
  Region out;
  if (theta == kPi) {
    if (hull.size() < 3) return out;  // collinear: open region is empty
    RegionComponent comp;
    for (std::size_t i = 0; i < hull.size(); ++i)
      comp.edges.push_back(
          RegionEdge::segment(hull.vertices[i], hull.vertices[(i + 1) % hull.size()]));
    out.components.push_back(std::move(comp));
    return out;
  }

  const double beta = kTau - theta;
  if (hull.size() == 2) return detail::lens_region(hull.vertices[0], hull.vertices[1], beta);

  const double tol = kEps * G.scale();
  const std::size_t m = hull.size();
  std::vector<CircularArc> pieces;
  for (std::size_t ti = 0; ti < m; ++ti)
    for (std::size_t si = 0; si < m; ++si) {
      if (ti == si) continue;
      detail::tangent_pair_pieces(hull, ti, si, beta, tol, pieces);
    }
  if (pieces.empty())
    throw std::runtime_error("region_theta_ge_pi: no boundary pieces survived clipping");

  // chain pieces by endpoint proximity into the closed boundary
  const double join_tol = 1e-6 * G.scale();
  std::vector<bool> used(pieces.size(), false);
  RegionComponent comp;
  std::size_t cur = 0;
  for (std::size_t count = 0; count < pieces.size(); ++count) {
    const CircularArc& a = pieces[cur];
    used[cur] = true;
    comp.edges.push_back(
        RegionEdge::arc(a.start_point(), a.end_point(), a.center, a.radius, true));
    Point tail = a.end_point();
    std::size_t next = pieces.size();
    double best = join_tol;
    for (std::size_t k = 0; k < pieces.size(); ++k) {
      if (used[k]) continue;
      double d = dist(pieces[k].start_point(), tail);
      if (d < best) {
        best = d;
        next = k;
      }
    }
    if (next == pieces.size()) break;
    cur = next;
  }
  if (comp.edges.size() != pieces.size() ||
      dist(comp.edges.back().to, comp.edges.front().from) > join_tol)
    throw std::runtime_error("region_theta_ge_pi: boundary chain failed to close");
  out.components.push_back(std::move(comp));
  return out;
}

}  // namespace thetaguard
