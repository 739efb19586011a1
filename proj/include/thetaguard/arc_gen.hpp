#pragma once

// Candidate arc set for theta < pi: one inscribed arc per hull edge plus, for
// every maximal empty cone at a non-hull guard, the elongated arc pairs found
// by sliding the cone along its witness rays until a guard meets the free ray.

#include <map>
#include <optional>
#include <unordered_set>

#include "thetaguard/arc.hpp"
#include "thetaguard/convex_hull.hpp"
#include "thetaguard/oracle.hpp"
#include "thetaguard/partition_tree.hpp"

namespace thetaguard {

enum class TangentBackend { Naive, PartitionTree };

struct TangentHit {
  Point guard;   // first guard met by the free ray
  Point apex;    // cone apex at contact
  double slide;  // distance slid from g along the anchored line
  double along;  // distance of the guard along the free ray
};

// Slides the theta-cone whose anchored ray runs from the apex through g and
// g_anchor away from the point set until a guard touches the free ray. The
// free ray is the right ray when side == Right (anchor at the gap's ccw end).
//
// First contact minimizes the slide distance t; among guards hit by the same
// ray position the one nearer the apex wins, then lexicographic order. Both
// backends select by the identical linear functional, so they agree even on
// exact ties.
class TangentFinder {
 public:
  TangentFinder(const GuardSet& G, TangentBackend backend, int branching = 8)
      : G_(&G), backend_(backend) {
    if (backend == TangentBackend::PartitionTree)
      tree_.emplace(G.guards(), branching);
  }

  TangentBackend backend() const { return backend_; }

  std::optional<TangentHit> find(Point g, Point g_anchor, double theta, Side side) const {
    if (g == g_anchor) throw std::invalid_argument("degenerate anchor");
    const Point u = unit(g_anchor - g);
    const Point v = side == Side::Right ? rotate(u, -theta) : rotate(u, theta);
    // minimizing the slide t equals maximizing dot(d, q) over guards strictly
    // on the free side of the anchored line
    const Point d = side == Side::Right ? perp(v) : -1.0 * perp(v);
    const Side free_side = side == Side::Right ? Side::Right : Side::Left;

    std::vector<int> ids;
    if (backend_ == TangentBackend::PartitionTree) {
      PartitionTree::Query q{g, g_anchor, free_side, d};
      ids = tree_->extreme_set(q);
    } else {
      ids = extreme_set_naive(G_->guards(), g, g_anchor, free_side, d);
    }
    if (ids.empty()) return std::nullopt;

    // solve -t*u + s*v = q - g for the contact slide t and ray coordinate s
    const double denom = cross(u, v);  // -sin(theta) for Right, sin(theta) for Left
    std::optional<TangentHit> best;
    for (int id : ids) {
      Point q = G_->guards()[id];
      Point w = q - g;
      double t = -cross(w, v) / denom;
      double s = cross(u, w) / denom;
      if (s <= 0) continue;
      if (!best || s < best->along || (s == best->along && lex_less(q, best->guard))) {
        best = TangentHit{q, g - t * u, t, s};
      }
    }
    if (!best) return std::nullopt;
    // allow contacts a hair behind the start: gaps measuring exactly theta
    // put the witness on the free ray up to rounding
    const double tol = kEps * G_->scale() * (2.0 + 2.0 / std::sin(theta));
    if (best->slide < -tol)
      throw std::invalid_argument("find_tangent_guard: start cone is not empty");
    return best;
  }

  // Every guard reaching the free ray within slide tolerance of the first
  // contact, ordered by (slide, along-ray distance, lexicographic). In the
  // symmetric lower-bound instances simultaneous tangencies are exact, and
  // all of them mark arc end points.
  std::vector<TangentHit> find_all(Point g, Point g_anchor, double theta, Side side) const {
    if (g == g_anchor) throw std::invalid_argument("degenerate anchor");
    const Point u = unit(g_anchor - g);
    const Point v = side == Side::Right ? rotate(u, -theta) : rotate(u, theta);
    const Point d = side == Side::Right ? perp(v) : -1.0 * perp(v);
    const Side free_side = side == Side::Right ? Side::Right : Side::Left;
    const double denom = cross(u, v);
    const double tol_t = 4.0 * kEps * G_->scale();

    std::vector<int> ids;
    if (backend_ == TangentBackend::PartitionTree) {
      PartitionTree::Query q{g, g_anchor, free_side, d};
      std::vector<int> top = tree_->extreme_set(q);
      if (top.empty()) return {};
      double best_dot = dot(d, G_->guards()[top[0]]);
      ids = tree_->collect_ge(q, best_dot - 2.0 * tol_t * std::abs(denom));
    } else {
      ids = extreme_set_naive(G_->guards(), g, g_anchor, free_side, d);
      if (ids.empty()) return {};
      double best_dot = dot(d, G_->guards()[ids[0]]);
      ids.clear();
      const auto& pts = G_->guards();
      for (std::size_t i = 0; i < pts.size(); ++i) {
        double c = cross(g_anchor - g, pts[i] - g);
        double sv = free_side == Side::Left ? c : -c;
        if (sv <= 0) continue;
        if (dot(d, pts[i]) >= best_dot - 2.0 * tol_t * std::abs(denom))
          ids.push_back(static_cast<int>(i));
      }
    }
    std::vector<TangentHit> hits;
    for (int id : ids) {
      Point q = G_->guards()[id];
      Point w = q - g;
      double t = -cross(w, v) / denom;
      double s = cross(u, w) / denom;
      if (s <= 0) continue;
      hits.push_back(TangentHit{q, g - t * u, t, s});
    }
    if (hits.empty()) return hits;
    double t_min = hits[0].slide;
    for (const TangentHit& h : hits) t_min = std::min(t_min, h.slide);
    const double reject = kEps * G_->scale() * (2.0 + 2.0 / std::sin(theta));
    if (t_min < -reject)
      throw std::invalid_argument("find_tangent_guard: start cone is not empty");
    std::vector<TangentHit> out;
    for (const TangentHit& h : hits)
      if (h.slide <= t_min + tol_t) out.push_back(h);
    std::sort(out.begin(), out.end(), [](const TangentHit& a, const TangentHit& b) {
      if (a.slide != b.slide) return a.slide < b.slide;
      if (a.along != b.along) return a.along < b.along;
      return lex_less(a.guard, b.guard);
    });
    return out;
  }

 private:
  const GuardSet* G_;
  TangentBackend backend_;
  std::optional<PartitionTree> tree_;
};

inline std::optional<TangentHit> find_tangent_guard(Point g, Point g_anchor, double theta,
                                                    Side side, const GuardSet& G,
                                                    TangentBackend backend = TangentBackend::Naive) {
  return TangentFinder(G, backend).find(g, g_anchor, theta, side);
}

struct ArcSourceStats {
  std::size_t hull_edges = 0;
  std::size_t slide_right = 0;
  std::size_t slide_left = 0;
};

struct CandidateArcSet {
  std::vector<CircularArc> arcs;
  ArcSourceStats stats;
  bool region_provably_empty = false;
  // endpoints contributed per sliding guard, for the per-guard budget check
  std::map<std::pair<double, double>, int> endpoint_count;
};

namespace detail {

// Piece of `full` between two points known to lie on it (within tolerance).
inline std::optional<CircularArc> arc_piece(const CircularArc& full, Point a, Point b,
                                            double tol) {
  double oa = full.offset_of(angle_of(a - full.center));
  double ob = full.offset_of(angle_of(b - full.center));
  double atol = full.angular_tol(tol) + 1e-12;
  if (oa > full.sweep) oa = oa > kTau - atol ? 0.0 : full.sweep;
  if (ob > full.sweep) ob = ob > kTau - atol ? 0.0 : full.sweep;
  if (oa > ob) std::swap(oa, ob);
  if (ob - oa <= atol) return std::nullopt;
  CircularArc piece = full;
  piece.start_angle = norm_angle(full.start_angle + oa);
  piece.sweep = ob - oa;
  piece.provenance = full.provenance;
  return piece;
}

struct CircleKey {
  long long cx, cy, r;
  bool operator<(const CircleKey& o) const {
    return std::tie(cx, cy, r) < std::tie(o.cx, o.cy, o.r);
  }
};

inline CircleKey circle_key(const CircularArc& a, double q) {
  return {std::llround(a.center.x / q), std::llround(a.center.y / q),
          std::llround(a.radius / q)};
}

}  // namespace detail

// Merge arcs with identical supporting circles and overlapping spans; spans
// are unioned per circle. Keyed on quantized circle geometry.
inline void merge_cocircular(std::vector<CircularArc>& arcs, double tol) {
  std::map<detail::CircleKey, std::vector<std::size_t>> groups;
  for (std::size_t i = 0; i < arcs.size(); ++i)
    groups[detail::circle_key(arcs[i], std::max(tol, 1e-15))].push_back(i);
  std::vector<CircularArc> merged;
  merged.reserve(arcs.size());
  for (auto& [key, ids] : groups) {
    if (ids.size() == 1) {
      merged.push_back(arcs[ids[0]]);
      continue;
    }
    const CircularArc& ref = arcs[ids[0]];
    double atol = ref.angular_tol(tol);
    // union of spans as intervals of offsets from ref.start_angle
    struct Iv {
      double lo, hi;
      std::size_t src;
    };
    std::vector<Iv> ivs;
    for (std::size_t id : ids) {
      const CircularArc& a = arcs[id];
      double lo = ccw_delta(ref.start_angle, a.start_angle);
      double hi = lo + a.sweep;
      if (hi > kTau) {  // wraps past the reference seam: split
        ivs.push_back({lo, kTau, id});
        ivs.push_back({0.0, hi - kTau, id});
      } else {
        ivs.push_back({lo, hi, id});
      }
    }
    std::sort(ivs.begin(), ivs.end(), [](const Iv& a, const Iv& b) { return a.lo < b.lo; });
    std::vector<Iv> out;
    for (const Iv& iv : ivs) {
      if (!out.empty() && iv.lo <= out.back().hi + atol)
        out.back().hi = std::max(out.back().hi, iv.hi);
      else
        out.push_back(iv);
    }
    // re-join across the seam
    if (out.size() >= 2 && out.front().lo <= atol && out.back().hi >= kTau - atol) {
      out.front().lo = out.back().lo - kTau;
      out.pop_back();
    }
    for (const Iv& iv : out) {
      CircularArc a = arcs[iv.src];
      a.center = ref.center;
      a.radius = ref.radius;
      a.start_angle = norm_angle(ref.start_angle + iv.lo);
      a.sweep = std::min(iv.hi - iv.lo, kTau);
      merged.push_back(a);
    }
  }
  arcs = std::move(merged);
}

// The candidate set C': hull-edge arcs plus two elongated arc pairs per
// maximal empty cone at each non-hull guard. Collinear or undersized inputs
// yield an empty set with the region flagged provably empty.
inline CandidateArcSet generate_candidate_arcs(const GuardSet& G, double theta,
                                               TangentBackend backend = TangentBackend::PartitionTree,
                                               int branching = 8) {
  if (!(theta > 0.0 && theta < kPi)) throw std::invalid_argument("theta out of range");
  CandidateArcSet out;
  if (G.size() < 3) {
    out.region_provably_empty = true;
    return out;
  }
  ConvexHull hull = convex_hull(G.guards());
  if (hull.size() < 3) {
    out.region_provably_empty = true;  // collinear: f >= pi everywhere
    return out;
  }
  const double tol = kEps * G.scale();

  for (std::size_t i = 0; i < hull.size(); ++i) {
    Point u = hull.vertices[i], v = hull.vertices[(i + 1) % hull.size()];
    out.arcs.push_back(inscribed_arc(u, v, theta, Side::Left));  // bulges into the hull
    ++out.stats.hull_edges;
  }

  std::vector<Point> hull_sorted = hull.vertices;
  std::sort(hull_sorted.begin(), hull_sorted.end(), lex_less);
  auto on_hull = [&](Point p) {
    return std::binary_search(hull_sorted.begin(), hull_sorted.end(), p, lex_less);
  };

  TangentFinder finder(G, backend, branching);
  auto add_slide = [&](Point g, Point anchor, Side side) {
    auto hits = finder.find_all(g, anchor, theta, side);
    if (hits.empty()) return;
    auto key = std::make_pair(g.x, g.y);
    ++out.endpoint_count[key];
    // the contact cone holds {g, anchor} on the anchored ray and the hit
    // guard on the free ray; provenance pairs put the right-ray guard first.
    // Simultaneous tangencies all contribute their arc pairs.
    for (const TangentHit& hit : hits) {
      if (side == Side::Right) {
        CircularArc c1 = inscribed_arc(hit.guard, anchor, theta, Side::Left);
        CircularArc c2 = inscribed_arc(hit.guard, g, theta, Side::Left);
        if (auto p1 = detail::arc_piece(c1, hit.guard, hit.apex, tol)) out.arcs.push_back(*p1);
        if (auto p2 = detail::arc_piece(c2, g, hit.apex, tol)) out.arcs.push_back(*p2);
      } else {
        CircularArc c1 = inscribed_arc(anchor, hit.guard, theta, Side::Left);
        CircularArc c2 = inscribed_arc(g, hit.guard, theta, Side::Left);
        if (auto p1 = detail::arc_piece(c1, hit.guard, hit.apex, tol)) out.arcs.push_back(*p1);
        if (auto p2 = detail::arc_piece(c2, g, hit.apex, tol)) out.arcs.push_back(*p2);
      }
    }
    (side == Side::Right ? out.stats.slide_right : out.stats.slide_left) += 1;
  };

  for (const Point& g : G.guards()) {
    if (on_hull(g)) continue;
    for (const ConeWitness& cone : maximal_empty_cones(g, G, theta, 1e-9)) {
      if (cone.extent >= kTau) continue;  // no usable witnesses
      add_slide(g, cone.g_min, Side::Right);  // left ray anchored through g_min
      add_slide(g, cone.g_max, Side::Left);   // right ray anchored through g_max
    }
  }

  merge_cocircular(out.arcs, tol);
  return out;
}

// Diagnostic tunnel trace: rotate an empty cone with a guard on each ray both
// ways until the apex reaches a guard, recording the tangent guard sequences
// L, R, the simultaneous pairs E, and the apex arcs.
struct Tunnel {
  std::vector<Point> left_guards;
  std::vector<Point> right_guards;
  std::vector<std::pair<Point, Point>> incident_pairs;  // (left, right)
  Point l0, r0;  // apex end positions (cw rotation ends at l0)
  std::vector<CircularArc> apex_arcs;
  double theta = 0.0;

  // membership in U = intersection of the pair segments; apexes lie left of
  // the directed chord from the right-ray guard to the left-ray guard
  bool in_intersection(Point p, double tol = 0.0) const {
    for (const auto& [l, r] : incident_pairs) {
      if (p == l || p == r) continue;
      if (cross(l - r, p - r) < -tol * dist(l, r)) return false;
      if (angle_at(p, l, r) < theta - tol) return false;
    }
    return true;
  }
};

namespace detail {

struct TraceState {
  Point apex;
  Point left, right;  // current tangent guards
};

// One rotation sweep. dir_ccw=false turns the cone clockwise (ends at l0).
// While turning clockwise the left-ray touch point marches toward the apex
// and the right-ray touch away from it (mirrored counterclockwise), so at an
// event the new pivot is the nearer or farther guard accordingly; a touched
// guard that does not take over the pivot still joins L/R and E.
inline void trace_sweep(const ConeWitness& start, const GuardSet& G, double theta, bool dir_ccw,
                        Tunnel& tn, double tol) {
  TraceState st{start.apex, start.g_min, start.g_max};
  if (std::abs(angle_at(st.apex, st.left, st.right) - theta) > 1e-6)
    throw std::invalid_argument("trace_tunnel: start cone must have apex angle theta");
  auto record = [&](Point left, Point right) {
    auto push_unique = [](std::vector<Point>& v, Point p) {
      for (const Point& q : v)
        if (q == p) return;
      v.push_back(p);
    };
    push_unique(tn.left_guards, left);
    push_unique(tn.right_guards, right);
    for (auto& pr : tn.incident_pairs)
      if (pr.first == left && pr.second == right) return;
    tn.incident_pairs.emplace_back(left, right);
  };
  record(st.left, st.right);
  for (int guard_steps = 0; guard_steps < 4 * static_cast<int>(G.size()) + 8; ++guard_steps) {
    // apex travels on the inscribed arc over the current pair; ccw rotation
    // moves it ccw along the arc
    CircularArc arc = inscribed_arc(st.right, st.left, theta, Side::Left);
    double apex_off = arc.offset_of(angle_of(st.apex - arc.center));
    if (apex_off > arc.sweep) apex_off = apex_off > kTau - arc.angular_tol(tol) ? 0 : arc.sweep;
    double atol = arc.angular_tol(tol);
    bool event = false;
    double best_off = dir_ccw ? arc.sweep : 0.0;
    Point event_guard;
    bool event_left = false;
    auto try_event = [&](Point hinge, Point q, bool left_ray) {
      if (q == hinge || q == st.left || q == st.right || q == st.apex) return;
      for (Point x : arc_line_intersections(arc, hinge, q, false, tol)) {
        double off = arc.offset_of(angle_of(x - arc.center));
        if (off > arc.sweep) continue;
        bool ahead = dir_ccw ? off > apex_off + atol : off < apex_off - atol;
        if (!ahead) continue;
        if (event && !(dir_ccw ? off < best_off : off > best_off)) continue;
        // contact must lie on the ray side, not behind the apex
        if (dot(q - x, hinge - x) <= 0) continue;
        // the rotating cone stays empty; a candidate whose cone already
        // swallowed a guard is an artifact of the ray degenerating near a
        // chord endpoint
        Point lref = left_ray ? (dist(q, x) > dist(st.left, x) ? q : st.left) : st.left;
        Point rref = left_ray ? st.right : (dist(q, x) > dist(st.right, x) ? q : st.right);
        ConeWitness cand{x, angle_of(rref - x), theta, rref, lref};
        bool empty = true;
        for (const Point& g : G.guards()) {
          if (g == st.left || g == st.right || g == q || g == x) continue;
          if (cand.contains_point_strict(g)) {
            empty = false;
            break;
          }
        }
        if (!empty) continue;
        event = true;
        best_off = off;
        event_guard = q;
        event_left = left_ray;
      }
    };
    for (const Point& q : G.guards()) {
      try_event(st.left, q, true);
      try_event(st.right, q, false);
    }
    double end_off = event ? best_off : (dir_ccw ? arc.sweep : 0.0);
    double lo = std::min(apex_off, end_off), hi = std::max(apex_off, end_off);
    if (hi - lo > atol) {
      CircularArc piece = arc;
      piece.start_angle = norm_angle(arc.start_angle + lo);
      piece.sweep = hi - lo;
      tn.apex_arcs.push_back(piece);
    }
    st.apex = arc.point_at_angle(arc.start_angle + end_off);
    if (!event) {
      // apex reached a chord endpoint; the sweep terminates at that guard
      Point terminal = dist(st.apex, st.left) < dist(st.apex, st.right) ? st.left : st.right;
      (dir_ccw ? tn.r0 : tn.l0) = terminal;
      return;
    }
    Point hinge = event_left ? st.left : st.right;
    bool q_nearer = dist(event_guard, st.apex) < dist(hinge, st.apex);
    bool take_nearer = event_left != dir_ccw;  // cw: left ray walks apex-ward
    if (q_nearer == take_nearer) {
      // the touch point advances to its sequence neighbor
      (event_left ? st.left : st.right) = event_guard;
      record(st.left, st.right);
    }
    // otherwise a farther guard grazed the extended ray: step past it
  }
  throw std::runtime_error("trace_tunnel: sweep did not terminate");
}

}  // namespace detail

inline Tunnel trace_tunnel(const ConeWitness& start, const GuardSet& G, double theta) {
  if (!(theta > 0.0 && theta < kPi)) throw std::invalid_argument("theta out of range");
  Tunnel tn;
  tn.theta = theta;
  const double tol = kEps * G.scale();
  detail::trace_sweep(start, G, theta, false, tn, tol);  // clockwise to l0
  detail::trace_sweep(start, G, theta, true, tn, tol);   // counterclockwise to r0
  return tn;
}

}  // namespace thetaguard
