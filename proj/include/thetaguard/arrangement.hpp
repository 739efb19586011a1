#pragma once

// Arrangement of the candidate arc set: circles are split at span breaks,
// x-extreme points and pairwise intersections; a plane sweep over x-intervals
// finds the crossings, and a half-edge structure with rotational orders
// yields cycles, faces (with containment), classification and the region.

#include <functional>
#include <map>
#include <numeric>
#include <stdexcept>

#include "thetaguard/arc_gen.hpp"
#include "thetaguard/region.hpp"

namespace thetaguard {

class degeneracy_error : public std::runtime_error {
 public:
  degeneracy_error(const std::string& msg, Point where)
      : std::runtime_error(msg + " at (" + std::to_string(where.x) + ", " +
                           std::to_string(where.y) + ")"),
        where(where) {}
  Point where;
};

struct Circle {
  Point center;
  double radius = 0.0;
};

struct ArrangementOptions {
  bool euler_check = false;
};

class Arrangement {
 public:
  struct Edge {
    int v_from = -1, v_to = -1;
    int circle = -1;
    double ang_from = 0.0;  // position angle of v_from on the circle
    double sweep = 0.0;     // ccw to v_to
    double area_fwd = 0.0;  // shoelace term traveling ccw
  };
  struct Face {
    int outer_cycle = -1;  // -1 for the unbounded face
    std::vector<int> inner_cycles;
    bool unbounded = false;
    bool guarded = false;
    Point rep1, rep2;
    bool has_rep = false;
  };

  std::vector<Point> vertices;
  std::vector<Circle> circles;
  std::vector<Edge> edges;
  std::vector<int> he_next;    // per half-edge
  std::vector<int> he_cycle;   // orbit id per half-edge
  std::vector<std::vector<int>> cycles;  // half-edge lists
  std::vector<double> cycle_area;
  std::vector<int> cycle_face;
  std::vector<Face> faces;
  int unbounded_face = -1;
  double tol = 0.0;

  static int twin(int he) { return he ^ 1; }
  int he_count() const { return static_cast<int>(edges.size()) * 2; }
  int he_edge(int he) const { return he >> 1; }
  bool he_forward(int he) const { return (he & 1) == 0; }
  int he_origin(int he) const {
    const Edge& e = edges[he_edge(he)];
    return he_forward(he) ? e.v_from : e.v_to;
  }
  int he_target(int he) const { return he_origin(twin(he)); }
  int he_face(int he) const { return cycle_face[he_cycle[he]]; }

  RegionEdge he_geometry(int he) const {
    const Edge& e = edges[he_edge(he)];
    const Circle& c = circles[e.circle];
    Point a = vertices[e.v_from], b = vertices[e.v_to];
    if (he_forward(he)) return RegionEdge::arc(a, b, c.center, c.radius, true);
    return RegionEdge::arc(b, a, c.center, c.radius, false);
  }

  double cycle_winding(int cycle, Point p) const {
    double total = 0.0;
    for (int he : cycles[cycle]) total += he_geometry(he).subtended(p);
    return total / kTau;
  }

  bool point_in_face(int f, Point p) const {
    const Face& face = faces[f];
    if (!face.unbounded) {
      if (std::lround(cycle_winding(face.outer_cycle, p)) != 1) return false;
    }
    for (int ic : face.inner_cycles)
      if (std::lround(cycle_winding(ic, p)) != 0) return false;
    return true;
  }

  std::size_t psi() const { return faces.size(); }
  std::size_t mu() const { return vertices.size() + edges.size() + faces.size(); }
};

namespace detail {

struct ArcPiece {
  int circle = -1;
  double start = 0.0;
  double sweep = 0.0;
  BBox box;
  struct Cut {
    double off;
    int vertex;
  };
  std::vector<Cut> cuts;
};

// Tolerance clustering of points on a grid hash; returns cluster id per point
// and representative coordinates.
class PointSnapper {
 public:
  explicit PointSnapper(double tol) : tol_(tol), q_(std::max(tol, 1e-300)) {}

  int add(Point p) {
    long long gx = static_cast<long long>(std::floor(p.x / q_));
    long long gy = static_cast<long long>(std::floor(p.y / q_));
    for (long long dx = -1; dx <= 1; ++dx)
      for (long long dy = -1; dy <= 1; ++dy) {
        auto it = grid_.find({gx + dx, gy + dy});
        if (it == grid_.end()) continue;
        for (int id : it->second)
          if (std::abs(pts_[id].x - p.x) <= tol_ && std::abs(pts_[id].y - p.y) <= tol_)
            return id;
      }
    int id = static_cast<int>(pts_.size());
    pts_.push_back(p);
    grid_[{gx, gy}].push_back(id);
    return id;
  }

  const std::vector<Point>& points() const { return pts_; }

 private:
  double tol_, q_;
  std::vector<Point> pts_;
  std::map<std::pair<long long, long long>, std::vector<int>> grid_;
};

inline double edge_area_term(const Circle& c, Point a, Point b, double sweep) {
  return 0.5 * cross(c.center, b - a) + 0.5 * c.radius * c.radius * sweep;
}

}  // namespace detail

// Planar subdivision induced by the candidate arcs. Intersections are found
// by a sweep over x-intervals of the monotone pieces; vertices are snapped
// within the instance tolerance.
inline Arrangement build_arrangement(const CandidateArcSet& cset,
                                     ArrangementOptions opt = {}) {
  if (cset.arcs.empty()) throw std::invalid_argument("build_arrangement: no arcs");
  Arrangement arr;

  // global scale
  BBox total;
  for (const CircularArc& a : cset.arcs) total.merge(a.bbox());
  arr.tol = kEps * std::max(total.diameter(), 1.0);
  const double tol = arr.tol;

  // circles, tolerance-grouped
  std::vector<CircularArc> arcs = cset.arcs;
  std::map<detail::CircleKey, std::vector<int>> ckeys;
  std::vector<int> arc_circle(arcs.size(), -1);
  for (std::size_t i = 0; i < arcs.size(); ++i) {
    detail::CircleKey key = detail::circle_key(arcs[i], tol);
    int found = -1;
    for (long long dx = -1; dx <= 1 && found < 0; ++dx)
      for (long long dy = -1; dy <= 1 && found < 0; ++dy)
        for (long long dr = -1; dr <= 1 && found < 0; ++dr) {
          auto it = ckeys.find({key.cx + dx, key.cy + dy, key.r + dr});
          if (it == ckeys.end()) continue;
          for (int c : it->second) {
            if (dist(arr.circles[c].center, arcs[i].center) <= tol &&
                std::abs(arr.circles[c].radius - arcs[i].radius) <= tol) {
              found = c;
              break;
            }
          }
        }
    if (found < 0) {
      found = static_cast<int>(arr.circles.size());
      arr.circles.push_back({arcs[i].center, arcs[i].radius});
      ckeys[key].push_back(found);
    }
    arc_circle[i] = found;
  }

  // per circle: union of spans, then split at x-extremes into monotone pieces
  std::vector<detail::ArcPiece> pieces;
  {
    std::vector<std::vector<std::pair<double, double>>> spans(arr.circles.size());
    for (std::size_t i = 0; i < arcs.size(); ++i)
      spans[arc_circle[i]].push_back({arcs[i].start_angle, arcs[i].sweep});
    for (std::size_t c = 0; c < arr.circles.size(); ++c) {
      auto& sp = spans[c];
      if (sp.empty()) continue;
      const double atol = arr.circles[c].radius > 0 ? tol / arr.circles[c].radius : 0.0;
      // union of circular intervals, as offsets from the first span's start
      double base = sp[0].first;
      struct Iv {
        double lo, hi;
      };
      std::vector<Iv> ivs;
      for (auto& [s, w] : sp) {
        double lo = ccw_delta(base, s), hi = lo + w;
        if (hi > kTau) {
          ivs.push_back({lo, kTau});
          ivs.push_back({0.0, hi - kTau});
        } else {
          ivs.push_back({lo, hi});
        }
      }
      std::sort(ivs.begin(), ivs.end(), [](const Iv& a, const Iv& b) { return a.lo < b.lo; });
      std::vector<Iv> merged;
      for (const Iv& iv : ivs) {
        if (!merged.empty() && iv.lo <= merged.back().hi + atol)
          merged.back().hi = std::max(merged.back().hi, iv.hi);
        else
          merged.push_back(iv);
      }
      if (merged.size() >= 2 && merged.front().lo <= atol &&
          merged.back().hi >= kTau - atol) {
        merged.front().lo = merged.back().lo - kTau;
        merged.pop_back();
      }
      for (Iv iv : merged) {
        iv.hi = std::min(iv.hi, iv.lo + kTau);
        // break at the circle's x-extreme angles (0 and pi) for monotonicity
        std::vector<double> brk = {iv.lo, iv.hi};
        for (double xe : {0.0, kPi}) {
          double off = ccw_delta(base + iv.lo, xe);
          if (off > 0 && iv.lo + off < iv.hi - atol) brk.push_back(iv.lo + off);
          if (iv.lo + off + kTau < iv.hi - atol) brk.push_back(iv.lo + off + kTau);
        }
        std::sort(brk.begin(), brk.end());
        for (std::size_t k = 0; k + 1 < brk.size(); ++k) {
          if (brk[k + 1] - brk[k] <= atol) continue;
          detail::ArcPiece p;
          p.circle = static_cast<int>(c);
          p.start = norm_angle(base + brk[k]);
          p.sweep = brk[k + 1] - brk[k];
          CircularArc tmp{arr.circles[c].center, arr.circles[c].radius, p.start, p.sweep, {}};
          p.box = tmp.bbox();
          pieces.push_back(std::move(p));
        }
      }
    }
  }

  // intersections via a sweep over piece x-intervals
  detail::PointSnapper snapper(tol);
  auto piece_arc = [&](const detail::ArcPiece& p) {
    return CircularArc{arr.circles[p.circle].center, arr.circles[p.circle].radius, p.start,
                       p.sweep, {}};
  };
  {
    std::vector<int> order(pieces.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](int a, int b) { return pieces[a].box.lo.x < pieces[b].box.lo.x; });
    std::vector<int> active;
    for (int pi : order) {
      const detail::ArcPiece& pa = pieces[pi];
      std::vector<int> keep;
      keep.reserve(active.size());
      for (int qi : active) {
        if (pieces[qi].box.hi.x < pa.box.lo.x - tol) continue;
        keep.push_back(qi);
        const detail::ArcPiece& pb = pieces[qi];
        if (pa.circle == pb.circle) continue;
        if (!pa.box.overlaps(pb.box)) continue;
        CircularArc A = piece_arc(pa), B = piece_arc(pb);
        for (double ang :
             detail::circle_circle_angles(A.center, A.radius, B.center, B.radius, tol)) {
          Point x = A.point_at_angle(ang);
          double offA = ccw_delta(pa.start, ang);
          double offB = ccw_delta(pb.start, angle_of(x - B.center));
          double atA = A.angular_tol(tol), atB = B.angular_tol(tol);
          if (offA > pa.sweep + atA && offA < kTau - atA) continue;
          if (offB > pb.sweep + atB && offB < kTau - atB) continue;
          int v = snapper.add(x);
          pieces[pi].cuts.push_back({std::clamp(offA > kTau - atA ? 0.0 : offA, 0.0, pa.sweep),
                                     v});
          pieces[qi].cuts.push_back({std::clamp(offB > kTau - atB ? 0.0 : offB, 0.0, pb.sweep),
                                     v});
        }
      }
      keep.push_back(pi);
      active = std::move(keep);
    }
  }

  // piece endpoints become vertices too
  for (detail::ArcPiece& p : pieces) {
    CircularArc A = piece_arc(p);
    p.cuts.push_back({0.0, snapper.add(A.start_point())});
    p.cuts.push_back({p.sweep, snapper.add(A.end_point())});
  }
  arr.vertices = snapper.points();

  // edges between consecutive cuts
  for (detail::ArcPiece& p : pieces) {
    std::sort(p.cuts.begin(), p.cuts.end(), [](const auto& a, const auto& b) {
      return a.off < b.off || (a.off == b.off && a.vertex < b.vertex);
    });
    const double atol =
        arr.circles[p.circle].radius > 0 ? tol / arr.circles[p.circle].radius : 0.0;
    std::vector<detail::ArcPiece::Cut> cuts;
    for (const auto& c : p.cuts) {
      if (!cuts.empty() && c.vertex == cuts.back().vertex) continue;
      if (!cuts.empty() && c.off - cuts.back().off <= atol) {
        // conflicting vertices at the same position: prefer the earlier one
        continue;
      }
      cuts.push_back(c);
    }
    for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
      Arrangement::Edge e;
      e.circle = p.circle;
      e.v_from = cuts[k].vertex;
      e.v_to = cuts[k + 1].vertex;
      e.ang_from = norm_angle(p.start + cuts[k].off);
      e.sweep = cuts[k + 1].off - cuts[k].off;
      e.area_fwd = detail::edge_area_term(arr.circles[p.circle], arr.vertices[e.v_from],
                                          arr.vertices[e.v_to], e.sweep);
      arr.edges.push_back(e);
    }
  }
  if (arr.edges.empty()) throw degeneracy_error("arrangement degenerated to no edges", {});

  // rotational order of outgoing half-edges per vertex: (tangent angle,
  // signed curvature); larger curvature bends harder left and sorts later
  const int H = arr.he_count();
  std::vector<std::vector<int>> out_at(arr.vertices.size());
  std::vector<double> he_tau(H), he_kappa(H);
  for (int he = 0; he < H; ++he) {
    const Arrangement::Edge& e = arr.edges[he >> 1];
    double r = arr.circles[e.circle].radius;
    if ((he & 1) == 0) {
      he_tau[he] = norm_angle(e.ang_from + kPi / 2);
      he_kappa[he] = 1.0 / r;
    } else {
      he_tau[he] = norm_angle(e.ang_from + e.sweep - kPi / 2);
      he_kappa[he] = -1.0 / r;
    }
    out_at[arr.he_origin(he)].push_back(he);
  }
  std::vector<int> rot_pos(H, -1);
  for (auto& lst : out_at) {
    std::sort(lst.begin(), lst.end(), [&](int a, int b) {
      if (he_tau[a] != he_tau[b]) return he_tau[a] < he_tau[b];
      if (he_kappa[a] != he_kappa[b]) return he_kappa[a] < he_kappa[b];
      return a < b;
    });
    for (std::size_t i = 0; i < lst.size(); ++i) rot_pos[lst[i]] = static_cast<int>(i);
  }

  // next(h): the ccw-predecessor of twin(h) at the target vertex
  arr.he_next.assign(H, -1);
  for (int he = 0; he < H; ++he) {
    int tw = Arrangement::twin(he);
    const auto& lst = out_at[arr.he_origin(tw)];
    int pos = rot_pos[tw];
    arr.he_next[he] = lst[(pos + lst.size() - 1) % lst.size()];
  }

  // orbits
  arr.he_cycle.assign(H, -1);
  for (int he = 0; he < H; ++he) {
    if (arr.he_cycle[he] >= 0) continue;
    int cid = static_cast<int>(arr.cycles.size());
    arr.cycles.emplace_back();
    int cur = he;
    while (arr.he_cycle[cur] < 0) {
      arr.he_cycle[cur] = cid;
      arr.cycles[cid].push_back(cur);
      cur = arr.he_next[cur];
    }
    if (cur != he) throw degeneracy_error("half-edge orbit is not closed", arr.vertices[arr.he_origin(he)]);
  }
  // per-edge net traversal counts make antenna out-and-back runs cancel
  // exactly, so zero-area orbits are never mistaken for faces
  arr.cycle_area.assign(arr.cycles.size(), 0.0);
  {
    std::map<int, int> net;
    for (std::size_t c = 0; c < arr.cycles.size(); ++c) {
      net.clear();
      for (int he : arr.cycles[c]) net[he >> 1] += (he & 1) == 0 ? 1 : -1;
      double area = 0.0;
      for (auto& [e, k] : net)
        if (k != 0) area += k * arr.edges[e].area_fwd;
      arr.cycle_area[c] = area;
    }
  }

  // faces from positive cycles; inner cycles assigned by leftward ray casts
  arr.cycle_face.assign(arr.cycles.size(), -1);
  arr.unbounded_face = 0;
  arr.faces.emplace_back();
  arr.faces[0].unbounded = true;
  for (std::size_t c = 0; c < arr.cycles.size(); ++c) {
    if (arr.cycle_area[c] > 0) {
      Arrangement::Face f;
      f.outer_cycle = static_cast<int>(c);
      arr.cycle_face[c] = static_cast<int>(arr.faces.size());
      arr.faces.push_back(std::move(f));
    }
  }

  // leftmost point per cycle
  struct InnerRef {
    int cycle;
    Point leftmost;
  };
  std::vector<InnerRef> inner;
  for (std::size_t c = 0; c < arr.cycles.size(); ++c) {
    if (arr.cycle_area[c] > 0) continue;
    Point best{std::numeric_limits<double>::infinity(), 0};
    for (int he : arr.cycles[c]) {
      RegionEdge g = arr.he_geometry(he);
      const Arrangement::Edge& e = arr.edges[he >> 1];
      const Circle& circ = arr.circles[e.circle];
      Point cand = g.from;
      if (angle_in_span(kPi, e.ang_from, e.sweep))
        cand = Point{circ.center.x - circ.radius, circ.center.y};
      if (cand.x < best.x) best = cand;
      if (g.to.x < best.x) best = g.to;
    }
    inner.push_back({static_cast<int>(c), best});
  }
  std::sort(inner.begin(), inner.end(), [](const InnerRef& a, const InnerRef& b) {
    return a.leftmost.x < b.leftmost.x || (a.leftmost.x == b.leftmost.x && a.cycle < b.cycle);
  });
  for (const InnerRef& ir : inner) {
    // leftward horizontal ray from the cycle's leftmost point
    const Point org = ir.leftmost;
    double best_x = -std::numeric_limits<double>::infinity();
    int best_he = -1;
    for (std::size_t ei = 0; ei < arr.edges.size(); ++ei) {
      const Arrangement::Edge& e = arr.edges[ei];
      if (arr.he_cycle[2 * ei] == ir.cycle || arr.he_cycle[2 * ei + 1] == ir.cycle) continue;
      const Circle& c = arr.circles[e.circle];
      double q = (org.y - c.center.y) / c.radius;
      if (std::abs(q) > 1) continue;
      double a1 = std::asin(std::clamp(q, -1.0, 1.0));
      for (double ang : {a1, kPi - a1}) {
        ang = norm_angle(ang);
        if (!angle_in_span(ang, e.ang_from, e.sweep)) continue;
        double ty = std::cos(ang);  // y of the ccw tangent
        if (std::abs(ty) * c.radius <= tol) continue;  // tangential graze
        double x = c.center.x + c.radius * std::cos(ang);
        if (x >= org.x - tol) continue;
        if (x > best_x) {
          best_x = x;
          best_he = ty < 0 ? static_cast<int>(2 * ei) : static_cast<int>(2 * ei + 1);
        }
      }
    }
    int container = arr.unbounded_face;
    if (best_he >= 0) {
      container = arr.cycle_face[arr.he_cycle[best_he]];
      if (container < 0)
        throw degeneracy_error("inner cycle hit an unresolved cycle", org);
    }
    arr.cycle_face[ir.cycle] = container;
    arr.faces[container].inner_cycles.push_back(ir.cycle);
  }

  if (opt.euler_check) {
    // V - E + F_bounded + 1 = 2 per connected component of the 1-skeleton
    std::vector<int> comp(arr.vertices.size(), -1);
    int ncomp = 0;
    std::vector<std::vector<int>> adj(arr.vertices.size());
    for (const auto& e : arr.edges) {
      adj[e.v_from].push_back(e.v_to);
      adj[e.v_to].push_back(e.v_from);
    }
    for (std::size_t v = 0; v < arr.vertices.size(); ++v) {
      if (comp[v] >= 0 || adj[v].empty()) continue;
      std::vector<int> stack{static_cast<int>(v)};
      comp[v] = ncomp;
      while (!stack.empty()) {
        int c = stack.back();
        stack.pop_back();
        for (int w : adj[c])
          if (comp[w] < 0) {
            comp[w] = ncomp;
            stack.push_back(w);
          }
      }
      ++ncomp;
    }
    std::vector<long> vc(ncomp, 0), ec(ncomp, 0), fc(ncomp, 0);
    for (std::size_t v = 0; v < arr.vertices.size(); ++v)
      if (comp[v] >= 0) ++vc[comp[v]];
    for (const auto& e : arr.edges) ++ec[comp[e.v_from]];
    for (std::size_t f = 1; f < arr.faces.size(); ++f) {
      int he = arr.cycles[arr.faces[f].outer_cycle][0];
      ++fc[comp[arr.he_origin(he)]];
    }
    for (int c = 0; c < ncomp; ++c)
      if (vc[c] - ec[c] + fc[c] != 1)
        throw degeneracy_error("Euler check failed for a component", {});
  }
  return arr;
}

enum class ClassifyBackend { Batch, Oracle };

namespace detail {

// Representative interior points: vertex centroid when it verifies, otherwise
// inward offsets from edge midpoints, longest edges first. Returns false only
// when no candidate lands inside the face.
inline bool face_representatives(const Arrangement& arr, int f, Point& rep1, Point& rep2) {
  const auto& face = arr.faces[f];
  const auto& cyc = arr.cycles[face.outer_cycle];
  BBox box;
  Point centroid{0, 0};
  std::size_t nv = 0;
  std::vector<std::pair<double, int>> by_len;
  for (int he : cyc) {
    Point p = arr.vertices[arr.he_origin(he)];
    centroid = centroid + p;
    ++nv;
    box.expand(p);
    by_len.push_back({arr.he_geometry(he).length(), he});
  }
  std::sort(by_len.begin(), by_len.end(),
            [](const auto& a, const auto& b) { return a.first > b.first; });
  centroid = centroid / static_cast<double>(nv);
  double diam = std::max(box.diameter(), arr.tol);
  std::vector<Point> found;
  auto try_point = [&](Point p) {
    if (found.size() >= 2) return;
    for (Point q : found)
      if (dist(p, q) == 0.0) return;
    if (arr.point_in_face(f, p)) found.push_back(p);
  };
  try_point(centroid);
  for (std::size_t k = 0; k < by_len.size() && k < 4 && found.size() < 2; ++k) {
    RegionEdge ge = arr.he_geometry(by_len[k].second);
    Point mid = ge.midpoint();
    Point tangent;
    if (ge.kind == RegionEdge::Kind::Arc) {
      double a0 = angle_of(ge.from - ge.center);
      double half = ge.ccw ? ge.sweep() / 2 : -ge.sweep() / 2;
      tangent = dir(a0 + half + (ge.ccw ? kPi / 2 : -kPi / 2));
    } else {
      tangent = unit(ge.to - ge.from);
    }
    Point inward = perp(tangent);  // face lies left of travel
    for (double scale : {1e-2, 1e-3, 1e-5, 1e-7, 1e-9}) {
      try_point(mid + (scale * std::min(diam, 100 * by_len[k].first)) * inward);
      if (found.size() >= 2) break;
    }
  }
  if (found.empty()) {
    rep1 = rep2 = centroid;
    return false;
  }
  rep1 = found[0];
  rep2 = found.size() > 1 ? found[1] : found[0];
  return true;
}

inline double face_diameter(const Arrangement& arr, int f) {
  BBox box;
  for (int he : arr.cycles[arr.faces[f].outer_cycle]) {
    RegionEdge g = arr.he_geometry(he);
    box.expand(g.from);
    box.expand(g.to);
  }
  return box.diameter();
}

}  // namespace detail

// Flag every face by probing interior representatives; the unbounded face is
// unguarded outright for theta < pi. Both probes of a face must agree.
inline void classify_faces(Arrangement& arr, const GuardSet& G, double theta,
                           ClassifyBackend backend = ClassifyBackend::Batch) {
  if (!(theta > 0.0 && theta < kPi)) throw std::invalid_argument("theta out of range");
  std::vector<Point> probes;
  std::vector<int> probe_face;
  for (std::size_t f = 0; f < arr.faces.size(); ++f) {
    if (arr.faces[f].unbounded) {
      arr.faces[f].guarded = false;
      continue;
    }
    if (!detail::face_representatives(arr, static_cast<int>(f), arr.faces[f].rep1,
                                      arr.faces[f].rep2)) {
      // a sliver below the snapping scale is a measure-zero artifact of
      // tangential crossings; it cannot hold region area
      if (detail::face_diameter(arr, static_cast<int>(f)) <= 1e4 * arr.tol) {
        arr.faces[f].guarded = false;
        continue;
      }
      throw degeneracy_error("no interior representative for a face", arr.faces[f].rep1);
    }
    arr.faces[f].has_rep = true;
    probes.push_back(arr.faces[f].rep1);
    probes.push_back(arr.faces[f].rep2);
    probe_face.push_back(static_cast<int>(f));
  }
  std::vector<char> unguarded(probes.size(), 0);
  if (backend == ClassifyBackend::Batch) {
    for (auto& [idx, w] : batch_unguarded(probes, G, theta)) unguarded[idx] = 1;
  } else {
    for (std::size_t i = 0; i < probes.size(); ++i)
      unguarded[i] = is_theta_guarded(probes[i], G, theta) ? 0 : 1;
  }
  for (std::size_t k = 0; k < probe_face.size(); ++k) {
    bool g1 = !unguarded[2 * k], g2 = !unguarded[2 * k + 1];
    if (g1 != g2)
      throw degeneracy_error("face probes disagree", arr.faces[probe_face[k]].rep1);
    arr.faces[probe_face[k]].guarded = g1;
  }
}

struct ExtractedRegion {
  Region region;
  std::size_t face_components = 0;  // connected unions of guarded faces
};

// Union of guarded faces: boundary chains traversed with the guarded side on
// the left, interior edges dropped.
inline ExtractedRegion extract_region_ex(const Arrangement& arr) {
  ExtractedRegion out;
  const int H = arr.he_count();
  // union-find over faces across interior edges
  std::vector<int> parent(arr.faces.size());
  std::iota(parent.begin(), parent.end(), 0);
  std::function<int(int)> find = [&](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  auto guarded = [&](int f) { return arr.faces[f].guarded; };
  for (std::size_t e = 0; e < arr.edges.size(); ++e) {
    int f1 = arr.he_face(static_cast<int>(2 * e));
    int f2 = arr.he_face(static_cast<int>(2 * e + 1));
    if (guarded(f1) && guarded(f2)) parent[find(f1)] = find(f2);
  }
  std::vector<int> roots;
  for (std::size_t f = 0; f < arr.faces.size(); ++f)
    if (guarded(static_cast<int>(f)) && find(static_cast<int>(f)) == static_cast<int>(f))
      roots.push_back(static_cast<int>(f));
  out.face_components = roots.size();

  std::vector<char> visited(H, 0);
  for (int he = 0; he < H; ++he) {
    if (visited[he]) continue;
    if (!guarded(arr.he_face(he)) || guarded(arr.he_face(Arrangement::twin(he)))) continue;
    RegionComponent comp;
    int cur = he;
    do {
      visited[cur] = 1;
      comp.edges.push_back(arr.he_geometry(cur));
      int nxt = arr.he_next[cur];
      while (guarded(arr.he_face(Arrangement::twin(nxt))))
        nxt = arr.he_next[Arrangement::twin(nxt)];
      if (!guarded(arr.he_face(nxt)))
        throw degeneracy_error("boundary walk left the guarded union",
                               arr.vertices[arr.he_origin(nxt)]);
      cur = nxt;
    } while (cur != he);
    out.region.components.push_back(std::move(comp));
  }
  return out;
}

inline Region extract_region(const Arrangement& arr) { return extract_region_ex(arr).region; }

struct PipelineOptions {
  TangentBackend tangent = TangentBackend::PartitionTree;
  ClassifyBackend classify = ClassifyBackend::Batch;
  bool lemma3_shortcut = true;  // empty region outright when theta <= 2pi/n
  bool euler_check = false;
  int branching = 8;  // partition tree fan-out
};

struct PipelineResult {
  Region region;
  bool ran_arrangement = false;
  std::size_t candidate_arcs = 0;
  std::size_t mu = 0;
  std::size_t psi = 0;
  std::size_t face_components = 0;
  ArcSourceStats stats;
};

// Full theta < pi pipeline: candidate arcs -> arrangement -> classification ->
// union of guarded faces.
inline PipelineResult run_pipeline(const GuardSet& G, double theta, PipelineOptions opts = {}) {
  if (!(theta > 0.0 && theta < kPi)) throw std::invalid_argument("theta out of range");
  PipelineResult res;
  if (opts.lemma3_shortcut && G.size() > 0 &&
      theta <= kTau / static_cast<double>(G.size()))
    return res;
  CandidateArcSet arcs = generate_candidate_arcs(G, theta, opts.tangent, opts.branching);
  res.stats = arcs.stats;
  res.candidate_arcs = arcs.arcs.size();
  if (arcs.region_provably_empty || arcs.arcs.empty()) return res;
  ArrangementOptions aopt;
  aopt.euler_check = opts.euler_check;
  Arrangement arr = build_arrangement(arcs, aopt);
  classify_faces(arr, G, theta, opts.classify);
  ExtractedRegion ex = extract_region_ex(arr);
  res.region = std::move(ex.region);
  res.face_components = ex.face_components;
  res.mu = arr.mu();
  res.psi = arr.psi();
  res.ran_arrangement = true;
  return res;
}

inline Region region_theta_lt_pi(const GuardSet& G, double theta, PipelineOptions opts = {}) {
  return run_pipeline(G, theta, opts).region;
}

}  // namespace thetaguard
