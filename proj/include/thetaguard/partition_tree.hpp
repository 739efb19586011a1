#pragma once

// Simplicial-partition tree with per-node convex hulls for half-plane
// extreme-point queries. Children are formed by balanced median cuts along
// alternating axes; each child carries a triangle that contains its subset,
// so the crossing number stays a measured diagnostic rather than a guarantee.

#include <numeric>
#include <vector>

#include "thetaguard/convex_hull.hpp"
#include "thetaguard/geometry.hpp"

namespace thetaguard {

struct Triangle {
  Point a, b, c;

  bool crossed_by_line(Point p, Point q) const {
    int sa = orientation(p, q, a), sb = orientation(p, q, b), sc = orientation(p, q, c);
    int lo = std::min({sa, sb, sc}), hi = std::max({sa, sb, sc});
    return lo < 0 && hi > 0;
  }
};

class PartitionTree {
 public:
  struct Node {
    std::vector<int> pts;          // indices into points_, only meaningful at leaves
    std::vector<int> children;
    Triangle simplex;
    BBox box;
    std::vector<Point> hull;       // ccw hull of the whole subtree subset
    int subtree_size = 0;
  };

  PartitionTree(std::vector<Point> points, int branching = 8)
      : points_(std::move(points)), r_(std::max(2, branching)) {
    std::vector<int> idx(points_.size());
    std::iota(idx.begin(), idx.end(), 0);
    if (!idx.empty()) root_ = build(std::move(idx), 0);
  }

  const std::vector<Point>& points() const { return points_; }
  const std::vector<Node>& nodes() const { return nodes_; }
  int root() const { return root_; }
  int branching() const { return r_; }

  struct Query {
    Point line_a, line_b;  // directed line
    Side side;             // strict side of interest
    Point direction;       // maximize dot(direction, p)
  };

  // All stored points strictly on the requested side that attain the maximum
  // of dot(direction, p). `visited` (optional) counts touched nodes.
  std::vector<int> extreme_set(const Query& q, long* visited = nullptr) const {
    Best best;
    if (root_ >= 0) walk(root_, q, best, visited);
    return best.ids;
  }

  // Single extreme point with lexicographic (x, y) tie-break, or -1.
  int extreme_in_halfplane(Point line_a, Point line_b, Side side, double direction_angle,
                           long* visited = nullptr) const {
    Query q{line_a, line_b, side, dir(direction_angle)};
    std::vector<int> ids = extreme_set(q, visited);
    int bestid = -1;
    for (int id : ids)
      if (bestid < 0 || lex_less(points_[id], points_[bestid])) bestid = id;
    return bestid;
  }

  // All stored points strictly on the side with dot(direction, p) >= threshold.
  std::vector<int> collect_ge(const Query& q, double threshold) const {
    std::vector<int> out;
    if (root_ >= 0) collect_walk(root_, q, threshold, out);
    return out;
  }

  // Level-1 simplices crossed by the line through (p, q); diagnostic.
  int level1_crossings(Point p, Point q) const {
    if (root_ < 0) return 0;
    int count = 0;
    for (int c : nodes_[root_].children)
      if (nodes_[c].simplex.crossed_by_line(p, q)) ++count;
    return count;
  }

 private:
  struct Best {
    double value = -std::numeric_limits<double>::infinity();
    std::vector<int> ids;
  };

  double side_value(const Query& q, Point p) const {
    double c = cross(q.line_b - q.line_a, p - q.line_a);
    return q.side == Side::Left ? c : -c;
  }

  // Position of the extreme hull vertex in direction d; hull is ccw starting
  // at the lexicographic minimum (monotone-chain output). Along each of the
  // two x-monotone chains the edge directions turn monotonically, so
  // dot(d, edge) changes sign at most once and the chain maximum is found by
  // bisection; ties involve at most two adjacent vertices and are settled by
  // the caller's neighbor scan.
  static int hull_extreme(const std::vector<Point>& h, Point d) {
    const int n = static_cast<int>(h.size());
    if (n <= 8) {
      int best = 0;
      for (int i = 1; i < n; ++i)
        if (dot(d, h[i]) > dot(d, h[best])) best = i;
      return best;
    }
    // index of the lexicographic maximum (chains meet there)
    int lo = 0, hi = n - 1;
    while (lo + 1 < hi) {
      int mid = (lo + hi) / 2;
      if (lex_less(h[mid], h[mid + 1]))
        lo = mid;
      else
        hi = mid;
    }
    const int k = lex_less(h[lo], h[lo + 1]) ? lo + 1 : lo;
    int best = 0;
    auto consider = [&](int i) {
      i = (i % n + n) % n;
      if (dot(d, h[i]) > dot(d, h[best])) best = i;
    };
    // per chain: bisect the single sign change of dot(d, edge); if the chain
    // pattern is not rising-then-falling the maximum sits at an endpoint,
    // which the candidate set covers either way.
    auto search_chain = [&](int a, int b) {  // vertex range [a, b], edges [a, b-1]
      consider(a);
      consider(b);
      if (b - a < 2) return;
      auto rising = [&](int i) {
        return dot(d, h[((i + 1) % n + n) % n] - h[(i % n + n) % n]) > 0;
      };
      int clo = a, chi = b - 1;
      while (clo + 1 < chi) {
        int mid = (clo + chi) / 2;
        if (rising(mid))
          clo = mid;
        else
          chi = mid;
      }
      consider(clo);
      consider(clo + 1);
      consider(chi);
      consider(chi + 1);
    };
    search_chain(0, k);
    search_chain(k, n);  // wraps to h[0]
    return best;
  }

  // Conservative bound on the rounding error of dot(direction, p) for p in
  // the box; pruning keeps this slack so leaf scans decide all near-ties with
  // arithmetic identical to the naive path.
  static double dot_margin(Point d, const BBox& b) {
    double mx = std::max(std::abs(b.lo.x), std::abs(b.hi.x));
    double my = std::max(std::abs(b.lo.y), std::abs(b.hi.y));
    return 4.0 * std::numeric_limits<double>::epsilon() *
           (std::abs(d.x) * mx + std::abs(d.y) * my);
  }

  void walk(int ni, const Query& q, Best& best, long* visited) const {
    const Node& node = nodes_[ni];
    if (visited) ++*visited;
    // bbox side classification
    Point corners[4] = {node.box.lo,
                        {node.box.hi.x, node.box.lo.y},
                        node.box.hi,
                        {node.box.lo.x, node.box.hi.y}};
    double smin = std::numeric_limits<double>::infinity(), smax = -smin;
    for (Point c : corners) {
      double s = side_value(q, c);
      smin = std::min(smin, s);
      smax = std::max(smax, s);
    }
    if (smax <= 0) return;  // nothing strictly on the side
    if (node.children.empty()) {
      for (int id : node.pts) {
        if (side_value(q, points_[id]) <= 0) continue;
        double v = dot(q.direction, points_[id]);
        if (v > best.value) {
          best.value = v;
          best.ids.clear();
        }
        if (v == best.value) best.ids.push_back(id);
      }
      return;
    }
    // the precomputed hull bounds the subtree's extreme value; subtrees that
    // cannot beat the incumbent are pruned
    if (best.value > -std::numeric_limits<double>::infinity()) {
      const auto& h = node.hull;
      int e = hull_extreme(h, q.direction);
      const int n = static_cast<int>(h.size());
      double v_node = dot(q.direction, h[e]);
      for (int off : {1, n - 1})
        v_node = std::max(v_node, dot(q.direction, h[(e + off) % n]));
      if (v_node + dot_margin(q.direction, node.box) < best.value) return;
    }
    for (int c : node.children) walk(c, q, best, visited);
  }

  void collect_walk(int ni, const Query& q, double threshold, std::vector<int>& out) const {
    const Node& node = nodes_[ni];
    Point corners[4] = {node.box.lo,
                        {node.box.hi.x, node.box.lo.y},
                        node.box.hi,
                        {node.box.lo.x, node.box.hi.y}};
    double smax = -std::numeric_limits<double>::infinity();
    for (Point c : corners) smax = std::max(smax, side_value(q, c));
    if (smax <= 0) return;
    if (node.children.empty()) {
      for (int id : node.pts) {
        if (side_value(q, points_[id]) <= 0) continue;
        if (dot(q.direction, points_[id]) >= threshold) out.push_back(id);
      }
      return;
    }
    const auto& h = node.hull;
    int e = hull_extreme(h, q.direction);
    const int n = static_cast<int>(h.size());
    double v_node = dot(q.direction, h[e]);
    for (int off : {1, n - 1}) v_node = std::max(v_node, dot(q.direction, h[(e + off) % n]));
    if (v_node + dot_margin(q.direction, node.box) < threshold) return;
    for (int c : node.children) collect_walk(c, q, threshold, out);
  }

  int build(std::vector<int> idx, int axis) {
    Node node;
    node.subtree_size = static_cast<int>(idx.size());
    std::vector<Point> sub;
    sub.reserve(idx.size());
    for (int id : idx) sub.push_back(points_[id]);
    node.box = bbox_of(sub);
    node.hull = convex_hull(sub).vertices;
    node.simplex = containing_triangle(node.box);
    if (static_cast<int>(idx.size()) <= r_) {
      node.pts = std::move(idx);
      nodes_.push_back(std::move(node));
      return static_cast<int>(nodes_.size()) - 1;
    }
    std::vector<std::vector<int>> parts;
    split(std::move(idx), r_, axis, parts);
    int self = -1;
    {
      nodes_.push_back(std::move(node));
      self = static_cast<int>(nodes_.size()) - 1;
    }
    for (auto& part : parts) {
      int child = build(std::move(part), axis ^ 1);
      nodes_[self].children.push_back(child);
    }
    return self;
  }

  // Median partition into `parts` nearly equal classes, axes alternating per
  // halving level.
  void split(std::vector<int> idx, int parts, int axis, std::vector<std::vector<int>>& out) {
    if (parts == 1) {
      out.push_back(std::move(idx));
      return;
    }
    int left_parts = parts / 2;
    std::size_t mid = idx.size() * left_parts / parts;
    auto cmp = [&](int a, int b) {
      const Point &pa = points_[a], &pb = points_[b];
      double ka = axis == 0 ? pa.x : pa.y, kb = axis == 0 ? pb.x : pb.y;
      if (ka != kb) return ka < kb;
      return a < b;
    };
    std::nth_element(idx.begin(), idx.begin() + mid, idx.end(), cmp);
    std::vector<int> left(idx.begin(), idx.begin() + mid);
    std::vector<int> right(idx.begin() + mid, idx.end());
    split(std::move(left), left_parts, axis ^ 1, out);
    split(std::move(right), parts - left_parts, axis ^ 1, out);
  }

  static Triangle containing_triangle(const BBox& b) {
    double w = std::max(b.width(), 1e-12), h = std::max(b.height(), 1e-12);
    double pad = 0.01 * std::max(w, h);
    Point a{b.lo.x - pad, b.lo.y - pad};
    return Triangle{a, {a.x + 2 * (w + pad) + pad, a.y}, {a.x, a.y + 2 * (h + pad) + pad}};
  }

  std::vector<Point> points_;
  std::vector<Node> nodes_;
  int root_ = -1;
  int r_;
};

// Reference path: linear scan with identical side and tie semantics.
inline std::vector<int> extreme_set_naive(const std::vector<Point>& pts, Point line_a,
                                          Point line_b, Side side, Point direction) {
  double best = -std::numeric_limits<double>::infinity();
  std::vector<int> ids;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    double c = cross(line_b - line_a, pts[i] - line_a);
    double s = side == Side::Left ? c : -c;
    if (s <= 0) continue;
    double v = dot(direction, pts[i]);
    if (v > best) {
      best = v;
      ids.clear();
    }
    if (v == best) ids.push_back(static_cast<int>(i));
  }
  return ids;
}

inline int extreme_in_halfplane_naive(const std::vector<Point>& pts, Point line_a, Point line_b,
                                      Side side, double direction_angle) {
  auto ids = extreme_set_naive(pts, line_a, line_b, side, dir(direction_angle));
  int bestid = -1;
  for (int id : ids)
    if (bestid < 0 || lex_less(pts[id], pts[bestid])) bestid = id;
  return bestid;
}

}  // namespace thetaguard
