#pragma once

#include <stdexcept>
#include <vector>

#include "thetaguard/geometry.hpp"

namespace thetaguard {

// Counterclockwise hull without collinear vertices. Collinear input degenerates
// to the two extreme points; a singleton to one.
struct ConvexHull {
  std::vector<Point> vertices;

  std::size_t size() const { return vertices.size(); }

  // Closed (boundary counts as inside) or open membership.
  bool contains(Point p, bool closed = true) const {
    const auto& v = vertices;
    if (v.empty()) return false;
    if (v.size() == 1) return closed && p == v[0];
    if (v.size() == 2) {
      if (!closed) return false;
      if (orientation(v[0], v[1], p) != 0) return false;
      return dot(p - v[0], v[1] - v[0]) >= 0 && dot(p - v[1], v[0] - v[1]) >= 0;
    }
    for (std::size_t i = 0; i < v.size(); ++i) {
      int o = orientation(v[i], v[(i + 1) % v.size()], p);
      if (o < 0) return false;
      if (o == 0 && !closed) return false;
    }
    return true;
  }

  double area() const {
    if (vertices.size() < 3) return 0.0;
    double a = 0.0;
    for (std::size_t i = 0; i < vertices.size(); ++i)
      a += cross(vertices[i], vertices[(i + 1) % vertices.size()]);
    return a / 2;
  }

  BBox bbox() const { return bbox_of(vertices); }
};

// Andrew monotone chain over exact orientation.
inline ConvexHull convex_hull(std::vector<Point> pts) {
  if (pts.empty()) throw std::invalid_argument("empty guard set");
  std::sort(pts.begin(), pts.end(), lex_less);
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  const std::size_t n = pts.size();
  if (n <= 2) return {pts};

  std::vector<Point> h(2 * n);
  std::size_t k = 0;
  for (std::size_t i = 0; i < n; ++i) {  // lower
    while (k >= 2 && orientation(h[k - 2], h[k - 1], pts[i]) <= 0) --k;
    h[k++] = pts[i];
  }
  for (std::size_t i = n - 1, t = k + 1; i-- > 0;) {  // upper
    while (k >= t && orientation(h[k - 2], h[k - 1], pts[i]) <= 0) --k;
    h[k++] = pts[i];
  }
  h.resize(k - 1);
  if (h.size() == 2 && h[0] == h[1]) h.resize(1);
  return {h};
}

}  // namespace thetaguard
