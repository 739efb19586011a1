#pragma once

// Ground-truth guardedness: the max-empty-cone-angle function f, single-point
// and batched theta-guardedness queries with witnesses, and rasterization.

#include <cstdint>
#include <optional>
#include <span>
#include <thread>
#include <vector>

#include "thetaguard/guard_set.hpp"

namespace thetaguard {

// Open cone at `apex` spanning ccw from `start` by `extent`, empty of guards,
// with the bounding guards on its rays: g_max on the clockwise ray (at start),
// g_min on the counterclockwise ray (at start+extent).
struct ConeWitness {
  Point apex;
  double start = 0.0;
  double extent = 0.0;
  Point g_max;
  Point g_min;

  bool contains_direction(double ang) const {
    double d = ccw_delta(start, ang);
    return d > 0.0 && d < extent;
  }
  bool contains_point_strict(Point p) const {
    if (p == apex) return false;
    return contains_direction(angle_of(p - apex));
  }
};

struct MaxGap {
  double extent = kTau;                 // f(p)
  std::optional<ConeWitness> cone;      // absent only when no direction exists
};

// f(p): the largest circular gap in the directions from p to the guards.
// A guard at p's own coordinates is ignored. 2pi when at most one distinct
// direction remains.
inline MaxGap max_empty_cone_angle(Point p, const GuardSet& G) {
  struct Dir {
    double ang;
    Point g;
  };
  std::vector<Dir> dirs;
  dirs.reserve(G.size());
  for (const Point& g : G.guards()) {
    if (g == p) continue;
    dirs.push_back({angle_of(g - p), g});
  }
  if (dirs.empty()) return {kTau, std::nullopt};
  std::sort(dirs.begin(), dirs.end(), [](const Dir& a, const Dir& b) {
    return a.ang < b.ang || (a.ang == b.ang && lex_less(a.g, b.g));
  });
  MaxGap out;
  out.extent = 0.0;
  for (std::size_t i = 0; i < dirs.size(); ++i) {
    const Dir& cur = dirs[i];
    const Dir& nxt = dirs[(i + 1) % dirs.size()];
    double gap = i + 1 == dirs.size() ? cur.ang == nxt.ang ? kTau : ccw_delta(cur.ang, nxt.ang)
                                      : nxt.ang - cur.ang;
    if (dirs.size() == 1) gap = kTau;
    if (gap > out.extent) {
      out.extent = gap;
      out.cone = ConeWitness{p, cur.ang, gap, cur.g, nxt.g};
    }
  }
  return out;
}

// Guarded iff f(p) < theta (cones are open, the region is open). For
// theta <= 2pi/n the region is provably empty, so the answer is pinned.
inline bool is_theta_guarded(Point p, const GuardSet& G, double theta) {
  if (!(theta > 0.0 && theta <= kTau)) throw std::invalid_argument("theta out of range");
  std::size_t n = G.size();
  if (n == 0) return false;
  if (theta <= kTau / static_cast<double>(n)) return false;
  return max_empty_cone_angle(p, G).extent < theta;
}

// All circular gaps of extent >= theta - slack in the direction sort of
// G \ {g} around g, each with its bounding guards. The slack admits gaps that
// measure exactly theta up to rounding (guards placed exactly on cone rays).
inline std::vector<ConeWitness> maximal_empty_cones(Point g, const GuardSet& G, double theta,
                                                    double slack = 0.0) {
  if (!(theta > 0.0 && theta < kPi)) throw std::invalid_argument("theta out of range");
  theta -= slack;
  struct Dir {
    double ang;
    Point g;
  };
  std::vector<Dir> dirs;
  for (const Point& q : G.guards()) {
    if (q == g) continue;
    dirs.push_back({angle_of(q - g), q});
  }
  std::vector<ConeWitness> out;
  if (dirs.empty()) return out;  // no rays to witness against
  std::sort(dirs.begin(), dirs.end(), [](const Dir& a, const Dir& b) {
    return a.ang < b.ang || (a.ang == b.ang && lex_less(a.g, b.g));
  });
  for (std::size_t i = 0; i < dirs.size(); ++i) {
    const Dir& cur = dirs[i];
    const Dir& nxt = dirs[(i + 1) % dirs.size()];
    double gap;
    if (dirs.size() == 1)
      gap = kTau;
    else if (i + 1 == dirs.size())
      gap = cur.ang == nxt.ang ? kTau : ccw_delta(cur.ang, nxt.ang);
    else
      gap = nxt.ang - cur.ang;
    if (gap >= theta && gap > 0.0)
      out.push_back(ConeWitness{g, cur.ang, gap, cur.g, nxt.g});
  }
  return out;
}

inline bool cone_is_empty(const ConeWitness& c, const GuardSet& G) {
  for (const Point& g : G.guards())
    if (c.contains_point_strict(g)) return false;
  return true;
}

enum class BatchBackend { Sweep, Naive };

namespace detail {

inline ConeWitness witness_for(Point p, const GuardSet& G) {
  MaxGap mg = max_empty_cone_angle(p, G);
  if (mg.cone) return *mg.cone;
  return ConeWitness{p, 0.0, kTau, {}, {}};
}

// One rotational pass of the batched query: direction extremes (tangent
// angles) of the guards strictly ahead of each query point.
struct PassEntry {
  double min_off = 0.0, max_off = 0.0;  // offsets in (0, pi) relative to phi
  int min_gid = -1, max_gid = -1;
  bool empty = true;
};

inline void batch_pass(double phi, std::span<const Point> P, const GuardSet& G,
                       std::vector<PassEntry>& out) {
  const Point u = dir(phi);
  const Point nh = perp(u);
  struct Ev {
    double key;   // projection on nh, processed descending
    double eta;   // projection on u, tie order for hull build
    int idx;      // query index or guard index
    bool guard;
  };
  std::vector<Ev> evs;
  evs.reserve(P.size() + G.size());
  for (std::size_t i = 0; i < P.size(); ++i)
    evs.push_back({dot(P[i], nh), dot(P[i], u), static_cast<int>(i), false});
  const auto& guards = G.guards();
  for (std::size_t i = 0; i < guards.size(); ++i)
    evs.push_back({dot(guards[i], nh), dot(guards[i], u), static_cast<int>(i), true});
  std::sort(evs.begin(), evs.end(), [](const Ev& a, const Ev& b) {
    if (a.key != b.key) return a.key > b.key;
    if (a.guard != b.guard) return !a.guard;  // queries before guards at equal projection
    if (a.eta != b.eta) return a.eta < b.eta;
    return a.idx < b.idx;
  });

  // Incremental hull of inserted guards in (xi, eta) = (-key, eta) coordinates;
  // insertions arrive sorted by xi so both chains grow amortized O(1).
  struct HP {
    double xi, eta;
    int gid;
  };
  std::vector<HP> upper, lower;
  auto add_chain = [](std::vector<HP>& ch, HP p, bool up) {
    while (ch.size() >= 2) {
      const HP& a = ch[ch.size() - 2];
      const HP& b = ch[ch.size() - 1];
      double cr = (b.xi - a.xi) * (p.eta - a.eta) - (b.eta - a.eta) * (p.xi - a.xi);
      bool pop = up ? (cr >= 0) : (cr <= 0);
      if (!pop) break;
      ch.pop_back();
    }
    ch.push_back(p);
  };
  out.assign(P.size(), PassEntry{});
  for (const Ev& e : evs) {
    if (e.guard) {
      HP hp{-e.key, e.eta, e.idx};
      add_chain(upper, hp, true);
      add_chain(lower, hp, false);
      continue;
    }
    PassEntry& pe = out[e.idx];
    if (upper.empty()) continue;  // no guard strictly ahead
    pe.empty = false;
    const Point p = P[e.idx];
    auto consider = [&](const HP& hp) {
      Point g = guards[hp.gid];
      Point w = g - p;
      double off = std::atan2(dot(w, nh), dot(w, u));
      if (pe.min_gid < 0 || off < pe.min_off) {
        pe.min_off = off;
        pe.min_gid = hp.gid;
      }
      if (pe.max_gid < 0 || off > pe.max_off) {
        pe.max_off = off;
        pe.max_gid = hp.gid;
      }
    };
    for (const HP& hp : upper) consider(hp);
    for (const HP& hp : lower) consider(hp);
  }
}

}  // namespace detail

// The theta-unguarded points of P, each with one maximal-empty-cone witness.
// The sweep backend runs one pass per grid direction (2*(ceil(pi/theta)+1)
// directions, so the bucket width is strictly below theta), reads each
// point's empty gap from incremental-hull tangents, validates candidate
// witnesses directly and falls back to the exact per-point sort on ties.
inline std::vector<std::pair<std::size_t, ConeWitness>> batch_unguarded(
    std::span<const Point> P, const GuardSet& G, double theta,
    BatchBackend backend = BatchBackend::Sweep) {
  if (!(theta > 0.0 && theta < kPi)) throw std::invalid_argument("theta out of range");
  std::vector<std::pair<std::size_t, ConeWitness>> out;
  const std::size_t n = G.size();
  const bool lemma3 = n == 0 || theta <= kTau / static_cast<double>(n);
  if (lemma3 || backend == BatchBackend::Naive || n < 8) {
    for (std::size_t i = 0; i < P.size(); ++i) {
      MaxGap mg = max_empty_cone_angle(P[i], G);
      if (lemma3 || mg.extent >= theta)
        out.emplace_back(i, mg.cone ? *mg.cone : ConeWitness{P[i], 0.0, kTau, {}, {}});
    }
    return out;
  }

  const int k2 = static_cast<int>(std::ceil(kPi / theta)) + 1;
  const int k = 2 * k2;
  std::vector<std::vector<detail::PassEntry>> passes(k);
  for (int m = 0; m < k; ++m) detail::batch_pass(kTau * m / k, P, G, passes[m]);

  const auto& guards = G.guards();
  for (std::size_t i = 0; i < P.size(); ++i) {
    double best_extent = -1.0;
    ConeWitness best;
    for (int m = 0; m < k; ++m) {
      const detail::PassEntry& own = passes[m][i];
      const detail::PassEntry& opp = passes[(m + k2) % k][i];
      double phi = kTau * m / k;
      double next_dist, prev_dist;
      int next_gid, prev_gid;
      if (!own.empty) {
        next_dist = own.min_off;
        next_gid = own.min_gid;
      } else if (!opp.empty) {
        next_dist = kPi + opp.min_off;
        next_gid = opp.min_gid;
      } else {
        if (best_extent < kTau) {
          best_extent = kTau;
          best = ConeWitness{P[i], 0.0, kTau, {}, {}};
        }
        continue;
      }
      if (!opp.empty) {
        prev_dist = kPi - opp.max_off;
        prev_gid = opp.max_gid;
      } else {
        prev_dist = kTau - own.max_off;
        prev_gid = own.max_gid;
      }
      double extent = next_dist + prev_dist;
      if (extent > best_extent) {
        best_extent = extent;
        best = ConeWitness{P[i], norm_angle(phi - prev_dist), extent, guards[prev_gid],
                           guards[next_gid]};
      }
    }
    if (best_extent >= theta) {
      if (cone_is_empty(best, G)) {
        out.emplace_back(i, best);
      } else {
        // A guard sat exactly on a grid ray; recompute this point exactly.
        MaxGap mg = max_empty_cone_angle(P[i], G);
        if (mg.extent >= theta)
          out.emplace_back(i, mg.cone ? *mg.cone : ConeWitness{P[i], 0.0, kTau, {}, {}});
      }
    }
  }
  return out;
}

struct Raster {
  BBox box;
  int cols = 0, rows = 0;
  std::vector<double> f;          // row-major, rows bottom to top
  std::vector<std::uint8_t> guarded;

  double cell_width() const { return box.width() / cols; }
  double cell_height() const { return box.height() / rows; }
  Point cell_center(int cx, int cy) const {
    return {box.lo.x + (cx + 0.5) * cell_width(), box.lo.y + (cy + 0.5) * cell_height()};
  }
  std::size_t index(int cx, int cy) const {
    return static_cast<std::size_t>(cy) * cols + cx;
  }
};

// f and the guarded flag evaluated at every cell center. Parallel over rows,
// deterministic regardless of thread count.
inline Raster rasterize(const GuardSet& G, double theta, BBox box, int cols, int rows,
                        int threads = 1) {
  if (cols < 2 || rows < 2) throw std::invalid_argument("resolution must be at least 2x2");
  Raster r;
  r.box = box;
  r.cols = cols;
  r.rows = rows;
  r.f.resize(static_cast<std::size_t>(cols) * rows);
  r.guarded.resize(r.f.size());
  const std::size_t n = G.size();
  const bool lemma3 = n == 0 || theta <= kTau / static_cast<double>(n);
  auto run_rows = [&](int y0, int y1) {
    for (int cy = y0; cy < y1; ++cy)
      for (int cx = 0; cx < cols; ++cx) {
        std::size_t id = r.index(cx, cy);
        double f = max_empty_cone_angle(r.cell_center(cx, cy), G).extent;
        r.f[id] = f;
        r.guarded[id] = !lemma3 && f < theta ? 1 : 0;
      }
  };
  threads = std::max(1, std::min(threads, rows));
  if (threads == 1) {
    run_rows(0, rows);
  } else {
    std::vector<std::thread> pool;
    int chunk = (rows + threads - 1) / threads;
    for (int t = 0; t < threads; ++t)
      pool.emplace_back(run_rows, t * chunk, std::min(rows, (t + 1) * chunk));
    for (auto& th : pool) th.join();
  }
  return r;
}

// 4-connected components of guarded cells; returns the component count.
inline int raster_component_count(const Raster& r) {
  std::vector<int> label(r.f.size(), -1);
  int count = 0;
  std::vector<std::size_t> stack;
  for (std::size_t s = 0; s < r.f.size(); ++s) {
    if (!r.guarded[s] || label[s] >= 0) continue;
    ++count;
    stack.push_back(s);
    label[s] = count;
    while (!stack.empty()) {
      std::size_t c = stack.back();
      stack.pop_back();
      int cx = static_cast<int>(c % r.cols), cy = static_cast<int>(c / r.cols);
      const int dx[4] = {1, -1, 0, 0}, dy[4] = {0, 0, 1, -1};
      for (int d = 0; d < 4; ++d) {
        int nx = cx + dx[d], ny = cy + dy[d];
        if (nx < 0 || ny < 0 || nx >= r.cols || ny >= r.rows) continue;
        std::size_t nid = r.index(nx, ny);
        if (r.guarded[nid] && label[nid] < 0) {
          label[nid] = count;
          stack.push_back(nid);
        }
      }
    }
  }
  return count;
}

}  // namespace thetaguard
