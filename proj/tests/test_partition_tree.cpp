#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "test_support.hpp"
#include "thetaguard/partition_tree.hpp"

using namespace thetaguard;
using testsupport::Rng;

TEST_CASE("build invariants: child sizes and per-node hulls") {
  Rng rng(3);
  auto pts = testsupport::random_points(1000, rng);
  PartitionTree tree(pts, 8);
  int audited = 0;
  for (const auto& node : tree.nodes()) {
    if (!node.children.empty()) {
      int n = node.subtree_size;
      for (int c : node.children) {
        int sz = tree.nodes()[c].subtree_size;
        CHECK(sz >= n / 8);
        CHECK(sz <= (2 * n + 7) / 8);
      }
    } else {
      CHECK(node.subtree_size <= 8);
      CHECK(static_cast<int>(node.pts.size()) == node.subtree_size);
    }
    // triangle contains the node bbox corners
    for (Point c : {node.box.lo, Point{node.box.hi.x, node.box.lo.y}, node.box.hi,
                    Point{node.box.lo.x, node.box.hi.y}}) {
      CHECK(orientation(node.simplex.a, node.simplex.b, c) >= 0);
      CHECK(orientation(node.simplex.b, node.simplex.c, c) >= 0);
      CHECK(orientation(node.simplex.c, node.simplex.a, c) >= 0);
    }
  }
  // hull-of-subset audit on a sample of nodes
  Rng pick(5);
  for (int k = 0; k < 20; ++k) {
    const auto& node = tree.nodes()[pick.uniform_int(0, static_cast<int>(tree.nodes().size()) - 1)];
    // gather subtree points by brute force through the bbox filter
    std::vector<Point> inside;
    for (const Point& p : pts)
      if (p.x >= node.box.lo.x && p.x <= node.box.hi.x && p.y >= node.box.lo.y &&
          p.y <= node.box.hi.y)
        inside.push_back(p);
    // the node's subset is some subset of the bbox points; its hull vertices
    // must all be actual points and enclose the subtree size
    for (Point v : node.hull) {
      bool found = false;
      for (const Point& p : inside) found = found || p == v;
      CHECK(found);
    }
    ConvexHull check_hull = convex_hull(node.hull);
    CHECK(check_hull.vertices.size() == node.hull.size());
    ++audited;
  }
  CHECK(audited == 20);
}

TEST_CASE("tiny input gives a single leaf") {
  Rng rng(7);
  auto pts = testsupport::random_points(6, rng);
  PartitionTree tree(pts, 8);
  CHECK(tree.nodes().size() == 1);
  CHECK(tree.nodes()[0].children.empty());
}

TEST_CASE("line-crossing diagnostic over level-1 simplices") {
  Rng rng(9);
  auto pts = testsupport::random_points(4096, rng);
  PartitionTree tree(pts, 8);
  long total = 0;
  for (int k = 0; k < 100; ++k) {
    Point a = rng.point(-0.5, 1.5), b = rng.point(-0.5, 1.5);
    if (a == b) continue;
    total += tree.level1_crossings(a, b);
  }
  MESSAGE("average level-1 crossings over 100 random lines: ", total / 100.0);
  CHECK(total >= 0);
}

TEST_CASE("extreme_in_halfplane: spec examples") {
  SUBCASE("lexicographic tie-break on the unit square") {
    std::vector<Point> pts = {{0, 0}, {1, 0}, {1, 1}, {0, 1}};
    PartitionTree tree(pts, 4);
    int got = tree.extreme_in_halfplane({0.5, 0}, {0.5, 1}, Side::Left, 0.0);
    REQUIRE(got >= 0);
    CHECK(tree.points()[got] == Point{0, 0});
    CHECK(extreme_in_halfplane_naive(pts, {0.5, 0}, {0.5, 1}, Side::Left, 0.0) == got);
  }
  SUBCASE("no point on the side") {
    std::vector<Point> pts = {{0, 0}, {0.2, 0.4}};
    PartitionTree tree(pts, 4);
    CHECK(tree.extreme_in_halfplane({1, 0}, {1, 1}, Side::Right, 0.0) == -1);
  }
}

TEST_CASE("query equals naive scan on random suites") {
  Rng rng(11);
  for (int rep = 0; rep < 6; ++rep) {
    int n = rng.uniform_int(50, 4000);
    auto pts = testsupport::random_points(n, rng);
    // inject collinear / duplicate-coordinate structure
    for (int k = 0; k < n / 10; ++k) {
      Point p = pts[rng.uniform_int(0, n - 1)];
      pts.push_back({p.x, rng.uniform()});
      pts.push_back({rng.uniform(), p.y});
    }
    PartitionTree tree(pts, 8);
    for (int q = 0; q < 500; ++q) {
      Point a = rng.point(-0.2, 1.2), b = rng.point(-0.2, 1.2);
      if (a == b) continue;
      Side side = rng.uniform() < 0.5 ? Side::Left : Side::Right;
      double ang = rng.uniform(0, kTau);
      int got = tree.extreme_in_halfplane(a, b, side, ang);
      int want = extreme_in_halfplane_naive(pts, a, b, side, ang);
      if (want < 0) {
        CHECK(got < 0);
      } else {
        REQUIRE(got >= 0);
        CHECK(tree.points()[got] == pts[want]);
      }
    }
  }
}

TEST_CASE("grid points: exact ties everywhere") {
  std::vector<Point> pts;
  for (int x = 0; x < 20; ++x)
    for (int y = 0; y < 20; ++y) pts.push_back({static_cast<double>(x), static_cast<double>(y)});
  PartitionTree tree(pts, 8);
  Rng rng(13);
  for (int q = 0; q < 800; ++q) {
    Point a{rng.uniform(-1, 21), rng.uniform(-1, 21)};
    Point b{rng.uniform(-1, 21), rng.uniform(-1, 21)};
    if (a == b) continue;
    Side side = rng.uniform() < 0.5 ? Side::Left : Side::Right;
    // axis directions maximize the tie pressure
    double ang = (rng.next() % 4) * (kPi / 2);
    int got = tree.extreme_in_halfplane(a, b, side, ang);
    int want = extreme_in_halfplane_naive(pts, a, b, side, ang);
    if (want < 0)
      CHECK(got < 0);
    else {
      REQUIRE(got >= 0);
      CHECK(tree.points()[got] == pts[want]);
    }
  }
}

TEST_CASE("node-visit tripwire on a large instance") {
  Rng rng(17);
  auto pts = testsupport::random_points(100000, rng);
  PartitionTree tree(pts, 8);
  std::vector<long> visits;
  for (int q = 0; q < 200; ++q) {
    Point a = rng.point(), b = rng.point();
    if (a == b) continue;
    long v = 0;
    tree.extreme_in_halfplane(a, b, Side::Left, rng.uniform(0, kTau), &v);
    visits.push_back(v);
  }
  std::sort(visits.begin(), visits.end());
  long median = visits[visits.size() / 2];
  MESSAGE("median node visits for n=1e5: ", median);
  CHECK(median < 100000 / 5);
}
