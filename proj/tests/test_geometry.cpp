#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "test_support.hpp"
#include "thetaguard/arc.hpp"
#include "thetaguard/convex_hull.hpp"

using namespace thetaguard;
using testsupport::Rng;

TEST_CASE("orientation: exact fallback agrees with obvious cases") {
  CHECK(orientation({0, 0}, {1, 0}, {0, 1}) == 1);
  CHECK(orientation({0, 0}, {0, 1}, {1, 0}) == -1);
  CHECK(orientation({0, 0}, {1, 1}, {2, 2}) == 0);
  // nearly collinear: one-ulp perturbations must give the exact sign
  Point a{0, 0}, b{1e15, 1e15};
  CHECK(orientation(a, b, {0.5e15, 0.5e15}) == 0);
  CHECK(orientation(a, b, {0.5e15, 0.5e15 + 1}) == 1);
  CHECK(orientation(a, b, {0.5e15, 0.5e15 - 1}) == -1);
  // adversarial double spacing
  double x = 1e-30;
  CHECK(orientation({x, x}, {2 * x, 2 * x}, {3 * x, 3 * x}) == 0);
}

TEST_CASE("angle helpers") {
  CHECK(norm_angle(kTau + 0.5) == doctest::Approx(0.5));
  CHECK(norm_angle(-0.5) == doctest::Approx(kTau - 0.5));
  CHECK(ccw_delta(kTau - 0.25, 0.25) == doctest::Approx(0.5));
  CHECK(angle_in_span(0.1, kTau - 0.2, 0.5));
  CHECK_FALSE(angle_in_span(kPi, kTau - 0.2, 0.5));
}

TEST_CASE("convex_hull: spec examples") {
  SUBCASE("interior point excluded") {
    ConvexHull h = convex_hull({{0, 0}, {1, 0}, {1, 1}, {0, 1}, {0.5, 0.5}});
    REQUIRE(h.size() == 4);
    for (Point p : {Point{0, 0}, Point{1, 0}, Point{1, 1}, Point{0, 1}}) {
      bool found = false;
      for (Point v : h.vertices) found = found || v == p;
      CHECK(found);
    }
    // counterclockwise
    for (std::size_t i = 0; i < 4; ++i)
      CHECK(orientation(h.vertices[i], h.vertices[(i + 1) % 4], h.vertices[(i + 2) % 4]) == 1);
  }
  SUBCASE("singleton") {
    ConvexHull h = convex_hull({{0, 0}});
    CHECK(h.size() == 1);
  }
  SUBCASE("collinear degenerates to two vertices") {
    ConvexHull h = convex_hull({{0, 0}, {1, 1}, {2, 2}, {3, 3}});
    REQUIRE(h.size() == 2);
    CHECK(h.vertices[0] == Point{0, 0});
    CHECK(h.vertices[1] == Point{3, 3});
  }
  SUBCASE("empty input is an error") {
    CHECK_THROWS_WITH(convex_hull({}), "empty guard set");
  }
  SUBCASE("random sets match the brute-force half-plane oracle") {
    Rng rng(42);
    for (int rep = 0; rep < 30; ++rep) {
      auto pts = testsupport::random_points(20, rng);
      ConvexHull h = convex_hull(pts);
      auto expected = testsupport::brute_force_hull(pts);
      std::vector<Point> got = h.vertices;
      std::sort(got.begin(), got.end(), lex_less);
      std::sort(expected.begin(), expected.end(), lex_less);
      CHECK(got == expected);
      // every input point inside or on hull
      for (Point p : pts) CHECK(h.contains(p, true));
    }
  }
  SUBCASE("idempotence") {
    Rng rng(7);
    for (int rep = 0; rep < 20; ++rep) {
      auto pts = testsupport::random_points(25, rng);
      ConvexHull h = convex_hull(pts);
      ConvexHull h2 = convex_hull(h.vertices);
      CHECK(h.vertices == h2.vertices);
    }
  }
}

TEST_CASE("inscribed_arc: spec examples") {
  SUBCASE("Thales circle") {
    CircularArc a = inscribed_arc({0, 0}, {1, 0}, kPi / 2, Side::Left);
    CHECK(a.center.x == doctest::Approx(0.5));
    CHECK(a.center.y == doctest::Approx(0.0));
    CHECK(a.radius == doctest::Approx(0.5));
    // arc is the upper semicircle
    CHECK(a.point_at(0.5).y == doctest::Approx(0.5));
  }
  SUBCASE("equilateral apex at pi/3") {
    CircularArc a = inscribed_arc({0, 0}, {1, 0}, kPi / 3, Side::Left);
    CHECK(a.center.x == doctest::Approx(0.5));
    CHECK(a.center.y == doctest::Approx(1.0 / (2.0 * std::sqrt(3.0))));
    CHECK(a.radius == doctest::Approx(1.0 / std::sqrt(3.0)));
    CHECK(a.point_at(0.5).x == doctest::Approx(0.5));
    CHECK(a.point_at(0.5).y == doctest::Approx(std::sqrt(3.0) / 2.0));
  }
  SUBCASE("degenerate inputs") {
    CHECK_THROWS_WITH(inscribed_arc({1, 2}, {1, 2}, 1.0, Side::Left), "degenerate chord");
    CHECK_THROWS_WITH(inscribed_arc({0, 0}, {1, 0}, kPi, Side::Left),
                      "invalid inscribed angle");
    CHECK_THROWS_WITH(inscribed_arc({0, 0}, {1, 0}, 0.0, Side::Left),
                      "invalid inscribed angle");
  }
  SUBCASE("interior points see the chord at theta (angle-measure oracle)") {
    Rng rng(11);
    for (int rep = 0; rep < 40; ++rep) {
      Point l = rng.point(-5, 5), r = rng.point(-5, 5);
      if (l == r) continue;
      double theta = rng.uniform(0.05, kPi - 0.05);
      Side side = rng.uniform() < 0.5 ? Side::Left : Side::Right;
      CircularArc a = inscribed_arc(l, r, theta, side);
      for (int k = 1; k < 100; ++k) {
        Point p = a.point_at(k / 100.0);
        if (p == l || p == r) continue;
        CHECK(angle_at(p, l, r) == doctest::Approx(theta).epsilon(1e-9));
        // side check
        double c = cross(r - l, p - l);
        CHECK((side == Side::Left ? c : -c) > 0);
      }
    }
  }
  SUBCASE("radius formula over 1000 random chords") {
    Rng rng(13);
    for (int rep = 0; rep < 1000; ++rep) {
      Point l = rng.point(-10, 10), r = rng.point(-10, 10);
      if (l == r) continue;
      double theta = rng.uniform(0.01, kPi - 0.01);
      CircularArc a = inscribed_arc(l, r, theta, Side::Left);
      double expect = dist(l, r) / (2.0 * std::sin(theta));
      CHECK(std::abs(a.radius - expect) < 1e-9 * dist(l, r));
    }
  }
}

TEST_CASE("angle_at: spec examples") {
  CHECK(angle_at({0.5, std::sqrt(3.0) / 2}, {0, 0}, {1, 0}) == doctest::Approx(kPi / 3));
  CHECK(angle_at({0.5, 0.5}, {0, 0}, {1, 0}) == doctest::Approx(kPi / 2));
  CHECK(angle_at({0.5, 0}, {0, 0}, {1, 0}) == doctest::Approx(kPi));
  CHECK_THROWS(angle_at({0, 0}, {0, 0}, {1, 0}));
}

TEST_CASE("circular segment membership: angle test vs geometric test") {
  Rng rng(17);
  int checked = 0;
  for (int rep = 0; rep < 50; ++rep) {
    Point l = rng.point(-3, 3), r = rng.point(-3, 3);
    if (l == r) continue;
    double theta = rng.uniform(0.1, kPi - 0.1);
    CircularSegment seg = circular_segment(l, r, theta);
    for (int k = 0; k < 200; ++k) {
      Point p = rng.point(-4, 4);
      double band = 1e-9 * (dist(l, r) + seg.arc.radius);
      // skip probes within the tolerance band of either boundary
      double side = cross(r - l, p - l) / dist(l, r);
      double circ = std::abs(dist(p, seg.arc.center) - seg.arc.radius);
      if (std::abs(side) < band || circ < band) continue;
      CHECK(seg.contains(p) == seg.contains_by_angle(p));
      ++checked;
    }
  }
  CHECK(checked > 5000);
}

TEST_CASE("arc_arc_intersections: spec examples") {
  SUBCASE("two Thales semicircles") {
    CircularArc a = inscribed_arc({0, 0}, {2, 0}, kPi / 2, Side::Left);
    CircularArc b = inscribed_arc({1, 0}, {3, 0}, kPi / 2, Side::Left);
    ArcIntersections res = arc_arc_intersections(a, b);
    REQUIRE(res.points.size() == 1);
    CHECK(res.points[0].x == doctest::Approx(1.5));
    CHECK(res.points[0].y == doctest::Approx(std::sqrt(1.0 - 0.25)));
    CHECK_FALSE(res.has_overlap());
  }
  SUBCASE("identical arcs overlap") {
    CircularArc a = inscribed_arc({0, 0}, {2, 0}, kPi / 3, Side::Left);
    ArcIntersections res = arc_arc_intersections(a, a);
    CHECK(res.has_overlap());
    REQUIRE(res.overlaps.size() == 1);
    CHECK(res.overlaps[0].sweep == doctest::Approx(a.sweep));
  }
  SUBCASE("far apart arcs") {
    CircularArc a = inscribed_arc({0, 0}, {1, 0}, kPi / 2, Side::Left);
    CircularArc b = inscribed_arc({10, 10}, {11, 10}, kPi / 2, Side::Left);
    ArcIntersections res = arc_arc_intersections(a, b);
    CHECK(res.points.empty());
    CHECK_FALSE(res.has_overlap());
  }
  SUBCASE("all reported points lie on both arcs") {
    Rng rng(23);
    for (int rep = 0; rep < 300; ++rep) {
      Point l1 = rng.point(-2, 2), r1 = rng.point(-2, 2);
      Point l2 = rng.point(-2, 2), r2 = rng.point(-2, 2);
      if (l1 == r1 || l2 == r2) continue;
      CircularArc a = inscribed_arc(l1, r1, rng.uniform(0.2, 2.8), Side::Left);
      CircularArc b = inscribed_arc(l2, r2, rng.uniform(0.2, 2.8), Side::Left);
      double tol = 1e-9 * (a.radius + b.radius + dist(a.center, b.center));
      for (Point p : arc_arc_intersections(a, b).points) {
        CHECK(std::abs(dist(p, a.center) - a.radius) < tol);
        CHECK(std::abs(dist(p, b.center) - b.radius) < tol);
        CHECK(a.contains_angle(angle_of(p - a.center), tol));
        CHECK(b.contains_angle(angle_of(p - b.center), tol));
      }
    }
  }
}

TEST_CASE("arc_line_intersections: spec examples") {
  CircularArc thales = inscribed_arc({0, 0}, {1, 0}, kPi / 2, Side::Left);
  SUBCASE("vertical midline") {
    auto pts = arc_line_intersections(thales, {0.5, -1}, {0.5, 2});
    REQUIRE(pts.size() == 1);
    CHECK(pts[0].x == doctest::Approx(0.5));
    CHECK(pts[0].y == doctest::Approx(0.5));
  }
  SUBCASE("the chord line meets the arc at its endpoints") {
    auto pts = arc_line_intersections(thales, {-1, 0}, {2, 0});
    REQUIRE(pts.size() == 2);
    std::sort(pts.begin(), pts.end(), lex_less);
    CHECK(dist(pts[0], {0, 0}) < 1e-9);
    CHECK(dist(pts[1], {1, 0}) < 1e-9);
  }
  SUBCASE("random instances agree with a dense sampling oracle") {
    Rng rng(31);
    for (int rep = 0; rep < 200; ++rep) {
      Point l = rng.point(-2, 2), r = rng.point(-2, 2);
      if (l == r) continue;
      CircularArc a = inscribed_arc(l, r, rng.uniform(0.3, 2.8), Side::Left);
      Point s = rng.point(-3, 3), e = rng.point(-3, 3);
      if (s == e) continue;
      auto got = arc_line_intersections(a, s, e);
      // sampling oracle: sign changes of the segment side function along the arc
      Point d = e - s;
      int oracle = 0;
      const int N = 4000;
      double prev = 0;
      for (int k = 0; k <= N; ++k) {
        Point p = a.point_at(static_cast<double>(k) / N);
        double side = cross(d, p - s);
        // the crossing must also project into the segment
        double t = dot(p - s, d) / norm2(d);
        if (k > 0 && prev * side < 0 && t > 1e-3 && t < 1 - 1e-3) ++oracle;
        prev = side;
      }
      // count reported intersections strictly inside both objects
      int strict = 0;
      for (Point p : got) {
        double t = dot(p - s, d) / norm2(d);
        double off = a.offset_of(angle_of(p - a.center));
        if (t > 1e-3 && t < 1 - 1e-3 && off > 1e-6 && off < a.sweep - 1e-6) ++strict;
      }
      CHECK(strict == oracle);
      double tol = 1e-9 * std::max(a.radius + norm(a.center), dist(s, e));
      for (Point p : got) {
        CHECK(std::abs(dist(p, a.center) - a.radius) < tol);
        CHECK(dist_point_segment(p, s, e) < tol);
      }
    }
  }
}
