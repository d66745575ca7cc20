#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>

#include "acmc/geom2d.hpp"

using namespace acmc;

namespace {

constexpr double PI = 3.14159265358979323846;

// two-disk intersection area, textbook closed form, written independently of
// the Green-integration route under test
double lens_area(double d, double r1, double r2) {
  if (d >= r1 + r2) return 0;
  if (d <= std::abs(r1 - r2)) {
    double r = std::min(r1, r2);
    return PI * r * r;
  }
  double a1 = std::acos((d * d + r1 * r1 - r2 * r2) / (2 * d * r1));
  double a2 = std::acos((d * d + r2 * r2 - r1 * r1) / (2 * d * r2));
  double k = (-d + r1 + r2) * (d + r1 - r2) * (d - r1 + r2) * (d + r1 + r2);
  return r1 * r1 * a1 + r2 * r2 * a2 - 0.5 * std::sqrt(k);
}

struct MC {
  double estimate, stderr3;  // estimate and 3 standard errors
};

MC mc_area(const DomainGeom& g, Vec2 c, double r, int n = 1000000) {
  std::mt19937_64 rng(12345);
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  int hits = 0;
  for (int i = 0; i < n; ++i) {
    Vec2 p{c.x + r * U(rng), c.y + r * U(rng)};
    if (dist(p, c) <= r && geom_contains(g, p)) ++hits;
  }
  double box = 4 * r * r;
  double p = double(hits) / n;
  return {box * p, 3 * box * std::sqrt(p * (1 - p) / n)};
}

MC mc_free_arc(const DomainGeom& g, Vec2 c, double r, int n = 1000000) {
  std::mt19937_64 rng(777);
  std::uniform_real_distribution<double> U(0.0, 2 * PI);
  int hits = 0;
  for (int i = 0; i < n; ++i) {
    double a = U(rng);
    if (geom_contains(g, c + Vec2{r * std::cos(a), r * std::sin(a)})) ++hits;
  }
  double p = double(hits) / n;
  return {2 * PI * r * p, 3 * 2 * PI * r * std::sqrt(p * (1 - p) / n)};
}

MC mc_wall(const DomainGeom& g, Vec2 c, double r, int n = 1000000) {
  // sample on each boundary circle of the domain, count the part inside the ball
  std::mt19937_64 rng(999);
  std::uniform_real_distribution<double> U(0.0, 2 * PI);
  double est = 0, var = 0;
  auto one = [&](Vec2 q, double R) {
    int hits = 0;
    for (int i = 0; i < n; ++i) {
      double a = U(rng);
      if (dist(q + Vec2{R * std::cos(a), R * std::sin(a)}, c) <= r) ++hits;
    }
    double p = double(hits) / n;
    est += 2 * PI * R * p;
    double se = 2 * PI * R * std::sqrt(p * (1 - p) / n);
    var += se * se;
  };
  one(g.outer_center, g.outer_radius);
  if (g.has_hole) one(g.hole_center, g.hole_radius);
  return {est, 3 * std::sqrt(var)};
}

}  // namespace

TEST_CASE("ball fully inside the domain") {
  DomainGeom disk;  // unit disk
  auto cb = clip_ball(disk, {0.2, 0.1}, 0.3);
  CHECK(cb.area == doctest::Approx(PI * 0.09).epsilon(1e-12));
  CHECK(cb.free_arc == doctest::Approx(2 * PI * 0.3).epsilon(1e-12));
  CHECK(cb.wall_length == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("half ball on a straight wall") {
  DomainGeom rect;
  rect.is_rect = true;
  rect.rect_w = 4;
  rect.rect_h = 2;
  auto cb = clip_ball(rect, {2.0, 0.0}, 0.5);
  CHECK(cb.area == doctest::Approx(PI * 0.25 / 2).epsilon(1e-12));
  CHECK(cb.free_arc == doctest::Approx(PI * 0.5).epsilon(1e-12));
  CHECK(cb.wall_length == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("ball centered on the unit circle matches the lens formula") {
  DomainGeom disk;
  double r = 0.25;
  auto cb = clip_ball(disk, {1.0, 0.0}, r);
  CHECK(cb.area == doctest::Approx(lens_area(1.0, 1.0, r)).epsilon(1e-12));
  // chord geometry for the two arc lengths: intersection points subtend
  // alpha on the small circle, beta on the unit circle
  double ca = -r / 2;  // cos of half-angle opening on the small circle is derived below
  // place centers at O=(0,0), c=(1,0); points with |x|=1, |x-c|=r satisfy
  // cos(angle at c) = -r/2, cos(angle at O) = 1 - r^2/2
  double alpha = std::acos(ca);
  double beta = std::acos(1 - r * r / 2);
  CHECK(cb.free_arc == doctest::Approx(2 * r * (PI - alpha)).epsilon(1e-12));
  CHECK(cb.wall_length == doctest::Approx(2 * beta).epsilon(1e-12));
}

TEST_CASE("clipped balls on the eccentric annulus match Monte-Carlo") {
  DomainGeom g;
  g.has_hole = true;
  g.hole_center = {0.25, 0.0};
  g.hole_radius = 0.4;
  std::vector<std::pair<Vec2, double>> cases = {
      {{1.0, 0.0}, 0.2},    // on the outer circle
      {{0.65, 0.0}, 0.15},  // on the hole circle, thin side
      {{-0.15, 0.0}, 0.2},  // on the hole circle, thick side
      {{-0.7, 0.0}, 0.25},  // interior, clear of both walls
      {{0.8, 0.3}, 0.45},   // big ball clipping both walls
  };
  for (auto& [c, r] : cases) {
    CAPTURE(c.x);
    CAPTURE(c.y);
    CAPTURE(r);
    auto cb = clip_ball(g, c, r);
    auto a = mc_area(g, c, r);
    CHECK(std::abs(cb.area - a.estimate) <= a.stderr3);
    auto f = mc_free_arc(g, c, r);
    CHECK(std::abs(cb.free_arc - f.estimate) <= f.stderr3);
    auto w = mc_wall(g, c, r);
    CHECK(std::abs(cb.wall_length - w.estimate) <= w.stderr3);
  }
}

TEST_CASE("distance to the free arc of a clipped ball") {
  DomainGeom disk;
  SUBCASE("interior ball: plain distance to the circle") {
    auto cb = clip_ball(disk, {0.0, 0.0}, 0.3);
    CHECK(dist_to_arcs({0, 0}, {0, 0}, 0.3, cb.free_arcs) == doctest::Approx(0.3));
    CHECK(dist_to_arcs({0.5, 0}, {0, 0}, 0.3, cb.free_arcs) == doctest::Approx(0.2));
    CHECK(dist_to_arcs({0.1, 0}, {0, 0}, 0.3, cb.free_arcs) == doctest::Approx(0.2));
  }
  SUBCASE("boundary half ball: beyond the arc ends the nearest point is a corner") {
    double r = 0.2;
    Vec2 c{1.0, 0.0};
    auto cb = clip_ball(disk, c, r);
    // a point deep along the wall, outside the ball
    Vec2 x{1.0 - 2 * r, 0.0};
    double direct = std::abs(dist(x, c) - r);
    double d = dist_to_arcs(x, c, r, cb.free_arcs);
    CHECK(d == doctest::Approx(direct).epsilon(1e-9));  // x faces the arc midpoint
    // a point whose angular position about c misses the arc span can only
    // see the arc endpoints
    Vec2 y{1.2, 0.1};
    double ends = 1e9;
    for (auto& iv : cb.free_arcs)
      for (double aa : {iv.first, iv.second})
        ends = std::min(ends, dist(y, c + Vec2{r * std::cos(aa), r * std::sin(aa)}));
    CHECK(dist_to_arcs(y, c, r, cb.free_arcs) == doctest::Approx(ends).epsilon(1e-12));
  }
}

TEST_CASE("disk-triangle intersection area") {
  SUBCASE("triangle inside disk") {
    Vec2 A{0, 0}, B{0.2, 0}, C{0, 0.2};
    CHECK(disk_triangle_area({0, 0}, 5.0, A, B, C) == doctest::Approx(0.02).epsilon(1e-12));
    CHECK(disk_triangle_area({0, 0}, 5.0, A, C, B) == doctest::Approx(0.02).epsilon(1e-12));
  }
  SUBCASE("disk inside triangle") {
    Vec2 A{-10, -10}, B{10, -10}, C{0, 15};
    CHECK(disk_triangle_area({0, 0}, 0.5, A, B, C) ==
          doctest::Approx(PI * 0.25).epsilon(1e-12));
  }
  SUBCASE("partial overlap matches Monte-Carlo") {
    Vec2 A{0, 0}, B{1, 0}, C{0.3, 0.8};
    Vec2 c{0.6, 0.3};
    double r = 0.35;
    double exact = disk_triangle_area(c, r, A, B, C);
    std::mt19937_64 rng(42);
    std::uniform_real_distribution<double> U(-1.0, 1.0);
    int n = 1000000, hits = 0;
    auto inside_tri = [&](Vec2 p) {
      double s1 = cross(B - A, p - A), s2 = cross(C - B, p - B), s3 = cross(A - C, p - C);
      return (s1 >= 0 && s2 >= 0 && s3 >= 0) || (s1 <= 0 && s2 <= 0 && s3 <= 0);
    };
    for (int i = 0; i < n; ++i) {
      Vec2 p{c.x + r * U(rng), c.y + r * U(rng)};
      if (dist(p, c) <= r && inside_tri(p)) ++hits;
    }
    double box = 4 * r * r, p = double(hits) / n;
    double mc = box * p, se3 = 3 * box * std::sqrt(p * (1 - p) / n);
    CHECK(std::abs(exact - mc) <= se3);
  }
}
