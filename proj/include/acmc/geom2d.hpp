#pragma once
#include <cmath>
#include <utility>
#include <vector>

// Exact plane geometry for balls clipped against domains bounded by circles
// or an axis-aligned rectangle.  Areas and arc lengths come from closed-form
// circular-segment expressions (Green's theorem over the clipped boundary),
// not from sampling, so they serve as reference values for the mesh-based
// quadrature elsewhere.

namespace acmc {

struct Vec2 {
  double x = 0, y = 0;
};

inline Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
inline Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
inline Vec2 operator*(double s, Vec2 a) { return {s * a.x, s * a.y}; }
inline double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
inline double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }
inline double norm(Vec2 a) { return std::hypot(a.x, a.y); }
inline double dist(Vec2 a, Vec2 b) { return norm(a - b); }

// Shape of the domain seen as analytic curves.  Circle-bounded kinds use
// outer_center/outer_radius plus an optional hole; the rectangle kind is
// [0,w] x [0,h].
struct DomainGeom {
  bool is_rect = false;
  Vec2 outer_center{0, 0};
  double outer_radius = 1.0;
  double rect_w = 0, rect_h = 0;
  bool has_hole = false;
  Vec2 hole_center{0, 0};
  double hole_radius = 0;
};

bool geom_contains(const DomainGeom& g, Vec2 p);
double geom_area(const DomainGeom& g);

// angle interval [lo, hi] with lo <= hi, angles unwrapped so hi may exceed 2*pi
using AngleInterval = std::pair<double, double>;

// Ball B(c,r) intersected with the domain.
//   area        exact area of B ∩ M
//   free_arc    length of ∂B inside the open domain (the relative boundary)
//   wall_length length of ∂M inside B (rest of the full boundary of B ∩ M)
//   free_arcs   the ∂B pieces as angle intervals about c
struct ClippedBall {
  double area = 0;
  double free_arc = 0;
  double wall_length = 0;
  std::vector<AngleInterval> free_arcs;
};

ClippedBall clip_ball(const DomainGeom& g, Vec2 c, double r);

// Distance from x to the union of arcs of the circle (c, r); arcs as returned
// in ClippedBall::free_arcs.  Unsigned.
double dist_to_arcs(Vec2 x, Vec2 c, double r, const std::vector<AngleInterval>& arcs);

// Exact area of disk(c, r) ∩ triangle ABC (any orientation).
double disk_triangle_area(Vec2 c, double r, Vec2 A, Vec2 B, Vec2 C);

}  // namespace acmc
