#include "acmc/geom2d.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace acmc {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kTwoPi = 2 * kPi;

// One clause of a region predicate: inside/outside a circle, or a halfplane
// n·x <= b.  A domain is the conjunction of its clauses.
struct Constraint {
  enum Kind { Circle, Half } kind = Circle;
  Vec2 q{0, 0};
  double R = 0;
  bool keep_inside = true;
  Vec2 n{0, 0};
  double b = 0;

  bool ok(Vec2 p) const {
    if (kind == Circle) return (dist(p, q) <= R) == keep_inside;
    return dot(n, p) <= b;
  }
};

std::vector<Constraint> domain_constraints(const DomainGeom& g) {
  std::vector<Constraint> cs;
  if (g.is_rect) {
    cs.push_back({Constraint::Half, {}, 0, true, {-1, 0}, 0});
    cs.push_back({Constraint::Half, {}, 0, true, {1, 0}, g.rect_w});
    cs.push_back({Constraint::Half, {}, 0, true, {0, -1}, 0});
    cs.push_back({Constraint::Half, {}, 0, true, {0, 1}, g.rect_h});
  } else {
    cs.push_back({Constraint::Circle, g.outer_center, g.outer_radius, true, {}, 0});
    if (g.has_hole)
      cs.push_back({Constraint::Circle, g.hole_center, g.hole_radius, false, {}, 0});
  }
  return cs;
}

// Pieces of the circle (c, r) satisfying every constraint, as angle intervals.
// Endpoints are the exact cap angles of each constraint; membership of each
// span is decided at its midpoint, where it is constant.
std::vector<AngleInterval> arcs_inside(Vec2 c, double r,
                                       const std::vector<Constraint>& cons) {
  std::vector<double> cuts;
  for (const auto& cn : cons) {
    double t, phi0;
    if (cn.kind == Constraint::Circle) {
      double d = dist(c, cn.q);
      if (d < 1e-14 * (r + cn.R + 1)) continue;  // concentric: no cap boundary
      t = (d * d + r * r - cn.R * cn.R) / (2 * r * d);
      phi0 = std::atan2(cn.q.y - c.y, cn.q.x - c.x);
    } else {
      double nn = norm(cn.n);
      t = (cn.b - dot(cn.n, c)) / (r * nn);
      phi0 = std::atan2(cn.n.y, cn.n.x);
    }
    if (t <= -1 || t >= 1) continue;  // circle entirely on one side
    double del = std::acos(std::clamp(t, -1.0, 1.0));
    double a = phi0 - del, b = phi0 + del;
    auto wrap = [](double x) {
      x = std::fmod(x, kTwoPi);
      return x < 0 ? x + kTwoPi : x;
    };
    cuts.push_back(wrap(a));
    cuts.push_back(wrap(b));
  }

  auto at = [&](double phi) { return c + Vec2{r * std::cos(phi), r * std::sin(phi)}; };
  auto inside = [&](double phi) {
    Vec2 p = at(phi);
    for (const auto& cn : cons)
      if (!cn.ok(p)) return false;
    return true;
  };

  std::vector<AngleInterval> out;
  if (cuts.empty()) {
    if (inside(0.0)) out.push_back({0.0, kTwoPi});
    return out;
  }
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end(),
                         [](double a, double b) { return b - a < 1e-13; }),
             cuts.end());
  size_t n = cuts.size();
  for (size_t i = 0; i < n; ++i) {
    double lo = cuts[i];
    double hi = (i + 1 < n) ? cuts[i + 1] : cuts[0] + kTwoPi;
    if (hi - lo < 1e-12) continue;
    if (!inside(0.5 * (lo + hi))) continue;
    if (!out.empty() && std::abs(out.back().second - lo) < 1e-12)
      out.back().second = hi;  // merge contiguous spans
    else
      out.push_back({lo, hi});
  }
  // wraparound merge: last span ending at cuts[0]+2pi continues into the first
  if (out.size() > 1 && std::abs(out.back().second - (out.front().first + kTwoPi)) < 1e-12) {
    out.front().first = out.back().first - kTwoPi;
    out.pop_back();
  }
  return out;
}

double measure(const std::vector<AngleInterval>& ivs) {
  double s = 0;
  for (auto& iv : ivs) s += iv.second - iv.first;
  return s;
}

// 0.5 * integral of (x dy - y dx) along the arc of circle (q, rho), phi in [a, b].
double green_arc(Vec2 q, double rho, double a, double b) {
  return 0.5 * (rho * rho * (b - a) +
                rho * (q.x * (std::sin(b) - std::sin(a)) - q.y * (std::cos(b) - std::cos(a))));
}

double green_arcs(Vec2 q, double rho, const std::vector<AngleInterval>& ivs) {
  double s = 0;
  for (auto& iv : ivs) s += green_arc(q, rho, iv.first, iv.second);
  return s;
}

}  // namespace

bool geom_contains(const DomainGeom& g, Vec2 p) {
  if (g.is_rect)
    return p.x >= 0 && p.x <= g.rect_w && p.y >= 0 && p.y <= g.rect_h;
  if (dist(p, g.outer_center) > g.outer_radius) return false;
  if (g.has_hole && dist(p, g.hole_center) < g.hole_radius) return false;
  return true;
}

double geom_area(const DomainGeom& g) {
  if (g.is_rect) return g.rect_w * g.rect_h;
  double a = kPi * g.outer_radius * g.outer_radius;
  if (g.has_hole) a -= kPi * g.hole_radius * g.hole_radius;
  return a;
}

ClippedBall clip_ball(const DomainGeom& g, Vec2 c, double r) {
  ClippedBall cb;
  auto domcons = domain_constraints(g);
  cb.free_arcs = arcs_inside(c, r, domcons);
  cb.free_arc = r * measure(cb.free_arcs);
  cb.area = green_arcs(c, r, cb.free_arcs);

  Constraint in_ball{Constraint::Circle, c, r, true, {}, 0};
  if (g.is_rect) {
    // walk the rectangle CCW, keep the sub-segments inside the ball
    Vec2 v[5] = {{0, 0}, {g.rect_w, 0}, {g.rect_w, g.rect_h}, {0, g.rect_h}, {0, 0}};
    for (int e = 0; e < 4; ++e) {
      Vec2 P = v[e] - c, D = v[e + 1] - v[e];
      double dd = dot(D, D), tb = dot(P, D), cc = dot(P, P) - r * r;
      double disc = tb * tb - dd * cc;
      if (disc <= 0) continue;
      double sq = std::sqrt(disc);
      double t1 = std::max((-tb - sq) / dd, 0.0), t2 = std::min((-tb + sq) / dd, 1.0);
      if (t1 >= t2) continue;
      Vec2 A = v[e] + t1 * D, B = v[e] + t2 * D;
      cb.area += 0.5 * cross(A, B);
      cb.wall_length += dist(A, B);
    }
  } else {
    std::vector<Constraint> cs{in_ball};
    if (g.has_hole)
      cs.push_back({Constraint::Circle, g.hole_center, g.hole_radius, false, {}, 0});
    auto outer = arcs_inside(g.outer_center, g.outer_radius, cs);
    cb.area += green_arcs(g.outer_center, g.outer_radius, outer);
    cb.wall_length += g.outer_radius * measure(outer);
    if (g.has_hole) {
      std::vector<Constraint> ch{in_ball,
                                 {Constraint::Circle, g.outer_center, g.outer_radius, true, {}, 0}};
      auto hole = arcs_inside(g.hole_center, g.hole_radius, ch);
      cb.area -= green_arcs(g.hole_center, g.hole_radius, hole);  // hole is traversed clockwise
      cb.wall_length += g.hole_radius * measure(hole);
    }
  }
  return cb;
}

double dist_to_arcs(Vec2 x, Vec2 c, double r, const std::vector<AngleInterval>& arcs) {
  if (arcs.empty()) return std::numeric_limits<double>::infinity();
  Vec2 d = x - c;
  double rho = norm(d);
  double phi = std::atan2(d.y, d.x);
  if (phi < 0) phi += kTwoPi;
  double best = std::numeric_limits<double>::infinity();
  for (auto& iv : arcs) {
    bool on = (phi >= iv.first && phi <= iv.second) ||
              (phi + kTwoPi >= iv.first && phi + kTwoPi <= iv.second) ||
              (phi - kTwoPi >= iv.first && phi - kTwoPi <= iv.second);
    if (on && rho > 1e-300) {
      best = std::min(best, std::abs(rho - r));
    } else {
      for (double a : {iv.first, iv.second}) {
        Vec2 p = c + Vec2{r * std::cos(a), r * std::sin(a)};
        best = std::min(best, dist(x, p));
      }
      if (rho <= 1e-300) best = std::min(best, r);
    }
  }
  return best;
}

namespace {

double edge_contrib(Vec2 c, double r, Vec2 A, Vec2 B) {
  Vec2 a = A - c, b = B - c;
  auto sector = [&](Vec2 u, Vec2 v) {
    double ang = std::atan2(cross(u, v), dot(u, v));
    return 0.5 * r * r * ang;
  };
  Vec2 d = b - a;
  double dd = dot(d, d);
  if (dd < 1e-300) return 0.0;
  double tb = dot(a, d), cc = dot(a, a) - r * r;
  double disc = tb * tb - dd * cc;
  if (disc <= 0) return sector(a, b);  // segment misses the disk
  double sq = std::sqrt(disc);
  double t1 = std::max((-tb - sq) / dd, 0.0), t2 = std::min((-tb + sq) / dd, 1.0);
  if (t1 >= t2) return sector(a, b);
  Vec2 p1 = a + t1 * d, p2 = a + t2 * d;
  return sector(a, p1) + 0.5 * cross(p1, p2) + sector(p2, b);
}

}  // namespace

double disk_triangle_area(Vec2 c, double r, Vec2 A, Vec2 B, Vec2 C) {
  if (cross(B - A, C - A) < 0) std::swap(B, C);
  double s = edge_contrib(c, r, A, B) + edge_contrib(c, r, B, C) + edge_contrib(c, r, C, A);
  return std::clamp(s, 0.0, kPi * r * r);
}

}  // namespace acmc
