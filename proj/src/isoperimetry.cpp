#include "acmc/isoperimetry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <tuple>

#include "acmc/errors.hpp"

namespace acmc {
namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kInf = std::numeric_limits<double>::infinity();

// positive inside, distance to the nearest wall
double wall_clearance(const DomainGeom& g, Vec2 p) {
  double d;
  if (g.is_rect)
    d = std::min(std::min(p.x, g.rect_w - p.x), std::min(p.y, g.rect_h - p.y));
  else
    d = g.outer_radius - dist(p, g.outer_center);
  if (g.has_hole) d = std::min(d, dist(p, g.hole_center) - g.hole_radius);
  return d;
}

// nearest point of the analytic wall; mesh boundary nodes sit on chords, so
// candidate centers are pushed back onto the true curve before clipping
Vec2 snap_to_wall(const DomainGeom& g, Vec2 p) {
  if (g.is_rect) {
    double cx = std::clamp(p.x, 0.0, g.rect_w), cy = std::clamp(p.y, 0.0, g.rect_h);
    double dl = p.x, dr = g.rect_w - p.x, db = p.y, dt = g.rect_h - p.y;
    double dm = std::min(std::min(dl, dr), std::min(db, dt));
    if (dm == dl) return {0.0, cy};
    if (dm == dr) return {g.rect_w, cy};
    if (dm == db) return {cx, 0.0};
    return {cx, g.rect_h};
  }
  Vec2 u = p - g.outer_center;
  double nu = norm(u);
  Vec2 q = nu > 1e-300 ? g.outer_center + (g.outer_radius / nu) * u
                       : Vec2{g.outer_center.x + g.outer_radius, g.outer_center.y};
  double best = std::abs(g.outer_radius - nu);
  if (g.has_hole) {
    Vec2 v = p - g.hole_center;
    double nv = norm(v);
    if (nv > 1e-300 && std::abs(nv - g.hole_radius) < best)
      q = g.hole_center + (g.hole_radius / nv) * v;
  }
  return q;
}

// radius whose clipped area equals m; clipped area grows monotonically in r
std::pair<double, ClippedBall> fit_radius(const DomainGeom& g, Vec2 c, double m, double diameter) {
  double lo = 0.25 * std::sqrt(m / kPi);  // area(lo) <= pi lo^2 = m/16
  double hi = std::sqrt(2.0 * m / kPi);
  int grow = 0;
  while (clip_ball(g, c, hi).area < m) {
    hi *= 1.4;
    if (hi > 4 * diameter || ++grow > 60)
      throw VolumeTooLarge("no ball about this center reaches the requested area");
  }
  for (int it = 0; it < 90 && hi - lo > 1e-15 * hi; ++it) {
    double mid = 0.5 * (lo + hi);
    (clip_ball(g, c, mid).area < m ? lo : hi) = mid;
  }
  double r = 0.5 * (lo + hi);
  return {r, clip_ball(g, c, r)};
}

}  // namespace

double euclidean_profile(double m, bool half) {
  return half ? std::sqrt(2 * kPi * m) : 2 * std::sqrt(kPi * m);
}

IndicatorRegion make_ball_region(const MeshPtr& mesh, Vec2 center, double mass) {
  if (!mesh->has_geom)
    throw Error("ball regions need the analytic domain shape");
  IndicatorRegion reg;
  reg.mesh = mesh;
  reg.ball = ball_indicator(*mesh, center, mass);
  double r = reg.ball.radius;

  const DomainMesh& mm = *mesh;
  reg.tri_fraction.resize(Eigen::Index(mm.tris.size()));
  for (size_t t = 0; t < mm.tris.size(); ++t) {
    Vec2 A = mm.nodes[mm.tris[t][0]], B = mm.nodes[mm.tris[t][1]], C = mm.nodes[mm.tris[t][2]];
    double ta = 0.5 * std::abs(cross(B - A, C - A));
    Vec2 cen = (1.0 / 3) * (A + B + C);
    double ecc = std::max(dist(cen, A), std::max(dist(cen, B), dist(cen, C)));
    double d = dist(cen, center);
    double cov;
    if (d - ecc >= r)
      cov = 0.0;
    else if (d + ecc <= r)
      cov = ta;
    else
      cov = disk_triangle_area(center, r, A, B, C);
    reg.tri_fraction[Eigen::Index(t)] = ta > 0 ? std::clamp(cov / ta, 0.0, 1.0) : 0.0;
  }
  reg.volume = reg.ball.vol;

  ClippedBall cb = clip_ball(mm.geom, center, r);
  reg.relative_perimeter = cb.free_arc;
  reg.full_perimeter = cb.free_arc + cb.wall_length;
  return reg;
}

double limit_energy(const IndicatorRegion& region, double sigma, BC mode) {
  return sigma * (mode == BC::Neumann ? region.relative_perimeter : region.full_perimeter);
}

ProfileEstimate estimate_profile(const DomainMesh& mesh, double m, BC mode, int n_centers) {
  if (!mesh.has_geom)
    throw Error("profile estimation needs the analytic domain shape");
  if (!(m > 0) || m >= mesh.area)
    throw VolumeTooLarge("area must lie strictly between 0 and the domain area");
  if (std::sqrt(2 * m / kPi) >= mesh.min_feature)
    throw VolumeTooLarge("optimal ball radius exceeds the domain feature size");
  if (n_centers < 1) throw Error("need at least one candidate center per loop");

  const DomainGeom& g = mesh.geom;
  ProfileEstimate est;
  est.m = m;
  est.I_M = est.I_bar_M = kInf;
  double best_key = kInf;
  double r_free = std::sqrt(m / kPi);

  auto consider = [&](Vec2 c, int comp) {
    double r, rel, full;
    if (wall_clearance(g, c) > r_free) {  // untouched ball, closed form
      r = r_free;
      rel = full = 2 * kPi * r;
    } else {
      ClippedBall cb;
      std::tie(r, cb) = fit_radius(g, c, m, mesh.diameter);
      rel = cb.free_arc;
      full = cb.free_arc + cb.wall_length;
    }
    est.I_M = std::min(est.I_M, rel);
    est.I_bar_M = std::min(est.I_bar_M, full);
    double key = mode == BC::Neumann ? rel : full;
    if (key < best_key) {
      best_key = key;
      est.best_center = c;
      est.best_radius = r;
      est.best_component = comp;
    }
  };

  if (mode == BC::Neumann) {
    est.method = ProfileMethod::CandidateFamily;
    for (size_t l = 0; l < mesh.loops.size(); ++l) {
      double L = mesh.loop_length[l];
      for (int j = 0; j < n_centers; ++j) {
        Vec2 p = boundary_point(mesh, int(l), (j + 0.5) * L / n_centers).p;
        consider(snap_to_wall(g, p), int(l));
      }
    }
  } else {
    est.method = ProfileMethod::ExhaustiveSmall;
    for (int i = 0; i < mesh.n_nodes(); ++i) {
      int comp = mesh.node_component[i];
      Vec2 c = comp >= 0 ? snap_to_wall(g, mesh.nodes[i]) : mesh.nodes[i];
      consider(c, comp);
    }
  }
  return est;
}

double sublevel_threshold(const DomainMesh& mesh, const PotentialSpec& pot,
                          const ProfileEstimate& est, BC mode, double gamma_hat,
                          double slack_factor) {
  double sigma = surface_tension(pot);
  if (mode == BC::Dirichlet) return sigma * est.I_bar_M + slack_factor * est.m;
  double hmax = -kInf, hmin = kInf;
  for (int i : mesh.boundary_nodes) {
    hmax = std::max(hmax, mesh.curvature[i]);
    hmin = std::min(hmin, mesh.curvature[i]);
  }
  return sigma * est.I_M + sigma * gamma_hat * (hmax - hmin + 1) * est.m;
}

double sublevel_threshold(const DomainMesh& mesh, const PotentialSpec& pot, double m, BC mode,
                          double gamma_hat, double slack_factor, int n_centers) {
  return sublevel_threshold(mesh, pot, estimate_profile(mesh, m, mode, n_centers), mode,
                            gamma_hat, slack_factor);
}

}  // namespace acmc
