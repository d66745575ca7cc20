#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "acmc/errors.hpp"
#include "acmc/isoperimetry.hpp"

using namespace acmc;

namespace {
constexpr double PI = 3.14159265358979323846;

MeshPtr make(DomainKind k, double h, double r_in = 0, Vec2 off = {0, 0}) {
  DomainSpec s;
  s.kind = k;
  s.h = h;
  s.r_in = r_in;
  s.hole_offset = off;
  return build_domain(s);
}

// ball at the wall of the unit disk: exact two-circle lens area and the exact
// free-arc length, independent of the clipping code under test
double lens_area_unit(double r) {
  return r * r * std::acos(r / 2) + std::acos(1 - r * r / 2) - 0.5 * r * std::sqrt(4 - r * r);
}
double disk_wall_ball_radius(double m) {
  double lo = 0, hi = 1;
  for (int i = 0; i < 200; ++i) {
    double mid = 0.5 * (lo + hi);
    (lens_area_unit(mid) < m ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}
double disk_wall_free_arc(double r) { return r * (2 * PI - 2 * std::acos(-r / 2)); }
}  // namespace

TEST_CASE("euclidean reference perimeters") {
  CHECK(euclidean_profile(PI, false) == doctest::Approx(2 * PI).epsilon(1e-14));
  CHECK(euclidean_profile(PI / 2, true) == doctest::Approx(PI).epsilon(1e-14));
  CHECK(euclidean_profile(1.0, true) / euclidean_profile(1.0, false) ==
        doctest::Approx(1 / std::sqrt(2.0)).epsilon(1e-14));
}

TEST_CASE("disk: wall half-balls match the lens oracle, interior balls are euclidean") {
  auto mesh = make(DomainKind::Disk, 0.05);
  double m = 0.01;

  auto neu = estimate_profile(*mesh, m, BC::Neumann, 64);
  double r_star = disk_wall_ball_radius(m);
  CHECK(neu.I_M == doctest::Approx(disk_wall_free_arc(r_star)).epsilon(1e-10));
  CHECK(std::abs(neu.I_M / std::sqrt(2 * PI * m) - 1) < 0.05);
  CHECK(neu.best_component >= 0);
  CHECK(norm(neu.best_center) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(neu.I_M <= neu.I_bar_M + 1e-12);

  auto dir = estimate_profile(*mesh, m, BC::Dirichlet, 64);
  CHECK(dir.I_bar_M == doctest::Approx(2 * std::sqrt(PI * m)).epsilon(1e-10));
  CHECK(dir.best_component == -1);
  CHECK(std::abs(dir.I_M / std::sqrt(2 * PI * m) - 1) < 0.05);
  CHECK(dir.method == ProfileMethod::ExhaustiveSmall);
  CHECK(neu.method == ProfileMethod::CandidateFamily);
}

TEST_CASE("annulus: the outer wall wins the relative-perimeter contest") {
  auto mesh = make(DomainKind::Annulus, 0.05, 0.5);
  double m = 0.005;
  auto est = estimate_profile(*mesh, m, BC::Neumann, 96);

  // wall with larger curvature seen from inside (outer, +1 vs hole, -2)
  CHECK(norm(est.best_center) == doctest::Approx(1.0).epsilon(1e-9));

  double r_out = disk_wall_ball_radius(m);
  CHECK(est.I_M == doctest::Approx(disk_wall_free_arc(r_out)).epsilon(1e-9));

  // hole-side candidate, exact closed form: area pi r^2 - lens, arc 2 r acos(-r)
  double lo = 0, hi = 0.5;
  for (int i = 0; i < 200; ++i) {
    double mid = 0.5 * (lo + hi);
    double a = PI * mid * mid -
               (mid * mid * std::acos(mid / 1.0) + 0.25 * std::acos(1 - 2 * mid * mid) -
                0.5 * mid * std::sqrt(1 - mid * mid));
    (a < m ? lo : hi) = mid;
  }
  double r_h = 0.5 * (lo + hi);
  double p_hole = 2 * r_h * std::acos(-r_h);
  CHECK(est.I_M < p_hole - 1e-4);
}

TEST_CASE("indicator regions: exact half-ball on a rectangle wall") {
  DomainSpec s;
  s.kind = DomainKind::Rectangle;
  s.width = 2.0;
  s.height = 1.0;
  s.h = 0.05;
  auto mesh = build_domain(s);

  double r = 0.15, m = PI * r * r / 2;
  auto reg = make_ball_region(mesh, {1.0, 0.0}, m);
  CHECK(reg.ball.radius == doctest::Approx(r).epsilon(1e-6));
  CHECK(reg.relative_perimeter == doctest::Approx(PI * r).epsilon(1e-5));
  CHECK(reg.full_perimeter == doctest::Approx((PI + 2) * r).epsilon(1e-5));
  CHECK(std::abs(reg.volume - m) < 1e-8 * mesh->area);
  CHECK(reg.tri_fraction.minCoeff() >= 0.0);
  CHECK(reg.tri_fraction.maxCoeff() <= 1.0);
  double frac_area = 0;
  for (size_t t = 0; t < mesh->tris.size(); ++t) {
    Vec2 A = mesh->nodes[mesh->tris[t][0]], B = mesh->nodes[mesh->tris[t][1]],
         C = mesh->nodes[mesh->tris[t][2]];
    frac_area += reg.tri_fraction[Eigen::Index(t)] * 0.5 * std::abs(cross(B - A, C - A));
  }
  CHECK(frac_area == doctest::Approx(reg.volume).epsilon(1e-9));

  double sigma = 1.0 / 3;
  CHECK(limit_energy(reg, sigma, BC::Neumann) == doctest::Approx(sigma * PI * r).epsilon(1e-5));
  CHECK(limit_energy(reg, sigma, BC::Neumann) <= limit_energy(reg, sigma, BC::Dirichlet));

  auto inner = make_ball_region(mesh, {1.0, 0.5}, 0.01);
  CHECK(inner.relative_perimeter == doctest::Approx(inner.full_perimeter).epsilon(1e-12));
  CHECK(inner.relative_perimeter == doctest::Approx(2 * std::sqrt(PI * 0.01)).epsilon(1e-5));
}

TEST_CASE("profile grows with area") {
  auto mesh = make(DomainKind::Disk, 0.08);
  double prev_n = 0, prev_d = 0;
  for (double m : {0.002, 0.004, 0.006, 0.008, 0.01}) {
    auto n = estimate_profile(*mesh, m, BC::Neumann, 48);
    auto d = estimate_profile(*mesh, m, BC::Dirichlet, 48);
    CHECK(n.I_M > prev_n);
    CHECK(d.I_bar_M > prev_d);
    prev_n = n.I_M;
    prev_d = d.I_bar_M;
  }
}

TEST_CASE("euclidean ratios tighten as the area shrinks") {
  auto mesh = make(DomainKind::Disk, 0.04);
  double last_n = 2, last_d = 2;
  for (double m : {1e-2, 5e-3, 2.5e-3}) {
    double rn = estimate_profile(*mesh, m, BC::Neumann, 128).I_M / std::sqrt(2 * PI * m);
    double rd = estimate_profile(*mesh, m, BC::Dirichlet, 128).I_bar_M / (2 * std::sqrt(PI * m));
    CHECK(rn > 0.9);
    CHECK(rn < 1.1);
    CHECK(rd > 0.9);
    CHECK(rd < 1.1);
    CHECK(std::abs(rn - 1) <= std::abs(last_n - 1) + 1e-12);
    CHECK(std::abs(rd - 1) <= std::abs(last_d - 1) + 1e-12);
    last_n = rn;
    last_d = rd;
  }
}

TEST_CASE("sublevel thresholds") {
  auto pot = quartic_potential();
  double sigma = surface_tension(pot);

  auto disk = make(DomainKind::Disk, 0.05);
  auto est = estimate_profile(*disk, 0.01, BC::Neumann, 64);
  // constant wall curvature: max H - min H + 1 collapses to 1
  CHECK(sublevel_threshold(*disk, pot, est, BC::Neumann) ==
        doctest::Approx(sigma * est.I_M + sigma * 0.01).epsilon(1e-12));

  auto ecc = make(DomainKind::EccentricAnnulus, 0.05, 0.4, {0.25, 0.0});
  auto est_e = estimate_profile(*ecc, 0.005, BC::Neumann, 64);
  // curvatures +1 and -2.5, so the parenthesis is 4.5
  CHECK(sublevel_threshold(*ecc, pot, est_e, BC::Neumann) ==
        doctest::Approx(sigma * est_e.I_M + sigma * 4.5 * 0.005).epsilon(1e-9));
  CHECK(sublevel_threshold(*ecc, pot, est_e, BC::Neumann) >= sigma * est_e.I_M);

  auto est_d = estimate_profile(*disk, 0.01, BC::Dirichlet, 64);
  CHECK(sublevel_threshold(*disk, pot, est_d, BC::Dirichlet, 1.0, 0.7) ==
        doctest::Approx(sigma * est_d.I_bar_M + 0.7 * 0.01).epsilon(1e-12));

  double last = 10;
  for (double m = 0.01; m > 3e-4; m /= 2) {
    auto e = estimate_profile(*disk, m, BC::Neumann, 48);
    double ratio = sublevel_threshold(*disk, pot, e, BC::Neumann) / (sigma * e.I_M);
    CHECK(ratio > 1.0);
    CHECK(ratio < last);
    last = ratio;
  }
  CHECK(last < 1.02);
}

TEST_CASE("oversized volumes are rejected") {
  auto disk = make(DomainKind::Disk, 0.1);
  CHECK_THROWS_AS(estimate_profile(*disk, 2.0, BC::Neumann, 16), VolumeTooLarge);
  CHECK_THROWS_AS(estimate_profile(*disk, -0.1, BC::Neumann, 16), VolumeTooLarge);
  CHECK_THROWS_AS(estimate_profile(*disk, 4.0, BC::Dirichlet, 16), VolumeTooLarge);
}
