#include "acmc/photography.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "acmc/errors.hpp"

namespace acmc {
namespace {
constexpr double kPi = 3.14159265358979323846;
}

std::pair<ScalarField, RecoveryParams> recovery_sequence(const IndicatorRegion& region,
                                                         const ProfileTable& profile,
                                                         double target_mass, BC mode) {
  const MeshPtr& mesh = region.mesh;
  const DomainMesh& mm = *mesh;
  const Eigen::VectorXd d = signed_distance(mm, region.ball);
  const int n = mm.n_nodes();

  auto field_at = [&](double delta) {
    Eigen::VectorXd u(n);
    for (int i = 0; i < n; ++i) u[i] = profile(d[i] + delta);
    return u;
  };

  const double eta = profile.eta;
  const double tol = 1e-8 * mm.area;

  RecoveryParams par;
  par.epsilon = profile.eps;
  par.eta = eta;

  Eigen::VectorXd u = field_at(0.0);
  double got = mm.ML.dot(u);
  if (got > target_mass + tol) {
    std::ostringstream os;
    os << "recovery mass " << got << " at zero shift already exceeds the target " << target_mass;
    throw MassUnreachable(os.str());
  }
  if (got < target_mass - tol) {
    Eigen::VectorXd top = field_at(eta);
    double got_top = mm.ML.dot(top);
    if (got_top < target_mass - tol) {
      par.delta = eta;
      par.mass_residual = target_mass - got_top;
      u = std::move(top);
    } else {
      double lo = 0, hi = eta;
      for (int it = 0; it < 200 && hi - lo > 1e-14 * std::max(eta, 1.0); ++it) {
        double mid = 0.5 * (lo + hi);
        (mm.ML.dot(field_at(mid)) < target_mass ? lo : hi) = mid;
      }
      par.delta = 0.5 * (lo + hi);
      u = field_at(par.delta);
      got = mm.ML.dot(u);
      if (std::abs(got - target_mass) > tol) {
        std::ostringstream os;
        os << "mass bisection stalled at " << got << " for target " << target_mass;
        throw MassUnreachable(os.str());
      }
    }
  }
  if (mode == BC::Dirichlet)
    for (int i : mm.boundary_nodes)
      if (u[i] != 0.0)
        throw SupportTouchesBoundary("transition skirt reaches a wall node");
  return {ScalarField(mesh, mode, std::move(u)), par};
}

Vec2 boundary_layer(const DomainMesh& mesh, Vec2 p) {
  BoundaryPoint q = project_to_boundary(mesh, p, false);
  double t = dist(p, q.p);
  double del = mesh.delta_M;
  if (t >= del) return p;
  double depth = del / 2 + t * t / (2 * del);
  return q.p + depth * q.normal;
}

PhotographOutput photograph_neumann(const MeshPtr& mesh, const PotentialSpec& pot,
                                    const ProfileTable& profile, const BoundaryPoint& p,
                                    double m) {
  IndicatorRegion region = make_ball_region(mesh, p.p, m);
  auto [field, par] = recovery_sequence(region, profile, m, BC::Neumann);
  double e = energy(field, pot, profile.eps);
  return {std::move(field), p.p, std::move(region), e, par};
}

PhotographOutput photograph_neumann(const MeshPtr& mesh, const PotentialSpec& pot,
                                    const BoundaryPoint& p, double m, double epsilon) {
  return photograph_neumann(mesh, pot, solve_profile(pot, epsilon), p, m);
}

PhotographOutput photograph_dirichlet(const MeshPtr& mesh, const PotentialSpec& pot,
                                      const ProfileTable& profile, Vec2 p, double m) {
  const DomainMesh& mm = *mesh;
  double r_free = std::sqrt(m / kPi);
  if (r_free + profile.eta >= mm.delta_M / 2) {
    std::ostringstream os;
    os << "ball radius " << r_free << " plus layer width " << profile.eta
       << " reaches half the collar depth " << mm.delta_M / 2;
    throw SupportTouchesBoundary(os.str());
  }
  Vec2 c = boundary_layer(mm, project_to_domain(mm, p));
  IndicatorRegion region = make_ball_region(mesh, c, m);
  if (region.ball.clipped)
    throw SupportTouchesBoundary("collar image ball is clipped by a wall");
  auto [field, par] = recovery_sequence(region, profile, m, BC::Dirichlet);
  double e = energy(field, pot, profile.eps);
  return {std::move(field), c, std::move(region), e, par};
}

PhotographOutput photograph_dirichlet(const MeshPtr& mesh, const PotentialSpec& pot, Vec2 p,
                                      double m, double epsilon) {
  return photograph_dirichlet(mesh, pot, solve_profile(pot, epsilon), p, m);
}

Vec2 barycenter(const ScalarField& u) {
  const DomainMesh& mm = *u.mesh;
  double wsum = 0;
  Vec2 acc{0, 0};
  for (int i = 0; i < mm.n_nodes(); ++i) {
    double w = mm.ML[i] * std::abs(u.u[i]);
    wsum += w;
    acc = acc + w * mm.nodes[i];
  }
  if (!(wsum > 1e-300)) throw ZeroMass("barycenter of a vanishing field");
  return (1.0 / wsum) * acc;
}

Vec2 compose_B(const ScalarField& u, BC mode, bool strict) {
  Vec2 b = barycenter(u);
  if (mode == BC::Neumann) return project_to_boundary(*u.mesh, b, strict).p;
  return project_to_domain(*u.mesh, b);
}

}  // namespace acmc
