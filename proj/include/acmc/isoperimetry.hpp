#pragma once
#include <Eigen/Dense>

#include "acmc/field.hpp"
#include "acmc/mesh.hpp"
#include "acmc/potential.hpp"

namespace acmc {

// Perimeter of the Euclidean area-m ball: half = true gives the free arc of a
// half-ball at a straight wall, sqrt(2*pi*m); half = false the full circle,
// 2*sqrt(pi*m).
double euclidean_profile(double m, bool half);

// Sharp-interface region: a mass-calibrated ball clipped to the domain, kept
// both analytically and as per-triangle covered fractions.
struct IndicatorRegion {
  MeshPtr mesh;
  BallRegion ball;
  Eigen::VectorXd tri_fraction;   // covered fraction of each triangle, in [0,1]
  double volume = 0;              // mesh-quadrature area, equals ball.vol
  double relative_perimeter = 0;  // interface length interior to the domain
  double full_perimeter = 0;      // plus the portion running along the walls
};

IndicatorRegion make_ball_region(const MeshPtr& mesh, Vec2 center, double mass);

// sigma * relative perimeter under Neumann, sigma * full perimeter under
// Dirichlet (the wall portion costs because the field drops to zero there).
double limit_energy(const IndicatorRegion& region, double sigma, BC mode);

enum class ProfileMethod { CandidateFamily, ExhaustiveSmall };

// Outcome of perimeter minimization at fixed area over the ball candidates.
// Both minima come from the same sweep, so I_M <= I_bar_M always.
struct ProfileEstimate {
  double m = 0;
  double I_M = 0;      // least relative perimeter seen
  double I_bar_M = 0;  // least full perimeter seen
  Vec2 best_center{0, 0};
  double best_radius = 0;
  int best_component = -1;  // boundary loop of the winner, -1 for interior
  ProfileMethod method = ProfileMethod::CandidateFamily;
};

// Sweeps area-m balls: Neumann samples n_centers points along every wall
// loop, Dirichlet visits every mesh node.  Candidates are clipped with exact
// circular-segment geometry; boundary centers snap onto the analytic wall.
ProfileEstimate estimate_profile(const DomainMesh& mesh, double m, BC mode, int n_centers = 256);

// Energy level that the ball construction is guaranteed to undercut:
//   Neumann    sigma*I_M  + sigma*gamma_hat*(max H - min H + 1)*m
//   Dirichlet  sigma*I_bar_M + slack_factor*m
// with H the wall curvature seen from inside the domain.
double sublevel_threshold(const DomainMesh& mesh, const PotentialSpec& pot,
                          const ProfileEstimate& est, BC mode, double gamma_hat = 1.0,
                          double slack_factor = 1.0);
double sublevel_threshold(const DomainMesh& mesh, const PotentialSpec& pot, double m, BC mode,
                          double gamma_hat = 1.0, double slack_factor = 1.0, int n_centers = 256);

}  // namespace acmc
