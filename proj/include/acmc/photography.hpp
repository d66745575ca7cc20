#pragma once
#include <utility>

#include "acmc/energy.hpp"
#include "acmc/isoperimetry.hpp"

namespace acmc {

// Mass-correction bookkeeping for a recovery field u = profile(d + delta).
struct RecoveryParams {
  double epsilon = 0;
  double eta = 0;
  double delta = 0;          // shift in [0, eta] fixing the mass
  double mass_residual = 0;  // target minus achieved; nonzero only when even delta = eta falls short
};

// u(x) = profile(d(x) + delta), d the signed distance to the free interface
// (positive inside the region, negative outside, so the field is identically
// zero past the eta-skirt).  delta is bisected on [0, eta]; mass is
// nondecreasing in delta.  Throws MassUnreachable when delta = 0 already
// overshoots; when delta = eta still falls short the nearest achievable field
// is returned and the residual recorded.
std::pair<ScalarField, RecoveryParams> recovery_sequence(const IndicatorRegion& region,
                                                         const ProfileTable& profile,
                                                         double target_mass, BC mode);

struct PhotographOutput {
  ScalarField field;
  Vec2 source_point;  // emission point: p itself, or its collar image
  IndicatorRegion region;
  double energy_at_emission = 0;
  RecoveryParams params;
};

// Collar push: a point at wall distance t < delta_M moves to depth
// h(t) = delta_M/2 + t^2/(2 delta_M) along the inward normal; identity
// beyond.  h(delta_M) = delta_M with slope 1, so the two branches glue.
Vec2 boundary_layer(const DomainMesh& mesh, Vec2 p);

// Low-energy field concentrated at the boundary point p: the recovery of the
// mass-m ball clipped at p.  Caller enforces the (m, epsilon) caps.
PhotographOutput photograph_neumann(const MeshPtr& mesh, const PotentialSpec& pot,
                                    const ProfileTable& profile, const BoundaryPoint& p, double m);
PhotographOutput photograph_neumann(const MeshPtr& mesh, const PotentialSpec& pot,
                                    const BoundaryPoint& p, double m, double epsilon);

// Interior bump at the collar image of p, vanishing identically on the walls.
// Requires ball radius + eta < delta_M / 2, else SupportTouchesBoundary.
PhotographOutput photograph_dirichlet(const MeshPtr& mesh, const PotentialSpec& pot,
                                      const ProfileTable& profile, Vec2 p, double m);
PhotographOutput photograph_dirichlet(const MeshPtr& mesh, const PotentialSpec& pot, Vec2 p,
                                      double m, double epsilon);

// Center of mass of |u| under lumped-mass weights.  ZeroMass on a vanishing
// field.
Vec2 barycenter(const ScalarField& u);

// Barycenter projected onto the wall (Neumann) or clamped into the domain
// (Dirichlet).
Vec2 compose_B(const ScalarField& u, BC mode, bool strict = false);

}  // namespace acmc
