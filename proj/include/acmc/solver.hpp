#pragma once
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "acmc/energy.hpp"
#include "acmc/isoperimetry.hpp"
#include "acmc/photography.hpp"

namespace acmc {

struct SolveConfig {
  double epsilon = 0.01;
  double m = 0.01;
  BC bc = BC::Neumann;

  // flow; dt = 0 picks epsilon^2, the explicit-well stability scale
  double dt = 0.0;
  int max_steps = 4000;
  double stall_tol = 1e-11;

  double newton_tol = 1e-9;
  int newton_max_iter = 30;
  double newton_basin = 1e3;  // refuse refinement when the seed kkt exceeds this

  // dedup tolerances; 0 = scale with the bump: 0.2 sqrt(m), 0.05 c_m, 0.5 sqrt(m)
  double dedup_l2 = 0.0;
  double dedup_energy = 0.0;
  double dedup_bary = 0.0;

  int n_seeds = 16;
  double gamma_hat = 1.0;   // curvature slack in the Neumann threshold
  double mu_hat = 3.0;      // concentration radius multiplier
  double alpha = 0.1;       // tolerated mass fraction outside the ball
  double slack_factor = 1.0;

  std::uint64_t rng_seed = 0;
  int jobs = 1;
};

struct CriticalPointRecord {
  ScalarField field;
  double energy = 0;
  double lambda = 0;
  double kkt_residual = 0;
  int morse_index = 0;
  bool nondegenerate = false;
  double gap = 0;       // smallest |eigenvalue| of the constrained pencil
  bool singular = false;  // KKT factorization lost a pivot along the way
  Vec2 barycenter{0, 0};
  Vec2 projected_point{0, 0};
  std::string seed_provenance;
  std::vector<double> kkt_history;
};

struct FlowStats {
  int steps = 0;      // accepted steps
  int halvings = 0;
  double max_mass_drift = 0;
  bool energy_monotone = true;
  double initial_energy = 0;
  double final_energy = 0;
  double final_dt = 0;
};

// Semi-implicit descent: stiffness implicit, well term explicit, multiplier
// chosen so the discrete mass equals cfg.m after every accepted step.  Steps
// that raise the energy are retried with half the step until they fit.
ScalarField flow(const ScalarField& u0, const PotentialSpec& w, const SolveConfig& cfg,
                 FlowStats* stats = nullptr);

// Newton on the stationarity system with the mass row bordered in.  The mass
// defect of the seed is absorbed by the first step, so converged records hold
// the constraint to roundoff.
CriticalPointRecord newton_refine(const ScalarField& u, const PotentialSpec& w,
                                  const SolveConfig& cfg);

// Negative-eigenvalue count of the Hessian pencil (H, diag(ML)) restricted to
// the mass-zero (and Dirichlet-interior) subspace, by factorization inertia
// with the constraint bordered; gap = distance from 0 to the nearest
// eigenvalue, located by bisection on the same inertia counts.
std::pair<int, double> morse_index(const ScalarField& u, const PotentialSpec& w,
                                   const SolveConfig& cfg);

// Fills the zero (= auto) dedup tolerances from m and the sublevel threshold.
SolveConfig resolve_tolerances(SolveConfig cfg, const DomainMesh& mesh, const PotentialSpec& w);

// Greedy clustering in energy order; two records merge only when field, energy
// and barycenter all agree within the (resolved) tolerances.  Representative =
// lowest kkt residual of the cluster.
std::vector<CriticalPointRecord> dedup(std::vector<CriticalPointRecord> records,
                                       const SolveConfig& cfg);

// Mass outside B(projected_point, mu_hat sqrt(m)) is at most alpha * m.
bool concentration_check(const CriticalPointRecord& rec, const SolveConfig& cfg);

struct MultistartResult {
  std::vector<CriticalPointRecord> records;  // deduplicated, sorted by energy
  std::vector<std::string> failures;         // one line per abandoned seed
  double c_m = 0;
  int n_seeds_run = 0;

  // folded over every per-seed flow, for conservation audits
  int n_flows = 0;
  double max_mass_drift = 0;
  bool energy_monotone = true;
};

// Photography seeds spread over the boundary loops by arclength (plus the
// constant seed under Neumann), each flowed and refined; failures are
// collected, survivors deduplicated.
MultistartResult multistart(const MeshPtr& mesh, const PotentialSpec& w, const SolveConfig& cfg);

}  // namespace acmc
