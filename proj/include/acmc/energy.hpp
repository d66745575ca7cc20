#pragma once
#include <Eigen/Dense>

#include "acmc/field.hpp"
#include "acmc/potential.hpp"

namespace acmc {

//  E_eps(u) = eps/2 u'Ku + 1/eps sum_i ML_i W(u_i)
// The gradient pairs the stiffness part with the consistent form and the well
// part with the lumped form; both are exact derivatives of the discrete E.
struct EnergyParts {
  double total = 0, dirichlet = 0, well = 0;
};

EnergyParts energy_parts(const ScalarField& f, const PotentialSpec& w, double eps);
double energy(const ScalarField& f, const PotentialSpec& w, double eps);

// dE/du, full length; for Dirichlet fields the boundary rows are zeroed.
Eigen::VectorXd energy_gradient(const ScalarField& f, const PotentialSpec& w, double eps);

// Multiplier of the mass constraint: mean of the gradient against M*1 over
// the active (interior for Dirichlet) nodes.
double lagrange_multiplier(const ScalarField& f, const PotentialSpec& w, double eps);

// Euclidean norm of  dE/du - lambda M 1  over the active nodes.
double kkt_residual(const ScalarField& f, const PotentialSpec& w, double eps, double lambda);

// (eps K + 1/eps ML diag W''(u)) v; Dirichlet boundary rows zeroed.
Eigen::VectorXd hessian_apply(const ScalarField& f, const PotentialSpec& w, double eps,
                              const Eigen::VectorXd& v);

// One-line summary of a field as a critical point candidate.
struct EnergyReport {
  double energy = 0, lambda = 0, kkt = 0, mass_error = 0;
  BC bc = BC::Neumann;
};
EnergyReport energy_report(const ScalarField& f, const PotentialSpec& w, double eps,
                           double target_mass);

}  // namespace acmc
