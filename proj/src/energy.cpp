#include "acmc/energy.hpp"

#include <cmath>

namespace acmc {

namespace {

// gradient without the Dirichlet masking, used by every routine here
Eigen::VectorXd raw_gradient(const ScalarField& f, const PotentialSpec& w, double eps) {
  const auto& m = *f.mesh;
  Eigen::VectorXd g = eps * (m.K * f.u);
  for (int i = 0; i < f.size(); ++i) g[i] += m.ML[i] * w.dW(f.u[i]) / eps;
  return g;
}

void mask_boundary(const ScalarField& f, Eigen::VectorXd& v) {
  if (f.bc == BC::Dirichlet)
    for (int i : f.mesh->boundary_nodes) v[i] = 0.0;
}

}  // namespace

EnergyParts energy_parts(const ScalarField& f, const PotentialSpec& w, double eps) {
  EnergyParts p;
  p.dirichlet = 0.5 * eps * f.u.dot(f.mesh->K * f.u);
  for (int i = 0; i < f.size(); ++i) p.well += f.mesh->ML[i] * w.W(f.u[i]) / eps;
  p.total = p.dirichlet + p.well;
  return p;
}

double energy(const ScalarField& f, const PotentialSpec& w, double eps) {
  return energy_parts(f, w, eps).total;
}

Eigen::VectorXd energy_gradient(const ScalarField& f, const PotentialSpec& w, double eps) {
  Eigen::VectorXd g = raw_gradient(f, w, eps);
  mask_boundary(f, g);
  return g;
}

double lagrange_multiplier(const ScalarField& f, const PotentialSpec& w, double eps) {
  Eigen::VectorXd g = raw_gradient(f, w, eps);
  Eigen::VectorXd c = f.mesh->M * Eigen::VectorXd::Ones(f.size());
  if (f.bc == BC::Neumann) return g.sum() / c.sum();
  double num = 0, den = 0;
  for (int i : f.mesh->interior_nodes) {
    num += g[i] * c[i];
    den += c[i] * c[i];
  }
  return num / den;
}

double kkt_residual(const ScalarField& f, const PotentialSpec& w, double eps, double lambda) {
  Eigen::VectorXd g = raw_gradient(f, w, eps);
  Eigen::VectorXd c = f.mesh->M * Eigen::VectorXd::Ones(f.size());
  Eigen::VectorXd r = g - lambda * c;
  mask_boundary(f, r);
  return r.norm();
}

Eigen::VectorXd hessian_apply(const ScalarField& f, const PotentialSpec& w, double eps,
                              const Eigen::VectorXd& v) {
  const auto& m = *f.mesh;
  Eigen::VectorXd hv = eps * (m.K * v);
  for (int i = 0; i < f.size(); ++i) hv[i] += m.ML[i] * w.d2W(f.u[i]) * v[i] / eps;
  mask_boundary(f, hv);
  return hv;
}

EnergyReport energy_report(const ScalarField& f, const PotentialSpec& w, double eps,
                           double target_mass) {
  EnergyReport r;
  r.energy = energy(f, w, eps);
  r.lambda = lagrange_multiplier(f, w, eps);
  r.kkt = kkt_residual(f, w, eps, r.lambda);
  r.mass_error = f.mass() - target_mass;
  r.bc = f.bc;
  return r;
}

}  // namespace acmc
