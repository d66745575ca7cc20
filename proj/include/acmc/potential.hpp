#pragma once
#include <functional>
#include <string>
#include <vector>

namespace acmc {

// Double-well potential with minima at 0 and 1.  Callables so scaled or
// experimental wells can be swapped in without touching the solvers.
struct PotentialSpec {
  std::function<double(double)> W, dW, d2W;
  std::string name;
};

PotentialSpec quartic_potential();          // u^2 (1-u)^2
PotentialSpec scaled_potential(double c);   // c * quartic

// Structural checks on the well: nondegenerate minima, coercive growth of
// W'(u) u outside a ball, polynomial growth exponent of W'.
struct AssumptionReport {
  bool nondegenerate_wells = false;
  double R = 0, alpha = 0;  // W'(u) u >= alpha u^2 for |u| >= R
  bool coercive = false;
  double growth_p = 0;
  bool subcritical = false;  // n = 2: any finite exponent qualifies
  bool ok() const { return nondegenerate_wells && coercive && subcritical; }
};
AssumptionReport check_assumptions(const PotentialSpec& w);

// 2 * integral of sqrt(W) over [0, 1], by adaptive Gauss-Kronrod.
double surface_tension(const PotentialSpec& w, double tol = 1e-10);

// Tabulated solution of  q' = (1/eps) * sqrt(eps^{3/2} + 2 W(q)),  q(0) = 0,
// integrated until q reaches 1 at time eta.  Outside [0, eta] the profile is
// extended by its constant well values.
struct ProfileTable {
  double eps = 0;
  double eta = 0;
  std::vector<double> t, q;

  double operator()(double s) const;  // clamped piecewise-linear evaluation
  double slope0() const;              // first-segment slope
};

ProfileTable solve_profile(const PotentialSpec& w, double eps, double step_tol = 1e-8);

}  // namespace acmc
