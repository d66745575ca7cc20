#include "acmc/potential.hpp"

#include <algorithm>
#include <cmath>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "acmc/errors.hpp"

namespace acmc {

PotentialSpec quartic_potential() { return scaled_potential(1.0); }

PotentialSpec scaled_potential(double c) {
  PotentialSpec p;
  p.W = [c](double u) { return c * u * u * (u - 1) * (u - 1); };
  p.dW = [c](double u) { return c * 2 * u * (u - 1) * (2 * u - 1); };
  p.d2W = [c](double u) { return c * (12 * u * u - 12 * u + 2); };
  p.name = c == 1.0 ? "quartic" : "scaled-quartic";
  return p;
}

AssumptionReport check_assumptions(const PotentialSpec& w) {
  AssumptionReport r;

  bool nondeg = w.W(0.0) == 0.0 && w.W(1.0) == 0.0 && w.d2W(0.0) > 0 && w.d2W(1.0) > 0;
  for (int i = 1; i < 200 && nondeg; ++i) {
    double u = i / 200.0;
    if (w.W(u) <= 0) nondeg = false;  // must be positive strictly between the wells
  }
  for (int i = -300; i <= 500 && nondeg; ++i) {
    if (w.W(i / 100.0) < 0) nondeg = false;
  }
  r.nondegenerate_wells = nondeg;

  r.R = 2.0;
  double amin = 1e300;
  for (int i = 0; i <= 400; ++i) {
    for (double u : {2.0 + i * 0.1, -2.0 - i * 0.1})
      amin = std::min(amin, w.dW(u) * u / (u * u));
  }
  r.alpha = amin;
  r.coercive = amin > 0;

  // growth exponent of W' from a log-log slope far from the wells
  double u1 = 50, u2 = 400;
  double p1 = std::abs(w.dW(u1)), p2 = std::abs(w.dW(u2));
  r.growth_p = 1 + std::log(p2 / p1) / std::log(u2 / u1);
  r.subcritical = std::isfinite(r.growth_p);
  return r;
}

double surface_tension(const PotentialSpec& w, double tol) {
  namespace bq = boost::math::quadrature;
  double err = 0;
  double v = bq::gauss_kronrod<double, 31>::integrate(
      [&](double s) { return std::sqrt(std::max(w.W(s), 0.0)); }, 0.0, 1.0, 15, tol, &err);
  if (err > tol * std::max(std::abs(v), 1.0))
    throw QuadratureFailure("surface tension integral did not meet tolerance");
  return 2 * v;
}

double ProfileTable::operator()(double s) const {
  if (s <= 0) return 0;
  if (s >= eta) return 1;
  auto it = std::upper_bound(t.begin(), t.end(), s);
  size_t i = size_t(it - t.begin());
  if (i == 0) return q.front();
  if (i >= t.size()) return q.back();
  double w1 = (s - t[i - 1]) / (t[i] - t[i - 1]);
  return (1 - w1) * q[i - 1] + w1 * q[i];
}

double ProfileTable::slope0() const {
  return t.size() > 1 ? (q[1] - q[0]) / (t[1] - t[0]) : 0.0;
}

namespace {

// Dormand-Prince 5(4) pair for the scalar autonomous rhs.
struct DP45 {
  template <class F>
  static void step(const F& f, double q, double h, double& q5, double& q4) {
    double k1 = f(q);
    double k2 = f(q + h * (1.0 / 5 * k1));
    double k3 = f(q + h * (3.0 / 40 * k1 + 9.0 / 40 * k2));
    double k4 = f(q + h * (44.0 / 45 * k1 - 56.0 / 15 * k2 + 32.0 / 9 * k3));
    double k5 = f(q + h * (19372.0 / 6561 * k1 - 25360.0 / 2187 * k2 + 64448.0 / 6561 * k3 -
                           212.0 / 729 * k4));
    double k6 = f(q + h * (9017.0 / 3168 * k1 - 355.0 / 33 * k2 + 46732.0 / 5247 * k3 +
                           49.0 / 176 * k4 - 5103.0 / 18656 * k5));
    q5 = q + h * (35.0 / 384 * k1 + 500.0 / 1113 * k3 + 125.0 / 192 * k4 - 2187.0 / 6784 * k5 +
                  11.0 / 84 * k6);
    double k7 = f(q5);
    q4 = q + h * (5179.0 / 57600 * k1 + 7571.0 / 16695 * k3 + 393.0 / 640 * k4 -
                  92097.0 / 339200 * k5 + 187.0 / 2100 * k6 + 1.0 / 40 * k7);
  }
};

}  // namespace

ProfileTable solve_profile(const PotentialSpec& w, double eps, double step_tol) {
  if (eps <= 0) throw Error("profile needs eps > 0");
  if (step_tol <= 0) throw Error("profile needs step_tol > 0");
  auto f = [&](double q) {
    return std::sqrt(std::pow(eps, 1.5) + 2 * std::max(w.W(q), 0.0)) / eps;
  };

  // crossing-time bound from the slope floor eps^{-1/4} and the well curvature
  double curv = std::min(w.d2W(0.0), w.d2W(1.0));
  double t_bound = 10 * std::pow(eps, 0.25) * (1 + 2 / std::sqrt(std::max(curv, 1e-12)));

  // cap the step so centered differences on the table resolve the ODE: the
  // residual goes like h^2 * q''' with q''' of order eps^{-3}
  double h_max =
      std::clamp(4 * std::sqrt(step_tol) * std::pow(eps, 1.5), 1e-9, std::pow(eps, 0.25) / 20);

  ProfileTable tab;
  tab.eps = eps;
  tab.t.push_back(0);
  tab.q.push_back(0);
  double t = 0, q = 0, h = h_max;
  long iter = 0;
  while (q < 1.0) {
    if (++iter > 10000000 || t > t_bound)
      throw NonTermination("profile integration exceeded its crossing-time bound");
    h = std::min(h, h_max);
    double q5, q4;
    DP45::step(f, q, h, q5, q4);
    double err = std::abs(q5 - q4);
    if (err > step_tol && h > 1e-12) {
      h *= std::max(0.2, 0.9 * std::pow(step_tol / err, 0.2));
      continue;
    }
    if (q5 >= 1.0) {
      // locate the crossing by bisection on the step size
      double lo = 0, hi = h;
      for (int k = 0; k < 80; ++k) {
        double mid = 0.5 * (lo + hi);
        double qm, dummy;
        DP45::step(f, q, mid, qm, dummy);
        (qm < 1.0 ? lo : hi) = mid;
        if (hi - lo < 1e-16 * (1 + h)) break;
      }
      t += hi;
      tab.t.push_back(t);
      tab.q.push_back(1.0);
      break;
    }
    t += h;
    q = q5;
    tab.t.push_back(t);
    tab.q.push_back(q);
    if (err > 0) h *= std::min(5.0, 0.9 * std::pow(step_tol / err, 0.2));
  }
  tab.eta = tab.t.back();
  return tab;
}

}  // namespace acmc
