#include "acmc/checks.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <iomanip>
#include <random>
#include <sstream>
#include <thread>

#include <Eigen/Dense>

#include "acmc/config.hpp"
#include "acmc/energy.hpp"
#include "acmc/errors.hpp"
#include "acmc/isoperimetry.hpp"
#include "acmc/photography.hpp"
#include "acmc/potential.hpp"
#include "acmc/solver.hpp"

namespace acmc {

namespace {

constexpr double kPi = 3.14159265358979323846;

// audit trail shared across checks: every flow's conservation figures
struct Ctx {
  int n_flows = 0;
  double max_rel_drift = 0;
  bool monotone = true;

  void fold(const MultistartResult& res, double area) {
    n_flows += res.n_flows;
    if (res.n_flows > 0)
      max_rel_drift = std::max(max_rel_drift, res.max_mass_drift / area);
    monotone = monotone && res.energy_monotone;
  }
};

MeshPtr disk(double h) {
  DomainSpec s;
  s.h = h;
  return build_domain(s);
}

int pick_jobs() {
  unsigned hw = std::thread::hardware_concurrency();
  return std::max(1, std::min(4, int(hw)));
}

// constant + noise, then shifted so the consistent-mass integral hits m
ScalarField noisy_constant(const MeshPtr& mesh, double level, double amp, double m,
                           std::uint32_t seed) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  Eigen::VectorXd v(mesh->n_nodes());
  for (int i = 0; i < mesh->n_nodes(); ++i) v[i] = level + amp * uni(rng);
  for (int pass = 0; pass < 3; ++pass) {
    ScalarField f(mesh, BC::Neumann, v);
    v.array() += (m - f.mass()) / mesh->area;
  }
  return ScalarField(mesh, BC::Neumann, std::move(v));
}

std::string num(double x, int prec = 6) {
  std::ostringstream os;
  os << std::setprecision(prec) << x;
  return os.str();
}

// 1. computed surface tension against the closed-form integral
bool c1(std::string& d, Ctx&) {
  double sigma = surface_tension(quartic_potential());
  d = "sigma = " + num(sigma, 10) + ", target 1/3";
  return std::abs(sigma - 1.0 / 3.0) <= 1e-6;
}

// 2. profile initial slope ~ eps^{-1/4}; layer width shrinking
bool c2(std::string& d, Ctx&) {
  PotentialSpec w = quartic_potential();
  bool ok = true;
  double prev_eta = 1e300;
  std::ostringstream os;
  for (double eps : {0.1, 0.05, 0.025}) {
    ProfileTable pr = solve_profile(w, eps);
    double rel = std::abs(pr.slope0() * std::pow(eps, 0.25) - 1.0);
    ok = ok && rel <= 0.01 && pr.eta < prev_eta;
    prev_eta = pr.eta;
    os << " eps=" << num(eps) << " slope_rel_err=" << num(rel, 3) << " eta=" << num(pr.eta, 4);
  }
  d = os.str();
  return ok;
}

// 3. small-mass isoperimetric ratios near the euclidean values
bool c3(std::string& d, Ctx&) {
  MeshPtr mesh = disk(0.02);
  bool ok = true;
  double prev1 = 1e300, prev2 = 1e300;
  std::ostringstream os;
  for (double m : {1e-2, 5e-3, 2.5e-3}) {
    double I = estimate_profile(*mesh, m, BC::Neumann).I_M;
    double Ib = estimate_profile(*mesh, m, BC::Dirichlet).I_bar_M;
    double r1 = I / std::sqrt(2 * kPi * m);
    double r2 = Ib / (2 * std::sqrt(kPi * m));
    double d1 = std::abs(r1 - 1), d2 = std::abs(r2 - 1);
    ok = ok && r1 >= 0.9 && r1 <= 1.1 && r2 >= 0.9 && r2 <= 1.1;
    ok = ok && d1 <= prev1 + 1e-9 && d2 <= prev2 + 1e-9;
    prev1 = d1;
    prev2 = d2;
    os << " m=" << num(m) << " rel_ratio=" << num(r1, 4) << " full_ratio=" << num(r2, 4);
  }
  d = os.str();
  return ok;
}

// 4. energy of the recovery construction against sigma * perimeter
bool c4(std::string& d, Ctx&) {
  MeshPtr mesh = disk(0.01);
  PotentialSpec w = quartic_potential();
  double sigma = surface_tension(w);
  BoundaryPoint bp = boundary_point(*mesh, 0, 0.0);
  std::vector<double> gaps;
  double limit = 0;
  std::ostringstream os;
  for (double eps : {0.08, 0.04, 0.02}) {
    PhotographOutput ph = photograph_neumann(mesh, w, bp, 0.05, eps);
    limit = sigma * ph.region.relative_perimeter;
    gaps.push_back(ph.energy_at_emission - limit);
    os << " eps=" << num(eps) << " gap=" << num(gaps.back(), 4);
  }
  os << " limit=" << num(limit, 4);
  double small = 0.1 * limit;
  bool positive_or_small = true;
  for (double g : gaps) positive_or_small = positive_or_small && g >= -small;
  bool decreasing = gaps[0] > gaps[1] && gaps[1] > gaps[2];
  bool final_ok = std::abs(gaps.back()) <= small;
  os << (positive_or_small ? "" : " [gap below -10% of limit]")
     << (decreasing ? "" : " [not strictly decreasing]")
     << (final_ok ? "" : " [final gap exceeds 10% of limit]");
  d = os.str();
  return positive_or_small && decreasing && final_ok;
}

// 5. every photograph lands under the sublevel threshold
bool c5(std::string& d, Ctx&) {
  MeshPtr mesh = disk(0.02);
  PotentialSpec w = quartic_potential();
  double m = 0.01, eps = 0.01;
  double thr = sublevel_threshold(*mesh, w, m, BC::Neumann, 1.0, 1.0);
  ProfileTable pr = solve_profile(w, eps);
  double worst = -1e300;
  double L = mesh->loop_length[0];
  for (int j = 0; j < 16; ++j) {
    BoundaryPoint bp = boundary_point(*mesh, 0, (j + 0.5) * L / 16);
    PhotographOutput ph = photograph_neumann(mesh, w, pr, bp, m);
    worst = std::max(worst, ph.energy_at_emission);
  }
  d = "max emission = " + num(worst, 6) + ", threshold = " + num(thr, 6);
  return worst <= thr;
}

// 6. newton from a noisy start recovers the exact constant state
bool c6(std::string& d, Ctx&) {
  MeshPtr mesh = disk(0.05);
  PotentialSpec w = quartic_potential();
  SolveConfig cfg;
  cfg.epsilon = 1.0;
  cfg.m = 0.5 * mesh->area;
  ScalarField u0 = noisy_constant(mesh, 0.5, 0.05, cfg.m, 91);
  CriticalPointRecord rec = newton_refine(u0, w, cfg);
  double dev = (rec.field.u.array() - 0.5).abs().maxCoeff();
  d = "kkt = " + num(rec.kkt_residual, 3) + ", lambda = " + num(rec.lambda, 3) +
      ", max|u-1/2| = " + num(dev, 3);
  return rec.kkt_residual <= 1e-9 && std::abs(rec.lambda) <= 1e-9 && dev <= 1e-8;
}

// 7. inertia-based index against a dense generalized eigensolve
bool c7(std::string& d, Ctx&) {
  MeshPtr mesh = disk(0.05);
  PotentialSpec w = quartic_potential();

  Eigen::MatrixXd Kd = Eigen::MatrixXd(mesh->K);
  Eigen::MatrixXd Md = mesh->ML.asDiagonal();
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(Kd, Md);
  Eigen::VectorXd mu = es.eigenvalues();

  ScalarField half(mesh, BC::Neumann, Eigen::VectorXd::Constant(mesh->n_nodes(), 0.5));
  bool ok = true;
  std::ostringstream os;
  for (double eps : {1.0, 0.3, 0.15}) {
    int expect = 0;  // skip the k = 0 constant mode: the constraint removes it
    for (int k = 1; k < mu.size(); ++k)
      if (mu[k] < 1.0 / (eps * eps)) ++expect;
    SolveConfig cfg;
    cfg.epsilon = eps;
    cfg.m = 0.5 * mesh->area;
    int got = morse_index(half, w, cfg).first;
    ok = ok && got == expect;
    os << " eps=" << num(eps) << " index=" << got << " eig_count=" << expect;
  }
  ok = ok && mu[1] > 3.2 && mu[1] < 3.6;  // first nonzero disk eigenvalue near 3.39
  d = os.str();
  return ok;
}

// 8. neumann multistart on the eccentric annulus: four pinned droplets under
// the threshold, and the constant sitting above it
bool c8(std::string& d, Ctx& ctx) {
  DomainSpec spec;
  spec.kind = DomainKind::EccentricAnnulus;
  spec.r_in = 0.4;
  spec.hole_offset = {0.25, 0.0};
  spec.h = 0.03;
  MeshPtr mesh = build_domain(spec);
  PotentialSpec w = quartic_potential();

  SolveConfig cfg;
  cfg.m = 0.01 * mesh->area;
  cfg.epsilon = 0.1 * std::sqrt(cfg.m / kPi);
  cfg.bc = BC::Neumann;
  cfg.n_seeds = 32;
  cfg.mu_hat = 3.0;
  cfg.alpha = 0.1;
  cfg.jobs = pick_jobs();

  MultistartResult res = multistart(mesh, w, cfg);
  ctx.fold(res, mesh->area);

  int qualified = 0;
  const CriticalPointRecord* constant = nullptr;
  for (const CriticalPointRecord& rec : res.records) {
    if (rec.seed_provenance == "constant") constant = &rec;
    if (rec.energy <= res.c_m && rec.morse_index == 0 && concentration_check(rec, cfg))
      ++qualified;
  }
  bool const_above = constant && constant->energy > res.c_m;
  std::ostringstream os;
  os << "qualified = " << qualified << " of " << res.records.size()
     << " records, c_m = " << num(res.c_m, 4);
  if (constant)
    os << ", constant energy = " << num(constant->energy, 4)
       << (const_above ? "" : " [not above c_m]");
  else
    os << ", constant record missing";
  d = os.str();
  return qualified >= 4 && const_above;
}

// 9. dirichlet multistart: interior droplets on the disk and on a slightly
// eccentric annulus
bool c9(std::string& d, Ctx& ctx) {
  PotentialSpec w = quartic_potential();
  std::ostringstream os;

  DomainSpec dspec;
  dspec.h = 0.013;
  MeshPtr dmesh = build_domain(dspec);
  SolveConfig dcfg;
  dcfg.bc = BC::Dirichlet;
  dcfg.m = 0.003 * dmesh->area;
  dcfg.epsilon = 0.1 * std::sqrt(dcfg.m / kPi);
  dcfg.n_seeds = 8;
  dcfg.jobs = pick_jobs();
  auto t0 = std::chrono::steady_clock::now();
  MultistartResult rd = multistart(dmesh, w, dcfg);
  double td = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  ctx.fold(rd, dmesh->area);
  int low_d = 0;
  for (const auto& rec : rd.records)
    if (rec.energy <= rd.c_m) ++low_d;
  os << "disk: " << low_d << " low-energy of " << rd.records.size() << " (c_m=" << num(rd.c_m, 4)
     << ", " << num(td, 3) << " s)";

  DomainSpec aspec;
  aspec.kind = DomainKind::EccentricAnnulus;
  aspec.r_in = 0.5;
  aspec.hole_offset = {0.1, 0.0};
  aspec.h = 0.0117;
  aspec.delta_M = 0.18;
  MeshPtr amesh = build_domain(aspec);
  SolveConfig acfg;
  acfg.bc = BC::Dirichlet;
  acfg.m = 0.0015 * amesh->area;
  acfg.epsilon = 0.1 * std::sqrt(acfg.m / kPi);
  acfg.n_seeds = 10;
  acfg.jobs = pick_jobs();
  t0 = std::chrono::steady_clock::now();
  MultistartResult ra = multistart(amesh, w, acfg);
  double ta = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  ctx.fold(ra, amesh->area);
  int low_a = 0;
  for (const auto& rec : ra.records)
    if (rec.energy <= ra.c_m) ++low_a;
  os << "; annulus: " << low_a << " low-energy of " << ra.records.size()
     << " (c_m=" << num(ra.c_m, 4) << ", " << num(ta, 3) << " s)";

  d = os.str();
  return low_d >= 1 && low_a >= 2 && td < 600 && ta < 600;
}

// 10. projected barycenter of each photograph stays near its source point
bool c10(std::string& d, Ctx&) {
  MeshPtr mesh = disk(0.03);
  PotentialSpec w = quartic_potential();
  double bound_n = 0.2 * mesh->diameter;
  double worst_n = 0;
  {
    double m = 0.01, eps = 0.1 * std::sqrt(m / kPi);
    ProfileTable pr = solve_profile(w, eps);
    double L = mesh->loop_length[0];
    for (int j = 0; j < 16; ++j) {
      BoundaryPoint bp = boundary_point(*mesh, 0, (j + 0.5) * L / 16);
      PhotographOutput ph = photograph_neumann(mesh, w, pr, bp, m);
      worst_n = std::max(worst_n, dist(compose_B(ph.field, BC::Neumann), bp.p));
    }
  }
  double bound_d = std::max(0.2 * mesh->diameter, mesh->delta_M);
  double worst_d = 0;
  {
    double m = 0.005, eps = 0.1 * std::sqrt(m / kPi);
    ProfileTable pr = solve_profile(w, eps);
    const double radii[4] = {0.15, 0.45, 0.7, 0.92};
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) {
        double th = j * kPi / 2 + 0.3;
        Vec2 p{radii[i] * std::cos(th), radii[i] * std::sin(th)};
        PhotographOutput ph = photograph_dirichlet(mesh, w, pr, p, m);
        worst_d = std::max(worst_d, dist(compose_B(ph.field, BC::Dirichlet), p));
      }
  }
  d = "neumann worst = " + num(worst_n, 4) + " (bound " + num(bound_n, 3) +
      "), dirichlet worst = " + num(worst_d, 4) + " (bound " + num(bound_d, 3) + ")";
  return worst_n <= bound_n && worst_d <= bound_d;
}

// 11. conservation audit over the flows run above, plus gradient consistency
bool c11(std::string& d, Ctx& ctx) {
  PotentialSpec w = quartic_potential();
  if (ctx.n_flows == 0) {  // standalone: generate some flows to audit
    MeshPtr mesh = disk(0.06);
    SolveConfig cfg;
    cfg.m = 0.05;
    cfg.epsilon = 0.1 * std::sqrt(cfg.m / kPi);
    cfg.n_seeds = 6;
    MultistartResult res = multistart(mesh, w, cfg);
    ctx.fold(res, mesh->area);
  }
  bool flows_ok = ctx.n_flows > 0 && ctx.max_rel_drift <= 1e-10 && ctx.monotone;

  // central difference of E against the assembled gradient: error must drop
  // by ~4x per halving of the step
  MeshPtr mesh = disk(0.1);
  Eigen::VectorXd uv(mesh->n_nodes()), vv(mesh->n_nodes());
  for (int i = 0; i < mesh->n_nodes(); ++i) {
    Vec2 p = mesh->nodes[i];
    uv[i] = 0.5 + 0.3 * std::cos(p.x) * std::cos(p.y);
    vv[i] = std::cos(2 * p.x + p.y);
  }
  double eps = 0.5;
  ScalarField u(mesh, BC::Neumann, uv);
  double gv = energy_gradient(u, w, eps).dot(vv);
  auto central = [&](double t) {
    ScalarField up(mesh, BC::Neumann, uv + t * vv), dn(mesh, BC::Neumann, uv - t * vv);
    return (energy(up, w, eps) - energy(dn, w, eps)) / (2 * t);
  };
  double e1 = std::abs(central(1e-2) - gv);
  double e2 = std::abs(central(5e-3) - gv);
  double ratio = e2 / e1;
  bool fd_ok = e1 < 1e-3 * (1 + std::abs(gv)) && ratio > 0.15 && ratio < 0.35;

  d = "flows = " + std::to_string(ctx.n_flows) + ", max drift/area = " + num(ctx.max_rel_drift, 3) +
      ", monotone = " + (ctx.monotone ? "yes" : "no") + ", fd error ratio = " + num(ratio, 3);
  return flows_ok && fd_ok;
}

struct Entry {
  int id;
  const char* name;
  double time_limit;  // seconds; part of the criterion
  bool (*fn)(std::string&, Ctx&);
};

const Entry kEntries[] = {
    {1, "surface tension closed form", 1, c1},
    {2, "profile slope and width scaling", 1, c2},
    {3, "euclidean isoperimetric ratios", 30, c3},
    {4, "sharp interface limsup gap", 60, c4},
    {5, "photography sublevel containment", 60, c5},
    {6, "newton settles the constant", 10, c6},
    {7, "morse index vs eigensolve", 30, c7},
    {8, "neumann multiplicity, eccentric annulus", 600, c8},
    {9, "dirichlet multiplicity, disk and eccentric annulus", 1200, c9},
    {10, "homotopy closeness of projected barycenters", 60, c10},
    {11, "conservation and gradient consistency", 120, c11},
};

}  // namespace

std::vector<CheckResult> run_checks(const std::vector<int>& ids) {
  Ctx ctx;
  std::vector<CheckResult> out;
  for (const Entry& e : kEntries) {
    if (!ids.empty() && std::find(ids.begin(), ids.end(), e.id) == ids.end()) continue;
    CheckResult r;
    r.id = e.id;
    r.name = e.name;
    auto t0 = std::chrono::steady_clock::now();
    try {
      r.passed = e.fn(r.detail, ctx);
    } catch (const std::exception& ex) {
      r.passed = false;
      r.detail = std::string("threw: ") + ex.what();
    }
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (r.seconds >= e.time_limit) {
      r.passed = false;
      r.detail += " [over the " + num(e.time_limit, 3) + " s budget]";
    }
    out.push_back(std::move(r));
  }
  return out;
}

}  // namespace acmc
