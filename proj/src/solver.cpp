#include "acmc/solver.hpp"

#include <Eigen/SparseCholesky>
#include <Eigen/SparseLU>
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <thread>

#include "acmc/errors.hpp"

namespace acmc {

namespace {

void validate_core(const SolveConfig& cfg, const DomainMesh& mesh) {
  if (!(cfg.epsilon > 0)) throw ConfigError("epsilon must be positive");
  if (!(cfg.m > 0) || !(cfg.m < mesh.area)) throw ConfigError("m must lie in (0, area)");
  if (!(cfg.stall_tol > 0) || !(cfg.newton_tol > 0) || !(cfg.newton_basin > 0))
    throw ConfigError("tolerances must be positive");
  if (cfg.max_steps < 0 || cfg.newton_max_iter < 1) throw ConfigError("step budgets out of range");
  if (cfg.jobs < 1) throw ConfigError("jobs must be >= 1");
}

// Degrees of freedom the operators act on: everything under Neumann, interior
// nodes under Dirichlet.  The restricted stiffness block keeps symmetry.
struct ActiveSet {
  std::vector<int> idx;           // active -> full
  std::vector<int> pos;           // full -> active, -1 elsewhere
  Eigen::SparseMatrix<double> K;  // active block
  Eigen::VectorXd ml;             // lumped masses on active nodes
};

ActiveSet active_set(const DomainMesh& mesh, BC bc) {
  ActiveSet a;
  if (bc == BC::Neumann) {
    a.idx.resize(mesh.n_nodes());
    for (int i = 0; i < mesh.n_nodes(); ++i) a.idx[i] = i;
  } else {
    a.idx = mesh.interior_nodes;
  }
  a.pos.assign(mesh.n_nodes(), -1);
  for (int k = 0; k < int(a.idx.size()); ++k) a.pos[a.idx[k]] = k;

  int n = int(a.idx.size());
  std::vector<Eigen::Triplet<double>> trips;
  trips.reserve(mesh.K.nonZeros());
  for (int col = 0; col < mesh.K.outerSize(); ++col) {
    int ca = a.pos[col];
    if (ca < 0) continue;
    for (Eigen::SparseMatrix<double>::InnerIterator it(mesh.K, col); it; ++it) {
      int ra = a.pos[int(it.row())];
      if (ra >= 0) trips.emplace_back(ra, ca, it.value());
    }
  }
  a.K.resize(n, n);
  a.K.setFromTriplets(trips.begin(), trips.end());
  a.ml.resize(n);
  for (int k = 0; k < n; ++k) a.ml[k] = mesh.ML[a.idx[k]];
  return a;
}

Eigen::VectorXd gather(const ActiveSet& a, const Eigen::VectorXd& full) {
  Eigen::VectorXd v(a.idx.size());
  for (int k = 0; k < int(a.idx.size()); ++k) v[k] = full[a.idx[k]];
  return v;
}

ScalarField scatter(const MeshPtr& mesh, BC bc, const ActiveSet& a, const Eigen::VectorXd& va) {
  Eigen::VectorXd full = Eigen::VectorXd::Zero(mesh->n_nodes());
  for (int k = 0; k < int(a.idx.size()); ++k) full[a.idx[k]] = va[k];
  return ScalarField(mesh, bc, std::move(full));
}

// eps K + (1/eps) diag(ml W''(u)) on the active block.
Eigen::SparseMatrix<double> hessian_matrix(const ActiveSet& a, const PotentialSpec& w, double eps,
                                           const Eigen::VectorXd& ua) {
  Eigen::SparseMatrix<double> H = eps * a.K;
  Eigen::VectorXd d(ua.size());
  for (int k = 0; k < ua.size(); ++k) d[k] = a.ml[k] * w.d2W(ua[k]) / eps;
  Eigen::SparseMatrix<double> D(ua.size(), ua.size());
  D.reserve(Eigen::VectorXi::Constant(int(ua.size()), 1));
  for (int k = 0; k < ua.size(); ++k) D.insert(k, k) = d[k];
  D.makeCompressed();
  return H + D;
}

}  // namespace

ScalarField flow(const ScalarField& u0, const PotentialSpec& w, const SolveConfig& cfg,
                 FlowStats* stats) {
  const DomainMesh& mesh = *u0.mesh;
  validate_core(cfg, mesh);
  if (u0.bc != cfg.bc) throw ConfigError("field and config disagree on the boundary condition");
  if (std::abs(u0.mass() - cfg.m) > 1e-6 * mesh.area)
    throw MassOutOfRange("flow seed does not carry the configured mass");

  ActiveSet act = active_set(mesh, cfg.bc);
  const double eps = cfg.epsilon;
  double dt0 = cfg.dt > 0 ? cfg.dt : eps * eps;
  double dt = dt0;

  Eigen::VectorXd ua = gather(act, u0.u);
  ScalarField cur = scatter(u0.mesh, cfg.bc, act, ua);
  double e_cur = energy(cur, w, eps);

  FlowStats st;
  st.initial_energy = e_cur;

  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> fac;
  Eigen::VectorXd z;
  double fac_dt = -1;
  auto refactor = [&](double step) {
    Eigen::SparseMatrix<double> A = step * eps * act.K;
    for (int k = 0; k < ua.size(); ++k) A.coeffRef(k, k) += act.ml[k];
    fac.compute(A);
    if (fac.info() != Eigen::Success) throw LinearSolveFailure("flow matrix factorization failed");
    z = fac.solve(act.ml);
    fac_dt = step;
  };

  int accepted = 0, stalls = 0, since_halve = 0, attempts = 0;
  const int attempt_cap = 4 * cfg.max_steps + 256;
  while (accepted < cfg.max_steps && attempts++ < attempt_cap) {
    if (dt != fac_dt) refactor(dt);
    Eigen::VectorXd gw(ua.size());
    for (int k = 0; k < ua.size(); ++k) gw[k] = act.ml[k] * w.dW(ua[k]) / eps;
    Eigen::VectorXd b = act.ml.cwiseProduct(ua) - dt * gw;
    Eigen::VectorXd v = fac.solve(b);
    double lam = (cfg.m - act.ml.dot(v)) / (dt * act.ml.dot(z));
    Eigen::VectorXd next = v + (dt * lam) * z;

    ScalarField cand = scatter(u0.mesh, cfg.bc, act, next);
    double e_new = energy(cand, w, eps);
    if (!std::isfinite(e_new) || e_new > e_cur + 1e-14 * std::max(1.0, std::abs(e_cur))) {
      dt *= 0.5;
      ++st.halvings;
      since_halve = 0;
      if (dt < 1e-12 * dt0) throw StepCollapse("flow step shrank away without energy decrease");
      continue;
    }

    double drift = std::abs(act.ml.dot(next) - cfg.m);
    st.max_mass_drift = std::max(st.max_mass_drift, drift);
    if (e_new > e_cur) st.energy_monotone = false;  // within the acceptance fuzz
    bool stalled = (e_cur - e_new) <= cfg.stall_tol * std::max(1.0, std::abs(e_cur));
    stalls = stalled ? stalls + 1 : 0;

    ua = std::move(next);
    cur = std::move(cand);
    e_cur = e_new;
    ++accepted;
    if (++since_halve >= 16 && dt < 1e4 * dt0) {
      dt *= 2;
      since_halve = 0;
    }
    if (stalls >= 8) break;
  }

  st.steps = accepted;
  st.final_energy = e_cur;
  st.final_dt = dt;
  if (stats) *stats = st;
  return cur;
}

CriticalPointRecord newton_refine(const ScalarField& u, const PotentialSpec& w,
                                  const SolveConfig& cfg) {
  const DomainMesh& mesh = *u.mesh;
  validate_core(cfg, mesh);
  if (u.bc != cfg.bc) throw ConfigError("field and config disagree on the boundary condition");

  ActiveSet act = active_set(mesh, cfg.bc);
  const double eps = cfg.epsilon;
  const int n = int(act.idx.size());

  Eigen::VectorXd ua = gather(act, u.u);
  ScalarField cur = scatter(u.mesh, cfg.bc, act, ua);
  double lam = lagrange_multiplier(cur, w, eps);
  double kkt = kkt_residual(cur, w, eps, lam);
  if (kkt > cfg.newton_basin)
    throw DidNotConverge("seed residual outside the refinement basin");

  CriticalPointRecord rec{cur};
  rec.kkt_history.push_back(kkt);

  bool converged = kkt <= cfg.newton_tol;
  for (int it = 0; it < cfg.newton_max_iter && !converged; ++it) {
    Eigen::SparseMatrix<double> H = hessian_matrix(act, w, eps, ua);

    // symmetric border [[H, c], [c', 0]], unknown (du, -dlambda)
    std::vector<Eigen::Triplet<double>> trips;
    trips.reserve(H.nonZeros() + 2 * n);
    for (int col = 0; col < H.outerSize(); ++col)
      for (Eigen::SparseMatrix<double>::InnerIterator itr(H, col); itr; ++itr)
        trips.emplace_back(int(itr.row()), col, itr.value());
    for (int k = 0; k < n; ++k) {
      trips.emplace_back(k, n, act.ml[k]);
      trips.emplace_back(n, k, act.ml[k]);
    }
    Eigen::SparseMatrix<double> B(n + 1, n + 1);
    B.setFromTriplets(trips.begin(), trips.end());

    Eigen::VectorXd g = gather(act, energy_gradient(cur, w, eps));
    Eigen::VectorXd rhs(n + 1);
    rhs.head(n) = -(g - lam * act.ml);
    rhs[n] = -(act.ml.dot(ua) - cfg.m);

    Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
    lu.compute(B);
    Eigen::VectorXd step;
    if (lu.info() == Eigen::Success) step = lu.solve(rhs);
    if (lu.info() != Eigen::Success || !step.allFinite()) {
      // pivot loss: bump the diagonal a hair, remember the matrix was rank
      // deficient at this iterate
      rec.singular = true;
      double bump = 1e-10 * (1.0 + eps * act.K.coeffs().cwiseAbs().maxCoeff());
      Eigen::SparseMatrix<double> Breg = B;
      for (int k = 0; k < n; ++k) Breg.coeffRef(k, k) += bump;
      lu.compute(Breg);
      if (lu.info() != Eigen::Success)
        throw DidNotConverge("kkt factorization lost a pivot and would not recover");
      step = lu.solve(rhs);
      if (!step.allFinite())
        throw DidNotConverge("kkt factorization lost a pivot and would not recover");
    }

    // plain Newton with a short backtrack so wild seeds cannot explode; the
    // deepest trial is taken as-is since the residual need not shrink through
    // an index transition
    double t = 1.0;
    bool took = false;
    for (int bt = 0; bt < 4; ++bt, t *= 0.5) {
      Eigen::VectorXd trial_u = ua + t * step.head(n);
      double trial_lam = lam - t * step[n];
      ScalarField cand = scatter(u.mesh, cfg.bc, act, trial_u);
      double trial_kkt = kkt_residual(cand, w, eps, trial_lam);
      if (std::isfinite(trial_kkt) && (trial_kkt < kkt || bt == 3)) {
        ua = std::move(trial_u);
        lam = trial_lam;
        kkt = trial_kkt;
        cur = std::move(cand);
        took = true;
        break;
      }
    }
    if (!took) throw DidNotConverge("newton step produced no finite residual");
    rec.kkt_history.push_back(kkt);
    converged = kkt <= cfg.newton_tol;
  }

  if (!converged) throw DidNotConverge("newton iteration did not reach tolerance");

  rec.field = cur;
  rec.energy = energy(cur, w, eps);
  rec.lambda = lam;
  rec.kkt_residual = kkt;
  auto [index, gap] = morse_index(cur, w, cfg);
  rec.morse_index = index;
  rec.gap = gap;
  rec.nondegenerate = !rec.singular && gap > 1e-6 * (eps + 1.0 / eps);
  rec.barycenter = barycenter(cur);
  rec.projected_point = compose_B(cur, cfg.bc, false);
  return rec;
}

std::pair<int, double> morse_index(const ScalarField& u, const PotentialSpec& w,
                                   const SolveConfig& cfg) {
  const DomainMesh& mesh = *u.mesh;
  validate_core(cfg, mesh);
  ActiveSet act = active_set(mesh, cfg.bc);
  const double eps = cfg.epsilon;
  const int n = int(act.idx.size());

  Eigen::VectorXd ua = gather(act, u.u);
  Eigen::SparseMatrix<double> H = hessian_matrix(act, w, eps, ua);

  // pencil magnitude bound (Gershgorin rows over the lumped metric)
  double bound = 0;
  {
    Eigen::VectorXd rowabs = Eigen::VectorXd::Zero(n);
    for (int col = 0; col < H.outerSize(); ++col)
      for (Eigen::SparseMatrix<double>::InnerIterator it(H, col); it; ++it)
        rowabs[int(it.row())] += std::abs(it.value());
    bound = (rowabs.array() / act.ml.array()).maxCoeff();
  }

  // negative count of (H - sigma diag(ml)) restricted to ml-perp, by the
  // inertia of the factored matrix plus the sign of the bordered Schur scalar
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt;
  auto count_below = [&](double sigma) -> int {
    for (int nudge = 0; nudge < 4; ++nudge) {
      Eigen::SparseMatrix<double> A = H;
      double s = sigma + nudge * 1e-13 * std::max(1.0, std::abs(sigma));
      for (int k = 0; k < n; ++k) A.coeffRef(k, k) -= s * act.ml[k];
      ldlt.compute(A);
      if (ldlt.info() != Eigen::Success) continue;
      Eigen::VectorXd d = ldlt.vectorD();
      if (!d.allFinite() || (d.array() == 0.0).any()) continue;
      int neg = int((d.array() < 0).count());
      Eigen::VectorXd x = ldlt.solve(act.ml);
      double schur = act.ml.dot(x);
      return neg + (schur > 0 ? 1 : 0) - 1;
    }
    throw LinearSolveFailure("inertia factorization kept hitting zero pivots");
  };

  const double tau = 1e-12 * bound;
  int k0 = count_below(-tau);

  // nearest eigenvalue above zero
  double up = 1e-9 * bound;
  while (count_below(up) <= k0) {
    up *= 8;
    if (up > 4 * bound) break;
  }
  double lo = -tau, hi = up;
  if (count_below(up) > k0) {
    for (int i = 0; i < 44; ++i) {
      double mid = 0.5 * (lo + hi);
      (count_below(mid) > k0 ? hi : lo) = mid;
    }
  } else {
    lo = hi;  // spectrum exhausted below the cap; treat the cap as the edge
  }
  double gap = 0.5 * (lo + hi);

  if (k0 > 0) {
    double dn = -1e-9 * bound;
    while (count_below(dn) >= k0) {
      dn *= 8;
      if (dn < -4 * bound) break;
    }
    double nlo = dn, nhi = -tau;
    if (count_below(dn) < k0) {
      for (int i = 0; i < 44; ++i) {
        double mid = 0.5 * (nlo + nhi);
        (count_below(mid) < k0 ? nlo : nhi) = mid;
      }
    } else {
      nlo = nhi;
    }
    gap = std::min(gap, std::abs(0.5 * (nlo + nhi)));
  }
  return {k0, gap};
}

SolveConfig resolve_tolerances(SolveConfig cfg, const DomainMesh& mesh, const PotentialSpec& w) {
  validate_core(cfg, mesh);
  if (cfg.dedup_l2 <= 0) cfg.dedup_l2 = 0.2 * std::sqrt(cfg.m);
  if (cfg.dedup_bary <= 0) cfg.dedup_bary = 0.5 * std::sqrt(cfg.m);
  if (cfg.dedup_energy <= 0)
    cfg.dedup_energy =
        0.05 * sublevel_threshold(mesh, w, cfg.m, cfg.bc, cfg.gamma_hat, cfg.slack_factor);
  return cfg;
}

std::vector<CriticalPointRecord> dedup(std::vector<CriticalPointRecord> records,
                                       const SolveConfig& cfg) {
  if (cfg.dedup_l2 <= 0 || cfg.dedup_energy <= 0 || cfg.dedup_bary <= 0)
    throw ConfigError("dedup tolerances are unresolved");
  if (records.empty()) return records;

  std::sort(records.begin(), records.end(),
            [](const CriticalPointRecord& a, const CriticalPointRecord& b) {
              if (a.energy != b.energy) return a.energy < b.energy;
              if (a.kkt_residual != b.kkt_residual) return a.kkt_residual < b.kkt_residual;
              return a.seed_provenance < b.seed_provenance;
            });

  const Eigen::SparseMatrix<double>& M = records.front().field.mesh->M;
  std::vector<CriticalPointRecord> reps;
  for (auto& rec : records) {
    bool merged = false;
    for (auto& rep : reps) {
      if (std::abs(rec.energy - rep.energy) > cfg.dedup_energy) continue;
      if (dist(rec.barycenter, rep.barycenter) > cfg.dedup_bary) continue;
      Eigen::VectorXd d = rec.field.u - rep.field.u;
      if (std::sqrt(d.dot(M * d)) > cfg.dedup_l2) continue;
      if (rec.kkt_residual < rep.kkt_residual) rep = rec;
      merged = true;
      break;
    }
    if (!merged) reps.push_back(rec);
  }
  std::sort(reps.begin(), reps.end(),
            [](const CriticalPointRecord& a, const CriticalPointRecord& b) {
              return a.energy < b.energy;
            });
  return reps;
}

bool concentration_check(const CriticalPointRecord& rec, const SolveConfig& cfg) {
  const DomainMesh& mesh = *rec.field.mesh;
  double r = cfg.mu_hat * std::sqrt(cfg.m);
  double outside = 0;
  for (int i = 0; i < mesh.n_nodes(); ++i)
    if (dist(mesh.nodes[i], rec.projected_point) > r)
      outside += mesh.ML[i] * std::abs(rec.field.u[i]);
  return outside <= cfg.alpha * cfg.m;
}

MultistartResult multistart(const MeshPtr& mesh, const PotentialSpec& w, const SolveConfig& cfg0) {
  validate_core(cfg0, *mesh);
  if (cfg0.n_seeds < 1) throw ConfigError("n_seeds must be >= 1");
  SolveConfig cfg = resolve_tolerances(cfg0, *mesh, w);
  ProfileTable profile = solve_profile(w, cfg.epsilon);

  // seeds spread over the loops in proportion to their length
  struct Seed {
    int loop;
    double s;
    std::string label;
  };
  std::vector<Seed> seeds;
  {
    int n_loops = int(mesh->loops.size());
    double total = 0;
    for (double L : mesh->loop_length) total += L;
    std::vector<int> quota(n_loops);
    std::vector<std::pair<double, int>> frac(n_loops);
    int assigned = 0;
    for (int l = 0; l < n_loops; ++l) {
      double want = cfg.n_seeds * mesh->loop_length[l] / total;
      quota[l] = int(want);
      frac[l] = {want - quota[l], l};
      assigned += quota[l];
    }
    std::sort(frac.begin(), frac.end(), [](auto& a, auto& b) {
      if (a.first != b.first) return a.first > b.first;
      return a.second < b.second;
    });
    for (int k = 0; assigned < cfg.n_seeds; ++k, ++assigned) quota[frac[k % n_loops].second]++;
    for (int l = 0; l < n_loops; ++l)
      for (int j = 0; j < quota[l]; ++j) {
        double s = (j + 0.5) * mesh->loop_length[l] / quota[l];
        char label[64];
        std::snprintf(label, sizeof label, "%s loop %d, s=%.6g",
                      cfg.bc == BC::Neumann ? "boundary" : "collar", l, s);
        seeds.push_back({l, s, label});
      }
  }

  MultistartResult out;
  out.n_seeds_run = int(seeds.size()) + (cfg.bc == BC::Neumann ? 1 : 0);

  std::vector<CriticalPointRecord> slot_rec(seeds.size(), CriticalPointRecord{ScalarField(
                                                mesh, cfg.bc, Eigen::VectorXd::Zero(mesh->n_nodes()))});
  std::vector<std::string> slot_err(seeds.size());
  std::vector<char> slot_ok(seeds.size(), 0);
  std::vector<FlowStats> slot_flow(seeds.size());
  std::vector<char> slot_flowed(seeds.size(), 0);

  auto run_seed = [&](int i) {
    const Seed& sd = seeds[i];
    try {
      PhotographOutput ph =
          cfg.bc == BC::Neumann
              ? photograph_neumann(mesh, w, profile, boundary_point(*mesh, sd.loop, sd.s), cfg.m)
              : photograph_dirichlet(mesh, w, profile, boundary_point(*mesh, sd.loop, sd.s).p,
                                     cfg.m);
      ScalarField settled = flow(ph.field, w, cfg, &slot_flow[i]);
      slot_flowed[i] = 1;
      CriticalPointRecord rec = newton_refine(settled, w, cfg);
      rec.seed_provenance = sd.label;
      slot_rec[i] = std::move(rec);
      slot_ok[i] = 1;
    } catch (const Error& e) {
      slot_err[i] = sd.label + std::string(": ") + e.what();
    } catch (const std::exception& e) {
      slot_err[i] = sd.label + std::string(": ") + e.what();
    }
  };

  if (cfg.jobs <= 1 || seeds.size() <= 1) {
    for (int i = 0; i < int(seeds.size()); ++i) run_seed(i);
  } else {
    int nt = std::min<int>(cfg.jobs, int(seeds.size()));
    std::vector<std::thread> pool;
    pool.reserve(nt);
    for (int t = 0; t < nt; ++t)
      pool.emplace_back([&, t] {
        for (int i = t; i < int(seeds.size()); i += nt) run_seed(i);
      });
    for (auto& th : pool) th.join();
  }

  std::vector<CriticalPointRecord> records;
  for (int i = 0; i < int(seeds.size()); ++i) {
    if (slot_ok[i])
      records.push_back(std::move(slot_rec[i]));
    else
      out.failures.push_back(std::move(slot_err[i]));
    if (slot_flowed[i]) {
      ++out.n_flows;
      out.max_mass_drift = std::max(out.max_mass_drift, slot_flow[i].max_mass_drift);
      out.energy_monotone = out.energy_monotone && slot_flow[i].energy_monotone;
    }
  }

  if (cfg.bc == BC::Neumann) {
    try {
      ScalarField flat(mesh, BC::Neumann,
                       Eigen::VectorXd::Constant(mesh->n_nodes(), cfg.m / mesh->area));
      CriticalPointRecord rec = newton_refine(flat, w, cfg);
      rec.seed_provenance = "constant";
      records.push_back(std::move(rec));
    } catch (const Error& e) {
      out.failures.push_back(std::string("constant: ") + e.what());
    }
  }

  out.c_m = sublevel_threshold(*mesh, w, cfg.m, cfg.bc, cfg.gamma_hat, cfg.slack_factor);
  out.records = dedup(std::move(records), cfg);
  return out;
}

}  // namespace acmc
