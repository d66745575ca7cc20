#include <chrono>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "acmc/checks.hpp"
#include "acmc/config.hpp"
#include "acmc/energy.hpp"
#include "acmc/errors.hpp"
#include "acmc/isoperimetry.hpp"
#include "acmc/photography.hpp"
#include "acmc/report.hpp"
#include "acmc/solver.hpp"

using namespace acmc;

namespace {

constexpr double kPi = 3.14159265358979323846;

struct Timer {
  std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
  double lap() {
    auto t1 = std::chrono::steady_clock::now();
    double s = std::chrono::duration<double>(t1 - t0).count();
    t0 = t1;
    return s;
  }
};

struct Session {
  ExperimentConfig cfg;
  RunReport rep;
  Timer timer;

  MeshPtr mesh;  // built on demand
  PotentialSpec w;
  double m = 0;

  void stage(const std::string& name) { rep.stage_seconds.emplace_back(name, timer.lap()); }
};

PotentialSpec make_potential(const ExperimentConfig& cfg) {
  if (cfg.potential == "scaled") return scaled_potential(cfg.potential_scale);
  return quartic_potential();
}

// mesh + mass resolution; every solver-facing command funnels through here
void open_domain(Session& s, bool enforce_eps_cap) {
  double area0 = analytic_area(s.cfg.domain);
  if (enforce_eps_cap) {
    validate_caps(s.cfg, area0);
  } else {
    ExperimentConfig relaxed = s.cfg;
    relaxed.eps_cap_frac = 1e300;  // sweeps may deliberately sit above the cap
    validate_caps(relaxed, area0);
  }
  s.mesh = build_domain(s.cfg.domain);
  s.m = resolve_mass(s.cfg, s.mesh->area);
  s.stage("mesh");

  double eta = solve_profile(s.w, resolve_epsilons(s.cfg, s.m).front()).eta;
  if (eta < 4 * s.cfg.domain.h)
    std::fprintf(stderr,
                 "warning: transition layer width %.4g spans under 4 cells at h = %.4g\n", eta,
                 s.cfg.domain.h);
}

SolveConfig solver_config(const Session& s, double epsilon) {
  SolveConfig cfg = s.cfg.solve;
  cfg.epsilon = epsilon;
  cfg.m = s.m;
  cfg.bc = s.cfg.mode;
  return cfg;
}

void emit_field(const Session& s, const ScalarField& f, const std::string& stem, Vec2 bary,
                Vec2 proj) {
  if (s.cfg.write_csv) write_field_csv(f, s.cfg.out_dir + "/fields/" + stem + ".csv");
  if (s.cfg.write_svg)
    render_field_svg(f, s.cfg.out_dir + "/fields/" + stem + ".svg", bary, proj);
}

void finish(Session& s) {
  s.stage("report");
  if (s.cfg.write_json) write_report(s.rep, s.cfg.out_dir);
}

// ---- subcommands ----

int cmd_profile(Session& s) {
  double sigma = surface_tension(s.w);
  AssumptionReport as = check_assumptions(s.w);
  std::printf("potential = %s\n", s.w.name.c_str());
  std::printf("sigma = %.9f\n", sigma);
  std::printf("assumptions ok = %s (growth p = %.2f)\n", as.ok() ? "yes" : "no", as.growth_p);

  nlohmann::ordered_json jprofiles = nlohmann::ordered_json::array();
  double m = resolve_mass(s.cfg, analytic_area(s.cfg.domain));
  std::vector<double> epsilons = resolve_epsilons(s.cfg, m);
  for (size_t i = 0; i < epsilons.size(); ++i) {
    ProfileTable pr = solve_profile(s.w, epsilons[i]);
    std::printf("epsilon = %-8g eta = %-10.6g slope0 = %-10.6g samples = %zu\n", pr.eps, pr.eta,
                pr.slope0(), pr.t.size());
    jprofiles.push_back({{"epsilon", pr.eps},
                         {"eta", pr.eta},
                         {"slope0", pr.slope0()},
                         {"samples", pr.t.size()}});
    if (s.cfg.write_csv) {
      std::string csv = "t,q\n";
      char line[64];
      for (size_t k = 0; k < pr.t.size(); ++k) {
        std::snprintf(line, sizeof line, "%.17g,%.17g\n", pr.t[k], pr.q[k]);
        csv += line;
      }
      write_text_file(s.cfg.out_dir + "/profile_" + std::to_string(i) + ".csv", csv);
    }
  }
  s.stage("profile");
  s.rep.payload = {{"sigma", sigma},
                   {"assumptions",
                    {{"nondegenerate_wells", as.nondegenerate_wells},
                     {"coercive", as.coercive},
                     {"subcritical", as.subcritical},
                     {"growth_p", as.growth_p}}},
                   {"profiles", jprofiles}};
  finish(s);
  return 0;
}

int cmd_isoperimetric(Session& s) {
  open_domain(s, true);
  ProfileEstimate rel = estimate_profile(*s.mesh, s.m, BC::Neumann);
  ProfileEstimate full = estimate_profile(*s.mesh, s.m, BC::Dirichlet);
  double r1 = rel.I_M / euclidean_profile(s.m, true);
  double r2 = full.I_bar_M / euclidean_profile(s.m, false);
  std::printf("m = %.6g\nI_M = %.6g (half-ball ratio %.4f)\nI_bar_M = %.6g (ball ratio %.4f)\n",
              s.m, rel.I_M, r1, full.I_bar_M, r2);
  s.stage("estimate");

  char row[256];
  std::snprintf(row, sizeof row, "%.17g,%.17g,%.17g,%.17g,%.17g\n", s.m, rel.I_M, full.I_bar_M,
                r1, r2);
  if (s.cfg.write_csv)
    write_text_file(s.cfg.out_dir + "/isoperimetric.csv",
                    std::string("m,I_M,I_bar_M,ratio_relative,ratio_full\n") + row);

  s.rep.payload = {{"m", s.m},
                   {"I_M", rel.I_M},
                   {"I_bar_M", full.I_bar_M},
                   {"ratio_relative", r1},
                   {"ratio_full", r2},
                   {"best_center_relative", {rel.best_center.x, rel.best_center.y}},
                   {"best_center_full", {full.best_center.x, full.best_center.y}}};
  finish(s);
  return 0;
}

// seed points spread over the loops exactly like the multistart
std::vector<BoundaryPoint> seed_points(const DomainMesh& mesh, int n) {
  std::vector<BoundaryPoint> pts;
  double total = 0;
  for (double L : mesh.loop_length) total += L;
  for (int l = 0; l < int(mesh.loops.size()); ++l) {
    int quota = std::max(1, int(std::lround(n * mesh.loop_length[l] / total)));
    for (int j = 0; j < quota && int(pts.size()) < n; ++j)
      pts.push_back(boundary_point(mesh, l, (j + 0.5) * mesh.loop_length[l] / quota));
  }
  return pts;
}

int cmd_photograph(Session& s) {
  open_domain(s, true);
  double epsilon = resolve_epsilons(s.cfg, s.m).front();
  ProfileTable pr = solve_profile(s.w, epsilon);
  double c_m = sublevel_threshold(*s.mesh, s.w, s.m, s.cfg.mode, s.cfg.solve.gamma_hat,
                                  s.cfg.solve.slack_factor);
  std::printf("threshold c_m = %.6g\n", c_m);

  nlohmann::ordered_json seeds = nlohmann::ordered_json::array();
  std::vector<BoundaryPoint> pts = seed_points(*s.mesh, s.cfg.solve.n_seeds);
  int within = 0;
  for (size_t i = 0; i < pts.size(); ++i) {
    PhotographOutput ph = s.cfg.mode == BC::Neumann
                              ? photograph_neumann(s.mesh, s.w, pr, pts[i], s.m)
                              : photograph_dirichlet(s.mesh, s.w, pr, pts[i].p, s.m);
    bool under = ph.energy_at_emission <= c_m;
    within += under;
    std::printf("seed %2zu at (%7.4f, %7.4f): emission %.6g %s\n", i, ph.source_point.x,
                ph.source_point.y, ph.energy_at_emission, under ? "<= c_m" : "> c_m");
    seeds.push_back({{"source_point", {ph.source_point.x, ph.source_point.y}},
                     {"energy_at_emission", ph.energy_at_emission},
                     {"under_threshold", under}});
    char stem[32];
    std::snprintf(stem, sizeof stem, "photo_%02zu", i);
    emit_field(s, ph.field, stem, barycenter(ph.field), compose_B(ph.field, s.cfg.mode));
  }
  std::printf("%d of %zu under the threshold\n", within, pts.size());
  s.stage("photograph");
  s.rep.payload = {{"epsilon", epsilon}, {"c_m", c_m}, {"seeds", seeds}};
  finish(s);
  return 0;
}

int cmd_gamma_check(Session& s) {
  open_domain(s, false);  // convergence tables approach the limit from large epsilon
  double sigma = surface_tension(s.w);
  BoundaryPoint bp = boundary_point(*s.mesh, 0, 0);

  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  std::string csv = "epsilon,energy,limit,gap,energy_per_perimeter\n";
  std::printf("%-10s %-12s %-12s %-12s %s\n", "epsilon", "energy", "sigma*P", "gap", "E/P");
  for (double epsilon : resolve_epsilons(s.cfg, s.m)) {
    PhotographOutput ph = s.cfg.mode == BC::Neumann
                              ? photograph_neumann(s.mesh, s.w, bp, s.m, epsilon)
                              : photograph_dirichlet(s.mesh, s.w, bp.p, s.m, epsilon);
    double lim = limit_energy(ph.region, sigma, s.cfg.mode);
    double per = lim / sigma;
    double gap = ph.energy_at_emission - lim;
    std::printf("%-10g %-12.6g %-12.6g %-12.6g %.6g\n", epsilon, ph.energy_at_emission, lim, gap,
                ph.energy_at_emission / per);
    char line[160];
    std::snprintf(line, sizeof line, "%.17g,%.17g,%.17g,%.17g,%.17g\n", epsilon,
                  ph.energy_at_emission, lim, gap, ph.energy_at_emission / per);
    csv += line;
    rows.push_back({{"epsilon", epsilon},
                    {"energy", ph.energy_at_emission},
                    {"limit", lim},
                    {"gap", gap},
                    {"energy_per_perimeter", ph.energy_at_emission / per}});
  }
  s.stage("sweep");
  if (s.cfg.write_csv) write_text_file(s.cfg.out_dir + "/gamma_check.csv", csv);
  s.rep.payload = {{"sigma", sigma}, {"rows", rows}};
  finish(s);
  return 0;
}

nlohmann::ordered_json flow_json(const FlowStats& st) {
  return {{"steps", st.steps},
          {"halvings", st.halvings},
          {"max_mass_drift", st.max_mass_drift},
          {"energy_monotone", st.energy_monotone},
          {"initial_energy", st.initial_energy},
          {"final_energy", st.final_energy}};
}

int cmd_solve(Session& s) {
  open_domain(s, true);
  double epsilon = resolve_epsilons(s.cfg, s.m).front();
  SolveConfig cfg = solver_config(s, epsilon);
  ProfileTable pr = solve_profile(s.w, epsilon);

  BoundaryPoint bp = boundary_point(*s.mesh, 0, 0);
  PhotographOutput ph = s.cfg.mode == BC::Neumann
                            ? photograph_neumann(s.mesh, s.w, pr, bp, s.m)
                            : photograph_dirichlet(s.mesh, s.w, pr, bp.p, s.m);
  s.stage("photograph");
  FlowStats st;
  ScalarField settled = flow(ph.field, s.w, cfg, &st);
  s.stage("flow");
  CriticalPointRecord rec = newton_refine(settled, s.w, cfg);
  rec.seed_provenance = "boundary loop 0, s=0";
  s.stage("newton");

  std::printf("energy = %.8g  lambda = %.6g  kkt = %.3g  index = %d  gap = %.4g\n", rec.energy,
              rec.lambda, rec.kkt_residual, rec.morse_index, rec.gap);
  nlohmann::ordered_json jr = record_to_json(rec);
  jr["concentration"] = concentration_check(rec, cfg);
  s.rep.payload = {{"epsilon", epsilon}, {"record", jr}, {"flow", flow_json(st)}};
  if (s.cfg.write_csv) write_summary_csv({rec}, s.cfg.out_dir + "/summary.csv");
  emit_field(s, rec.field, "rec_00", rec.barycenter, rec.projected_point);
  finish(s);
  return 0;
}

int cmd_multiplicity(Session& s) {
  open_domain(s, true);
  double epsilon = resolve_epsilons(s.cfg, s.m).front();
  SolveConfig cfg = solver_config(s, epsilon);
  MultistartResult res = multistart(s.mesh, s.w, cfg);
  s.stage("multistart");

  int target = cat_target(s.cfg.domain, s.cfg.mode);
  nlohmann::ordered_json payload = multistart_to_json(res, cfg, target);
  payload["epsilon"] = epsilon;
  payload["flows"] = {{"count", res.n_flows},
                      {"max_mass_drift", res.max_mass_drift},
                      {"energy_monotone", res.energy_monotone}};

  std::printf("c_m = %.6g, target count = %d\n", res.c_m, target);
  for (size_t i = 0; i < res.records.size(); ++i) {
    const CriticalPointRecord& r = res.records[i];
    std::printf("#%02zu E = %-12.8g lambda = %-10.4g index = %d gap = %-9.3g %s  [%s]\n", i,
                r.energy, r.lambda, r.morse_index, r.gap,
                r.energy <= res.c_m ? "low " : "high", r.seed_provenance.c_str());
    char stem[32];
    std::snprintf(stem, sizeof stem, "rec_%02zu", i);
    emit_field(s, r.field, stem, r.barycenter, r.projected_point);
  }
  for (const std::string& f : res.failures) std::printf("failed: %s\n", f.c_str());
  std::printf("n_distinct = %d, qualified = %d, passed = %s\n", int(res.records.size()),
              payload["summary"]["n_qualified"].get<int>(),
              payload["summary"]["passed"].get<bool>() ? "yes" : "no");

  if (s.cfg.write_csv) write_summary_csv(res.records, s.cfg.out_dir + "/summary.csv");
  s.rep.payload = std::move(payload);
  finish(s);
  return 0;
}

int cmd_check(Session& s, const std::vector<int>& only, bool have_out) {
  std::vector<CheckResult> results = run_checks(only);
  bool all = true;
  nlohmann::ordered_json verdicts = nlohmann::ordered_json::array();
  for (const CheckResult& r : results) {
    std::printf("%2d %s  %-52s (%.2f s)  %s\n", r.id, r.passed ? "PASS" : "FAIL", r.name.c_str(),
                r.seconds, r.detail.c_str());
    all = all && r.passed;
    verdicts.push_back(
        {{"id", r.id}, {"name", r.name}, {"passed", r.passed}, {"detail", r.detail}});
    s.rep.stage_seconds.emplace_back("check " + std::to_string(r.id), r.seconds);
  }
  if (have_out) {
    s.rep.payload = {{"verdicts", verdicts}, {"all_passed", all}};
    write_report(s.rep, s.cfg.out_dir);
  }
  return all ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"critical points of the mass-constrained allen-cahn energy"};
  app.require_subcommand(1);

  std::string config_path, out_dir, format;
  std::uint64_t seed = 0;
  int jobs = 0;
  app.add_option("--config", config_path, "experiment configuration file");
  auto* out_opt = app.add_option("--out", out_dir, "output directory (overrides the config)");
  auto* seed_opt = app.add_option("--seed", seed, "random seed override");
  app.add_option("--jobs", jobs, "parallel seed workers override");
  app.add_option("--format", format, "json or csv")
      ->check(CLI::IsMember({"json", "csv"}));

  std::vector<int> only;
  CLI::App* sub_check = app.add_subcommand("check", "run the verification suite");
  sub_check->add_option("--only", only, "restrict to these check numbers");
  const char* names[] = {"profile", "isoperimetric", "photograph", "gamma-check", "solve",
                         "multiplicity"};
  const char* descs[] = {"potential and transition profile tables",
                         "perimeter-minimizing ball estimates",
                         "recovery fields from boundary seeds",
                         "energy convergence table over an epsilon sweep",
                         "settle and certify a single seed",
                         "full multistart with deduplication and verdict"};
  for (int i = 0; i < 6; ++i) app.add_subcommand(names[i], descs[i]);
  for (CLI::App* sub : app.get_subcommands({})) sub->fallthrough();

  CLI11_PARSE(app, argc, argv);
  CLI::App* sub = app.get_subcommands().front();

  try {
    Session s;
    if (sub->get_name() == "check") {
      if (!config_path.empty()) s.cfg = parse_config_file(config_path);
      if (!out_dir.empty()) s.cfg.out_dir = out_dir;
      s.rep.subcommand = "check";
      s.rep.config_echo = "";
      return cmd_check(s, only, !out_dir.empty());
    }

    if (config_path.empty()) throw ConfigError("--config is required");
    s.cfg = parse_config_file(config_path);
    if (*seed_opt) s.cfg.solve.rng_seed = seed;
    if (jobs > 0) s.cfg.solve.jobs = jobs;
    if (format == "json") s.cfg.write_csv = false;
    if (format == "csv") s.cfg.write_json = false;

    s.w = make_potential(s.cfg);
    s.rep.subcommand = sub->get_name();
    // echo before the --out override: where the artifact lands is not an input
    s.rep.config_echo = render_config(s.cfg);
    if (*out_opt) s.cfg.out_dir = out_dir;
    s.stage("setup");

    if (sub->get_name() == "profile") return cmd_profile(s);
    if (sub->get_name() == "isoperimetric") return cmd_isoperimetric(s);
    if (sub->get_name() == "photograph") return cmd_photograph(s);
    if (sub->get_name() == "gamma-check") return cmd_gamma_check(s);
    if (sub->get_name() == "solve") return cmd_solve(s);
    if (sub->get_name() == "multiplicity") return cmd_multiplicity(s);
    throw ConfigError("unknown subcommand " + sub->get_name());
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  } catch (const Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 3;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 3;
  }
}
