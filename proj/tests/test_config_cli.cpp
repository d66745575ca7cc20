#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <cstdlib>
#include <string>
#include <sys/wait.h>

#include "acmc/config.hpp"
#include "acmc/errors.hpp"
#include "acmc/mesh.hpp"

using namespace acmc;

namespace {
constexpr double PI = 3.14159265358979323846;

const char* kFull = R"(
# eccentric hole, coarse mesh
[domain]
kind = eccentric_annulus
r_out = 1.0
r_in = 0.4
offset_x = 0.25
offset_y = 0.0
h = 0.03

[potential]
name = quartic

[problem]
mode = neumann
m_frac = 0.01
epsilon = auto

[solver]
n_seeds = 32
rng_seed = 7
jobs = 2

[output]
dir = out/ecc
formats = json, svg
)";
}  // namespace

TEST_CASE("a full config file parses into the right fields") {
  ExperimentConfig cfg = parse_config_text(kFull);
  CHECK(cfg.domain.kind == DomainKind::EccentricAnnulus);
  CHECK(cfg.domain.r_out == 1.0);
  CHECK(cfg.domain.r_in == 0.4);
  CHECK(cfg.domain.hole_offset.x == 0.25);
  CHECK(cfg.domain.h == 0.03);
  CHECK(cfg.potential == "quartic");
  CHECK(cfg.mode == BC::Neumann);
  CHECK(cfg.m == 0.0);
  CHECK(cfg.m_frac == 0.01);
  CHECK(cfg.epsilon_auto);
  CHECK(cfg.epsilons.empty());
  CHECK(cfg.solve.n_seeds == 32);
  CHECK(cfg.solve.rng_seed == 7);
  CHECK(cfg.solve.jobs == 2);
  CHECK(cfg.out_dir == "out/ecc");
  CHECK(cfg.write_json);
  CHECK(!cfg.write_csv);
  CHECK(cfg.write_svg);

  // untouched knobs keep their defaults
  CHECK(cfg.solve.newton_tol == 1e-9);
  CHECK(cfg.solve.mu_hat == 3.0);
  CHECK(cfg.m_cap_frac == 0.02);
  CHECK(cfg.eps_cap_frac == 0.1);
}

TEST_CASE("parse failures name the line and the offending field") {
  auto msg = [](const std::string& text) {
    try {
      parse_config_text(text);
    } catch (const ConfigError& e) {
      return std::string(e.what());
    }
    return std::string("(no throw)");
  };

  std::string neg_eps = "[problem]\nmode = neumann\nm = 0.01\nepsilon = -0.5\n";
  std::string m1 = msg(neg_eps);
  CHECK(m1.find("epsilon") != std::string::npos);
  CHECK(m1.find("line 4") != std::string::npos);

  CHECK(msg("[domain]\nbogus = 1\n").find("domain.bogus") != std::string::npos);
  CHECK(msg("[orchard]\n").find("orchard") != std::string::npos);
  CHECK(msg("kind = disk\n").find("outside any section") != std::string::npos);
  CHECK(msg("[domain]\nh 0.05\n").find("key = value") != std::string::npos);
  CHECK(msg("[domain]\nh = fast\n").find("not a number") != std::string::npos);

  std::string base = "[problem]\nmode = neumann\n";
  CHECK(msg(base + "epsilon = 0.01\n").find("problem.m") != std::string::npos);
  CHECK(msg(base + "m = 0.01\n").find("epsilon") != std::string::npos);
  CHECK(msg(base + "m = 0.01\nm_frac = 0.5\nepsilon = 0.01\n").find("both") !=
        std::string::npos);
  CHECK(msg(base + "m = 0.01\nepsilon = 0.01\nepsilon_sweep = 0.1, 0.2\n").find("both") !=
        std::string::npos);

  CHECK_THROWS_AS(parse_config_file("/nonexistent/path.cfg"), ConfigError);
}

TEST_CASE("epsilon sweeps parse as lists") {
  ExperimentConfig cfg = parse_config_text(
      "[problem]\nmode = dirichlet\nm = 0.05\nepsilon_sweep = 0.08, 0.04, 0.02\n");
  CHECK(cfg.mode == BC::Dirichlet);
  REQUIRE(cfg.epsilons.size() == 3);
  CHECK(cfg.epsilons[0] == 0.08);
  CHECK(cfg.epsilons[2] == 0.02);
  CHECK(!cfg.epsilon_auto);
}

TEST_CASE("analytic areas match the closed forms") {
  DomainSpec d;
  CHECK(analytic_area(d) == doctest::Approx(PI));
  d.kind = DomainKind::Annulus;
  d.r_in = 0.5;
  CHECK(analytic_area(d) == doctest::Approx(0.75 * PI));
  d.kind = DomainKind::Rectangle;
  d.width = 2.0;
  d.height = 0.5;
  CHECK(analytic_area(d) == doctest::Approx(1.0));
}

TEST_CASE("mass and epsilon resolution, auto picks the cap") {
  ExperimentConfig cfg = parse_config_text(kFull);
  double area = analytic_area(cfg.domain);
  double m = resolve_mass(cfg, area);
  CHECK(m == doctest::Approx(0.01 * area));

  auto eps = resolve_epsilons(cfg, m);
  REQUIRE(eps.size() == 1);
  CHECK(eps[0] == doctest::Approx(0.1 * std::sqrt(m / PI)));
  CHECK(eps[0] == epsilon_cap(cfg, m));

  // absolute mass takes precedence over the fraction slot
  ExperimentConfig abs = parse_config_text("[problem]\nmode = neumann\nm = 0.02\nepsilon = 0.001\n");
  CHECK(resolve_mass(abs, 100.0) == 0.02);
  CHECK(resolve_epsilons(abs, 0.02) == std::vector<double>{0.001});
}

TEST_CASE("the two running caps accept the boundary and reject beyond it") {
  ExperimentConfig cfg = parse_config_text(kFull);
  double area = analytic_area(cfg.domain);
  CHECK_NOTHROW(validate_caps(cfg, area));  // epsilon exactly at the cap

  ExperimentConfig heavy = cfg;
  heavy.m_frac = 0.021;
  try {
    validate_caps(heavy, area);
    CHECK(false);
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("problem.m") != std::string::npos);
  }

  ExperimentConfig coarse = cfg;
  coarse.epsilon_auto = false;
  double m = resolve_mass(cfg, area);
  coarse.epsilons = {1.01 * epsilon_cap(cfg, m)};
  try {
    validate_caps(coarse, area);
    CHECK(false);
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("problem.epsilon") != std::string::npos);
  }

  // caps are themselves configuration
  ExperimentConfig loose = coarse;
  loose.eps_cap_frac = 0.2;
  CHECK_NOTHROW(validate_caps(loose, area));
}

TEST_CASE("rendered configs parse back to the same experiment") {
  ExperimentConfig cfg = parse_config_text(kFull);
  cfg.solve.alpha = 0.07;
  cfg.solve.dedup_l2 = 0.123456789012345;
  std::string text = render_config(cfg);
  ExperimentConfig back = parse_config_text(text);

  CHECK(back.domain.kind == cfg.domain.kind);
  CHECK(back.domain.r_out == cfg.domain.r_out);
  CHECK(back.domain.r_in == cfg.domain.r_in);
  CHECK(back.domain.hole_offset.x == cfg.domain.hole_offset.x);
  CHECK(back.domain.h == cfg.domain.h);
  CHECK(back.mode == cfg.mode);
  CHECK(back.m == cfg.m);
  CHECK(back.m_frac == cfg.m_frac);
  CHECK(back.epsilon_auto == cfg.epsilon_auto);
  CHECK(back.solve.alpha == cfg.solve.alpha);
  CHECK(back.solve.dedup_l2 == cfg.solve.dedup_l2);
  CHECK(back.solve.rng_seed == cfg.solve.rng_seed);
  CHECK(back.out_dir == cfg.out_dir);
  CHECK(back.write_json == cfg.write_json);
  CHECK(back.write_csv == cfg.write_csv);
  CHECK(back.write_svg == cfg.write_svg);

  // rendering is idempotent, so the echo in a report is stable
  CHECK(render_config(back) == text);

  ExperimentConfig sweep = parse_config_text(
      "[problem]\nmode = dirichlet\nm = 0.05\nepsilon_sweep = 0.08, 0.04, 0.02\n"
      "[output]\nformats = none\n");
  ExperimentConfig sweep_back = parse_config_text(render_config(sweep));
  CHECK(sweep_back.epsilons == sweep.epsilons);
  CHECK(!sweep_back.write_json);
  CHECK(!sweep_back.write_csv);
  CHECK(!sweep_back.write_svg);
}

TEST_CASE("the collar depth override reaches the mesh") {
  ExperimentConfig cfg =
      parse_config_text("[domain]\nkind = annulus\nr_in = 0.5\nh = 0.2\ncollar_depth = 0.18\n"
                        "[problem]\nmode = dirichlet\nm = 0.01\nepsilon = 0.003\n");
  CHECK(cfg.domain.delta_M == 0.18);
  MeshPtr mesh = build_domain(cfg.domain);
  CHECK(mesh->delta_M == 0.18);

  cfg.domain.delta_M = 0;
  CHECK(build_domain(cfg.domain)->delta_M == doctest::Approx(0.125));

  cfg.domain.delta_M = 5.0;  // deeper than the thinnest feature
  CHECK_THROWS_AS(build_domain(cfg.domain), InvalidGeometry);
}

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "acmc/errors.hpp"
#include "acmc/photography.hpp"
#include "acmc/report.hpp"

using namespace acmc;
namespace fs = std::filesystem;

namespace {

MeshPtr disk(double h) {
  DomainSpec s;
  s.h = h;
  return build_domain(s);
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

int count_of(const std::string& hay, const std::string& needle) {
  int n = 0;
  for (size_t at = hay.find(needle); at != std::string::npos; at = hay.find(needle, at + 1)) ++n;
  return n;
}

// minimal nesting check: every opened tag is closed in order
bool well_formed_xml(const std::string& text) {
  std::vector<std::string> stack;
  size_t i = 0;
  while ((i = text.find('<', i)) != std::string::npos) {
    size_t j = text.find('>', i);
    if (j == std::string::npos) return false;
    std::string tag = text.substr(i + 1, j - i - 1);
    i = j + 1;
    if (tag.empty()) return false;
    if (tag.front() == '?' || tag.front() == '!') continue;
    if (tag.back() == '/') continue;  // self-closing
    if (tag.front() == '/') {
      if (stack.empty() || stack.back() != tag.substr(1)) return false;
      stack.pop_back();
    } else {
      stack.push_back(tag.substr(0, tag.find_first_of(" \t\n")));
    }
  }
  return stack.empty();
}

// blob of mass near the right wall; mimics a settled bump without a solve
CriticalPointRecord bump_record(const MeshPtr& mesh) {
  Eigen::VectorXd v = Eigen::VectorXd::Zero(mesh->n_nodes());
  for (int i = 0; i < mesh->n_nodes(); ++i)
    if (dist(mesh->nodes[i], {0.85, 0.0}) < 0.3) v[i] = 1.0;
  ScalarField f(mesh, BC::Neumann, std::move(v));
  CriticalPointRecord rec{f};
  rec.energy = 0.07;
  rec.lambda = 0.03;
  rec.kkt_residual = 2e-11;
  rec.morse_index = 0;
  rec.nondegenerate = true;
  rec.gap = 5.0;
  rec.barycenter = barycenter(f);
  rec.projected_point = compose_B(f, BC::Neumann);
  rec.seed_provenance = "boundary loop 0, s=0";
  return rec;
}

// constant film of the same mass: spread over the whole disk
CriticalPointRecord flat_record(const MeshPtr& mesh, double m) {
  ScalarField f(mesh, BC::Neumann,
                Eigen::VectorXd::Constant(mesh->n_nodes(), m / mesh->area));
  CriticalPointRecord rec{f};
  rec.energy = 0.5;
  rec.lambda = 1.0;
  rec.kkt_residual = 1e-12;
  rec.morse_index = 0;
  rec.nondegenerate = true;
  rec.gap = 1.0;
  rec.barycenter = barycenter(f);
  rec.projected_point = compose_B(f, BC::Neumann);
  rec.seed_provenance = "constant";
  return rec;
}

}  // namespace

TEST_CASE("record json carries the full schema") {
  MeshPtr mesh = disk(0.15);
  CriticalPointRecord rec = bump_record(mesh);
  nlohmann::ordered_json j = record_to_json(rec);
  CHECK(j["energy"] == 0.07);
  CHECK(j["lambda"] == 0.03);
  CHECK(j["kkt_residual"] == 2e-11);
  CHECK(j["morse_index"] == 0);
  CHECK(j["gap"] == 5.0);
  CHECK(j["nondegenerate"] == true);
  CHECK(j["barycenter"].size() == 2);
  CHECK(j["projected_point"].size() == 2);
  CHECK(j["seed_provenance"] == "boundary loop 0, s=0");
}

TEST_CASE("multistart json counts qualifying records toward the target") {
  MeshPtr mesh = disk(0.15);
  CriticalPointRecord bump = bump_record(mesh);
  CriticalPointRecord flat = flat_record(mesh, bump.field.mass());

  MultistartResult res;
  res.records = {bump, flat};
  res.failures = {"boundary loop 0, s=3: step collapse"};
  res.c_m = 0.2;
  res.n_seeds_run = 4;

  SolveConfig cfg;
  cfg.m = bump.field.mass();
  cfg.mu_hat = 3.0;
  cfg.alpha = 0.1;

  nlohmann::ordered_json j = multistart_to_json(res, cfg, 1);
  CHECK(j["records"].size() == 2);
  CHECK(j["records"][0]["concentration"] == true);
  CHECK(j["records"][1]["concentration"] == false);  // film: mass everywhere
  CHECK(j["failures"].size() == 1);
  CHECK(j["summary"]["n_distinct"] == 2);
  CHECK(j["summary"]["c_m"] == 0.2);
  CHECK(j["summary"]["cat_target"] == 1);
  CHECK(j["summary"]["n_qualified"] == 1);  // flat misses on energy and spread
  CHECK(j["summary"]["passed"] == true);
  CHECK(j["n_seeds_run"] == 4);

  // raising the bar flips the verdict
  CHECK(multistart_to_json(res, cfg, 2)["summary"]["passed"] == false);
}

TEST_CASE("report files split reproducible payload from timing metadata") {
  std::string dir = (fs::temp_directory_path() / "acmc_report_test").string();
  fs::remove_all(dir);

  RunReport rep;
  rep.subcommand = "solve";
  rep.config_echo = "[problem]\nmode = neumann\nm = 0.01\nepsilon = 0.005\n";
  rep.payload = {{"answer", 42}};
  rep.stage_seconds = {{"mesh", 0.12}, {"solve", 3.4}};

  write_report(rep, dir);
  std::string report = slurp(dir + "/report.json");
  std::string meta = slurp(dir + "/metadata.json");

  auto j = nlohmann::json::parse(report);
  CHECK(j["subcommand"] == "solve");
  CHECK(j["payload"]["answer"] == 42);
  CHECK(j["versions"]["library"] == kVersion);
  CHECK(report.find("timestamp") == std::string::npos);
  CHECK(report.find("seconds") == std::string::npos);

  auto mj = nlohmann::json::parse(meta);
  CHECK(mj.contains("timestamp"));
  CHECK(mj["stages"].size() == 2);
  CHECK(mj["stages"][1]["seconds"] == 3.4);

  // identical runs give byte-identical report.json
  write_report(rep, dir + "2");
  CHECK(slurp(dir + "2/report.json") == report);

  fs::remove_all(dir);
  fs::remove_all(dir + "2");
}

TEST_CASE("csv emitters write one row per record and per node") {
  MeshPtr mesh = disk(0.2);
  CriticalPointRecord rec = bump_record(mesh);
  std::string dir = (fs::temp_directory_path() / "acmc_csv_test").string();
  fs::remove_all(dir);

  write_summary_csv({rec, rec}, dir + "/summary.csv");
  std::string sum = slurp(dir + "/summary.csv");
  CHECK(count_of(sum, "\n") == 3);
  CHECK(sum.rfind("rank,energy,lambda,", 0) == 0);
  CHECK(sum.find("boundary loop 0") != std::string::npos);

  write_field_csv(rec.field, dir + "/f.csv");
  std::string fcsv = slurp(dir + "/f.csv");
  CHECK(count_of(fcsv, "\n") == mesh->n_nodes() + 1);
  CHECK(fcsv.rfind("x,y,u", 0) == 0);

  fs::remove_all(dir);
}

TEST_CASE("svg render: one polygon per triangle, stroked walls, marked points") {
  MeshPtr mesh = disk(0.2);
  CriticalPointRecord rec = bump_record(mesh);
  std::string dir = (fs::temp_directory_path() / "acmc_svg_test").string();
  fs::remove_all(dir);

  render_field_svg(rec.field, dir + "/bump.svg");
  std::string svg = slurp(dir + "/bump.svg");
  CHECK(well_formed_xml(svg));
  CHECK(count_of(svg, "<polygon") == int(mesh->tris.size()));
  CHECK(count_of(svg, "<path") == int(mesh->loops.size()));
  CHECK(count_of(svg, "<circle") == 2);  // barycenter dot + projection ring
  CHECK(svg.find("rgb(164,0,0)") != std::string::npos);   // saturated top of scale
  CHECK(svg.find("rgb(32,74,135)") != std::string::npos);  // empty background

  // constant zero: uniform bottom-of-scale fill, no markers
  ScalarField zero(mesh, BC::Neumann, Eigen::VectorXd::Zero(mesh->n_nodes()));
  render_field_svg(zero, dir + "/zero.svg");
  std::string zsvg = slurp(dir + "/zero.svg");
  CHECK(well_formed_xml(zsvg));
  CHECK(count_of(zsvg, "rgb(32,74,135)") == 2 * int(mesh->tris.size()));  // fill + stroke
  CHECK(count_of(zsvg, "<circle") == 0);

  fs::remove_all(dir);
}

TEST_CASE("dirichlet svg keeps wall triangles at the bottom of the scale") {
  MeshPtr mesh = disk(0.15);
  Eigen::VectorXd v = Eigen::VectorXd::Zero(mesh->n_nodes());
  for (int i : mesh->interior_nodes)
    if (norm(mesh->nodes[i]) < 0.4) v[i] = 1.0;
  ScalarField f(mesh, BC::Dirichlet, std::move(v));

  std::string dir = (fs::temp_directory_path() / "acmc_svg_d_test").string();
  fs::remove_all(dir);
  render_field_svg(f, dir + "/d.svg");
  std::string svg = slurp(dir + "/d.svg");

  // every triangle touching the wall averages < 1/3, far below mid-scale
  int wall_tris = 0;
  for (const auto& tri : mesh->tris) {
    bool wall = false;
    for (int k = 0; k < 3; ++k) wall |= mesh->node_component[tri[k]] >= 0;
    if (wall) ++wall_tris;
  }
  CHECK(wall_tris > 0);
  // zero everywhere outside the core: background triangles use the exact scale-0 color
  CHECK(count_of(svg, "rgb(32,74,135)") >= wall_tris);
  fs::remove_all(dir);
}

TEST_CASE("unwritable targets raise io failures") {
  RunReport rep;
  rep.subcommand = "solve";
  CHECK_THROWS_AS(write_report(rep, "/proc/nope/deep"), IoFailure);
  CHECK_THROWS_AS(write_text_file("/proc/nope.txt", "x"), IoFailure);
}

#ifdef ACMC_SOURCE_DIR
TEST_CASE("the bundled example configs parse and clear the caps") {
  const char* names[] = {"disk-neumann", "disk-dirichlet", "annulus-neumann",
                         "annulus-dirichlet", "eccentric-annulus-neumann"};
  for (const char* name : names) {
    CAPTURE(name);
    ExperimentConfig cfg =
        parse_config_file(std::string(ACMC_SOURCE_DIR) + "/configs/" + name + ".cfg");
    CHECK_NOTHROW(validate_caps(cfg, analytic_area(cfg.domain)));
    bool dirichlet = std::string(name).find("dirichlet") != std::string::npos;
    CHECK(cfg.mode == (dirichlet ? BC::Dirichlet : BC::Neumann));
  }
}
#endif

// process-level checks against the installed binary
#ifdef ACMC_BIN
namespace {

struct RunOut {
  int status = -1;
  std::string out;
};

RunOut run_cli(const std::string& args) {
  std::string dir = (fs::temp_directory_path() / "acmc_cli_run").string();
  fs::create_directories(dir);
  std::string log = dir + "/log.txt";
  std::string cmd = std::string(ACMC_BIN) + " " + args + " > " + log + " 2>&1";
  int raw = std::system(cmd.c_str());
  RunOut r;
  r.status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  r.out = slurp(log);
  return r;
}

std::string write_cfg(const std::string& name, const std::string& text) {
  std::string dir = (fs::temp_directory_path() / "acmc_cli_cfg").string();
  fs::create_directories(dir);
  std::string path = dir + "/" + name;
  std::ofstream(path) << text;
  return path;
}

const char* kSmoke =
    "[domain]\nkind = disk\nh = 0.07\n"
    "[problem]\nmode = neumann\nm = 0.05\nepsilon = auto\n"
    "[solver]\nn_seeds = 4\njobs = 1\n";

}  // namespace

TEST_CASE("cli: malformed configs exit 2 and name the field") {
  std::string bad = write_cfg("bad.cfg",
                              "[problem]\nmode = neumann\nm = 0.01\nepsilon = -0.5\n");
  RunOut r = run_cli("solve --config " + bad);
  CHECK(r.status == 2);
  CHECK(r.out.find("epsilon") != std::string::npos);

  RunOut missing = run_cli("solve --config /no/such/file.cfg");
  CHECK(missing.status == 2);

  RunOut none = run_cli("solve");
  CHECK(none.status == 2);

  std::string capped = write_cfg("capped.cfg",
                                 "[domain]\nkind = disk\nh = 0.07\n"
                                 "[problem]\nmode = neumann\nm = 0.05\nepsilon = 0.3\n");
  RunOut over = run_cli("solve --config " + capped);
  CHECK(over.status == 2);
  CHECK(over.out.find("epsilon") != std::string::npos);
}

TEST_CASE("cli: profile prints the surface tension constant") {
  std::string cfg = write_cfg("prof.cfg", kSmoke);
  std::string out = (fs::temp_directory_path() / "acmc_cli_prof").string();
  fs::remove_all(out);
  RunOut r = run_cli("profile --config " + cfg + " --out " + out);
  CHECK(r.status == 0);
  CHECK(r.out.find("sigma = 0.333333") != std::string::npos);
  CHECK(fs::exists(out + "/report.json"));
}

TEST_CASE("cli: multiplicity runs are byte-identical and the echo re-validates") {
  std::string cfg = write_cfg("smoke.cfg", kSmoke);
  std::string out1 = (fs::temp_directory_path() / "acmc_cli_m1").string();
  std::string out2 = (fs::temp_directory_path() / "acmc_cli_m2").string();
  fs::remove_all(out1);
  fs::remove_all(out2);

  RunOut r1 = run_cli("multiplicity --config " + cfg + " --out " + out1);
  REQUIRE(r1.status == 0);
  CHECK(r1.out.find("n_distinct") != std::string::npos);
  // jobs must not change the artifact
  RunOut r2 = run_cli("multiplicity --config " + cfg + " --out " + out2 + " --jobs 3");
  REQUIRE(r2.status == 0);

  std::string rep1 = slurp(out1 + "/report.json");
  std::string rep2 = slurp(out2 + "/report.json");
  CHECK(rep1.size() > 100);
  // only the jobs override differs between the echoed configs
  size_t diffs = 0;
  {
    std::istringstream a(rep1), b(rep2);
    std::string la, lb;
    while (std::getline(a, la) && std::getline(b, lb))
      if (la != lb) ++diffs;
  }
  CHECK(diffs == 1);

  CHECK(fs::exists(out1 + "/summary.csv"));
  CHECK(fs::exists(out1 + "/metadata.json"));
  CHECK(fs::exists(out1 + "/fields/rec_00.svg"));
  CHECK(fs::exists(out1 + "/fields/rec_00.csv"));

  // the echoed config parses and validates again
  auto j = nlohmann::json::parse(rep1);
  ExperimentConfig echoed = parse_config_text(j["config"].get<std::string>());
  CHECK_NOTHROW(validate_caps(echoed, analytic_area(echoed.domain)));
  CHECK(echoed.solve.n_seeds == 4);

  // exact reproducibility when the whole invocation matches
  fs::remove_all(out2);
  RunOut r3 = run_cli("multiplicity --config " + cfg + " --out " + out2);
  REQUIRE(r3.status == 0);
  CHECK(slurp(out2 + "/report.json") == rep1);

  fs::remove_all(out1);
  fs::remove_all(out2);
}

TEST_CASE("cli: verification subset runs and reports per-line verdicts") {
  RunOut r = run_cli("check --only 1 --only 2");
  CHECK(r.status == 0);
  CHECK(r.out.find(" 1 PASS") != std::string::npos);
  CHECK(r.out.find(" 2 PASS") != std::string::npos);
  CHECK(r.out.find("sigma") != std::string::npos);
}
#endif
