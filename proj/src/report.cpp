#include "acmc/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "acmc/errors.hpp"
#include "acmc/photography.hpp"

namespace acmc {

namespace {

std::string g(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

void ensure_parent(const std::string& path) {
  std::filesystem::path p(path);
  if (p.has_parent_path()) {
    std::error_code ec;
    std::filesystem::create_directories(p.parent_path(), ec);
    if (ec) throw IoFailure("cannot create directory " + p.parent_path().string());
  }
}

// 3-stop blue / off-white / red ramp over clamped [0,1]
void ramp(double t, int rgb[3]) {
  const int lo[3] = {32, 74, 135}, mid[3] = {238, 238, 236}, hi[3] = {164, 0, 0};
  t = std::min(1.0, std::max(0.0, t));
  const int *a, *b;
  double s;
  if (t < 0.5) {
    a = lo; b = mid; s = t / 0.5;
  } else {
    a = mid; b = hi; s = (t - 0.5) / 0.5;
  }
  for (int k = 0; k < 3; ++k) rgb[k] = int(std::lround(a[k] + s * (b[k] - a[k])));
}

struct Frame {
  double xmin, ymin, scale, w, h;
  double X(double x) const { return (x - xmin) * scale + 20; }
  double Y(double y) const { return h - 20 - (y - ymin) * scale; }  // flip: SVG y runs down
};

Frame fit_frame(const DomainMesh& mesh) {
  double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
  for (const Vec2& p : mesh.nodes) {
    xmin = std::min(xmin, p.x); xmax = std::max(xmax, p.x);
    ymin = std::min(ymin, p.y); ymax = std::max(ymax, p.y);
  }
  double scale = 680.0 / std::max(xmax - xmin, ymax - ymin);
  Frame f;
  f.xmin = xmin; f.ymin = ymin; f.scale = scale;
  f.w = (xmax - xmin) * scale + 40;
  f.h = (ymax - ymin) * scale + 40;
  return f;
}

}  // namespace

nlohmann::ordered_json record_to_json(const CriticalPointRecord& rec) {
  nlohmann::ordered_json j;
  j["energy"] = rec.energy;
  j["lambda"] = rec.lambda;
  j["kkt_residual"] = rec.kkt_residual;
  j["morse_index"] = rec.morse_index;
  j["gap"] = rec.gap;
  j["nondegenerate"] = rec.nondegenerate;
  j["barycenter"] = {rec.barycenter.x, rec.barycenter.y};
  j["projected_point"] = {rec.projected_point.x, rec.projected_point.y};
  j["seed_provenance"] = rec.seed_provenance;
  return j;
}

nlohmann::ordered_json multistart_to_json(const MultistartResult& res, const SolveConfig& cfg,
                                          int cat_target) {
  nlohmann::ordered_json j;
  j["records"] = nlohmann::ordered_json::array();
  int qualified = 0;
  for (const CriticalPointRecord& rec : res.records) {
    nlohmann::ordered_json r = record_to_json(rec);
    bool conc = concentration_check(rec, cfg);
    r["concentration"] = conc;
    bool q = rec.energy <= res.c_m && rec.morse_index == 0 && conc;
    if (q) ++qualified;
    j["records"].push_back(std::move(r));
  }
  j["failures"] = res.failures;
  nlohmann::ordered_json s;
  s["n_distinct"] = int(res.records.size());
  s["c_m"] = res.c_m;
  s["cat_target"] = cat_target;
  s["n_qualified"] = qualified;
  s["passed"] = qualified >= cat_target;
  j["summary"] = std::move(s);
  j["n_seeds_run"] = res.n_seeds_run;
  return j;
}

void write_text_file(const std::string& path, const std::string& content) {
  ensure_parent(path);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoFailure("cannot open for writing: " + path);
  out << content;
  out.flush();
  if (!out.good()) throw IoFailure("write failed: " + path);
}

void write_report(const RunReport& rep, const std::string& dir) {
  nlohmann::ordered_json j;
  j["subcommand"] = rep.subcommand;
  j["versions"] = {{"library", kVersion}, {"compiler", __VERSION__}};
  j["config"] = rep.config_echo;
  j["payload"] = rep.payload;
  write_text_file(dir + "/report.json", j.dump(2) + "\n");

  char stamp[32];
  std::time_t now = std::time(nullptr);
  std::tm tm_utc;
  gmtime_r(&now, &tm_utc);
  std::strftime(stamp, sizeof stamp, "%Y-%m-%dT%H:%M:%SZ", &tm_utc);
  nlohmann::ordered_json meta;
  meta["timestamp"] = stamp;
  meta["stages"] = nlohmann::ordered_json::array();
  for (const auto& [name, sec] : rep.stage_seconds)
    meta["stages"].push_back({{"name", name}, {"seconds", sec}});
  write_text_file(dir + "/metadata.json", meta.dump(2) + "\n");
}

void write_summary_csv(const std::vector<CriticalPointRecord>& records, const std::string& path) {
  std::ostringstream os;
  os << "rank,energy,lambda,kkt_residual,morse_index,gap,nondegenerate,"
        "bary_x,bary_y,proj_x,proj_y,seed_provenance\n";
  for (size_t i = 0; i < records.size(); ++i) {
    const CriticalPointRecord& r = records[i];
    os << i << ',' << g(r.energy) << ',' << g(r.lambda) << ',' << g(r.kkt_residual) << ','
       << r.morse_index << ',' << g(r.gap) << ',' << (r.nondegenerate ? 1 : 0) << ','
       << g(r.barycenter.x) << ',' << g(r.barycenter.y) << ',' << g(r.projected_point.x) << ','
       << g(r.projected_point.y) << ",\"" << r.seed_provenance << "\"\n";
  }
  write_text_file(path, os.str());
}

void write_field_csv(const ScalarField& u, const std::string& path) {
  const DomainMesh& mesh = *u.mesh;
  std::ostringstream os;
  os << "x,y,u\n";
  for (int i = 0; i < mesh.n_nodes(); ++i)
    os << g(mesh.nodes[i].x) << ',' << g(mesh.nodes[i].y) << ',' << g(u.u[i]) << '\n';
  write_text_file(path, os.str());
}

void render_field_svg(const ScalarField& u, const std::string& path, Vec2 bary, Vec2 proj) {
  const DomainMesh& mesh = *u.mesh;
  Frame f = fit_frame(mesh);
  std::ostringstream os;
  os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  char buf[256];
  std::snprintf(buf, sizeof buf,
                "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"%.0f\" height=\"%.0f\" "
                "viewBox=\"0 0 %.0f %.0f\">\n",
                f.w, f.h, f.w, f.h);
  os << buf;

  for (const auto& tri : mesh.tris) {
    double t = (u.u[tri[0]] + u.u[tri[1]] + u.u[tri[2]]) / 3.0;
    int rgb[3];
    ramp(t, rgb);
    std::snprintf(buf, sizeof buf,
                  "<polygon points=\"%.2f,%.2f %.2f,%.2f %.2f,%.2f\" "
                  "fill=\"rgb(%d,%d,%d)\" stroke=\"rgb(%d,%d,%d)\" stroke-width=\"0.4\"/>\n",
                  f.X(mesh.nodes[tri[0]].x), f.Y(mesh.nodes[tri[0]].y),
                  f.X(mesh.nodes[tri[1]].x), f.Y(mesh.nodes[tri[1]].y),
                  f.X(mesh.nodes[tri[2]].x), f.Y(mesh.nodes[tri[2]].y),
                  rgb[0], rgb[1], rgb[2], rgb[0], rgb[1], rgb[2]);
    os << buf;
  }

  for (const auto& loop : mesh.loops) {
    os << "<path d=\"";
    for (size_t k = 0; k < loop.size(); ++k) {
      std::snprintf(buf, sizeof buf, "%c%.2f %.2f", k == 0 ? 'M' : 'L',
                    f.X(mesh.nodes[loop[k]].x), f.Y(mesh.nodes[loop[k]].y));
      os << buf;
    }
    os << "Z\" fill=\"none\" stroke=\"black\" stroke-width=\"1.5\"/>\n";
  }

  if (std::isfinite(bary.x) && std::isfinite(bary.y)) {
    std::snprintf(buf, sizeof buf,
                  "<circle cx=\"%.2f\" cy=\"%.2f\" r=\"4\" fill=\"black\" stroke=\"white\" "
                  "stroke-width=\"1\"/>\n",
                  f.X(bary.x), f.Y(bary.y));
    os << buf;
    std::snprintf(buf, sizeof buf,
                  "<circle cx=\"%.2f\" cy=\"%.2f\" r=\"7\" fill=\"none\" stroke=\"black\" "
                  "stroke-width=\"1.5\"/>\n",
                  f.X(proj.x), f.Y(proj.y));
    os << buf;
  }
  os << "</svg>\n";
  write_text_file(path, os.str());
}

void render_field_svg(const ScalarField& u, const std::string& path) {
  Vec2 b{NAN, NAN}, p{NAN, NAN};
  try {
    b = barycenter(u);
    p = compose_B(u, u.bc, false);
  } catch (const Error&) {
    b = {NAN, NAN};  // zero field: render unmarked
  }
  render_field_svg(u, path, b, p);
}

}  // namespace acmc
