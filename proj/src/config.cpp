#include "acmc/config.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "acmc/errors.hpp"

namespace acmc {

namespace {

constexpr double kPi = 3.14159265358979323846;

std::string trim(const std::string& s) {
  size_t a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  size_t b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

[[noreturn]] void fail(int line, const std::string& what) {
  std::ostringstream os;
  os << "line " << line << ": " << what;
  throw ConfigError(os.str());
}

double number(int line, const std::string& key, const std::string& v) {
  size_t used = 0;
  double x = 0;
  try {
    x = std::stod(v, &used);
  } catch (const std::exception&) {
    fail(line, key + ": not a number: '" + v + "'");
  }
  if (used != v.size()) fail(line, key + ": trailing characters in '" + v + "'");
  return x;
}

long long integer(int line, const std::string& key, const std::string& v) {
  size_t used = 0;
  long long x = 0;
  try {
    x = std::stoll(v, &used);
  } catch (const std::exception&) {
    fail(line, key + ": not an integer: '" + v + "'");
  }
  if (used != v.size()) fail(line, key + ": trailing characters in '" + v + "'");
  return x;
}

std::vector<std::string> split_list(const std::string& v) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : v) {
    if (c == ',') {
      out.push_back(trim(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  cur = trim(cur);
  if (!cur.empty()) out.push_back(cur);
  return out;
}

std::string fmt(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

const char* kind_name(DomainKind k) {
  switch (k) {
    case DomainKind::Disk: return "disk";
    case DomainKind::Annulus: return "annulus";
    case DomainKind::EccentricAnnulus: return "eccentric_annulus";
    case DomainKind::Rectangle: return "rectangle";
  }
  return "disk";
}

}  // namespace

ExperimentConfig parse_config_text(const std::string& text) {
  ExperimentConfig cfg;
  bool saw_m = false, saw_m_frac = false, saw_eps = false, saw_sweep = false;

  std::istringstream in(text);
  std::string raw, section;
  int lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    size_t hash = raw.find('#');
    if (hash != std::string::npos) raw.erase(hash);
    std::string line = trim(raw);
    if (line.empty()) continue;

    if (line.front() == '[') {
      if (line.back() != ']') fail(lineno, "unterminated section header");
      section = trim(line.substr(1, line.size() - 2));
      if (section != "domain" && section != "potential" && section != "problem" &&
          section != "solver" && section != "output")
        fail(lineno, "unknown section [" + section + "]");
      continue;
    }

    size_t eq = line.find('=');
    if (eq == std::string::npos) fail(lineno, "expected key = value, got '" + line + "'");
    std::string key = trim(line.substr(0, eq));
    std::string val = trim(line.substr(eq + 1));
    if (key.empty()) fail(lineno, "empty key");
    if (val.empty()) fail(lineno, key + ": empty value");
    if (section.empty()) fail(lineno, key + ": key outside any section");
    std::string full = section + "." + key;

    if (section == "domain") {
      if (key == "kind") {
        if (val == "disk") cfg.domain.kind = DomainKind::Disk;
        else if (val == "annulus") cfg.domain.kind = DomainKind::Annulus;
        else if (val == "eccentric_annulus") cfg.domain.kind = DomainKind::EccentricAnnulus;
        else if (val == "rectangle") cfg.domain.kind = DomainKind::Rectangle;
        else fail(lineno, full + ": unknown kind '" + val + "'");
      } else if (key == "r_out") {
        cfg.domain.r_out = number(lineno, full, val);
        if (!(cfg.domain.r_out > 0)) fail(lineno, full + ": must be positive");
      } else if (key == "r_in") {
        cfg.domain.r_in = number(lineno, full, val);
        if (!(cfg.domain.r_in > 0)) fail(lineno, full + ": must be positive");
      } else if (key == "offset_x") {
        cfg.domain.hole_offset.x = number(lineno, full, val);
      } else if (key == "offset_y") {
        cfg.domain.hole_offset.y = number(lineno, full, val);
      } else if (key == "width") {
        cfg.domain.width = number(lineno, full, val);
        if (!(cfg.domain.width > 0)) fail(lineno, full + ": must be positive");
      } else if (key == "height") {
        cfg.domain.height = number(lineno, full, val);
        if (!(cfg.domain.height > 0)) fail(lineno, full + ": must be positive");
      } else if (key == "h") {
        cfg.domain.h = number(lineno, full, val);
        if (!(cfg.domain.h > 0)) fail(lineno, full + ": must be positive");
      } else if (key == "collar_depth") {
        cfg.domain.delta_M = number(lineno, full, val);
        if (!(cfg.domain.delta_M > 0)) fail(lineno, full + ": must be positive");
      } else {
        fail(lineno, "unknown key " + full);
      }
    } else if (section == "potential") {
      if (key == "name") {
        if (val != "quartic" && val != "scaled")
          fail(lineno, full + ": unknown potential '" + val + "'");
        cfg.potential = val;
      } else if (key == "scale") {
        cfg.potential_scale = number(lineno, full, val);
        if (!(cfg.potential_scale > 0)) fail(lineno, full + ": must be positive");
      } else {
        fail(lineno, "unknown key " + full);
      }
    } else if (section == "problem") {
      if (key == "mode") {
        if (val == "neumann") cfg.mode = BC::Neumann;
        else if (val == "dirichlet") cfg.mode = BC::Dirichlet;
        else fail(lineno, full + ": expected neumann or dirichlet, got '" + val + "'");
      } else if (key == "m") {
        cfg.m = number(lineno, full, val);
        if (!(cfg.m > 0)) fail(lineno, full + ": must be positive");
        saw_m = true;
      } else if (key == "m_frac") {
        cfg.m_frac = number(lineno, full, val);
        if (!(cfg.m_frac > 0)) fail(lineno, full + ": must be positive");
        saw_m_frac = true;
      } else if (key == "epsilon") {
        if (val == "auto") {
          cfg.epsilon_auto = true;
        } else {
          double e = number(lineno, full, val);
          if (!(e > 0)) fail(lineno, full + ": must be positive");
          cfg.epsilons.assign(1, e);
        }
        saw_eps = true;
      } else if (key == "epsilon_sweep") {
        cfg.epsilons.clear();
        for (const std::string& item : split_list(val)) {
          double e = number(lineno, full, item);
          if (!(e > 0)) fail(lineno, full + ": must be positive");
          cfg.epsilons.push_back(e);
        }
        if (cfg.epsilons.empty()) fail(lineno, full + ": empty list");
        saw_sweep = true;
      } else if (key == "m_cap_frac") {
        cfg.m_cap_frac = number(lineno, full, val);
        if (!(cfg.m_cap_frac > 0)) fail(lineno, full + ": must be positive");
      } else if (key == "eps_cap_frac") {
        cfg.eps_cap_frac = number(lineno, full, val);
        if (!(cfg.eps_cap_frac > 0)) fail(lineno, full + ": must be positive");
      } else {
        fail(lineno, "unknown key " + full);
      }
    } else if (section == "solver") {
      if (key == "dt") {
        cfg.solve.dt = number(lineno, full, val);
        if (cfg.solve.dt < 0) fail(lineno, full + ": must be nonnegative");
      } else if (key == "max_steps") {
        cfg.solve.max_steps = int(integer(lineno, full, val));
        if (cfg.solve.max_steps < 0) fail(lineno, full + ": must be nonnegative");
      } else if (key == "stall_tol") {
        cfg.solve.stall_tol = number(lineno, full, val);
        if (!(cfg.solve.stall_tol > 0)) fail(lineno, full + ": must be positive");
      } else if (key == "newton_tol") {
        cfg.solve.newton_tol = number(lineno, full, val);
        if (!(cfg.solve.newton_tol > 0)) fail(lineno, full + ": must be positive");
      } else if (key == "newton_max_iter") {
        cfg.solve.newton_max_iter = int(integer(lineno, full, val));
        if (cfg.solve.newton_max_iter < 1) fail(lineno, full + ": must be >= 1");
      } else if (key == "newton_basin") {
        cfg.solve.newton_basin = number(lineno, full, val);
        if (!(cfg.solve.newton_basin > 0)) fail(lineno, full + ": must be positive");
      } else if (key == "dedup_l2") {
        cfg.solve.dedup_l2 = number(lineno, full, val);
        if (cfg.solve.dedup_l2 < 0) fail(lineno, full + ": must be nonnegative");
      } else if (key == "dedup_energy") {
        cfg.solve.dedup_energy = number(lineno, full, val);
        if (cfg.solve.dedup_energy < 0) fail(lineno, full + ": must be nonnegative");
      } else if (key == "dedup_bary") {
        cfg.solve.dedup_bary = number(lineno, full, val);
        if (cfg.solve.dedup_bary < 0) fail(lineno, full + ": must be nonnegative");
      } else if (key == "n_seeds") {
        cfg.solve.n_seeds = int(integer(lineno, full, val));
        if (cfg.solve.n_seeds < 1) fail(lineno, full + ": must be >= 1");
      } else if (key == "gamma_hat") {
        cfg.solve.gamma_hat = number(lineno, full, val);
        if (!(cfg.solve.gamma_hat > 0)) fail(lineno, full + ": must be positive");
      } else if (key == "mu_hat") {
        cfg.solve.mu_hat = number(lineno, full, val);
        if (!(cfg.solve.mu_hat > 0)) fail(lineno, full + ": must be positive");
      } else if (key == "alpha") {
        cfg.solve.alpha = number(lineno, full, val);
        if (!(cfg.solve.alpha > 0 && cfg.solve.alpha <= 1))
          fail(lineno, full + ": must lie in (0, 1]");
      } else if (key == "slack_factor") {
        cfg.solve.slack_factor = number(lineno, full, val);
        if (!(cfg.solve.slack_factor > 0)) fail(lineno, full + ": must be positive");
      } else if (key == "rng_seed") {
        try {
          size_t used = 0;
          cfg.solve.rng_seed = std::stoull(val, &used);
          if (used != val.size()) fail(lineno, full + ": trailing characters in '" + val + "'");
        } catch (const ConfigError&) {
          throw;
        } catch (const std::exception&) {
          fail(lineno, full + ": not an unsigned integer: '" + val + "'");
        }
      } else if (key == "jobs") {
        cfg.solve.jobs = int(integer(lineno, full, val));
        if (cfg.solve.jobs < 1) fail(lineno, full + ": must be >= 1");
      } else {
        fail(lineno, "unknown key " + full);
      }
    } else {  // output
      if (key == "dir") {
        cfg.out_dir = val;
      } else if (key == "formats") {
        cfg.write_json = cfg.write_csv = cfg.write_svg = false;
        for (const std::string& item : split_list(val)) {
          if (item == "json") cfg.write_json = true;
          else if (item == "csv") cfg.write_csv = true;
          else if (item == "svg") cfg.write_svg = true;
          else if (item == "none") continue;
          else fail(lineno, full + ": unknown format '" + item + "'");
        }
      } else {
        fail(lineno, "unknown key " + full);
      }
    }
  }

  if (saw_m && saw_m_frac) throw ConfigError("problem.m and problem.m_frac are both set");
  if (!saw_m && !saw_m_frac) throw ConfigError("problem.m (or problem.m_frac) is required");
  if (saw_eps && saw_sweep)
    throw ConfigError("problem.epsilon and problem.epsilon_sweep are both set");
  if (!saw_eps && !saw_sweep)
    throw ConfigError("problem.epsilon (or problem.epsilon_sweep) is required");
  if (saw_m) cfg.m_frac = 0;
  if (saw_m_frac) cfg.m = 0;
  return cfg;
}

ExperimentConfig parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str());
}

double analytic_area(const DomainSpec& spec) {
  switch (spec.kind) {
    case DomainKind::Disk:
      return kPi * spec.r_out * spec.r_out;
    case DomainKind::Annulus:
    case DomainKind::EccentricAnnulus:
      return kPi * (spec.r_out * spec.r_out - spec.r_in * spec.r_in);
    case DomainKind::Rectangle:
      return spec.width * spec.height;
  }
  return 0;
}

double resolve_mass(const ExperimentConfig& cfg, double area) {
  return cfg.m > 0 ? cfg.m : cfg.m_frac * area;
}

double epsilon_cap(const ExperimentConfig& cfg, double m) {
  return cfg.eps_cap_frac * std::sqrt(m / kPi);
}

std::vector<double> resolve_epsilons(const ExperimentConfig& cfg, double m) {
  if (cfg.epsilon_auto) return {epsilon_cap(cfg, m)};
  return cfg.epsilons;
}

void validate_caps(const ExperimentConfig& cfg, double area) {
  double m = resolve_mass(cfg, area);
  double m_cap = cfg.m_cap_frac * area;
  if (m > m_cap * (1 + 1e-9)) {
    std::ostringstream os;
    os << "problem.m = " << m << " exceeds the mass cap " << m_cap << " (m_cap_frac * area)";
    throw ConfigError(os.str());
  }
  double cap = epsilon_cap(cfg, m);
  for (double e : resolve_epsilons(cfg, m))
    if (e > cap * (1 + 1e-9)) {
      std::ostringstream os;
      os << "problem.epsilon = " << e << " exceeds the cap " << cap
         << " (eps_cap_frac * sqrt(m / pi))";
      throw ConfigError(os.str());
    }
}

int cat_target(const DomainSpec& spec, BC mode) {
  bool holed = spec.kind == DomainKind::Annulus || spec.kind == DomainKind::EccentricAnnulus;
  if (mode == BC::Neumann) return holed ? 4 : 2;
  return holed ? 2 : 1;
}

std::string render_config(const ExperimentConfig& cfg) {
  std::ostringstream os;
  os << "[domain]\n";
  os << "kind = " << kind_name(cfg.domain.kind) << "\n";
  switch (cfg.domain.kind) {
    case DomainKind::Disk:
      os << "r_out = " << fmt(cfg.domain.r_out) << "\n";
      break;
    case DomainKind::Annulus:
      os << "r_out = " << fmt(cfg.domain.r_out) << "\n";
      os << "r_in = " << fmt(cfg.domain.r_in) << "\n";
      break;
    case DomainKind::EccentricAnnulus:
      os << "r_out = " << fmt(cfg.domain.r_out) << "\n";
      os << "r_in = " << fmt(cfg.domain.r_in) << "\n";
      os << "offset_x = " << fmt(cfg.domain.hole_offset.x) << "\n";
      os << "offset_y = " << fmt(cfg.domain.hole_offset.y) << "\n";
      break;
    case DomainKind::Rectangle:
      os << "width = " << fmt(cfg.domain.width) << "\n";
      os << "height = " << fmt(cfg.domain.height) << "\n";
      break;
  }
  os << "h = " << fmt(cfg.domain.h) << "\n";
  if (cfg.domain.delta_M > 0) os << "collar_depth = " << fmt(cfg.domain.delta_M) << "\n";

  os << "\n[potential]\n";
  os << "name = " << cfg.potential << "\n";
  if (cfg.potential == "scaled") os << "scale = " << fmt(cfg.potential_scale) << "\n";

  os << "\n[problem]\n";
  os << "mode = " << (cfg.mode == BC::Neumann ? "neumann" : "dirichlet") << "\n";
  if (cfg.m > 0)
    os << "m = " << fmt(cfg.m) << "\n";
  else
    os << "m_frac = " << fmt(cfg.m_frac) << "\n";
  if (cfg.epsilon_auto) {
    os << "epsilon = auto\n";
  } else if (cfg.epsilons.size() == 1) {
    os << "epsilon = " << fmt(cfg.epsilons[0]) << "\n";
  } else {
    os << "epsilon_sweep = ";
    for (size_t i = 0; i < cfg.epsilons.size(); ++i)
      os << (i ? ", " : "") << fmt(cfg.epsilons[i]);
    os << "\n";
  }
  os << "m_cap_frac = " << fmt(cfg.m_cap_frac) << "\n";
  os << "eps_cap_frac = " << fmt(cfg.eps_cap_frac) << "\n";

  const SolveConfig& s = cfg.solve;
  os << "\n[solver]\n";
  os << "dt = " << fmt(s.dt) << "\n";
  os << "max_steps = " << s.max_steps << "\n";
  os << "stall_tol = " << fmt(s.stall_tol) << "\n";
  os << "newton_tol = " << fmt(s.newton_tol) << "\n";
  os << "newton_max_iter = " << s.newton_max_iter << "\n";
  os << "newton_basin = " << fmt(s.newton_basin) << "\n";
  os << "dedup_l2 = " << fmt(s.dedup_l2) << "\n";
  os << "dedup_energy = " << fmt(s.dedup_energy) << "\n";
  os << "dedup_bary = " << fmt(s.dedup_bary) << "\n";
  os << "n_seeds = " << s.n_seeds << "\n";
  os << "gamma_hat = " << fmt(s.gamma_hat) << "\n";
  os << "mu_hat = " << fmt(s.mu_hat) << "\n";
  os << "alpha = " << fmt(s.alpha) << "\n";
  os << "slack_factor = " << fmt(s.slack_factor) << "\n";
  os << "rng_seed = " << s.rng_seed << "\n";
  os << "jobs = " << s.jobs << "\n";

  os << "\n[output]\n";
  os << "dir = " << cfg.out_dir << "\n";
  os << "formats =";
  bool first = true;
  if (cfg.write_json) { os << (first ? " " : ", ") << "json"; first = false; }
  if (cfg.write_csv) { os << (first ? " " : ", ") << "csv"; first = false; }
  if (cfg.write_svg) { os << (first ? " " : ", ") << "svg"; first = false; }
  if (first) os << " none";
  os << "\n";
  return os.str();
}

}  // namespace acmc
