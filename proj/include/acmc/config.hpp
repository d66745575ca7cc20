#pragma once
#include <string>
#include <vector>

#include "acmc/mesh.hpp"
#include "acmc/solver.hpp"

namespace acmc {

// One experiment: a domain, a well, the constrained mass, the epsilons to
// visit, solver knobs, and where the artifacts go.  Read from a sectioned
// key = value text file; every parse failure names the line and field.
struct ExperimentConfig {
  DomainSpec domain;

  std::string potential = "quartic";
  double potential_scale = 1.0;  // only read when potential = scaled

  BC mode = BC::Neumann;

  // Exactly one of m / m_frac is set; the other stays 0.
  double m = 0;
  double m_frac = 0;

  // Either a literal list (one entry, or a sweep) or epsilon = auto, which
  // resolves to the cap below.
  bool epsilon_auto = false;
  std::vector<double> epsilons;

  // Running caps, revalidated per run: m <= m_cap_frac * area and
  // eps <= eps_cap_frac * sqrt(m / pi).
  double m_cap_frac = 0.02;
  double eps_cap_frac = 0.1;

  SolveConfig solve;  // epsilon/m/bc are overwritten per run

  std::string out_dir = "out";
  bool write_json = true;
  bool write_csv = true;
  bool write_svg = true;
};

ExperimentConfig parse_config_text(const std::string& text);
ExperimentConfig parse_config_file(const std::string& path);

// Closed-form area of the spec'd shape; mesh quadrature agrees within 1%.
double analytic_area(const DomainSpec& spec);

// m, or m_frac * area.
double resolve_mass(const ExperimentConfig& cfg, double area);

double epsilon_cap(const ExperimentConfig& cfg, double m);

// The sweep to run: the literal list, or the cap when epsilon = auto.
std::vector<double> resolve_epsilons(const ExperimentConfig& cfg, double m);

// Enforces the two caps; throws ConfigError naming the offending field.
void validate_caps(const ExperimentConfig& cfg, double area);

// Lower bound on the number of low-energy solutions the theory promises:
// Neumann counts 2 per wall loop, Dirichlet counts 1 when the domain is
// contractible and 2 when it has a hole.
int cat_target(const DomainSpec& spec, BC mode);

// Canonical text form; parsing it back reproduces the configuration.
std::string render_config(const ExperimentConfig& cfg);

}  // namespace acmc
