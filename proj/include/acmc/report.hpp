#pragma once
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "acmc/field.hpp"
#include "acmc/solver.hpp"

namespace acmc {

inline constexpr const char* kVersion = "0.1.0";

// Everything one run produces.  report.json carries the reproducible part
// (echoed config, versions, payload); timings and the timestamp go to a
// metadata file because they change between otherwise identical runs.
struct RunReport {
  std::string subcommand;
  std::string config_echo;
  nlohmann::ordered_json payload;
  std::vector<std::pair<std::string, double>> stage_seconds;
};

// Serializes rec minus its field.  Doubles print in shortest round-trip
// form, so equal values give byte-equal text.
nlohmann::ordered_json record_to_json(const CriticalPointRecord& rec);

// Record array plus the verdict summary.  A record counts toward the target
// when its energy clears the threshold, its index is 0, and its mass
// concentrates; passed = at least cat_target such records.
nlohmann::ordered_json multistart_to_json(const MultistartResult& res, const SolveConfig& cfg,
                                          int cat_target);

void write_report(const RunReport& rep, const std::string& dir);

// summary.csv: one line per record, full-precision numbers.
void write_summary_csv(const std::vector<CriticalPointRecord>& records, const std::string& path);

// Nodal table "x,y,u".
void write_field_csv(const ScalarField& u, const std::string& path);

// Flat color render: one polygon per triangle, filled on a fixed [0,1]
// scale, walls stroked.  The 4-argument form marks the barycenter (dot) and
// the projected point (ring); the short form derives them from the field and
// leaves a zero field unmarked.
void render_field_svg(const ScalarField& u, const std::string& path);
void render_field_svg(const ScalarField& u, const std::string& path, Vec2 bary, Vec2 proj);

void write_text_file(const std::string& path, const std::string& content);

}  // namespace acmc
