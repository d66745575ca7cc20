#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <vector>

#include "acmc/checks.hpp"

// Verification suite runner: one line per numbered check, exit 1 on any
// failure.  --only N (repeatable) restricts the run.
int main(int argc, char** argv) {
  std::vector<int> ids;
  for (int i = 1; i < argc; ++i) {
    if (std::strcmp(argv[i], "--only") == 0 && i + 1 < argc) {
      ids.push_back(std::atoi(argv[++i]));
    } else {
      std::fprintf(stderr, "usage: %s [--only N]...\n", argv[0]);
      return 2;
    }
  }
  bool all = true;
  for (const acmc::CheckResult& r : acmc::run_checks(ids)) {
    std::printf("%2d %s  %-52s (%.2f s)  %s\n", r.id, r.passed ? "PASS" : "FAIL", r.name.c_str(),
                r.seconds, r.detail.c_str());
    all = all && r.passed;
  }
  return all ? 0 : 1;
}
