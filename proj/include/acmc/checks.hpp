#pragma once
#include <string>
#include <vector>

namespace acmc {

struct CheckResult {
  int id = 0;
  std::string name;
  bool passed = false;
  std::string detail;  // measured numbers backing the verdict
  double seconds = 0;
};

// Numbered verification suite.  Empty ids = run everything.  Each check
// builds its own fixtures so arbitrary subsets work; the conservation check
// audits whatever flows ran earlier in the same call and spins up a small
// run of its own when none did.
std::vector<CheckResult> run_checks(const std::vector<int>& ids = {});

}  // namespace acmc
