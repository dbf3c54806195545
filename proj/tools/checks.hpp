#pragma once

// Acceptance checks shared by `wgqed verify` and the acceptance test binary.

#include <iosfwd>
#include <string>
#include <vector>

namespace wgqed::checks {

struct Measurement {
  std::string name;
  double measured = 0.0;
  std::string expected;
  bool passed = false;
};

struct CheckResult {
  int id = 0;
  std::string title;
  std::vector<Measurement> measurements;
  std::string note;
  double seconds = 0.0;

  bool passed() const;
};

struct CheckOptions {
  unsigned threads = 1;
  // Relative error injected into the off-diagonal waveguide coupling used by
  // the unitarity check (negative control).
  double coupling_perturbation = 0.0;
};

inline constexpr int kCheckCount = 12;

CheckResult run_check(int id, const CheckOptions& options = {});
std::vector<CheckResult> run_all(const CheckOptions& options = {});

// "criterion  3 PASS oracle equivalence | max_rel_error=... (< 1e-12) | 0.12 s"
std::string summary_line(const CheckResult& result);
void write_report_json(std::ostream& out, const std::vector<CheckResult>& results);

}  // namespace wgqed::checks
