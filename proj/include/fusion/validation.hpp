#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace fusion {

struct CheckResult {
  int id;
  std::string name;
  bool passed;
  std::string detail;
};

struct ValidationOptions {
  std::uint64_t seed = 20250809;
  unsigned workers = 0;            // 0 = hardware concurrency
  std::vector<int> criteria;       // empty = run everything
};

/// Runs the analytic-vs-Monte-Carlo validation suite. Every tolerance is
/// pinned in code. When `out` is non-null a PASS/FAIL line is printed per
/// criterion as it completes.
std::vector<CheckResult> run_acceptance(const ValidationOptions& options,
                                        std::ostream* out = nullptr);

}  // namespace fusion
