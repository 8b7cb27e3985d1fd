#pragma once

#include "defect_forge/complexity.hpp"

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace defect_forge {

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
  double seconds = 0.0;
};

struct SelftestOptions {
  /// Table used by the checks; built fresh at table_limit when null.
  const ComplexityTable* table = nullptr;
  std::uint64_t table_limit = 1'200'000;

  std::uint64_t oracle_bound = 5'000;
  std::uint64_t integer_defect_bound = 1'000'000;
  std::uint64_t cover_bound_low = 100'000;   // r = 1/2 and r = 1
  std::uint64_t cover_bound_high = 10'000;   // r = 3/2
  std::uint64_t stable_bound = 10'000;
  unsigned random_pairs = 1'000;
  unsigned ordinal_triples = 1'000;
  std::uint64_t rng_seed = 0x5eed5eed;
  unsigned threads = 1;
};

/// Runs every acceptance check; one result per criterion.  When `progress`
/// is non-null, prints one "[PASS]/[FAIL] name (detail, time)" line each.
std::vector<CheckResult> run_selftest(const SelftestOptions& options,
                                      std::ostream* progress = nullptr);

}  // namespace defect_forge
