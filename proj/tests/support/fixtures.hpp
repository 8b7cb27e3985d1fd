#pragma once

#include "defect_forge/complexity.hpp"

namespace testsupport {

/// Shared table, limit 30000: large enough for E_from_table up to k = 28,
/// 5^6, and 2^14, cheap enough to build once per run.
inline const defect_forge::ComplexityTable& table30k() {
  static const defect_forge::ComplexityTable table = defect_forge::build_table(30'000);
  return table;
}

}  // namespace testsupport
