#include "defect_forge/selftest.hpp"

namespace defect_forge {

std::vector<CheckResult> run_selftest(const SelftestOptions& options, std::ostream* progress) {
  (void)options;
  (void)progress;
  return {};
}

}  // namespace defect_forge
