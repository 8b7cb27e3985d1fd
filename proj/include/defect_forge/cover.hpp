#pragma once

#include "defect_forge/complexity.hpp"
#include "defect_forge/defect.hpp"
#include "defect_forge/ldp.hpp"
#include "defect_forge/ordinal.hpp"

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

namespace defect_forge {

/// n has no most-efficient additive split (n = 1 vacuously).
bool is_solid(const ComplexityTable& table, std::uint64_t n);

/// n has no good factorization (n = 1 vacuously).
bool is_m_irreducible(const ComplexityTable& table, std::uint64_t n);

/// Raised when a construction cannot certify its base enumerations from the
/// available table (never silently narrowed).
class horizon_error : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// T_alpha for alpha in (0,1): {1} together with the m-irreducible n with
/// 1/(n-1) > 3^((1-alpha)/3) - 1 and no solid b, 1 < b <= n/2, satisfying
/// ||n|| = ||n-b|| + ||b||.  The size bound is decided exactly as
/// n^(3q) > 3^(q-p) * (n-1)^(3q).
std::vector<std::uint64_t> compute_T_alpha(const ComplexityTable& table,
                                           const DefectThreshold& alpha);

enum class Provenance {
  BaseBAlpha,
  Case1Product,
  Case2Extend,
  Case3TimesV,
  Case4TAlpha,
  Case5TAlphaTimesV,
};

const char* to_string(Provenance p);
Provenance provenance_from_string(const std::string& s);

struct CoverPair {
  LowDefectPair pair;
  Provenance provenance;
};

/// A finite covering set of low-defect pairs for the numbers of defect < r,
/// realized as S_{k,alpha} with r = k*alpha.
struct CoverSet {
  DefectThreshold r;
  unsigned k = 1;
  DefectThreshold alpha;
  std::uint64_t enumeration_bound = 0;  // table limit backing B_alpha / T_alpha
  std::vector<CoverPair> pairs;
};

/// Level construction: S_{1,alpha} = {(N, ||N||) : N in B_alpha}; each next
/// level adds (1) tensor products with the level bookkeeping, (2) extensions
/// f (x) x + b over solid b with ||b|| < (level)*alpha + 3 log3 2, (3) those
/// extensions times v in B_alpha, (4) constants from T_alpha, (5) constants
/// v*n with n in T_alpha.  Deduplicated by polynomial equality keeping the
/// smallest base complexity.
CoverSet build_S_k_alpha(const ComplexityTable& table, unsigned k,
                         const DefectThreshold& alpha);

/// S_r = S_{k,alpha} with k = floor(r)+1 and alpha = r/(floor(r)+1); every
/// pair has degree at most floor(r).
CoverSet build_S_r(const ComplexityTable& table, const DefectThreshold& r);

struct CoverFailure {
  std::uint64_t n = 0;
  bool augmented = false;
};

struct CoverReport {
  std::uint64_t bound = 0;
  std::uint64_t checked = 0;
  std::uint64_t covered = 0;
  std::vector<CoverFailure> failures;
  std::uint64_t extraneous_hits = 0;      // represented values <= bound with defect >= r
  std::vector<std::uint64_t> pair_hits;   // per pair, both passes

  bool ok() const { return failures.empty(); }
};

/// Two passes over [1, bound]: every leader N with delta(N) < r must be
/// efficiently 3-represented by some pair; every N with delta(N) < r must be
/// efficiently 3-represented by some augmented pair.  Failures are report
/// content, not errors.  Deterministic for any thread count.
CoverReport verify_cover(const ComplexityTable& table, const CoverSet& cover,
                         std::uint64_t bound, unsigned threads = 1);

/// omega^degree * (floor(delta(f,C)) + 1), the order-type bound for the
/// defects of the numbers 3-represented by the augmented pair.
OrdinalCNF order_type_bound(const LowDefectPair& p);

std::string cover_to_json_string(const CoverSet& cover);
CoverSet cover_from_json_string(const std::string& text);
void save_cover(const CoverSet& cover, const std::filesystem::path& path);
CoverSet load_cover(const std::filesystem::path& path);

std::string report_to_json_string(const CoverReport& report);

}  // namespace defect_forge
