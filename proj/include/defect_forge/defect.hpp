#pragma once

#include "defect_forge/bigint.hpp"
#include "defect_forge/complexity.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace defect_forge {

/// Exact representation of the defect delta(n) = ||n|| - 3 log3 n as the
/// pair (||n||, n).  All ordering decisions happen in exact integer
/// arithmetic; the float form exists for display only.
struct DefectKey {
  unsigned c = 0;  // ||n||
  BigInt n = 1;

  double value() const;
};

DefectKey defect_key(const ComplexityTable& table, std::uint64_t n);

/// delta(n1) <= delta(n2) iff 3^c1 * n2^3 <= 3^c2 * n1^3, decided exactly.
Ordering compare_defects(const DefectKey& k1, const DefectKey& k2);

/// Nonnegative rational p/q used as a strict defect bound delta(n) < p/q.
/// Denominators are capped at 64 to keep the cleared-form integers small.
class DefectThreshold {
 public:
  DefectThreshold(std::uint64_t p, std::uint64_t q);

  /// Accepts "p/q" or a bare integer "p".
  static DefectThreshold parse(const std::string& text);

  std::uint64_t num() const { return p_; }
  std::uint64_t den() const { return q_; }
  std::uint64_t floor() const { return p_ / q_; }
  bool is_zero() const { return p_ == 0; }
  std::string str() const;

  bool operator==(const DefectThreshold& o) const { return p_ == o.p_ && q_ == o.q_; }

 private:
  std::uint64_t p_, q_;  // normalized, gcd(p,q) = 1, q >= 1
};

/// delta(n) < p/q iff 3^(q*c) < 3^p * n^(3q), decided exactly.
bool defect_less_than(const DefectKey& key, const DefectThreshold& r);

/// A leader is the smallest number attaining its defect:
/// 3 does not divide n, or ||n|| < 3 + ||n/3||.
bool is_leader(const ComplexityTable& table, std::uint64_t n);

/// All n <= bound with delta(n) < r, ascending.
std::vector<std::uint64_t> enumerate_A_r(const ComplexityTable& table,
                                         const DefectThreshold& r, std::uint64_t bound);

/// Leaders only.
std::vector<std::uint64_t> enumerate_B_r(const ComplexityTable& table,
                                         const DefectThreshold& r, std::uint64_t bound);

/// ||n|| mod 3 for n != 1; nullopt for the explicitly excluded n = 1.
std::optional<unsigned> defect_class(const ComplexityTable& table, std::uint64_t n);

enum class StabilityVerdict { StableWithinHorizon, UnstableProven, HorizonExhausted };

const char* to_string(StabilityVerdict v);

/// n is stable when ||3^k n|| = 3k + ||n|| for all k >= 0; only refutable
/// from a finite table, so verdicts are scoped to the checked horizon.
struct StabilityStatus {
  StabilityVerdict verdict = StabilityVerdict::HorizonExhausted;
  unsigned k_checked = 0;  // largest k with 3^k * n <= limit
  unsigned witness_k = 0;  // smallest violating k when UnstableProven
};

StabilityStatus stability(const ComplexityTable& table, std::uint64_t n);

/// min over checkable k of ||3^k n|| - 3k (Selfridge-normalized complexity
/// along the *3 chain; the sequence is nonincreasing).  The status reports
/// StableWithinHorizon when the minimum is confirmed by a constant trailing
/// window, HorizonExhausted when the sequence was still decreasing at the
/// horizon (or there was no headroom at all).
struct StableComplexity {
  unsigned value = 0;
  StabilityStatus status;
};

StableComplexity stable_complexity(const ComplexityTable& table, std::uint64_t n);

/// Defect key of the first chain point attaining min_k delta(3^k n).
DefectKey stable_defect_key(const ComplexityTable& table, std::uint64_t n);

struct DefectFilters {
  std::optional<unsigned> complexity_class;  // keep ||n|| = class (mod 3)
  bool stable_only = false;                  // keep StableWithinHorizon leaders
  std::optional<DefectThreshold> threshold;  // keep delta(n) < threshold
};

struct DefectEntry {
  DefectKey key;
  std::uint64_t leader = 0;
  std::optional<unsigned> cls;
  StabilityStatus stability;
};

/// One entry per distinct defect value among {n <= bound} passing the
/// filters, represented by its leader, ascending by exact defect comparison.
std::vector<DefectEntry> sorted_defects(const ComplexityTable& table, std::uint64_t bound,
                                        const DefectFilters& filters = {});

/// "0.107211"-style fixed six fractional digits, locale-independent.
std::string format_defect(double value);

/// CSV export: header "n,complexity,defect_float,class,stable_status".
void write_defects_csv(std::ostream& out, const std::vector<DefectEntry>& entries);

}  // namespace defect_forge
