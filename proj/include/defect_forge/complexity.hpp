#pragma once

#include "defect_forge/bigint.hpp"

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace defect_forge {

/// Dense table of integer complexities ||n|| for 1 <= n <= limit.
///
/// ||n|| is the least number of 1s needed to write n using + and *.
/// One byte per entry: ||n|| <= 3 log2 n < 255 for any n below 2^85.
class ComplexityTable {
 public:
  ComplexityTable(std::uint64_t limit, std::vector<std::uint8_t> values);

  std::uint64_t limit() const { return limit_; }

  /// ||n||, unchecked.  n must be in [1, limit].
  unsigned operator[](std::uint64_t n) const { return values_[n]; }

  /// ||n||, throws std::out_of_range if n is not in [1, limit].
  unsigned at(std::uint64_t n) const;

  /// values()[n] = ||n||; index 0 is unused and holds 0.
  const std::vector<std::uint8_t>& values() const { return values_; }

 private:
  std::uint64_t limit_;
  std::vector<std::uint8_t> values_;
};

struct BuildOptions {
  /// Disable the addition-split cap and scan every a+b=n.  Audit runs only;
  /// quadratic in the limit.
  bool paranoid = false;
};

/// Builds the table by dynamic programming over sums and products.
///
/// Product candidates are pushed sieve-style from each finished entry to its
/// multiples.  Addition candidates a + (n-a) are scanned for
/// a <= E(floor(u/2)) where u is the best upper bound known so far: any
/// optimal split has a summand of complexity <= floor(||n||/2), hence of
/// value <= E(floor(||n||/2)).
ComplexityTable build_table(std::uint64_t limit, const BuildOptions& options = {});

/// Table lookup; throws std::out_of_range when n > limit or n = 0.
unsigned complexity(const ComplexityTable& table, std::uint64_t n);

/// Independent brute-force oracle: breadth-first closure of {1} under + and *
/// keeping values <= bound.  Exponential-ish; bound is capped at 10^4.
/// Returns v with v[n] = ||n|| (v[0] unused).
std::vector<std::uint8_t> oracle_complexity(std::uint64_t bound);

/// Largest number writable with k ones:
/// E(1) = 1, E(3j) = 3^j, E(3j+2) = 2*3^j, E(3j+4) = 4*3^j.
BigInt selfridge_E(unsigned k);

/// min(E(k), cap) computed without big integers.
std::uint64_t selfridge_E_clamped(unsigned k, std::uint64_t cap);

/// max{n <= limit : ||n|| <= k}, by table scan.  Must equal selfridge_E(k);
/// requires selfridge_E(k) <= limit so the true maximum is in range.
std::uint64_t E_from_table(const ComplexityTable& table, unsigned k);

/// All (a, b) with a+b = n, a <= b, ||a||+||b|| = ||n||, ascending in a.
/// Empty exactly when n is solid.
std::vector<std::pair<std::uint64_t, std::uint64_t>> good_addition_splits(
    const ComplexityTable& table, std::uint64_t n);

/// All (d, n/d) with d | n, 1 < d <= sqrt(n), ||d||+||n/d|| = ||n||,
/// ascending in d.  Empty exactly when n is m-irreducible.
std::vector<std::pair<std::uint64_t, std::uint64_t>> good_factorizations(
    const ComplexityTable& table, std::uint64_t n);

// --- binary cache (ICT1) ---------------------------------------------------
//
// "ICT1" magic (4 bytes), format version (1 byte, = 1), limit as 64-bit
// little-endian unsigned, then one byte per entry for n = 1..limit.

std::string serialize_table(const ComplexityTable& table);
ComplexityTable parse_table(std::string_view bytes);

void save_table(const ComplexityTable& table, const std::filesystem::path& path);
ComplexityTable load_table(const std::filesystem::path& path);

/// FNV-1a 64-bit checksum, used to fingerprint serialized tables.
std::uint64_t fnv1a(std::string_view bytes);

}  // namespace defect_forge
