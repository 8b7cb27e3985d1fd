#include "defect_forge/complexity.hpp"

#include <algorithm>
#include <stdexcept>

namespace defect_forge {

ComplexityTable::ComplexityTable(std::uint64_t limit, std::vector<std::uint8_t> values)
    : limit_(limit), values_(std::move(values)) {
  if (limit_ == 0) throw std::invalid_argument("ComplexityTable: limit must be positive");
  if (values_.size() != limit_ + 1)
    throw std::invalid_argument("ComplexityTable: value vector size mismatch");
}

unsigned ComplexityTable::at(std::uint64_t n) const {
  if (n == 0 || n > limit_)
    throw std::out_of_range("complexity: n out of table range");
  return values_[n];
}

ComplexityTable build_table(std::uint64_t limit, const BuildOptions& options) {
  if (limit == 0) throw std::invalid_argument("build_table: limit must be positive");

  std::vector<std::uint8_t> c(limit + 1, 0);
  c[1] = 1;
  // Best product-split bound for each n, pushed from finished entries.
  std::vector<std::uint8_t> prod(limit + 1, 0xff);

  for (std::uint64_t n = 2; n <= limit; ++n) {
    unsigned best = std::min<unsigned>(prod[n], c[n - 1] + 1u);

    // Addition splits.  Some optimal split (if one beats `best`) has a
    // summand of complexity <= floor(||n||/2) <= floor(best/2), so scanning
    // a up to E(floor(best/2)) is exhaustive.  The cap shrinks as `best`
    // improves; it never drops below the optimum's witness.
    std::uint64_t cap = options.paranoid
                            ? n / 2
                            : std::min(n / 2, selfridge_E_clamped(best / 2, n / 2));
    for (std::uint64_t a = 1; a <= cap; ++a) {
      unsigned cand = c[a] + c[n - a];
      if (cand < best) {
        best = cand;
        if (!options.paranoid)
          cap = std::min(n / 2, selfridge_E_clamped(best / 2, n / 2));
      }
    }
    c[n] = static_cast<std::uint8_t>(best);

    // Push product candidates n*d for d <= n; the larger factor pushes, so
    // every product is seen once with both factors final.
    std::uint64_t dmax = std::min(n, limit / n);
    for (std::uint64_t d = 2; d <= dmax; ++d) {
      unsigned cand = c[n] + c[d];
      if (cand < prod[n * d]) prod[n * d] = static_cast<std::uint8_t>(cand);
    }
  }

  return ComplexityTable(limit, std::move(c));
}

unsigned complexity(const ComplexityTable& table, std::uint64_t n) {
  return table.at(n);
}

std::vector<std::uint8_t> oracle_complexity(std::uint64_t bound) {
  constexpr std::uint64_t kOracleCap = 10'000;
  if (bound == 0) throw std::invalid_argument("oracle_complexity: bound must be positive");
  if (bound > kOracleCap)
    throw std::invalid_argument("oracle_complexity: bound above guard (10^4)");

  std::vector<std::uint8_t> best(bound + 1, 0);
  std::vector<std::vector<std::uint32_t>> levels(2);
  best[1] = 1;
  levels[1] = {1};
  std::uint64_t assigned = 1;

  for (unsigned k = 2; assigned < bound; ++k) {
    levels.emplace_back();
    auto& out = levels[k];
    for (unsigned i = 1; 2 * i <= k; ++i) {
      unsigned j = k - i;
      for (std::uint64_t a : levels[i]) {
        for (std::uint64_t b : levels[j]) {
          std::uint64_t s = a + b;
          if (s <= bound && best[s] == 0) {
            best[s] = static_cast<std::uint8_t>(k);
            out.push_back(static_cast<std::uint32_t>(s));
            ++assigned;
          }
          std::uint64_t p = a * b;
          if (p <= bound && best[p] == 0) {
            best[p] = static_cast<std::uint8_t>(k);
            out.push_back(static_cast<std::uint32_t>(p));
            ++assigned;
          }
        }
      }
    }
  }
  return best;
}

BigInt selfridge_E(unsigned k) {
  if (k == 0) throw std::invalid_argument("selfridge_E: k must be positive");
  if (k == 1) return 1;
  switch (k % 3) {
    case 0: return pow3(k / 3);
    case 2: return 2 * pow3((k - 2) / 3);
    default: return 4 * pow3((k - 4) / 3);  // k >= 4 here since k != 1
  }
}

std::uint64_t selfridge_E_clamped(unsigned k, std::uint64_t cap) {
  if (k == 0) return 0;
  if (k == 1) return std::min<std::uint64_t>(1, cap);
  unsigned j;
  std::uint64_t m;
  switch (k % 3) {
    case 0: j = k / 3; m = 1; break;
    case 2: j = (k - 2) / 3; m = 2; break;
    default: j = (k - 4) / 3; m = 4; break;
  }
  std::uint64_t v = m;
  while (j-- > 0) {
    if (v > cap / 3) return cap;
    v *= 3;
  }
  return std::min(v, cap);
}

std::uint64_t E_from_table(const ComplexityTable& table, unsigned k) {
  if (selfridge_E(k) > table.limit())
    throw std::out_of_range("E_from_table: E(k) exceeds table limit");
  for (std::uint64_t n = table.limit(); n >= 1; --n)
    if (table[n] <= k) return n;
  throw std::logic_error("E_from_table: unreachable");  // table[1] = 1 <= k
}

std::vector<std::pair<std::uint64_t, std::uint64_t>> good_addition_splits(
    const ComplexityTable& table, std::uint64_t n) {
  if (n < 2 || n > table.limit())
    throw std::out_of_range("good_addition_splits: n out of range");
  std::vector<std::pair<std::uint64_t, std::uint64_t>> out;
  unsigned cn = table[n];
  for (std::uint64_t a = 1; a <= n / 2; ++a)
    if (table[a] + table[n - a] == cn) out.emplace_back(a, n - a);
  return out;
}

std::vector<std::pair<std::uint64_t, std::uint64_t>> good_factorizations(
    const ComplexityTable& table, std::uint64_t n) {
  if (n < 2 || n > table.limit())
    throw std::out_of_range("good_factorizations: n out of range");
  std::vector<std::pair<std::uint64_t, std::uint64_t>> out;
  unsigned cn = table[n];
  for (std::uint64_t d = 2; d * d <= n; ++d)
    if (n % d == 0 && table[d] + table[n / d] == cn) out.emplace_back(d, n / d);
  return out;
}

}  // namespace defect_forge
