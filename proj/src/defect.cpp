#include "defect_forge/defect.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numeric>
#include <ostream>
#include <stdexcept>

namespace defect_forge {

namespace {

using u128 = unsigned __int128;

// For n < 2^21 the cube fits in 64 bits and 3^dc * n^3 fits in 128 bits
// whenever dc <= 42; larger dc decides the comparison outright.
constexpr std::uint64_t kSmallN = (1ull << 21);

Ordering cmp(const BigInt& a, const BigInt& b) {
  if (a < b) return Ordering::Less;
  if (a == b) return Ordering::Equal;
  return Ordering::Greater;
}

std::uint64_t to_u64(const BigInt& v) { return static_cast<std::uint64_t>(v); }

}  // namespace

double DefectKey::value() const {
  return static_cast<double>(c) - 3.0 * std::log(static_cast<double>(n)) / std::log(3.0);
}

DefectKey defect_key(const ComplexityTable& table, std::uint64_t n) {
  return DefectKey{table.at(n), BigInt(n)};
}

Ordering compare_defects(const DefectKey& k1, const DefectKey& k2) {
  // delta(n1) <= delta(n2)  <=>  3^c1 * n2^3 <= 3^c2 * n1^3
  if (k1.n < kSmallN && k2.n < kSmallN) {
    std::uint64_t n1 = to_u64(k1.n), n2 = to_u64(k2.n);
    u128 cube1 = u128(n1) * n1 * n1;
    u128 cube2 = u128(n2) * n2 * n2;
    unsigned lo = std::min(k1.c, k2.c);
    unsigned d1 = k1.c - lo, d2 = k2.c - lo;
    // One side's power-of-3 excess beyond 42 dominates any cube ratio here.
    if (d1 > 42) return Ordering::Greater;
    if (d2 > 42) return Ordering::Less;
    u128 p1 = 1, p2 = 1;
    while (d1-- > 0) p1 *= 3;
    while (d2-- > 0) p2 *= 3;
    u128 lhs = p1 * cube2, rhs = p2 * cube1;
    if (lhs < rhs) return Ordering::Less;
    if (lhs == rhs) return Ordering::Equal;
    return Ordering::Greater;
  }
  unsigned lo = std::min(k1.c, k2.c);
  return cmp(pow3(k1.c - lo) * k2.n * k2.n * k2.n, pow3(k2.c - lo) * k1.n * k1.n * k1.n);
}

DefectThreshold::DefectThreshold(std::uint64_t p, std::uint64_t q) : p_(p), q_(q) {
  if (q_ == 0) throw std::invalid_argument("DefectThreshold: zero denominator");
  std::uint64_t g = std::gcd(p_, q_);
  p_ /= g;
  q_ /= g;
  if (q_ > 64) throw std::invalid_argument("DefectThreshold: denominator above 64");
}

DefectThreshold DefectThreshold::parse(const std::string& text) {
  auto parse_u64 = [](std::string_view s) {
    std::uint64_t v = 0;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || p != s.data() + s.size())
      throw std::invalid_argument("DefectThreshold: bad rational: " + std::string(s));
    return v;
  };
  auto slash = text.find('/');
  if (slash == std::string::npos) return DefectThreshold(parse_u64(text), 1);
  return DefectThreshold(parse_u64(text.substr(0, slash)), parse_u64(text.substr(slash + 1)));
}

std::string DefectThreshold::str() const {
  return q_ == 1 ? std::to_string(p_) : std::to_string(p_) + "/" + std::to_string(q_);
}

bool defect_less_than(const DefectKey& key, const DefectThreshold& r) {
  // c - 3 log3 n < p/q  <=>  3^(qc) < 3^p * n^(3q)
  std::uint64_t qc = r.den() * key.c;
  if (qc < r.num()) return true;  // already c < p/q, and delta <= c
  BigInt rhs = pow3(static_cast<unsigned>(r.num())) *
               pow_big(key.n, static_cast<unsigned>(3 * r.den()));
  return pow3(static_cast<unsigned>(qc)) < rhs;
}

bool is_leader(const ComplexityTable& table, std::uint64_t n) {
  unsigned c = table.at(n);
  if (n % 3 != 0) return true;
  return c < 3 + table[n / 3];
}

namespace {

// For fixed complexity c, delta((c, n)) is strictly decreasing in n, so the
// threshold test has a single crossing point; this finds the smallest n with
// delta((c, n)) < r by exact bisection.
std::uint64_t threshold_cutoff(unsigned c, const DefectThreshold& r, std::uint64_t limit) {
  auto below = [&](std::uint64_t n) { return defect_less_than(DefectKey{c, BigInt(n)}, r); };
  if (below(1)) return 1;
  if (!below(limit)) return limit + 1;  // nothing below threshold in range
  std::uint64_t lo = 1, hi = limit;     // !below(lo), below(hi)
  while (hi - lo > 1) {
    std::uint64_t mid = lo + (hi - lo) / 2;
    (below(mid) ? hi : lo) = mid;
  }
  return hi;
}

template <typename Keep>
std::vector<std::uint64_t> enumerate_below(const ComplexityTable& table,
                                           const DefectThreshold& r, std::uint64_t bound,
                                           Keep keep) {
  if (bound > table.limit()) throw std::out_of_range("enumerate: bound above table limit");
  std::vector<std::uint64_t> cutoff(256, 0);
  std::vector<bool> have(256, false);
  std::vector<std::uint64_t> out;
  for (std::uint64_t n = 1; n <= bound; ++n) {
    unsigned c = table[n];
    if (!have[c]) {
      cutoff[c] = threshold_cutoff(c, r, table.limit());
      have[c] = true;
    }
    if (n >= cutoff[c] && keep(n)) out.push_back(n);
  }
  return out;
}

}  // namespace

std::vector<std::uint64_t> enumerate_A_r(const ComplexityTable& table,
                                         const DefectThreshold& r, std::uint64_t bound) {
  return enumerate_below(table, r, bound, [](std::uint64_t) { return true; });
}

std::vector<std::uint64_t> enumerate_B_r(const ComplexityTable& table,
                                         const DefectThreshold& r, std::uint64_t bound) {
  return enumerate_below(table, r, bound,
                         [&](std::uint64_t n) { return is_leader(table, n); });
}

std::optional<unsigned> defect_class(const ComplexityTable& table, std::uint64_t n) {
  unsigned c = table.at(n);
  if (n == 1) return std::nullopt;
  return c % 3;
}

const char* to_string(StabilityVerdict v) {
  switch (v) {
    case StabilityVerdict::StableWithinHorizon: return "stable_within_horizon";
    case StabilityVerdict::UnstableProven: return "unstable_proven";
    default: return "horizon_exhausted";
  }
}

StabilityStatus stability(const ComplexityTable& table, std::uint64_t n) {
  unsigned c = table.at(n);
  StabilityStatus st;
  std::uint64_t m = n;
  while (m <= table.limit() / 3) {
    m *= 3;
    ++st.k_checked;
    // delta(3^k n) = delta(n) iff ||3^k n|| = 3k + ||n||; it can only drop.
    if (st.witness_k == 0 && table[m] < 3 * st.k_checked + c)
      st.witness_k = st.k_checked;
  }
  if (st.witness_k != 0)
    st.verdict = StabilityVerdict::UnstableProven;
  else
    st.verdict = (st.k_checked == 0) ? StabilityVerdict::HorizonExhausted
                                     : StabilityVerdict::StableWithinHorizon;
  return st;
}

StableComplexity stable_complexity(const ComplexityTable& table, std::uint64_t n) {
  unsigned c = table.at(n);
  StableComplexity out;
  unsigned best = c, argmin = 0, k = 0;
  std::uint64_t m = n;
  while (m <= table.limit() / 3) {
    m *= 3;
    ++k;
    unsigned v = table[m] - 3 * k;
    if (v < best) {
      best = v;
      argmin = k;
    }
  }
  out.value = best;
  out.status.k_checked = k;
  out.status.witness_k = 0;
  if (k == 0 || argmin == k) {
    // No headroom, or still decreasing at the horizon: unconfirmed minimum.
    out.status.verdict = StabilityVerdict::HorizonExhausted;
  } else {
    out.status.verdict = StabilityVerdict::StableWithinHorizon;
  }
  return out;
}

DefectKey stable_defect_key(const ComplexityTable& table, std::uint64_t n) {
  unsigned c = table.at(n);
  unsigned best = c, argmin = 0, k = 0;
  std::uint64_t m = n;
  while (m <= table.limit() / 3) {
    m *= 3;
    ++k;
    unsigned v = table[m] - 3 * k;
    if (v < best) {
      best = v;
      argmin = k;
    }
  }
  std::uint64_t point = n;
  for (unsigned i = 0; i < argmin; ++i) point *= 3;
  return DefectKey{table[point], BigInt(point)};
}

std::vector<DefectEntry> sorted_defects(const ComplexityTable& table, std::uint64_t bound,
                                        const DefectFilters& filters) {
  if (bound > table.limit()) throw std::out_of_range("sorted_defects: bound above limit");
  std::vector<DefectEntry> out;
  // Distinct defect values among n <= bound are in bijection with the
  // leaders <= bound (the attaining set of a defect is a chain n*3^k whose
  // least element is the leader, and the leader divides every member).
  for (std::uint64_t n = 1; n <= bound; ++n) {
    if (!is_leader(table, n)) continue;
    DefectEntry e;
    e.key = defect_key(table, n);
    e.leader = n;
    e.cls = defect_class(table, n);
    if (filters.threshold && !defect_less_than(e.key, *filters.threshold)) continue;
    if (filters.complexity_class && (!e.cls || *e.cls != *filters.complexity_class)) continue;
    e.stability = stability(table, n);
    if (filters.stable_only && e.stability.verdict != StabilityVerdict::StableWithinHorizon)
      continue;
    out.push_back(std::move(e));
  }
  std::sort(out.begin(), out.end(), [](const DefectEntry& a, const DefectEntry& b) {
    return compare_defects(a.key, b.key) == Ordering::Less;
  });
  return out;
}

std::string format_defect(double value) {
  char buf[64];
  auto [p, ec] = std::to_chars(buf, buf + sizeof(buf), value, std::chars_format::fixed, 6);
  if (ec != std::errc()) throw std::runtime_error("format_defect: conversion failed");
  return std::string(buf, p);
}

void write_defects_csv(std::ostream& out, const std::vector<DefectEntry>& entries) {
  out << "n,complexity,defect_float,class,stable_status\n";
  for (const auto& e : entries) {
    out << e.leader << ',' << e.key.c << ',' << format_defect(e.key.value()) << ','
        << (e.cls ? std::to_string(*e.cls) : std::string("excluded")) << ','
        << to_string(e.stability.verdict) << '\n';
  }
}

}  // namespace defect_forge
