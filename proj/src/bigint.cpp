#include "defect_forge/bigint.hpp"

#include <array>
#include <stdexcept>

namespace defect_forge {

namespace {

constexpr unsigned kPow3TableSize = 512;

const std::array<BigInt, kPow3TableSize>& pow3_table() {
  static const auto table = [] {
    std::array<BigInt, kPow3TableSize> t;
    t[0] = 1;
    for (unsigned i = 1; i < kPow3TableSize; ++i) t[i] = t[i - 1] * 3;
    return t;
  }();
  return table;
}

}  // namespace

BigInt pow3(unsigned e) {
  if (e < kPow3TableSize) return pow3_table()[e];
  return boost::multiprecision::pow(BigInt(3), e);
}

BigInt pow_big(const BigInt& base, unsigned e) {
  return boost::multiprecision::pow(base, e);
}

unsigned ceil_log3(const BigInt& x) {
  if (x < 1) throw std::invalid_argument("ceil_log3: argument must be >= 1");
  unsigned s = 0;
  BigInt p = 1;
  while (p < x) {
    p *= 3;
    ++s;
  }
  return s;
}

std::uint64_t pow3_clamped(unsigned e, std::uint64_t cap) {
  std::uint64_t v = 1;
  while (e-- > 0) {
    if (v > cap / 3) return cap;
    v *= 3;
  }
  return std::min(v, cap);
}

}  // namespace defect_forge
