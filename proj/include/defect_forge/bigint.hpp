#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>

namespace defect_forge {

using BigInt = boost::multiprecision::cpp_int;

/// 3^e as an exact integer; small exponents come from a precomputed table.
BigInt pow3(unsigned e);

BigInt pow_big(const BigInt& base, unsigned e);

/// Smallest s >= 0 with 3^s >= x.  Requires x >= 1.
unsigned ceil_log3(const BigInt& x);

/// min(3^e, cap) without overflow.
std::uint64_t pow3_clamped(unsigned e, std::uint64_t cap);

enum class Ordering { Less, Equal, Greater };

inline const char* to_string(Ordering o) {
  switch (o) {
    case Ordering::Less: return "less";
    case Ordering::Equal: return "equal";
    default: return "greater";
  }
}

}  // namespace defect_forge
