#pragma once

#include "defect_forge/bigint.hpp"

#include <string>
#include <string_view>
#include <vector>

namespace defect_forge {

/// Ordinal below omega^omega in Cantor normal form: coeffs()[i] is the
/// coefficient of omega^i.  Canonical form has no trailing zeros; the zero
/// ordinal is the empty sequence.  omega^omega itself is not representable.
class OrdinalCNF {
 public:
  OrdinalCNF() = default;  // zero
  explicit OrdinalCNF(std::vector<BigInt> coeffs);

  static OrdinalCNF finite(BigInt n);
  static OrdinalCNF omega_power(unsigned k);

  const std::vector<BigInt>& coeffs() const { return coeffs_; }
  bool is_zero() const { return coeffs_.empty(); }

  /// "omega^3*2 + omega*5 + 7" (with a literal lowercase omega); parse
  /// accepts the same grammar and "w" as an ASCII alias.
  std::string to_string() const;
  static OrdinalCNF parse(std::string_view text);

  bool operator==(const OrdinalCNF&) const = default;

 private:
  std::vector<BigInt> coeffs_;
};

/// Hessenberg (natural) sum: coefficientwise addition.
OrdinalCNF nat_sum(const OrdinalCNF& a, const OrdinalCNF& b);

/// Hessenberg (natural) product: Cauchy convolution of the coefficient
/// sequences (finite exponents add).
OrdinalCNF nat_prod(const OrdinalCNF& a, const OrdinalCNF& b);

/// Standard CNF order, highest exponent first.
Ordering compare_ordinals(const OrdinalCNF& a, const OrdinalCNF& b);

OrdinalCNF omega_power(unsigned k);

}  // namespace defect_forge
