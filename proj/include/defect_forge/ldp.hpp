#pragma once

#include "defect_forge/bigint.hpp"
#include "defect_forge/complexity.hpp"
#include "defect_forge/defect.hpp"

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace defect_forge {

/// Expression tree for a low-defect polynomial.
///
/// Grammar: Const(k) | Product(f, g) | Extend(f, c) where Extend(f, c) means
/// f (x) x_next + c.  Variables are implicitly numbered x1..xr left to right
/// in tree order; a Product's right operand has its variables renumbered to
/// follow the left's, an Extend owns the last variable of its subtree.
/// Trees are immutable and share subtrees.
class LdpExpr {
 public:
  enum class Kind { Const, Product, Extend };

  static LdpExpr constant(BigInt k);
  static LdpExpr product(const LdpExpr& left, const LdpExpr& right);
  static LdpExpr extend(const LdpExpr& base, BigInt addend);

  Kind kind() const;
  unsigned degree() const;  // number of variables = number of Extend nodes

  const BigInt& const_value() const;  // Const only
  const BigInt& addend() const;       // Extend only
  LdpExpr left() const;               // Product only
  LdpExpr right() const;              // Product only
  LdpExpr base() const;               // Extend only

  /// Coefficient of x1..xr; never zero.
  BigInt leading_coefficient() const;
  /// Constant term; never zero.
  BigInt constant_term() const;

  /// f(3^e1, ..., 3^er); arity must match the degree.
  BigInt evaluate(std::span<const unsigned> exponents) const;

  std::string to_string() const;

  /// Canonical JSON: {"kind":"const","value":K} |
  /// {"kind":"product","left":...,"right":...} |
  /// {"kind":"extend","base":...,"addend":C}.
  std::string to_json_string() const;
  static LdpExpr from_json_string(const std::string& text);

 private:
  struct Node;
  explicit LdpExpr(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  std::shared_ptr<const Node> node_;
};

using ExponentTuple = std::vector<unsigned>;

/// Canonical multilinear polynomial as a coefficient map: bit i-1 of a
/// monomial mask marks the presence of x_i.  Limited to 63 variables.
class MultilinearPoly {
 public:
  MultilinearPoly() = default;
  MultilinearPoly(unsigned nvars, std::vector<std::pair<std::uint64_t, BigInt>> terms);

  static MultilinearPoly from_expr(const LdpExpr& f);

  unsigned degree() const { return nvars_; }
  /// Terms sorted by mask; zero coefficients omitted.
  const std::vector<std::pair<std::uint64_t, BigInt>>& terms() const { return terms_; }
  const BigInt* coefficient(std::uint64_t mask) const;

  BigInt evaluate(std::span<const unsigned> exponents) const;
  BigInt leading_coefficient() const;

  /// Product with disjoint variables, right side's renumbered after left's.
  static MultilinearPoly tensor(const MultilinearPoly& a, const MultilinearPoly& b);

  bool operator==(const MultilinearPoly& o) const = default;
  std::string canonical_string() const;

 private:
  unsigned nvars_ = 0;
  std::vector<std::pair<std::uint64_t, BigInt>> terms_;
};

/// Coefficient map of f; validates the structural invariants (multilinear by
/// construction, nonzero constant term and leading coefficient) and throws
/// on violation.  Grammar-built trees always pass; this guards deserialized
/// input.
MultilinearPoly coefficients(const LdpExpr& f);

/// A low-defect polynomial with its certified base complexity.
struct LowDefectPair {
  LdpExpr expr;
  unsigned base_complexity = 0;

  unsigned degree() const { return expr.degree(); }
};

/// (Const(k), C).  Checks only the unconditional bound C >= 3 log3 k; pass a
/// table to certify C >= ||k|| (the table overload defaults C to ||k||).
LowDefectPair make_const(const BigInt& k, unsigned C);
LowDefectPair make_const(const ComplexityTable& table, std::uint64_t k,
                         std::optional<unsigned> C = std::nullopt);

/// (f1 (x) f2, C1 + C2).  Constant factors fold: Const(a) (x) Const(b) =
/// Const(ab) and Const(1) is dropped, so equal polynomials stay
/// representation-equal where possible.
LowDefectPair tensor(const LowDefectPair& p1, const LowDefectPair& p2);

/// (f (x) x_next + c, C + D) with D >= ||c||.
LowDefectPair extend(const LowDefectPair& p, const BigInt& c, unsigned D);
LowDefectPair extend(const ComplexityTable& table, const LowDefectPair& p, std::uint64_t c,
                     std::optional<unsigned> D = std::nullopt);

/// delta(f, C) = C - 3 log3 a with a the leading coefficient: exactly the
/// defect functional of the key (C, a), so DefectKey comparisons apply.
DefectKey delta_of_pair(const LowDefectPair& p);

/// Exact floor of the defect of a key: c - (smallest s with 3^s >= n^3).
/// Requires a nonnegative defect.
unsigned floor_defect(const DefectKey& key);

/// Exact key (C + 3*sum(e), f(3^e)) for delta_{f,C}(e); float via .value().
DefectKey delta_fC_key(const LowDefectPair& p, std::span<const unsigned> exponents);
double delta_fC(const LowDefectPair& p, std::span<const unsigned> exponents);

/// Same functional over a coefficient map (used with drop_variable).
DefectKey delta_fC_key(const MultilinearPoly& f, unsigned C,
                       std::span<const unsigned> exponents);

/// f = h (x) (g (x) x + c), isolating the maximum-index variable.
struct MaxVarDecomposition {
  LdpExpr h;
  LdpExpr g;
  BigInt c;
};
MaxVarDecomposition decompose_maxvar(const LdpExpr& f);

/// Coefficient polynomial of x_i (the partial derivative, f being
/// multilinear); remaining variables renumbered contiguously.  i is 1-based.
MultilinearPoly drop_variable(const LdpExpr& f, unsigned i);

/// All exponent tuples with f(3^e) = N, lexicographically ascending.  Exact
/// and complete: at Extend nodes divisibility by 3 bounds the exponent, at
/// Product nodes the left factor's representable values <= N are enumerated.
/// Each exponent is additionally capped (default ceil(log3 N)).
std::vector<ExponentTuple> find_3_representations(
    const LdpExpr& f, const BigInt& n,
    std::optional<unsigned> exponent_cap = std::nullopt);

/// Tuples for the augmented polynomial f^ = f (x) x (one extra trailing
/// exponent, a free power of 3).
std::vector<ExponentTuple> find_3_representations_augmented(
    const LdpExpr& f, const BigInt& n,
    std::optional<unsigned> exponent_cap = std::nullopt);

/// Evaluate the augmented polynomial: f(3^e1..3^er) * 3^e(r+1).
BigInt augment_evaluate(const LowDefectPair& p, std::span<const unsigned> exponents);

/// (value, tuple) for every tuple with f(3^e) <= bound, ascending by value.
std::vector<std::pair<std::uint64_t, ExponentTuple>> representable_values(
    const LdpExpr& f, std::uint64_t bound);

/// Does some tuple achieve ||N|| = C + 3*sum(e) (+ 3*e_{r+1} when
/// augmented)?  Returns the lexicographically first witness.
struct EfficiencyWitness {
  bool efficient = false;
  ExponentTuple tuple;
};
EfficiencyWitness is_efficiently_represented(const ComplexityTable& table,
                                             const LowDefectPair& p, std::uint64_t n,
                                             bool use_augmented);

/// Pair JSON: {"poly": <expr>, "base_complexity": C}.
std::string pair_to_json_string(const LowDefectPair& p);
LowDefectPair pair_from_json_string(const std::string& text);

}  // namespace defect_forge
