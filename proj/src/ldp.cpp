#include "defect_forge/ldp.hpp"

#include "defect_forge/json_io.hpp"

#include <algorithm>
#include <bit>
#include <sstream>
#include <stdexcept>

namespace defect_forge {

// --- expression trees --------------------------------------------------

struct LdpExpr::Node {
  Kind kind;
  unsigned degree;
  BigInt value;  // Const: k; Extend: addend
  std::shared_ptr<const Node> a, b;
};

LdpExpr LdpExpr::constant(BigInt k) {
  if (k < 1) throw std::invalid_argument("LdpExpr: constant must be positive");
  auto n = std::make_shared<Node>();
  n->kind = Kind::Const;
  n->degree = 0;
  n->value = std::move(k);
  return LdpExpr(std::move(n));
}

LdpExpr LdpExpr::product(const LdpExpr& left, const LdpExpr& right) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Product;
  n->degree = left.degree() + right.degree();
  n->a = left.node_;
  n->b = right.node_;
  return LdpExpr(std::move(n));
}

LdpExpr LdpExpr::extend(const LdpExpr& base, BigInt addend) {
  if (addend < 1) throw std::invalid_argument("LdpExpr: addend must be positive");
  auto n = std::make_shared<Node>();
  n->kind = Kind::Extend;
  n->degree = base.degree() + 1;
  n->value = std::move(addend);
  n->a = base.node_;
  return LdpExpr(std::move(n));
}

LdpExpr::Kind LdpExpr::kind() const { return node_->kind; }
unsigned LdpExpr::degree() const { return node_->degree; }

const BigInt& LdpExpr::const_value() const {
  if (kind() != Kind::Const) throw std::logic_error("const_value: not a constant");
  return node_->value;
}

const BigInt& LdpExpr::addend() const {
  if (kind() != Kind::Extend) throw std::logic_error("addend: not an extend node");
  return node_->value;
}

LdpExpr LdpExpr::left() const {
  if (kind() != Kind::Product) throw std::logic_error("left: not a product");
  return LdpExpr(node_->a);
}

LdpExpr LdpExpr::right() const {
  if (kind() != Kind::Product) throw std::logic_error("right: not a product");
  return LdpExpr(node_->b);
}

LdpExpr LdpExpr::base() const {
  if (kind() != Kind::Extend) throw std::logic_error("base: not an extend node");
  return LdpExpr(node_->a);
}

BigInt LdpExpr::leading_coefficient() const {
  switch (kind()) {
    case Kind::Const: return node_->value;
    case Kind::Product: return left().leading_coefficient() * right().leading_coefficient();
    default: return base().leading_coefficient();
  }
}

BigInt LdpExpr::constant_term() const {
  switch (kind()) {
    case Kind::Const: return node_->value;
    case Kind::Product: return left().constant_term() * right().constant_term();
    default: return node_->value;  // Extend: the addend
  }
}

BigInt LdpExpr::evaluate(std::span<const unsigned> e) const {
  if (e.size() != degree()) throw std::invalid_argument("evaluate: arity mismatch");
  switch (kind()) {
    case Kind::Const: return node_->value;
    case Kind::Product: {
      LdpExpr l = left(), r = right();
      return l.evaluate(e.first(l.degree())) * r.evaluate(e.subspan(l.degree()));
    }
    default: {
      LdpExpr b = base();
      return b.evaluate(e.first(e.size() - 1)) * pow3(e.back()) + node_->value;
    }
  }
}

namespace {

void render(const LdpExpr& f, unsigned& next_var, std::string& out) {
  switch (f.kind()) {
    case LdpExpr::Kind::Const:
      out += f.const_value().str();
      return;
    case LdpExpr::Kind::Product: {
      auto wrap = [&](const LdpExpr& g) {
        bool paren = g.kind() == LdpExpr::Kind::Extend;
        if (paren) out += '(';
        render(g, next_var, out);
        if (paren) out += ')';
      };
      wrap(f.left());
      out += '*';
      wrap(f.right());
      return;
    }
    default: {
      LdpExpr b = f.base();
      bool trivial = b.kind() == LdpExpr::Kind::Const && b.const_value() == 1;
      if (b.kind() == LdpExpr::Kind::Const) {
        if (!trivial) render(b, next_var, out);
      } else {
        out += '(';
        render(b, next_var, out);
        out += ')';
      }
      out += 'x';
      out += std::to_string(++next_var);
      out += '+';
      out += f.addend().str();
      return;
    }
  }
}

}  // namespace

std::string LdpExpr::to_string() const {
  std::string out;
  unsigned next_var = 0;
  render(*this, next_var, out);
  return out;
}

// --- coefficient maps ---------------------------------------------------

MultilinearPoly::MultilinearPoly(unsigned nvars,
                                 std::vector<std::pair<std::uint64_t, BigInt>> terms)
    : nvars_(nvars), terms_(std::move(terms)) {
  if (nvars_ > 63) throw std::invalid_argument("MultilinearPoly: too many variables");
  std::erase_if(terms_, [](const auto& t) { return t.second == 0; });
  for (const auto& [mask, coeff] : terms_) {
    if (nvars_ < 64 && mask >= (1ull << nvars_))
      throw std::invalid_argument("MultilinearPoly: mask out of range");
    if (coeff < 0) throw std::invalid_argument("MultilinearPoly: negative coefficient");
  }
  std::sort(terms_.begin(), terms_.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
}

MultilinearPoly MultilinearPoly::from_expr(const LdpExpr& f) {
  switch (f.kind()) {
    case LdpExpr::Kind::Const:
      return MultilinearPoly(0, {{0, f.const_value()}});
    case LdpExpr::Kind::Product:
      return tensor(from_expr(f.left()), from_expr(f.right()));
    default: {
      MultilinearPoly base = from_expr(f.base());
      std::vector<std::pair<std::uint64_t, BigInt>> terms;
      terms.reserve(base.terms_.size() + 1);
      std::uint64_t new_bit = 1ull << base.nvars_;
      for (const auto& [mask, coeff] : base.terms_) terms.emplace_back(mask | new_bit, coeff);
      terms.emplace_back(0, f.addend());
      return MultilinearPoly(base.nvars_ + 1, std::move(terms));
    }
  }
}

const BigInt* MultilinearPoly::coefficient(std::uint64_t mask) const {
  auto it = std::lower_bound(terms_.begin(), terms_.end(), mask,
                             [](const auto& t, std::uint64_t m) { return t.first < m; });
  if (it == terms_.end() || it->first != mask) return nullptr;
  return &it->second;
}

BigInt MultilinearPoly::evaluate(std::span<const unsigned> e) const {
  if (e.size() != nvars_) throw std::invalid_argument("evaluate: arity mismatch");
  BigInt sum = 0;
  for (const auto& [mask, coeff] : terms_) {
    std::uint64_t exp = 0;
    for (unsigned i = 0; i < nvars_; ++i)
      if (mask & (1ull << i)) exp += e[i];
    sum += coeff * pow3(static_cast<unsigned>(exp));
  }
  return sum;
}

BigInt MultilinearPoly::leading_coefficient() const {
  std::uint64_t full = nvars_ == 0 ? 0 : (1ull << nvars_) - 1;
  const BigInt* c = coefficient(full);
  return c ? *c : BigInt(0);
}

MultilinearPoly MultilinearPoly::tensor(const MultilinearPoly& a, const MultilinearPoly& b) {
  std::vector<std::pair<std::uint64_t, BigInt>> terms;
  terms.reserve(a.terms_.size() * b.terms_.size());
  for (const auto& [ma, ca] : a.terms_)
    for (const auto& [mb, cb] : b.terms_)
      terms.emplace_back(ma | (mb << a.nvars_), ca * cb);
  return MultilinearPoly(a.nvars_ + b.nvars_, std::move(terms));
}

std::string MultilinearPoly::canonical_string() const {
  std::string out = std::to_string(nvars_);
  for (const auto& [mask, coeff] : terms_) {
    out += '|';
    out += std::to_string(mask);
    out += ':';
    out += coeff.str();
  }
  return out;
}

MultilinearPoly coefficients(const LdpExpr& f) {
  MultilinearPoly poly = MultilinearPoly::from_expr(f);
  const BigInt* ct = poly.coefficient(0);
  if (!ct || *ct <= 0)
    throw std::invalid_argument("low-defect polynomial: constant term vanishes");
  if (poly.leading_coefficient() <= 0)
    throw std::invalid_argument("low-defect polynomial: leading coefficient vanishes");
  return poly;
}

// --- pair constructors ---------------------------------------------------

namespace {

bool is_const_one(const LdpExpr& e) {
  return e.kind() == LdpExpr::Kind::Const && e.const_value() == 1;
}

// Product with constant folding; preserves the coefficient map exactly.
LdpExpr tensor_expr(const LdpExpr& a, const LdpExpr& b) {
  if (a.kind() == LdpExpr::Kind::Const && b.kind() == LdpExpr::Kind::Const)
    return LdpExpr::constant(a.const_value() * b.const_value());
  if (is_const_one(a)) return b;
  if (is_const_one(b)) return a;
  return LdpExpr::product(a, b);
}

void check_base_bound(const BigInt& k, unsigned budget, const char* what) {
  // Unconditional Eq. (1) sanity: the budget must cover 3 log3 k.
  if (pow3(budget) < k * k * k)
    throw std::invalid_argument(std::string(what) + ": complexity budget below 3 log3 bound");
}

}  // namespace

LowDefectPair make_const(const BigInt& k, unsigned C) {
  check_base_bound(k, C, "make_const");
  return LowDefectPair{LdpExpr::constant(k), C};
}

LowDefectPair make_const(const ComplexityTable& table, std::uint64_t k,
                         std::optional<unsigned> C) {
  unsigned ck = table.at(k);
  unsigned c = C.value_or(ck);
  if (c < ck) throw std::invalid_argument("make_const: C below certified ||k||");
  return LowDefectPair{LdpExpr::constant(BigInt(k)), c};
}

LowDefectPair tensor(const LowDefectPair& p1, const LowDefectPair& p2) {
  return LowDefectPair{tensor_expr(p1.expr, p2.expr), p1.base_complexity + p2.base_complexity};
}

LowDefectPair extend(const LowDefectPair& p, const BigInt& c, unsigned D) {
  check_base_bound(c, D, "extend");
  return LowDefectPair{LdpExpr::extend(p.expr, c), p.base_complexity + D};
}

LowDefectPair extend(const ComplexityTable& table, const LowDefectPair& p, std::uint64_t c,
                     std::optional<unsigned> D) {
  unsigned cc = table.at(c);
  unsigned d = D.value_or(cc);
  if (d < cc) throw std::invalid_argument("extend: D below certified ||c||");
  return LowDefectPair{LdpExpr::extend(p.expr, BigInt(c)), p.base_complexity + d};
}

// --- defect functionals ---------------------------------------------------

DefectKey delta_of_pair(const LowDefectPair& p) {
  return DefectKey{p.base_complexity, p.expr.leading_coefficient()};
}

unsigned floor_defect(const DefectKey& key) {
  unsigned s = ceil_log3(key.n * key.n * key.n);
  if (s > key.c) throw std::invalid_argument("floor_defect: negative defect");
  return key.c - s;
}

namespace {

unsigned exponent_sum(std::span<const unsigned> e) {
  std::uint64_t s = 0;
  for (unsigned v : e) s += v;
  if (s > 1u << 24) throw std::invalid_argument("exponent sum out of range");
  return static_cast<unsigned>(s);
}

}  // namespace

DefectKey delta_fC_key(const LowDefectPair& p, std::span<const unsigned> e) {
  return DefectKey{p.base_complexity + 3 * exponent_sum(e), p.expr.evaluate(e)};
}

double delta_fC(const LowDefectPair& p, std::span<const unsigned> e) {
  return delta_fC_key(p, e).value();
}

DefectKey delta_fC_key(const MultilinearPoly& f, unsigned C, std::span<const unsigned> e) {
  return DefectKey{C + 3 * exponent_sum(e), f.evaluate(e)};
}

// --- structural operations -------------------------------------------------

MaxVarDecomposition decompose_maxvar(const LdpExpr& f) {
  if (f.degree() == 0)
    throw std::invalid_argument("decompose_maxvar: degree must be positive");
  switch (f.kind()) {
    case LdpExpr::Kind::Extend:
      return MaxVarDecomposition{LdpExpr::constant(1), f.base(), f.addend()};
    case LdpExpr::Kind::Product: {
      // Descend into the factor holding the maximum-index variable.
      if (f.right().degree() > 0) {
        MaxVarDecomposition d = decompose_maxvar(f.right());
        return MaxVarDecomposition{tensor_expr(f.left(), d.h), std::move(d.g), std::move(d.c)};
      }
      MaxVarDecomposition d = decompose_maxvar(f.left());
      return MaxVarDecomposition{tensor_expr(d.h, f.right()), std::move(d.g), std::move(d.c)};
    }
    default:
      throw std::logic_error("decompose_maxvar: constant with positive degree");
  }
}

MultilinearPoly drop_variable(const LdpExpr& f, unsigned i) {
  unsigned r = f.degree();
  if (i < 1 || i > r) throw std::out_of_range("drop_variable: variable index out of range");
  MultilinearPoly poly = MultilinearPoly::from_expr(f);
  std::uint64_t bit = 1ull << (i - 1);
  std::uint64_t low = bit - 1;
  std::vector<std::pair<std::uint64_t, BigInt>> terms;
  for (const auto& [mask, coeff] : poly.terms()) {
    if (!(mask & bit)) continue;
    std::uint64_t m = mask & ~bit;
    terms.emplace_back((m & low) | ((m >> 1) & ~low), coeff);
  }
  return MultilinearPoly(r - 1, std::move(terms));
}

// --- representation search --------------------------------------------------

namespace {

// All (value, tuple) with f(3^e) <= bound, each exponent <= cap.
std::vector<std::pair<BigInt, ExponentTuple>> values_big(const LdpExpr& f, const BigInt& bound,
                                                         unsigned cap) {
  std::vector<std::pair<BigInt, ExponentTuple>> out;
  if (bound < 1) return out;
  switch (f.kind()) {
    case LdpExpr::Kind::Const:
      if (f.const_value() <= bound) out.emplace_back(f.const_value(), ExponentTuple{});
      return out;
    case LdpExpr::Kind::Product: {
      LdpExpr l = f.left(), r = f.right();
      for (auto& [vl, tl] : values_big(l, bound, cap)) {
        for (auto& [vr, tr] : values_big(r, bound / vl, cap)) {
          ExponentTuple t = tl;
          t.insert(t.end(), tr.begin(), tr.end());
          out.emplace_back(vl * vr, std::move(t));
        }
      }
      return out;
    }
    default: {
      const BigInt& c = f.addend();
      if (bound <= c) return out;
      for (auto& [vb, tb] : values_big(f.base(), bound - c, cap)) {
        BigInt scaled = vb;
        for (unsigned m = 0; m <= cap && scaled + c <= bound; ++m) {
          ExponentTuple t = tb;
          t.push_back(m);
          out.emplace_back(scaled + c, std::move(t));
          scaled *= 3;
        }
      }
      return out;
    }
  }
}

std::vector<ExponentTuple> reps(const LdpExpr& f, const BigInt& target, unsigned cap) {
  std::vector<ExponentTuple> out;
  if (target < 1) return out;
  switch (f.kind()) {
    case LdpExpr::Kind::Const:
      if (f.const_value() == target) out.emplace_back();
      return out;
    case LdpExpr::Kind::Product: {
      LdpExpr l = f.left(), r = f.right();
      for (auto& [vl, tl] : values_big(l, target, cap)) {
        if (target % vl != 0) continue;
        for (auto& tr : reps(r, target / vl, cap)) {
          ExponentTuple t = tl;
          t.insert(t.end(), tr.begin(), tr.end());
          out.push_back(std::move(t));
        }
      }
      return out;
    }
    default: {
      BigInt rem = target - f.addend();
      if (rem < 1) return out;
      LdpExpr b = f.base();
      for (unsigned m = 0; m <= cap; ++m) {
        for (auto& tb : reps(b, rem, cap)) {
          ExponentTuple t = std::move(tb);
          t.push_back(m);
          out.push_back(std::move(t));
        }
        if (rem % 3 != 0) break;
        rem /= 3;
      }
      return out;
    }
  }
}

unsigned default_cap(const BigInt& n, std::optional<unsigned> cap) {
  return cap.value_or(ceil_log3(n));
}

}  // namespace

std::vector<ExponentTuple> find_3_representations(const LdpExpr& f, const BigInt& n,
                                                  std::optional<unsigned> exponent_cap) {
  if (n < 1) throw std::invalid_argument("find_3_representations: N must be positive");
  auto out = reps(f, n, default_cap(n, exponent_cap));
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<ExponentTuple> find_3_representations_augmented(const LdpExpr& f, const BigInt& n,
                                                            std::optional<unsigned> exponent_cap) {
  if (n < 1) throw std::invalid_argument("find_3_representations: N must be positive");
  unsigned cap = default_cap(n, exponent_cap);
  std::vector<ExponentTuple> out;
  BigInt rem = n;
  for (unsigned m = 0; m <= cap; ++m) {
    for (auto& t : reps(f, rem, cap)) {
      ExponentTuple tt = std::move(t);
      tt.push_back(m);
      out.push_back(std::move(tt));
    }
    if (rem % 3 != 0) break;
    rem /= 3;
  }
  std::sort(out.begin(), out.end());
  return out;
}

BigInt augment_evaluate(const LowDefectPair& p, std::span<const unsigned> e) {
  if (e.size() != p.degree() + 1)
    throw std::invalid_argument("augment_evaluate: arity mismatch");
  return p.expr.evaluate(e.first(e.size() - 1)) * pow3(e.back());
}

std::vector<std::pair<std::uint64_t, ExponentTuple>> representable_values(
    const LdpExpr& f, std::uint64_t bound) {
  std::vector<std::pair<std::uint64_t, ExponentTuple>> out;
  for (auto& [v, t] : values_big(f, BigInt(bound), 64)) {
    out.emplace_back(static_cast<std::uint64_t>(v), std::move(t));
  }
  std::sort(out.begin(), out.end());
  return out;
}

EfficiencyWitness is_efficiently_represented(const ComplexityTable& table,
                                             const LowDefectPair& p, std::uint64_t n,
                                             bool use_augmented) {
  unsigned cn = table.at(n);
  auto tuples = use_augmented ? find_3_representations_augmented(p.expr, BigInt(n))
                              : find_3_representations(p.expr, BigInt(n));
  for (auto& t : tuples) {
    std::uint64_t sum = 0;
    for (unsigned v : t) sum += v;
    if (p.base_complexity + 3 * sum == cn) return EfficiencyWitness{true, std::move(t)};
  }
  return EfficiencyWitness{};
}

// --- JSON -------------------------------------------------------------------

Json big_to_json(const BigInt& v) {
  static const BigInt kMaxExact = BigInt(1) << 53;
  if (v < kMaxExact && v > -kMaxExact) return Json(static_cast<std::int64_t>(v));
  return Json(v.str());
}

BigInt big_from_json(const Json& j) {
  if (j.is_number_unsigned()) return BigInt(j.get<std::uint64_t>());
  if (j.is_number_integer()) return BigInt(j.get<std::int64_t>());
  if (j.is_string()) {
    const auto& s = j.get_ref<const std::string&>();
    if (s.empty() || (s.find_first_not_of("0123456789", s[0] == '-' ? 1 : 0) != std::string::npos))
      throw std::invalid_argument("json: malformed integer string");
    return BigInt(s);
  }
  throw std::invalid_argument("json: expected an integer");
}

Json expr_to_json(const LdpExpr& f) {
  Json j;
  switch (f.kind()) {
    case LdpExpr::Kind::Const:
      j["kind"] = "const";
      j["value"] = big_to_json(f.const_value());
      return j;
    case LdpExpr::Kind::Product:
      j["kind"] = "product";
      j["left"] = expr_to_json(f.left());
      j["right"] = expr_to_json(f.right());
      return j;
    default:
      j["kind"] = "extend";
      j["base"] = expr_to_json(f.base());
      j["addend"] = big_to_json(f.addend());
      return j;
  }
}

LdpExpr expr_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("kind") || !j["kind"].is_string())
    throw std::invalid_argument("polynomial json: missing kind");
  const std::string& kind = j["kind"].get_ref<const std::string&>();
  if (kind == "const") {
    if (!j.contains("value")) throw std::invalid_argument("polynomial json: const needs value");
    return LdpExpr::constant(big_from_json(j["value"]));
  }
  if (kind == "product") {
    if (!j.contains("left") || !j.contains("right"))
      throw std::invalid_argument("polynomial json: product needs left and right");
    return LdpExpr::product(expr_from_json(j["left"]), expr_from_json(j["right"]));
  }
  if (kind == "extend") {
    if (!j.contains("base") || !j.contains("addend"))
      throw std::invalid_argument("polynomial json: extend needs base and addend");
    return LdpExpr::extend(expr_from_json(j["base"]), big_from_json(j["addend"]));
  }
  throw std::invalid_argument("polynomial json: unknown kind " + kind);
}

std::string LdpExpr::to_json_string() const { return expr_to_json(*this).dump(); }

LdpExpr LdpExpr::from_json_string(const std::string& text) {
  return expr_from_json(Json::parse(text));
}

Json pair_to_json(const LowDefectPair& p) {
  Json j;
  j["poly"] = expr_to_json(p.expr);
  j["base_complexity"] = p.base_complexity;
  return j;
}

LowDefectPair pair_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("poly") || !j.contains("base_complexity"))
    throw std::invalid_argument("pair json: needs poly and base_complexity");
  LdpExpr expr = expr_from_json(j["poly"]);
  if (!j["base_complexity"].is_number_unsigned())
    throw std::invalid_argument("pair json: base_complexity must be a nonnegative integer");
  coefficients(expr);  // structural validation for deserialized input
  return LowDefectPair{std::move(expr), j["base_complexity"].get<unsigned>()};
}

std::string pair_to_json_string(const LowDefectPair& p) { return pair_to_json(p).dump(); }

LowDefectPair pair_from_json_string(const std::string& text) {
  return pair_from_json(Json::parse(text));
}

}  // namespace defect_forge
