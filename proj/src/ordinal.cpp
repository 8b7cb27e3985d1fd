#include "defect_forge/ordinal.hpp"

#include <algorithm>
#include <charconv>
#include <stdexcept>

namespace defect_forge {

namespace {

constexpr std::string_view kOmegaUtf8 = "\xcf\x89";  // lowercase omega
constexpr std::string_view kMiddleDot = "\xc2\xb7";

void canonicalize(std::vector<BigInt>& coeffs) {
  for (const BigInt& c : coeffs)
    if (c < 0) throw std::invalid_argument("OrdinalCNF: negative coefficient");
  while (!coeffs.empty() && coeffs.back() == 0) coeffs.pop_back();
}

}  // namespace

OrdinalCNF::OrdinalCNF(std::vector<BigInt> coeffs) : coeffs_(std::move(coeffs)) {
  canonicalize(coeffs_);
}

OrdinalCNF OrdinalCNF::finite(BigInt n) { return OrdinalCNF({std::move(n)}); }

OrdinalCNF OrdinalCNF::omega_power(unsigned k) {
  std::vector<BigInt> coeffs(k + 1, BigInt(0));
  coeffs[k] = 1;
  return OrdinalCNF(std::move(coeffs));
}

OrdinalCNF omega_power(unsigned k) { return OrdinalCNF::omega_power(k); }

OrdinalCNF nat_sum(const OrdinalCNF& a, const OrdinalCNF& b) {
  std::vector<BigInt> coeffs(std::max(a.coeffs().size(), b.coeffs().size()), BigInt(0));
  for (std::size_t i = 0; i < a.coeffs().size(); ++i) coeffs[i] += a.coeffs()[i];
  for (std::size_t i = 0; i < b.coeffs().size(); ++i) coeffs[i] += b.coeffs()[i];
  return OrdinalCNF(std::move(coeffs));
}

OrdinalCNF nat_prod(const OrdinalCNF& a, const OrdinalCNF& b) {
  if (a.is_zero() || b.is_zero()) return OrdinalCNF();
  std::vector<BigInt> coeffs(a.coeffs().size() + b.coeffs().size() - 1, BigInt(0));
  for (std::size_t i = 0; i < a.coeffs().size(); ++i)
    for (std::size_t j = 0; j < b.coeffs().size(); ++j)
      coeffs[i + j] += a.coeffs()[i] * b.coeffs()[j];
  return OrdinalCNF(std::move(coeffs));
}

Ordering compare_ordinals(const OrdinalCNF& a, const OrdinalCNF& b) {
  if (a.coeffs().size() != b.coeffs().size())
    return a.coeffs().size() < b.coeffs().size() ? Ordering::Less : Ordering::Greater;
  for (std::size_t i = a.coeffs().size(); i-- > 0;) {
    if (a.coeffs()[i] != b.coeffs()[i])
      return a.coeffs()[i] < b.coeffs()[i] ? Ordering::Less : Ordering::Greater;
  }
  return Ordering::Equal;
}

std::string OrdinalCNF::to_string() const {
  if (coeffs_.empty()) return "0";
  std::string out;
  for (std::size_t i = coeffs_.size(); i-- > 0;) {
    if (coeffs_[i] == 0) continue;
    if (!out.empty()) out += " + ";
    if (i == 0) {
      out += coeffs_[i].str();
      continue;
    }
    out += kOmegaUtf8;
    if (i >= 2) {
      out += '^';
      out += std::to_string(i);
    }
    if (coeffs_[i] != 1) {
      out += kMiddleDot;
      out += coeffs_[i].str();
    }
  }
  return out;
}

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && s.front() == ' ') s.remove_prefix(1);
  while (!s.empty() && s.back() == ' ') s.remove_suffix(1);
  return s;
}

BigInt parse_coeff(std::string_view s) {
  s = trim(s);
  if (s.empty() || s.find_first_not_of("0123456789") != std::string_view::npos)
    throw std::invalid_argument("ordinal parse: bad coefficient '" + std::string(s) + "'");
  return BigInt(std::string(s));
}

}  // namespace

OrdinalCNF OrdinalCNF::parse(std::string_view text) {
  std::vector<BigInt> coeffs;
  auto add_term = [&](unsigned exp, const BigInt& c) {
    if (coeffs.size() <= exp) coeffs.resize(exp + 1, BigInt(0));
    coeffs[exp] += c;
  };

  std::string_view rest = trim(text);
  if (rest.empty()) throw std::invalid_argument("ordinal parse: empty input");
  if (rest == "0") return OrdinalCNF();

  while (true) {
    auto plus = rest.find('+');
    // '^' exponents never contain '+'; split on top-level plus signs.
    std::string_view term = trim(plus == std::string_view::npos ? rest : rest.substr(0, plus));
    if (term.empty()) throw std::invalid_argument("ordinal parse: empty term");

    bool omega = false;
    if (term.substr(0, kOmegaUtf8.size()) == kOmegaUtf8) {
      omega = true;
      term.remove_prefix(kOmegaUtf8.size());
    } else if (term.front() == 'w') {
      omega = true;
      term.remove_prefix(1);
    }

    if (!omega) {
      add_term(0, parse_coeff(term));
    } else {
      unsigned exp = 1;
      term = trim(term);
      if (!term.empty() && term.front() == '^') {
        term.remove_prefix(1);
        std::size_t i = 0;
        while (i < term.size() && term[i] >= '0' && term[i] <= '9') ++i;
        if (i == 0) throw std::invalid_argument("ordinal parse: missing exponent");
        auto [p, ec] = std::from_chars(term.data(), term.data() + i, exp);
        if (ec != std::errc()) throw std::invalid_argument("ordinal parse: bad exponent");
        term.remove_prefix(i);
        term = trim(term);
      }
      BigInt coeff = 1;
      if (!term.empty()) {
        if (term.front() != '*' && term.front() != static_cast<char>(0xc2))
          throw std::invalid_argument("ordinal parse: expected '*' after omega term");
        if (term.front() == '*') {
          term.remove_prefix(1);
        } else {
          // UTF-8 middle dot 0xc2 0xb7
          if (term.size() < 2 || static_cast<unsigned char>(term[1]) != 0xb7)
            throw std::invalid_argument("ordinal parse: expected '*' after omega term");
          term.remove_prefix(2);
        }
        coeff = parse_coeff(term);
      }
      add_term(exp, coeff);
    }

    if (plus == std::string_view::npos) break;
    rest = rest.substr(plus + 1);
  }
  return OrdinalCNF(std::move(coeffs));
}

}  // namespace defect_forge
