#include "defect_forge/defect.hpp"

#include "doctest.h"
#include "support/fixtures.hpp"

#include <cmath>
#include <random>
#include <sstream>

using namespace defect_forge;
using testsupport::table30k;

namespace {

long double defect_ld(unsigned c, std::uint64_t n) {
  return static_cast<long double>(c) - 3.0L * std::log(static_cast<long double>(n)) / std::log(3.0L);
}

// Strip factors of 3 while the defect is preserved, yielding the leader of
// n's defect chain.
std::uint64_t chain_leader(const ComplexityTable& t, std::uint64_t n, unsigned& k_out) {
  std::uint64_t m = n;
  unsigned k = 0;
  while (m % 3 == 0 && t[m] == 3 + t[m / 3]) {
    m /= 3;
    ++k;
  }
  k_out = k;
  return m;
}

}  // namespace

TEST_SUITE_BEGIN("defect");

TEST_CASE("defect keys and float values") {
  const auto& t = table30k();
  DefectKey k1 = defect_key(t, 1);
  CHECK(k1.c == 1);
  CHECK(k1.value() == doctest::Approx(1.0));
  DefectKey k3 = defect_key(t, 3);
  CHECK(k3.c == 3);
  CHECK(k3.value() == doctest::Approx(0.0));
  DefectKey k2 = defect_key(t, 2);
  CHECK(k2.value() == doctest::Approx(0.1073).epsilon(1e-3));
  CHECK(format_defect(k2.value()) == "0.107211");
  CHECK(format_defect(k1.value()) == "1.000000");
  CHECK_THROWS_AS(defect_key(t, t.limit() + 1), std::out_of_range);
}

TEST_CASE("exact defect comparison") {
  // 3^2 * 4^3 = 576 < 3^4 * 2^3 = 648
  CHECK(compare_defects({2, BigInt(2)}, {4, BigInt(4)}) == Ordering::Less);
  CHECK(compare_defects({3, BigInt(3)}, {6, BigInt(9)}) == Ordering::Equal);
  CHECK(compare_defects({1, BigInt(1)}, {2, BigInt(2)}) == Ordering::Greater);
  // Large-number path must agree with the small-number path.
  CHECK(compare_defects({40, BigInt(1) << 62}, {40, (BigInt(1) << 62) + 1}) ==
        Ordering::Greater);
  CHECK(compare_defects({100, BigInt(7)}, {10, BigInt(7)}) == Ordering::Greater);
}

TEST_CASE("comparison agrees with an 80-bit float whenever the gap is wide") {
  const auto& t = table30k();
  std::mt19937_64 rng(20240817);
  for (int trial = 0; trial < 20'000; ++trial) {
    std::uint64_t a = 1 + rng() % t.limit(), b = 1 + rng() % t.limit();
    long double da = defect_ld(t[a], a), db = defect_ld(t[b], b);
    if (std::abs(static_cast<double>(da - db)) <= 1e-9) continue;
    Ordering exact = compare_defects(defect_key(t, a), defect_key(t, b));
    CHECK(exact == (da < db ? Ordering::Less : Ordering::Greater));
  }
}

TEST_CASE("defect thresholds") {
  CHECK(DefectThreshold(2, 4) == DefectThreshold(1, 2));
  CHECK(DefectThreshold::parse("3/2").num() == 3);
  CHECK(DefectThreshold::parse("3").den() == 1);
  CHECK(DefectThreshold::parse("7/3").floor() == 2);
  CHECK_THROWS_AS(DefectThreshold(1, 0), std::invalid_argument);
  CHECK_THROWS_AS(DefectThreshold(1, 65), std::invalid_argument);
  CHECK_THROWS_AS(DefectThreshold::parse("x/2"), std::invalid_argument);

  CHECK(defect_less_than({3, BigInt(3)}, DefectThreshold(1, 2)));
  CHECK_FALSE(defect_less_than({1, BigInt(1)}, DefectThreshold(1, 1)));  // strict
  CHECK(defect_less_than({8, BigInt(16)}, DefectThreshold(1, 2)));
  CHECK_FALSE(defect_less_than({10, BigInt(32)}, DefectThreshold(1, 2)));
}

TEST_CASE("leaders") {
  const auto& t = table30k();
  CHECK(is_leader(t, 2));
  CHECK_FALSE(is_leader(t, 9));  // ||9|| = 6 = 3 + ||3||
  CHECK(is_leader(t, 3));        // ||3|| = 3 < 3 + ||1||
  CHECK(is_leader(t, 1));
  CHECK_FALSE(is_leader(t, 6));
}

TEST_CASE("A_r and B_r enumeration") {
  const auto& t = table30k();
  CHECK(enumerate_B_r(t, DefectThreshold(1, 2), 100) ==
        std::vector<std::uint64_t>{2, 3, 4, 8, 16});
  CHECK(enumerate_B_r(t, DefectThreshold(1, 100), 100) == std::vector<std::uint64_t>{3});
  CHECK(enumerate_A_r(t, DefectThreshold(1, 100), 30) ==
        std::vector<std::uint64_t>{3, 9, 27});
  CHECK_THROWS_AS(enumerate_B_r(t, DefectThreshold(1, 2), t.limit() + 1),
                  std::out_of_range);
}

TEST_CASE("every member of A_r factors through a B_r leader") {
  const auto& t = table30k();
  DefectThreshold r(1, 1);
  auto a_r = enumerate_A_r(t, r, 2000);
  auto b_r = enumerate_B_r(t, r, 2000);
  for (std::uint64_t n : a_r) {
    unsigned k = 0;
    std::uint64_t m = chain_leader(t, n, k);
    CHECK(is_leader(t, m));
    CHECK(std::binary_search(b_r.begin(), b_r.end(), m));
    CHECK(compare_defects(defect_key(t, n), defect_key(t, m)) == Ordering::Equal);
    CHECK(t[n] == t[m] + 3 * k);
  }
}

TEST_CASE("defect classes") {
  const auto& t = table30k();
  CHECK(defect_class(t, 2) == 2u);
  CHECK(defect_class(t, 1) == std::nullopt);
  CHECK(defect_class(t, 4) == 1u);
}

TEST_CASE("stability verdicts") {
  const auto& t = table30k();

  StabilityStatus s1 = stability(t, 1);
  CHECK(s1.verdict == StabilityVerdict::UnstableProven);
  CHECK(s1.witness_k == 1);  // ||3|| = 3 < 3 + ||1||

  StabilityStatus s2 = stability(t, 2);
  CHECK(s2.verdict == StabilityVerdict::StableWithinHorizon);
  CHECK(s2.k_checked >= 8);

  // 107 is the first unstable number past 1.
  CHECK(stability(t, 107).verdict == StabilityVerdict::UnstableProven);
  CHECK(stability(t, 107).witness_k == 1);

  // 3019 survives one tripling and fails at the second.
  StabilityStatus s3019 = stability(t, 3019);
  CHECK(s3019.verdict == StabilityVerdict::UnstableProven);
  CHECK(s3019.witness_k == 2);

  CHECK(stability(t, t.limit() - 1).verdict == StabilityVerdict::HorizonExhausted);
  for (std::uint64_t n = 2; n <= 106; ++n)
    CHECK(stability(t, n).verdict == StabilityVerdict::StableWithinHorizon);
}

TEST_CASE("stable complexity and stable defect") {
  const auto& t = table30k();

  auto sc1 = stable_complexity(t, 1);
  CHECK(sc1.value == 0);  // ||3|| - 3
  auto sc3 = stable_complexity(t, 3);
  CHECK(sc3.value == 3);
  auto sc2 = stable_complexity(t, 2);
  CHECK(sc2.value == 2);
  auto sc107 = stable_complexity(t, 107);
  CHECK(sc107.value == 15);
  CHECK(sc107.status.verdict == StabilityVerdict::StableWithinHorizon);
  CHECK(stable_complexity(t, t.limit() - 1).status.verdict ==
        StabilityVerdict::HorizonExhausted);

  CHECK(compare_defects(stable_defect_key(t, 1), DefectKey{3, BigInt(3)}) == Ordering::Equal);
  DefectKey sk2 = stable_defect_key(t, 2);
  CHECK(sk2.c == 2);
  CHECK(sk2.n == 2);
  DefectKey sk9 = stable_defect_key(t, 9);
  CHECK(sk9.c == 6);
  CHECK(sk9.n == 9);
  // delta_st(107) = delta(321) < delta(107)
  DefectKey sk107 = stable_defect_key(t, 107);
  CHECK(sk107.n == 321);
  CHECK(compare_defects(sk107, defect_key(t, 107)) == Ordering::Less);
}

TEST_CASE("stable defect is the chain minimum with equality iff stable") {
  const auto& t = table30k();
  for (std::uint64_t n = 1; n <= 3000; ++n) {
    DefectKey stable = stable_defect_key(t, n);
    DefectKey plain = defect_key(t, n);
    Ordering ord = compare_defects(stable, plain);
    CHECK(ord != Ordering::Greater);
    StabilityStatus st = stability(t, n);
    if (st.verdict == StabilityVerdict::StableWithinHorizon) CHECK(ord == Ordering::Equal);
    if (st.verdict == StabilityVerdict::UnstableProven) CHECK(ord == Ordering::Less);
    // Exhaustive check against every chain point in range.
    std::uint64_t m = n;
    while (true) {
      CHECK(compare_defects(stable, defect_key(t, m)) != Ordering::Greater);
      if (m > t.limit() / 3) break;
      m *= 3;
    }
  }
}

TEST_CASE("defect drops along the times-3 chain by nonnegative integers") {
  const auto& t = table30k();
  for (std::uint64_t n = 1; n <= t.limit() / 3; ++n) {
    CHECK(t[3 * n] <= t[n] + 3);  // 3 + ||n|| - ||3n|| >= 0, an integer by form
    Ordering ord = compare_defects(defect_key(t, 3 * n), defect_key(t, n));
    CHECK(ord != Ordering::Greater);
    CHECK((ord == Ordering::Equal) == (t[3 * n] == t[n] + 3));
  }
}

TEST_CASE("equal defects happen only within chains (Thm 2.1(3),(6) shadow)") {
  const auto& t = table30k();
  constexpr std::uint64_t kBound = 10'000;
  // Within a chain: residues match and ratios are powers of 3.
  for (std::uint64_t n = 1; n <= kBound; ++n) {
    unsigned k = 0;
    std::uint64_t m = chain_leader(t, n, k);
    CHECK(t[n] % 3 == t[m] % 3);
    std::uint64_t ratio = n / m;
    CHECK(n == m * ratio);
    while (ratio % 3 == 0) ratio /= 3;
    CHECK(ratio == 1);
  }
  // Across chains: all leader defects are pairwise distinct, certified by a
  // strictly increasing exactly-sorted sequence.
  auto entries = sorted_defects(t, kBound);
  for (std::size_t i = 1; i < entries.size(); ++i)
    CHECK(compare_defects(entries[i - 1].key, entries[i].key) == Ordering::Less);
}

TEST_CASE("Selfridge E formula determines the defect (Prop A.3 shadow)") {
  const auto& t = table30k();
  const long double d2 = defect_ld(t[2], 2);
  for (std::uint64_t n = 2; n <= 10'000; ++n) {
    unsigned c = t[n];
    long double e = static_cast<long double>(selfridge_E(c).convert_to<double>());
    long double base = 3.0L * std::log(e / n) / std::log(3.0L);
    long double correction = c % 3 == 0 ? 0.0L : (c % 3 == 1 ? 2 * d2 : d2);
    CHECK(std::abs(static_cast<double>(defect_ld(c, n) - (base + correction))) < 1e-12);
  }
}

TEST_CASE("sorted defect lists") {
  const auto& t = table30k();

  auto entries = sorted_defects(t, 30, DefectFilters{.threshold = DefectThreshold(1, 1)});
  REQUIRE(!entries.empty());
  CHECK(entries.front().leader == 3);  // delta = 0 is the global minimum
  CHECK(compare_defects(entries.front().key, DefectKey{3, BigInt(3)}) == Ordering::Equal);

  // 6 and 18 share 2's defect chain and never appear beside it.
  auto all30 = sorted_defects(t, 30);
  CHECK(compare_defects(defect_key(t, 6), defect_key(t, 2)) == Ordering::Equal);
  for (const auto& e : all30) {
    CHECK(e.leader != 6);
    CHECK(e.leader != 18);
  }

  auto class2 = sorted_defects(t, 100, DefectFilters{.complexity_class = 2});
  CHECK(!class2.empty());
  for (const auto& e : class2) CHECK(e.key.c % 3 == 2);

  auto stable = sorted_defects(t, 200, DefectFilters{.stable_only = true});
  for (const auto& e : stable) CHECK(e.leader != 107);
  auto plain = sorted_defects(t, 200);
  CHECK(std::any_of(plain.begin(), plain.end(),
                    [](const DefectEntry& e) { return e.leader == 107; }));
}

TEST_CASE("CSV export format") {
  const auto& t = table30k();
  auto entries = sorted_defects(t, 10, DefectFilters{.threshold = DefectThreshold(1, 2)});
  std::ostringstream out;
  write_defects_csv(out, entries);
  std::istringstream in(out.str());
  std::string line;
  REQUIRE(std::getline(in, line));
  CHECK(line == "n,complexity,defect_float,class,stable_status");
  REQUIRE(std::getline(in, line));
  CHECK(line == "3,3,0.000000,0,stable_within_horizon");
  REQUIRE(std::getline(in, line));
  CHECK(line == "2,2,0.107211,2,stable_within_horizon");
}

TEST_SUITE_END();
