#include "defect_forge/cover.hpp"

#include "defect_forge/json_io.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <thread>
#include <unordered_map>
#include <unordered_set>

namespace defect_forge {

bool is_solid(const ComplexityTable& table, std::uint64_t n) {
  if (n == 0 || n > table.limit()) throw std::out_of_range("is_solid: n out of range");
  if (n == 1) return true;
  unsigned cn = table[n];
  for (std::uint64_t a = 1; a <= n / 2; ++a)
    if (table[a] + table[n - a] == cn) return false;
  return true;
}

bool is_m_irreducible(const ComplexityTable& table, std::uint64_t n) {
  if (n == 0 || n > table.limit()) throw std::out_of_range("is_m_irreducible: n out of range");
  if (n == 1) return true;
  unsigned cn = table[n];
  for (std::uint64_t d = 2; d * d <= n; ++d)
    if (n % d == 0 && table[d] + table[n / d] == cn) return false;
  return true;
}

std::vector<std::uint64_t> compute_T_alpha(const ComplexityTable& table,
                                           const DefectThreshold& alpha) {
  std::uint64_t p = alpha.num(), q = alpha.den();
  if (p == 0 || p >= q)
    throw std::invalid_argument("compute_T_alpha: alpha must lie in (0,1)");

  std::vector<std::uint64_t> out{1};
  unsigned e3q = static_cast<unsigned>(3 * q);
  BigInt scale = pow3(static_cast<unsigned>(q - p));
  for (std::uint64_t n = 2;; ++n) {
    // 1/(n-1) > 3^((1-alpha)/3) - 1  <=>  n^(3q) > 3^(q-p) * (n-1)^(3q)
    if (pow_big(BigInt(n), e3q) <= scale * pow_big(BigInt(n - 1), e3q)) break;
    if (n > table.limit())
      throw horizon_error("compute_T_alpha: size bound exceeds table limit");
    if (!is_m_irreducible(table, n)) continue;
    bool excluded = false;
    for (std::uint64_t b = 2; b <= n / 2 && !excluded; ++b)
      if (table[n] == table[n - b] + table[b] && is_solid(table, b)) excluded = true;
    if (!excluded) out.push_back(n);
  }
  return out;
}

const char* to_string(Provenance p) {
  switch (p) {
    case Provenance::BaseBAlpha: return "Base-BAlpha";
    case Provenance::Case1Product: return "Case1-Product";
    case Provenance::Case2Extend: return "Case2-Extend";
    case Provenance::Case3TimesV: return "Case3-TimesV";
    case Provenance::Case4TAlpha: return "Case4-TAlpha";
    default: return "Case5-TAlphaTimesV";
  }
}

Provenance provenance_from_string(const std::string& s) {
  for (Provenance p : {Provenance::BaseBAlpha, Provenance::Case1Product,
                       Provenance::Case2Extend, Provenance::Case3TimesV,
                       Provenance::Case4TAlpha, Provenance::Case5TAlphaTimesV})
    if (s == to_string(p)) return p;
  throw std::invalid_argument("unknown provenance tag: " + s);
}

namespace {

// Level-local dedup: polynomial identity keyed by coefficient map, keeping
// the smaller base complexity (ties: lexicographically smaller JSON form).
class PairBucket {
 public:
  void add(LowDefectPair pair, Provenance prov) {
    std::string key = MultilinearPoly::from_expr(pair.expr).canonical_string();
    auto it = index_.find(key);
    if (it == index_.end()) {
      index_.emplace(std::move(key), items_.size());
      items_.push_back(CoverPair{std::move(pair), prov});
      return;
    }
    CoverPair& have = items_[it->second];
    if (pair.base_complexity < have.pair.base_complexity) {
      have = CoverPair{std::move(pair), prov};
    } else if (pair.base_complexity == have.pair.base_complexity &&
               pair_to_json_string(pair) < pair_to_json_string(have.pair)) {
      have = CoverPair{std::move(pair), prov};
    }
  }

  std::vector<CoverPair> take() { return std::move(items_); }

 private:
  std::vector<CoverPair> items_;
  std::unordered_map<std::string, std::size_t> index_;
};

// Largest complexity budget B with 3^(qB) < 3^(level*p) * 2^(3q), i.e.
// B < level*alpha + 3 log3 2 for alpha = p/q; exact in cleared form.
unsigned solid_budget(unsigned level, const DefectThreshold& alpha) {
  BigInt rhs = pow3(static_cast<unsigned>(level * alpha.num())) *
               pow_big(BigInt(2), static_cast<unsigned>(3 * alpha.den()));
  unsigned budget = 0;
  while (pow3(static_cast<unsigned>((budget + 1) * alpha.den())) < rhs) ++budget;
  return budget;
}

std::vector<std::uint64_t> solid_addends(const ComplexityTable& table, unsigned level,
                                         const DefectThreshold& alpha) {
  unsigned budget = solid_budget(level, alpha);
  std::uint64_t largest = selfridge_E_clamped(budget, table.limit());
  if (budget >= 1 && selfridge_E(budget) > table.limit())
    throw horizon_error("build_S_k_alpha: solid-addend range exceeds table limit");
  std::vector<std::uint64_t> out;
  for (std::uint64_t b = 1; b <= largest; ++b)
    if (table[b] <= budget && is_solid(table, b)) out.push_back(b);
  return out;
}

}  // namespace

CoverSet build_S_k_alpha(const ComplexityTable& table, unsigned k,
                         const DefectThreshold& alpha) {
  if (k == 0) throw std::invalid_argument("build_S_k_alpha: k must be positive");
  if (alpha.num() == 0 || alpha.num() >= alpha.den())
    throw std::invalid_argument("build_S_k_alpha: alpha must lie in (0,1)");

  std::vector<std::uint64_t> base = enumerate_B_r(table, alpha, table.limit());
  // Empirical horizon certificate: a leader of defect < alpha appearing in
  // the top two tripling windows means the enumeration frontier may still be
  // active beyond the table.
  for (std::uint64_t n : base)
    if (n > table.limit() / 9)
      throw horizon_error("build_S_k_alpha: B_alpha enumeration not horizon-complete");

  std::vector<std::vector<CoverPair>> levels(k + 1);
  {
    PairBucket bucket;
    for (std::uint64_t n : base) bucket.add(make_const(table, n), Provenance::BaseBAlpha);
    levels[1] = bucket.take();
  }

  std::vector<std::uint64_t> t_alpha;
  if (k >= 2) t_alpha = compute_T_alpha(table, alpha);

  for (unsigned level = 2; level <= k; ++level) {
    PairBucket bucket;

    // (1) tensor products; pairs and triples of constants at level 2.
    if (level == 2) {
      for (const auto& f1 : levels[1])
        for (const auto& f2 : levels[1]) {
          bucket.add(tensor(f1.pair, f2.pair), Provenance::Case1Product);
          for (const auto& f3 : levels[1])
            bucket.add(tensor(tensor(f1.pair, f2.pair), f3.pair), Provenance::Case1Product);
        }
    } else {
      for (unsigned i = 2; i <= level - 1; ++i) {
        unsigned j = level + 1 - i;
        if (j < 2 || j > level - 1) continue;
        for (const auto& f : levels[i])
          for (const auto& g : levels[j])
            bucket.add(tensor(f.pair, g.pair), Provenance::Case1Product);
      }
    }

    // (2) f (x) x + b and (3) v * (f (x) x + b).
    std::vector<std::uint64_t> solids = solid_addends(table, level, alpha);
    for (const auto& f : levels[level - 1]) {
      for (std::uint64_t b : solids) {
        LowDefectPair extended = extend(table, f.pair, b);
        bucket.add(extended, Provenance::Case2Extend);
        for (std::uint64_t v : base)
          bucket.add(tensor(make_const(table, v), extended), Provenance::Case3TimesV);
      }
    }

    // (4) constants from T_alpha and (5) their B_alpha multiples.
    for (std::uint64_t n : t_alpha) {
      bucket.add(make_const(table, n), Provenance::Case4TAlpha);
      for (std::uint64_t v : base) {
        if (n > table.limit() / v)
          throw horizon_error("build_S_k_alpha: T_alpha product exceeds table limit");
        bucket.add(make_const(table, v * n), Provenance::Case5TAlphaTimesV);
      }
    }

    levels[level] = bucket.take();
  }

  CoverSet out{DefectThreshold(k * alpha.num(), alpha.den()), k, alpha, table.limit(), {}};
  out.pairs = std::move(levels[k]);
  return out;
}

CoverSet build_S_r(const ComplexityTable& table, const DefectThreshold& r) {
  if (r.is_zero()) throw std::invalid_argument("build_S_r: r must be positive");
  unsigned k = static_cast<unsigned>(r.floor()) + 1;
  DefectThreshold alpha(r.num(), r.den() * k);
  CoverSet out = build_S_k_alpha(table, k, alpha);
  out.r = r;
  return out;
}

namespace {

struct ValueHit {
  std::uint32_t pair_index;
  std::uint32_t exponent_sum;
};

using ValueMap = std::unordered_map<std::uint64_t, std::vector<ValueHit>>;

template <typename Body>
void run_chunked(std::size_t count, unsigned threads, const Body& body) {
  if (threads <= 1 || count < 2048) {
    body(0, count, 0);
    return;
  }
  unsigned workers = std::min<std::size_t>(threads, (count + 2047) / 2048);
  std::vector<std::thread> pool;
  std::size_t chunk = (count + workers - 1) / workers;
  for (unsigned t = 0; t < workers; ++t) {
    std::size_t begin = t * chunk, end = std::min(count, begin + chunk);
    if (begin >= end) break;
    pool.emplace_back([&body, begin, end, t] { body(begin, end, t); });
  }
  for (auto& th : pool) th.join();
}

}  // namespace

CoverReport verify_cover(const ComplexityTable& table, const CoverSet& cover,
                         std::uint64_t bound, unsigned threads) {
  if (bound > table.limit()) throw std::out_of_range("verify_cover: bound above table limit");
  if (bound > cover.enumeration_bound)
    throw horizon_error("verify_cover: bound exceeds the cover's enumeration bound");

  CoverReport report;
  report.bound = bound;
  report.pair_hits.assign(cover.pairs.size(), 0);

  // Every value <= bound each pair 3-represents, with its exponent sums.
  ValueMap values;
  for (std::size_t i = 0; i < cover.pairs.size(); ++i) {
    std::unordered_map<std::uint64_t, std::unordered_set<std::uint32_t>> seen;
    for (auto& [v, tuple] : representable_values(cover.pairs[i].pair.expr, bound)) {
      std::uint32_t sum = 0;
      for (unsigned e : tuple) sum += e;
      if (seen[v].insert(sum).second)
        values[v].push_back(ValueHit{static_cast<std::uint32_t>(i), sum});
    }
    for (const auto& [v, sums] : seen) {
      (void)sums;
      if (!defect_less_than(DefectKey{table.at(v), BigInt(v)}, cover.r))
        ++report.extraneous_hits;
    }
  }

  std::vector<std::uint64_t> leaders = enumerate_B_r(table, cover.r, bound);
  std::vector<std::uint64_t> numbers = enumerate_A_r(table, cover.r, bound);
  report.checked = leaders.size() + numbers.size();

  unsigned worker_count = std::max(1u, threads);
  std::size_t slots = std::max<std::size_t>(1, worker_count);
  std::vector<std::vector<CoverFailure>> fail_chunks(slots * 2);
  std::vector<std::vector<std::uint64_t>> hit_chunks(slots * 2,
                                                     std::vector<std::uint64_t>(cover.pairs.size(), 0));

  // Plain pass over leaders.
  run_chunked(leaders.size(), worker_count, [&](std::size_t begin, std::size_t end, std::size_t slot) {
    for (std::size_t idx = begin; idx < end; ++idx) {
      std::uint64_t n = leaders[idx];
      unsigned cn = table[n];
      bool hit = false;
      if (auto it = values.find(n); it != values.end()) {
        for (const ValueHit& h : it->second) {
          if (cover.pairs[h.pair_index].pair.base_complexity + 3 * h.exponent_sum == cn) {
            ++hit_chunks[slot][h.pair_index];
            hit = true;
            break;
          }
        }
      }
      if (!hit) fail_chunks[slot].push_back(CoverFailure{n, false});
    }
  });

  // Augmented pass over all numbers below the threshold.
  run_chunked(numbers.size(), worker_count, [&](std::size_t begin, std::size_t end, std::size_t slot) {
    for (std::size_t idx = begin; idx < end; ++idx) {
      std::uint64_t n = numbers[idx];
      unsigned cn = table[n];
      bool hit = false;
      std::uint64_t m = n;
      for (unsigned j = 0; !hit; ++j) {
        if (auto it = values.find(m); it != values.end()) {
          for (const ValueHit& h : it->second) {
            if (cover.pairs[h.pair_index].pair.base_complexity + 3 * (h.exponent_sum + j) == cn) {
              ++hit_chunks[slots + slot][h.pair_index];
              hit = true;
              break;
            }
          }
        }
        if (m % 3 != 0) break;
        m /= 3;
      }
      if (!hit) fail_chunks[slots + slot].push_back(CoverFailure{n, true});
    }
  });

  for (auto& chunk : fail_chunks)
    report.failures.insert(report.failures.end(), chunk.begin(), chunk.end());
  for (const auto& chunk : hit_chunks)
    for (std::size_t i = 0; i < chunk.size(); ++i) report.pair_hits[i] += chunk[i];
  report.covered = report.checked - report.failures.size();
  return report;
}

OrdinalCNF order_type_bound(const LowDefectPair& p) {
  unsigned floor = floor_defect(delta_of_pair(p));
  return nat_prod(omega_power(p.degree()), OrdinalCNF::finite(BigInt(floor) + 1));
}

std::string cover_to_json_string(const CoverSet& cover) {
  Json j;
  j["r"] = cover.r.str();
  j["k"] = cover.k;
  j["alpha"] = cover.alpha.str();
  Json pairs = Json::array();
  for (const auto& cp : cover.pairs) {
    Json pj = pair_to_json(cp.pair);
    pj["provenance"] = to_string(cp.provenance);
    pairs.push_back(std::move(pj));
  }
  j["pairs"] = std::move(pairs);
  j["enumeration_bound"] = cover.enumeration_bound;
  return j.dump(2) + "\n";
}

CoverSet cover_from_json_string(const std::string& text) {
  Json j = Json::parse(text);
  if (!j.is_object() || !j.contains("r") || !j.contains("k") || !j.contains("alpha") ||
      !j.contains("pairs") || !j.contains("enumeration_bound"))
    throw std::invalid_argument("cover json: missing required fields");
  CoverSet out{DefectThreshold::parse(j["r"].get<std::string>()),
               j["k"].get<unsigned>(),
               DefectThreshold::parse(j["alpha"].get<std::string>()),
               j["enumeration_bound"].get<std::uint64_t>(),
               {}};
  for (const Json& pj : j["pairs"]) {
    if (!pj.contains("provenance") || !pj["provenance"].is_string())
      throw std::invalid_argument("cover json: pair missing provenance");
    out.pairs.push_back(CoverPair{pair_from_json(pj),
                                  provenance_from_string(pj["provenance"].get<std::string>())});
  }
  return out;
}

void save_cover(const CoverSet& cover, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open for writing: " + path.string());
  out << cover_to_json_string(cover);
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

CoverSet load_cover(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open cover: " + path.string());
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return cover_from_json_string(text);
}

std::string report_to_json_string(const CoverReport& report) {
  Json j;
  j["checked"] = report.checked;
  j["covered"] = report.covered;
  Json failures = Json::array();
  for (const auto& f : report.failures) {
    Json fj;
    fj["n"] = f.n;
    fj["mode"] = f.augmented ? "augmented" : "plain";
    failures.push_back(std::move(fj));
  }
  j["failures"] = std::move(failures);
  j["extraneous_hits"] = report.extraneous_hits;
  j["bound"] = report.bound;
  j["pair_hits"] = report.pair_hits;
  return j.dump(2) + "\n";
}

}  // namespace defect_forge
