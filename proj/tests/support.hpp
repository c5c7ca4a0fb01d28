#pragma once

// Reference implementations used as oracles. They favour obviousness over
// speed and share no code with the library beyond plain data types.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "sigloop/hashing.hpp"
#include "sigloop/rule_miner.hpp"
#include "sigloop/signature.hpp"

namespace oracle {

using sigloop::FeatureIndex;
using sigloop::Itemset;
using sigloop::Signature;

// Deterministic test RNG.
struct Rng {
  sigloop::SplitMix64 g;
  explicit Rng(std::uint64_t seed) : g(seed) {}
  std::uint64_t next() { return g.next(); }
  std::size_t below(std::size_t n) { return static_cast<std::size_t>(next() % n); }
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
  bool coin(double p = 0.5) { return uniform() < p; }
};

inline Signature random_signature(Rng& rng, const std::string& id, std::size_t dim, std::uint32_t max_count,
                                  double density = 0.6) {
  Signature s(id);
  for (std::size_t d = 0; d < dim; ++d)
    if (rng.coin(density)) s.set_count(static_cast<FeatureIndex>(d), 1 + static_cast<std::uint32_t>(rng.below(max_count)));
  return s;
}

// Multiset Jaccard by expanding every (feature, ordinal) pair.
inline double expanded_jaccard(const Signature& a, const Signature& b) {
  std::set<std::pair<FeatureIndex, std::uint32_t>> ea, eb;
  a.for_each_instance([&](FeatureIndex f, std::uint32_t o) { ea.insert({f, o}); });
  b.for_each_instance([&](FeatureIndex f, std::uint32_t o) { eb.insert({f, o}); });
  std::size_t inter = 0;
  for (const auto& e : ea) inter += eb.count(e);
  const std::size_t uni = ea.size() + eb.size() - inter;
  return uni == 0 ? 0.0 : static_cast<double>(inter) / static_cast<double>(uni);
}

inline bool subset_of(const Itemset& small, const Itemset& big) {
  for (auto x : small)
    if (std::find(big.begin(), big.end(), x) == big.end()) return false;
  return true;
}

inline std::size_t count_containing(const Itemset& s, const std::vector<Itemset>& txs) {
  std::size_t n = 0;
  for (const auto& t : txs) n += subset_of(s, t) ? 1 : 0;
  return n;
}

// Every non-empty subset of `universe` (ascending), in mask order.
inline std::vector<Itemset> all_subsets(const Itemset& universe) {
  std::vector<Itemset> out;
  const std::size_t n = universe.size();
  for (std::uint32_t mask = 1; mask < (1u << n); ++mask) {
    Itemset s;
    for (std::size_t b = 0; b < n; ++b)
      if (mask & (1u << b)) s.push_back(universe[b]);
    out.push_back(s);
  }
  return out;
}

inline Itemset universe_of(const std::vector<Itemset>& txs) {
  std::set<FeatureIndex> u;
  for (const auto& t : txs) u.insert(t.begin(), t.end());
  return {u.begin(), u.end()};
}

// Exhaustive frequent itemsets: map itemset -> support.
inline std::map<Itemset, double> brute_frequent(const std::vector<Itemset>& txs, double minsup, std::size_t maxlen) {
  std::map<Itemset, double> out;
  if (txs.empty()) return out;
  for (const auto& s : all_subsets(universe_of(txs))) {
    if (s.size() > maxlen) continue;
    const std::size_t c = count_containing(s, txs);
    // integer comparison: c / |D| >= minsup
    if (static_cast<double>(c) >= minsup * static_cast<double>(txs.size()) - 1e-9)
      out[s] = static_cast<double>(c) / static_cast<double>(txs.size());
  }
  return out;
}

inline std::set<Itemset> maximal(const std::set<Itemset>& sets) {
  std::set<Itemset> out;
  for (const auto& s : sets) {
    bool dominated = false;
    for (const auto& t : sets)
      if (t.size() > s.size() && subset_of(s, t)) dominated = true;
    if (!dominated) out.insert(s);
  }
  return out;
}

// Discriminative rules over base-feature transactions: frequent in the
// positives, never in a negative, maximal.
inline std::set<Itemset> brute_discriminative(const std::vector<Itemset>& pos, const std::vector<Itemset>& neg,
                                              double minsup, std::size_t maxlen) {
  std::set<Itemset> accepted;
  for (const auto& [s, sup] : brute_frequent(pos, minsup, maxlen))
    if (count_containing(s, neg) == 0) accepted.insert(s);
  return maximal(accepted);
}

inline Itemset presence(const Signature& s) {
  Itemset out;
  for (const auto& [f, c] : s.counts()) out.push_back(f);
  return out;
}

inline Itemset rule_columns(const sigloop::MiningRule& r) {
  Itemset out;
  for (const auto& f : r.antecedent)
    for (auto c : f.columns()) out.push_back(c);
  std::sort(out.begin(), out.end());
  return out;
}

// Connected components by repeated relaxation of labels until nothing changes.
inline std::vector<std::size_t> fixpoint_components(const std::vector<std::vector<double>>& sim, double threshold) {
  const std::size_t n = sim.size();
  std::vector<std::size_t> label(n);
  for (std::size_t i = 0; i < n; ++i) label[i] = i;
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (i != j && sim[i][j] > threshold && label[j] < label[i]) {
          label[i] = label[j];
          changed = true;
        }
  }
  return label;
}

// O(n^2) Kendall tau over all id pairs.
inline double pairwise_kendall(const std::vector<std::string>& a, const std::vector<std::string>& b) {
  std::map<std::string, std::size_t> ra, rb;
  for (std::size_t i = 0; i < a.size(); ++i) ra[a[i]] = i;
  for (std::size_t i = 0; i < b.size(); ++i) rb[b[i]] = i;
  long long conc = 0, disc = 0;
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = i + 1; j < a.size(); ++j) {
      const long long da = static_cast<long long>(ra[a[i]]) - static_cast<long long>(ra[a[j]]);
      const long long db = static_cast<long long>(rb[a[i]]) - static_cast<long long>(rb[a[j]]);
      (da * db > 0 ? conc : disc) += 1;
    }
  const double pairs = static_cast<double>(a.size()) * static_cast<double>(a.size() - 1) / 2.0;
  return static_cast<double>(conc - disc) / pairs;
}

}  // namespace oracle
