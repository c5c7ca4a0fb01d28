#include "sigloop/rule_miner.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "sigloop/error.hpp"

namespace sigloop {
namespace {

constexpr double kSupportSlack = 1e-12;
constexpr std::size_t kSubsetEnumerationLimit = 12;

bool contains_all(const Itemset& transaction, const Itemset& itemset) {
  return std::includes(transaction.begin(), transaction.end(), itemset.begin(), itemset.end());
}

std::size_t count_label(const Itemset& itemset, const TransactionDatabase& db, TransactionLabel label) {
  std::size_t n = 0;
  for (const auto& t : db.transactions)
    if (t.label == label && contains_all(t.items, itemset)) ++n;
  return n;
}

std::vector<FeatureId> to_features(const Itemset& itemset, const Vocabulary& vocab) {
  std::vector<FeatureId> out;
  out.reserve(itemset.size());
  for (auto f : itemset) out.push_back(vocab.at(f));
  std::sort(out.begin(), out.end());
  return out;
}

void sort_rules(std::vector<MiningRule>& rules) {
  std::sort(rules.begin(), rules.end(), [](const MiningRule& a, const MiningRule& b) {
    if (a.antecedent.size() != b.antecedent.size()) return a.antecedent.size() < b.antecedent.size();
    return a.antecedent < b.antecedent;
  });
}

}  // namespace

Admissible compound_admissible(const Vocabulary& vocab, std::size_t max_columns) {
  return [&vocab, max_columns](const Itemset& itemset) {
    std::vector<std::uint32_t> columns;
    for (auto f : itemset) {
      const auto c = vocab.at(f).columns();
      columns.insert(columns.end(), c.begin(), c.end());
    }
    if (columns.size() > max_columns) return false;
    std::sort(columns.begin(), columns.end());
    return std::adjacent_find(columns.begin(), columns.end()) == columns.end();
  };
}

Transaction to_transaction(const Signature& sig, TransactionLabel label) {
  Transaction t;
  t.label = label;
  t.items.reserve(sig.distinct_features());
  for (const auto& [feature, count] : sig.counts()) t.items.push_back(feature);
  return t;
}

TransactionDatabase to_database(std::span<const Signature> sigs, TransactionLabel label) {
  TransactionDatabase db;
  db.transactions.reserve(sigs.size());
  for (const auto& s : sigs) db.transactions.push_back(to_transaction(s, label));
  return db;
}

std::size_t support_count(const Itemset& itemset, const TransactionDatabase& db) {
  std::size_t n = 0;
  for (const auto& t : db.transactions)
    if (contains_all(t.items, itemset)) ++n;
  return n;
}

double support(const Itemset& itemset, const TransactionDatabase& db) {
  if (db.size() == 0) return 0.0;
  return static_cast<double>(support_count(itemset, db)) / static_cast<double>(db.size());
}

double confidence(const Itemset& antecedent, const Itemset& consequent, const TransactionDatabase& db) {
  const std::size_t base = support_count(antecedent, db);
  if (base == 0) throw Error(ErrorKind::UndefinedConfidence, "antecedent has zero support");
  Itemset joint;
  std::set_union(antecedent.begin(), antecedent.end(), consequent.begin(), consequent.end(),
                 std::back_inserter(joint));
  return static_cast<double>(support_count(joint, db)) / static_cast<double>(base);
}

double label_confidence(const Itemset& antecedent, const TransactionDatabase& db, TransactionLabel label) {
  std::size_t base = 0;
  std::size_t hits = 0;
  for (const auto& t : db.transactions) {
    if (t.label == TransactionLabel::none || !contains_all(t.items, antecedent)) continue;
    ++base;
    if (t.label == label) ++hits;
  }
  if (base == 0) throw Error(ErrorKind::UndefinedConfidence, "antecedent has zero support");
  return static_cast<double>(hits) / static_cast<double>(base);
}

std::vector<FrequentItemset> mine_frequent(const TransactionDatabase& db, double minsup, std::size_t maxlen) {
  return mine_frequent(db, minsup, maxlen, {});
}

std::vector<FrequentItemset> mine_frequent(const TransactionDatabase& db, double minsup, std::size_t maxlen,
                                           const Admissible& admissible) {
  if (!(minsup > 0.0 && minsup <= 1.0)) throw Error(ErrorKind::ConfigError, "minsup must lie in (0,1]");
  if (maxlen < 1) throw Error(ErrorKind::ConfigError, "maxlen must be >= 1");
  std::vector<FrequentItemset> out;
  if (db.size() == 0) return out;
  const double total = static_cast<double>(db.size());
  auto frequent = [&](std::size_t count) { return static_cast<double>(count) / total >= minsup - kSupportSlack; };

  std::map<FeatureIndex, std::size_t> singles;
  for (const auto& t : db.transactions)
    for (auto f : t.items) ++singles[f];
  std::vector<Itemset> level;
  for (const auto& [f, count] : singles) {
    if (!frequent(count) || (admissible && !admissible(Itemset{f}))) continue;
    level.push_back({f});
    out.push_back({{f}, static_cast<double>(count) / total});
  }

  for (std::size_t k = 2; k <= maxlen && level.size() >= 2; ++k) {
    const std::set<Itemset> previous(level.begin(), level.end());
    std::vector<Itemset> next;
    // level is lexicographically sorted, so joinable itemsets sharing a
    // (k-2)-prefix are contiguous.
    for (std::size_t i = 0; i < level.size(); ++i) {
      for (std::size_t j = i + 1; j < level.size(); ++j) {
        if (!std::equal(level[i].begin(), level[i].end() - 1, level[j].begin())) break;
        Itemset candidate = level[i];
        candidate.push_back(level[j].back());
        bool pruned = false;
        for (std::size_t drop = 0; drop + 2 < candidate.size() && !pruned; ++drop) {
          Itemset subset;
          subset.reserve(candidate.size() - 1);
          for (std::size_t m = 0; m < candidate.size(); ++m)
            if (m != drop) subset.push_back(candidate[m]);
          pruned = previous.count(subset) == 0;
        }
        if (pruned || (admissible && !admissible(candidate))) continue;
        const std::size_t count = support_count(candidate, db);
        if (!frequent(count)) continue;
        out.push_back({candidate, static_cast<double>(count) / total});
        next.push_back(std::move(candidate));
      }
    }
    level = std::move(next);
  }
  return out;
}

std::vector<Itemset> maximal_filter(std::vector<Itemset> itemsets) {
  std::size_t longest = 0;
  for (const auto& s : itemsets) longest = std::max(longest, s.size());
  std::vector<bool> dominated(itemsets.size(), false);
  if (longest <= kSubsetEnumerationLimit) {
    // Enumerate the strict subsets of each itemset and mark those present.
    std::map<Itemset, std::vector<std::size_t>> where;
    for (std::size_t i = 0; i < itemsets.size(); ++i) where[itemsets[i]].push_back(i);
    Itemset sub;
    for (const auto& s : itemsets) {
      const std::uint32_t full = (1u << s.size()) - 1;
      for (std::uint32_t mask = 1; mask < full; ++mask) {
        sub.clear();
        for (std::size_t b = 0; b < s.size(); ++b)
          if (mask & (1u << b)) sub.push_back(s[b]);
        const auto it = where.find(sub);
        if (it != where.end())
          for (auto i : it->second) dominated[i] = true;
      }
    }
  } else {
    for (std::size_t i = 0; i < itemsets.size(); ++i)
      for (std::size_t j = 0; j < itemsets.size() && !dominated[i]; ++j)
        dominated[i] = itemsets[j].size() > itemsets[i].size() && contains_all(itemsets[j], itemsets[i]);
  }
  std::vector<Itemset> out;
  for (std::size_t i = 0; i < itemsets.size(); ++i)
    if (!dominated[i]) out.push_back(std::move(itemsets[i]));
  return out;
}

MinedRuleSet mine_discriminative(std::span<const Signature> positives, std::span<const Signature> negatives,
                                 const Vocabulary& vocab, double minsup, std::size_t maxlen) {
  if (positives.empty()) throw Error(ErrorKind::ConfigError, "discriminative mining needs a positive example");
  MinedRuleSet result;
  result.mode = RuleMode::pull;
  result.params = {minsup, maxlen, 1.0};

  TransactionDatabase labelled = to_database(positives, TransactionLabel::positive);
  for (const auto& s : negatives) labelled.transactions.push_back(to_transaction(s, TransactionLabel::negative));
  const TransactionDatabase pos_db = to_database(positives, TransactionLabel::positive);

  std::vector<Itemset> accepted;
  std::map<Itemset, double> supports;
  for (auto& fi : mine_frequent(pos_db, minsup, maxlen, compound_admissible(vocab, maxlen))) {
    if (count_label(fi.items, labelled, TransactionLabel::negative) != 0) continue;
    supports[fi.items] = fi.support;
    accepted.push_back(std::move(fi.items));
  }
  for (auto& itemset : maximal_filter(std::move(accepted))) {
    MiningRule rule;
    rule.mode = RuleMode::pull;
    rule.support = supports[itemset];
    rule.confidence = label_confidence(itemset, labelled);
    rule.antecedent = to_features(itemset, vocab);
    result.rules.push_back(std::move(rule));
  }
  sort_rules(result.rules);
  return result;
}

MinedRuleSet mine_common(std::span<const Signature> selected, const Vocabulary& vocab, std::size_t maxlen) {
  if (selected.size() < 2) throw Error(ErrorKind::ConfigError, "common mining needs >= 2 signatures");
  MinedRuleSet result;
  result.mode = RuleMode::push;
  result.params = {1.0, maxlen, 1.0};

  const TransactionDatabase db = to_database(selected);
  std::vector<Itemset> itemsets;
  for (auto& fi : mine_frequent(db, 1.0, maxlen, compound_admissible(vocab, maxlen))) itemsets.push_back(std::move(fi.items));
  for (auto& itemset : maximal_filter(std::move(itemsets))) {
    MiningRule rule;
    rule.mode = RuleMode::push;
    rule.support = 1.0;
    rule.confidence = 1.0;
    rule.antecedent = to_features(itemset, vocab);
    result.rules.push_back(std::move(rule));
  }
  sort_rules(result.rules);
  return result;
}

}  // namespace sigloop
