#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "sigloop/signature.hpp"

namespace sigloop {

// Sorted, distinct feature indices.
using Itemset = std::vector<FeatureIndex>;

enum class TransactionLabel { none, positive, negative };

struct Transaction {
  Itemset items;
  TransactionLabel label = TransactionLabel::none;
};

struct TransactionDatabase {
  std::vector<Transaction> transactions;
  std::size_t size() const noexcept { return transactions.size(); }
};

// Feature presence of a signature; ordinals are dropped.
Transaction to_transaction(const Signature& sig, TransactionLabel label = TransactionLabel::none);
TransactionDatabase to_database(std::span<const Signature> sigs, TransactionLabel label = TransactionLabel::none);

std::size_t support_count(const Itemset& itemset, const TransactionDatabase& db);
double support(const Itemset& itemset, const TransactionDatabase& db);
// sup(antecedent U consequent) / sup(antecedent); throws UndefinedConfidence
// when the antecedent never occurs.
double confidence(const Itemset& antecedent, const Itemset& consequent, const TransactionDatabase& db);
// Confidence of itemset => positive label over the labelled transactions.
double label_confidence(const Itemset& antecedent, const TransactionDatabase& db,
                        TransactionLabel label = TransactionLabel::positive);

struct FrequentItemset {
  Itemset items;
  double support = 0.0;
  bool operator==(const FrequentItemset&) const = default;
};

// Level-wise APriori: all itemsets of size <= maxlen with support >= minsup,
// ordered by size then lexicographically by feature index.
std::vector<FrequentItemset> mine_frequent(const TransactionDatabase& db, double minsup, std::size_t maxlen);

// Candidate filter applied before support counting. Must be anti-monotone
// (rejecting a set rejects all its supersets) for the level-wise search.
using Admissible = std::function<bool(const Itemset&)>;
std::vector<FrequentItemset> mine_frequent(const TransactionDatabase& db, double minsup, std::size_t maxlen,
                                           const Admissible& admissible);

// Accepts itemsets whose features cover pairwise-disjoint base columns, at
// most `max_columns` in total, so merged compounds stay within that arity.
Admissible compound_admissible(const Vocabulary& vocab, std::size_t max_columns);

// Drops every itemset that is a strict subset of another in the list.
std::vector<Itemset> maximal_filter(std::vector<Itemset> itemsets);

struct MiningParams {
  double minsup = 1.0;
  std::size_t maxlen = 3;
  double confidence = 1.0;
  bool operator==(const MiningParams&) const = default;
};

struct MinedRuleSet {
  RuleMode mode = RuleMode::pull;
  std::vector<MiningRule> rules;
  MiningParams params;

  bool empty() const noexcept { return rules.empty(); }
  bool operator==(const MinedRuleSet&) const = default;
};

// Itemsets with support >= minsup over the positives that occur in no
// negative (confidence exactly 1), maximal-filtered; mode pull. Itemsets are
// restricted by compound_admissible(vocab, maxlen).
MinedRuleSet mine_discriminative(std::span<const Signature> positives, std::span<const Signature> negatives,
                                 const Vocabulary& vocab, double minsup = 1.0, std::size_t maxlen = 3);

// Itemsets present in every selected signature, maximal-filtered, with the
// same admissibility restriction; mode push.
MinedRuleSet mine_common(std::span<const Signature> selected, const Vocabulary& vocab, std::size_t maxlen = 3);

}  // namespace sigloop
