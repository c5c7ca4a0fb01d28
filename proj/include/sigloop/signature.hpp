#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "sigloop/dataset.hpp"

namespace sigloop {

using FeatureIndex = std::uint32_t;
using SymbolCount = std::uint32_t;

inline constexpr SymbolCount kMaxInstancesPerFeature = 1000;
inline constexpr std::uint32_t kDefaultBudget = 100;

// A base feature (one dataset column) or a compound of >= 2 base columns.
// Compounds are always stored flattened to sorted, distinct base columns.
class FeatureId {
 public:
  static FeatureId base(std::uint32_t column);
  // Throws VocabularyError unless the flattened set has >= 2 distinct columns.
  static FeatureId compound(std::vector<std::uint32_t> columns);
  // Flattens any mix of base and compound features into their base columns;
  // a single resulting column yields a base feature.
  static FeatureId merge(std::span<const FeatureId> parts);
  static FeatureId from_key(std::string_view key);

  bool is_base() const noexcept { return columns_.size() == 1; }
  bool is_compound() const noexcept { return columns_.size() > 1; }
  std::span<const std::uint32_t> columns() const noexcept { return columns_; }
  // "b<index>" or "c:<i>+<j>+..." with ascending indices.
  std::string key() const;

  bool operator==(const FeatureId&) const = default;
  // Bases before compounds, then shorter before longer, then column-lexicographic.
  std::strong_ordering operator<=>(const FeatureId& other) const noexcept;

 private:
  explicit FeatureId(std::vector<std::uint32_t> columns) : columns_(std::move(columns)) {}
  std::vector<std::uint32_t> columns_;
};

// Append-only registry of base and compound features. Base column d always
// resolves to index d; compounds follow in registration order.
class Vocabulary {
 public:
  Vocabulary() : Vocabulary(0) {}
  explicit Vocabulary(std::size_t dimension);

  std::size_t size() const noexcept { return entries_.size(); }
  std::size_t dimension() const noexcept { return dimension_; }
  const FeatureId& at(FeatureIndex index) const;
  const std::string& key(FeatureIndex index) const { return keys_.at(index); }
  std::uint64_t key_hash(FeatureIndex index) const { return key_hashes_.at(index); }
  int creation_iteration(FeatureIndex index) const { return created_.at(index); }

  std::optional<FeatureIndex> find(const FeatureId& id) const;
  // Throws VocabularyError when the feature is not registered.
  FeatureIndex index_of(const FeatureId& id) const;
  // Registers compounds on first use; base columns must lie within the dimension.
  FeatureIndex intern(const FeatureId& id, int iteration);

  bool operator==(const Vocabulary& other) const {
    return entries_ == other.entries_ && created_ == other.created_;
  }

 private:
  std::size_t dimension_;
  std::vector<FeatureId> entries_;
  std::vector<std::string> keys_;
  std::vector<std::uint64_t> key_hashes_;
  std::vector<int> created_;
  std::unordered_map<std::string, FeatureIndex> by_key_;
};

// Per-item multiset of symbol instances stored as feature -> count. The
// expanded form {F1..Fc} is produced on demand by for_each_instance.
class Signature {
 public:
  using Counts = std::map<FeatureIndex, SymbolCount>;

  Signature() = default;
  explicit Signature(std::string item_id) : item_id_(std::move(item_id)) {}

  const std::string& item_id() const noexcept { return item_id_; }
  const Counts& counts() const noexcept { return counts_; }
  SymbolCount count(FeatureIndex feature) const;
  // A zero count removes the key.
  void set_count(FeatureIndex feature, SymbolCount count);
  bool contains(FeatureIndex feature) const { return counts_.count(feature) != 0; }
  bool empty() const noexcept { return counts_.empty(); }
  std::size_t distinct_features() const noexcept { return counts_.size(); }
  std::uint64_t total_instances() const noexcept;

  template <class Fn>
  void for_each_instance(Fn&& fn) const {
    for (const auto& [feature, count] : counts_)
      for (SymbolCount ordinal = 1; ordinal <= count; ++ordinal) fn(feature, ordinal);
  }

  bool operator==(const Signature&) const = default;

 private:
  std::string item_id_;
  Counts counts_;
};

enum class RuleMode { pull, push };
std::string_view to_string(RuleMode mode) noexcept;
RuleMode parse_rule_mode(std::string_view text);

struct MiningRule {
  std::vector<FeatureId> antecedent;  // sorted ascending, non-empty
  double support = 0.0;
  double confidence = 0.0;
  RuleMode mode = RuleMode::pull;

  bool operator==(const MiningRule&) const = default;
};

// Integer mode (budget empty): count = floor(value). Real mode: count =
// floor(value * budget). Both are capped at kMaxInstancesPerFeature.
Signature symbolize(const DatasetItem& item, std::optional<std::uint32_t> budget);

Signature apply_pull(const MiningRule& rule, Signature sig, Vocabulary& vocab, int iteration = 0);
Signature apply_push(const MiningRule& rule, Signature sig, const Vocabulary& vocab);

// Rule order, then signature order; compound features are registered on first use.
void apply_rules_all(std::span<const MiningRule> rules, std::span<Signature> sigs,
                     Vocabulary& vocab, int iteration = 0);

}  // namespace sigloop
