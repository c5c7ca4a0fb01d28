#include "sigloop/signature.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>

#include "sigloop/error.hpp"
#include "sigloop/hashing.hpp"

namespace sigloop {
namespace {

std::uint32_t parse_index(std::string_view text, std::string_view key) {
  std::uint32_t value = 0;
  const auto res = std::from_chars(text.data(), text.data() + text.size(), value);
  if (text.empty() || res.ec != std::errc() || res.ptr != text.data() + text.size())
    throw Error(ErrorKind::VocabularyError, "bad feature key '" + std::string(key) + "'");
  return value;
}

}  // namespace

FeatureId FeatureId::base(std::uint32_t column) { return FeatureId({column}); }

FeatureId FeatureId::compound(std::vector<std::uint32_t> columns) {
  std::sort(columns.begin(), columns.end());
  columns.erase(std::unique(columns.begin(), columns.end()), columns.end());
  if (columns.size() < 2)
    throw Error(ErrorKind::VocabularyError, "compound feature needs >= 2 distinct constituents");
  return FeatureId(std::move(columns));
}

FeatureId FeatureId::merge(std::span<const FeatureId> parts) {
  std::vector<std::uint32_t> columns;
  for (const auto& part : parts) columns.insert(columns.end(), part.columns_.begin(), part.columns_.end());
  std::sort(columns.begin(), columns.end());
  columns.erase(std::unique(columns.begin(), columns.end()), columns.end());
  if (columns.empty()) throw Error(ErrorKind::VocabularyError, "cannot merge an empty feature list");
  return FeatureId(std::move(columns));
}

FeatureId FeatureId::from_key(std::string_view key) {
  if (key.size() >= 2 && key[0] == 'b') return base(parse_index(key.substr(1), key));
  if (key.size() >= 3 && key.substr(0, 2) == "c:") {
    std::vector<std::uint32_t> columns;
    std::string_view rest = key.substr(2);
    while (true) {
      const auto plus = rest.find('+');
      columns.push_back(parse_index(rest.substr(0, plus), key));
      if (plus == std::string_view::npos) break;
      rest.remove_prefix(plus + 1);
    }
    auto id = compound(columns);
    if (id.columns_ != columns)
      throw Error(ErrorKind::VocabularyError, "compound key not in canonical order: " + std::string(key));
    return id;
  }
  throw Error(ErrorKind::VocabularyError, "bad feature key '" + std::string(key) + "'");
}

std::string FeatureId::key() const {
  if (is_base()) return "b" + std::to_string(columns_.front());
  std::string out = "c:";
  for (std::size_t i = 0; i < columns_.size(); ++i) {
    if (i) out += '+';
    out += std::to_string(columns_[i]);
  }
  return out;
}

std::strong_ordering FeatureId::operator<=>(const FeatureId& other) const noexcept {
  if (auto c = columns_.size() <=> other.columns_.size(); c != 0) return c;
  return std::lexicographical_compare_three_way(columns_.begin(), columns_.end(),
                                                other.columns_.begin(), other.columns_.end());
}

Vocabulary::Vocabulary(std::size_t dimension) : dimension_(dimension) {
  entries_.reserve(dimension);
  for (std::size_t d = 0; d < dimension; ++d) intern(FeatureId::base(static_cast<std::uint32_t>(d)), 0);
}

const FeatureId& Vocabulary::at(FeatureIndex index) const {
  if (index >= entries_.size())
    throw Error(ErrorKind::VocabularyError, "feature index " + std::to_string(index) + " out of range");
  return entries_[index];
}

std::optional<FeatureIndex> Vocabulary::find(const FeatureId& id) const {
  const auto it = by_key_.find(id.key());
  if (it == by_key_.end()) return std::nullopt;
  return it->second;
}

FeatureIndex Vocabulary::index_of(const FeatureId& id) const {
  if (auto found = find(id)) return *found;
  throw Error(ErrorKind::VocabularyError, "feature " + id.key() + " is not in the vocabulary");
}

FeatureIndex Vocabulary::intern(const FeatureId& id, int iteration) {
  if (auto found = find(id)) return *found;
  const bool registering_bases = entries_.size() < dimension_;
  for (auto column : id.columns())
    if (!registering_bases && column >= dimension_)
      throw Error(ErrorKind::VocabularyError, "column " + std::to_string(column) + " exceeds dimension");
  const auto index = static_cast<FeatureIndex>(entries_.size());
  entries_.push_back(id);
  keys_.push_back(id.key());
  key_hashes_.push_back(fnv1a64(keys_.back()));
  created_.push_back(iteration);
  by_key_.emplace(keys_.back(), index);
  return index;
}

SymbolCount Signature::count(FeatureIndex feature) const {
  const auto it = counts_.find(feature);
  return it == counts_.end() ? 0 : it->second;
}

void Signature::set_count(FeatureIndex feature, SymbolCount count) {
  if (count == 0)
    counts_.erase(feature);
  else
    counts_[feature] = count;
}

std::uint64_t Signature::total_instances() const noexcept {
  std::uint64_t total = 0;
  for (const auto& [feature, count] : counts_) total += count;
  return total;
}

std::string_view to_string(RuleMode mode) noexcept { return mode == RuleMode::pull ? "pull" : "push"; }

RuleMode parse_rule_mode(std::string_view text) {
  if (text == "pull") return RuleMode::pull;
  if (text == "push") return RuleMode::push;
  throw Error(ErrorKind::ConfigError, "unknown mode '" + std::string(text) + "'");
}

Signature symbolize(const DatasetItem& item, std::optional<std::uint32_t> budget) {
  if (budget && *budget == 0) throw Error(ErrorKind::ConfigError, "quantization budget must be >= 1");
  Signature sig(item.id);
  for (std::size_t d = 0; d < item.features.size(); ++d) {
    const double value = item.features[d];
    if (!std::isfinite(value) || value < 0.0)
      throw Error(ErrorKind::InvalidValue,
                  "item " + item.id + " column f" + std::to_string(d) + " must be finite and non-negative");
    // The epsilon keeps values such as 0.29 * 100 from flooring to 28.
    const double scaled = budget ? value * static_cast<double>(*budget) : value;
    const double floored = std::floor(scaled + 1e-9);
    const auto count = static_cast<SymbolCount>(std::min(floored, double(kMaxInstancesPerFeature)));
    sig.set_count(static_cast<FeatureIndex>(d), count);
  }
  return sig;
}

Signature apply_pull(const MiningRule& rule, Signature sig, Vocabulary& vocab, int iteration) {
  if (rule.mode != RuleMode::pull) throw Error(ErrorKind::ConfigError, "apply_pull needs a pull rule");
  if (rule.antecedent.empty()) throw Error(ErrorKind::ConfigError, "rule antecedent is empty");

  std::vector<FeatureIndex> constituents;
  constituents.reserve(rule.antecedent.size());
  for (const auto& feature : rule.antecedent) constituents.push_back(vocab.index_of(feature));
  for (auto f : constituents)
    if (sig.count(f) == 0) return sig;

  const FeatureIndex target =
      constituents.size() == 1 ? constituents.front() : vocab.intern(FeatureId::merge(rule.antecedent), iteration);
  sig.set_count(target, std::min<SymbolCount>(sig.count(target) + 1, kMaxInstancesPerFeature));
  return sig;
}

Signature apply_push(const MiningRule& rule, Signature sig, const Vocabulary& vocab) {
  if (rule.mode != RuleMode::push) throw Error(ErrorKind::ConfigError, "apply_push needs a push rule");
  for (const auto& feature : rule.antecedent) {
    const auto index = vocab.find(feature);
    if (!index) continue;
    if (const auto c = sig.count(*index); c > 0) sig.set_count(*index, c - 1);
  }
  return sig;
}

void apply_rules_all(std::span<const MiningRule> rules, std::span<Signature> sigs, Vocabulary& vocab,
                     int iteration) {
  for (const auto& rule : rules) {
    for (auto& sig : sigs) {
      sig = rule.mode == RuleMode::pull ? apply_pull(rule, std::move(sig), vocab, iteration)
                                        : apply_push(rule, std::move(sig), vocab);
    }
  }
}

}  // namespace sigloop
