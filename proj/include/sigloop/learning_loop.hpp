#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "sigloop/dataset.hpp"
#include "sigloop/evaluation.hpp"
#include "sigloop/grouping.hpp"
#include "sigloop/mds.hpp"
#include "sigloop/minhash.hpp"
#include "sigloop/rule_miner.hpp"
#include "sigloop/signature.hpp"

namespace sigloop {

struct SessionConfig {
  std::uint64_t seed = 1;
  NormalizeMode normalize = NormalizeMode::minmax;
  // Overrides the dataset's quantization budget when set.
  std::optional<std::uint32_t> budget;
  // Use floor(value) as the count instead of floor(value * budget).
  bool integer_counts = false;
  std::size_t num_hashes = kDefaultNumHashes;
  std::size_t sketch_size = kDefaultSketchSize;
  SimilarityMode similarity = SimilarityMode::sketch;
  double group_threshold = kDefaultGroupThreshold;
  int embedding_dim = 2;
  StressTarget stress_target = StressTarget::one_minus_sim;
  EmbedOptions embed_options{};
  double minsup = 1.0;
  std::size_t maxlen = 3;

  bool operator==(const SessionConfig& o) const {
    return seed == o.seed && normalize == o.normalize && budget == o.budget && integer_counts == o.integer_counts &&
           num_hashes == o.num_hashes && sketch_size == o.sketch_size && similarity == o.similarity &&
           group_threshold == o.group_threshold && embedding_dim == o.embedding_dim &&
           stress_target == o.stress_target && minsup == o.minsup && maxlen == o.maxlen &&
           embed_options.step == o.embed_options.step && embed_options.max_iterations == o.embed_options.max_iterations &&
           embed_options.relative_tolerance == o.embed_options.relative_tolerance &&
           embed_options.max_halvings == o.embed_options.max_halvings;
  }
};

struct Selection {
  std::vector<std::string> positives;
  std::vector<std::string> negatives;
  RuleMode mode = RuleMode::pull;

  std::size_t size() const noexcept { return positives.size() + negatives.size(); }
  bool operator==(const Selection&) const = default;
};

struct IterationRecord {
  int index = 0;
  Selection selection;
  MinedRuleSet rules_applied;
  std::size_t vocab_size_after = 0;
  MetricsSnapshot metrics_after;

  bool operator==(const IterationRecord&) const = default;
};

struct SessionState {
  Dataset dataset;  // as loaded; normalization is applied during symbolization
  SessionConfig config;
  Vocabulary vocab;
  std::vector<Signature> signatures;
  HashFamily family;
  std::vector<std::optional<SketchSet>> sketches;
  SimilarityMatrix matrix;
  Grouping grouping;
  Embedding embedding;
  MetricsSnapshot metrics;
  MetricsSnapshot baseline_metrics;  // iteration 0
  std::vector<IterationRecord> history;

  std::size_t item_count() const noexcept { return signatures.size(); }
  int iteration() const noexcept { return static_cast<int>(history.size()); }
  LabelList labels() const;
  // Throws SelectionError for unknown ids.
  std::size_t position_of(const std::string& id) const;

  std::unordered_map<std::string, std::size_t> positions;
};

SessionState initialize_session(Dataset dataset, const SessionConfig& config);

// Throws SelectionError when the selection is not usable for its mode.
void validate_selection(const SessionState& state, const Selection& selection);

SessionState iterate(SessionState state, const Selection& selection);

// Rebuilds a session from its event log.
SessionState replay_session(Dataset dataset, const SessionConfig& config, std::span<const Selection> selections);

// Mean pairwise exact Jaccard among the given item positions.
double mean_pairwise_jaccard(const SessionState& state, std::span<const std::size_t> items);

struct SelectionRatio {
  std::size_t correct = 4;
  std::size_t incorrect = 1;
  bool operator==(const SelectionRatio&) const = default;
};

SelectionRatio parse_ratio(std::string_view text);  // "k:m"

// Oracle stand-in for the human: targets the class with the lowest
// per-class purity and picks k of its members from its largest impure group
// plus m co-grouped members of other classes. `pool` restricts which items
// may be labelled (all labelled items when empty).
Selection simulate_user(const SessionState& state, const LabelList& ground_truth, SelectionRatio ratio,
                        std::uint64_t seed, std::span<const std::size_t> pool = {});

struct ExperimentConfig {
  std::size_t iterations = 15;
  SelectionRatio ratio{};
  std::uint64_t seed = 1;
  std::size_t runs = 10;
  // Cross-validation folds; run r evaluates on fold r % folds.
  std::size_t folds = 10;
  SessionConfig session{};
};

struct ExperimentRow {
  std::size_t iter = 0;
  double mean_accuracy = 0.0;
  double sigma = 0.0;
  double mean_purity = 0.0;
  std::size_t labels_used = 0;
  bool operator==(const ExperimentRow&) const = default;
};

struct ExperimentReport {
  std::string dataset;
  ExperimentConfig config;
  std::vector<ExperimentRow> rows;
  std::vector<std::vector<double>> run_accuracy;  // [run][iter]
  double seconds = 0.0;
};

ExperimentReport run_experiment(const Dataset& dataset, const ExperimentConfig& config);

}  // namespace sigloop
