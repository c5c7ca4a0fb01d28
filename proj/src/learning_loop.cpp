#include "sigloop/learning_loop.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <numeric>
#include <set>
#include <unordered_set>

#include "sigloop/hashing.hpp"

namespace sigloop {
namespace {

constexpr std::uint64_t kFamilySalt = 0x5851F42D4C957F2DULL;
constexpr std::uint64_t kLayoutSalt = 0x14057B7EF767814FULL;
constexpr std::uint64_t kFoldSalt = 0x2545F4914F6CDD1DULL;

std::uint64_t derive(std::uint64_t seed, std::uint64_t salt, std::uint64_t index = 0) {
  return splitmix64(seed ^ salt) ^ splitmix64(index + salt);
}

// Fisher-Yates on a SplitMix64 stream; std::shuffle is not portable across
// standard libraries.
template <class T>
void shuffle(std::vector<T>& v, SplitMix64& rng) {
  for (std::size_t i = v.size(); i > 1; --i) std::swap(v[i - 1], v[rng.next() % i]);
}

std::optional<std::uint32_t> effective_budget(const SessionState& s) {
  if (s.config.integer_counts) return std::nullopt;
  return s.config.budget.value_or(s.dataset.descriptor.quantization_budget);
}

MetricsSnapshot compute_metrics(const SessionState& s) {
  MetricsSnapshot m;
  const LabelList labels = s.labels();
  std::vector<std::size_t> labelled;
  for (std::size_t i = 0; i < labels.size(); ++i)
    if (labels[i]) labelled.push_back(i);
  if (labelled.empty()) return m;

  m.accuracy = leave_one_out_accuracy(labels, s.matrix);
  Grouping restricted;
  restricted.threshold = s.grouping.threshold;
  for (const auto& g : s.grouping.groups) {
    std::vector<std::size_t> kept;
    for (auto i : g)
      if (labels[i]) kept.push_back(i);
    if (!kept.empty()) restricted.groups.push_back(std::move(kept));
  }
  m.purity = purity(restricted, labels);
  m.per_class_purity = per_class_purity(restricted, labels);

  // Numeric labels (e.g. ages) on a 1-D layout: rank agreement with the truth.
  if (s.embedding.dim() == 1 && labelled.size() == labels.size()) {
    std::vector<double> values(labels.size());
    bool numeric = true;
    for (std::size_t i = 0; i < labels.size() && numeric; ++i) {
      const auto& text = *labels[i];
      const auto res = std::from_chars(text.data(), text.data() + text.size(), values[i]);
      numeric = res.ec == std::errc() && res.ptr == text.data() + text.size();
    }
    if (numeric) {
      std::vector<std::size_t> idx(labels.size());
      std::iota(idx.begin(), idx.end(), std::size_t{0});
      std::stable_sort(idx.begin(), idx.end(), [&](auto a, auto b) { return values[a] < values[b]; });
      std::vector<std::string> truth;
      for (auto i : idx) truth.push_back(s.signatures[i].item_id());
      m.kendall_tau = kendall_tau(rank_1d(s.embedding), truth);
    }
  }
  return m;
}

void recompute(SessionState& s, const std::vector<Signature>* previous) {
  std::vector<std::string> order;
  order.reserve(s.signatures.size());
  for (const auto& sig : s.signatures) order.push_back(sig.item_id());

  if (s.config.similarity == SimilarityMode::sketch) {
    s.sketches.resize(s.signatures.size());
    for (std::size_t i = 0; i < s.signatures.size(); ++i) {
      if (previous && (*previous)[i] == s.signatures[i]) continue;
      if (s.signatures[i].empty())
        s.sketches[i].reset();
      else
        s.sketches[i] = sketch_signature(s.signatures[i], s.vocab, s.family);
    }
    s.matrix = similarity_from_sketches(s.sketches, std::move(order));
  } else {
    s.sketches.clear();
    s.matrix = pairwise_similarity(s.signatures, s.vocab, s.family, SimilarityMode::exact);
  }

  s.grouping = group_items(s.matrix, s.config.group_threshold);

  const auto layout_seed = derive(s.config.seed, kLayoutSalt, s.history.size());
  if (previous && s.embedding.coords.rows() == static_cast<Eigen::Index>(s.signatures.size())) {
    WarmStart<double> warm{s.embedding.coords, std::vector<bool>(s.signatures.size(), true)};
    s.embedding = embed_similarity(s.matrix, s.config.embedding_dim, layout_seed, &warm, s.config.stress_target,
                                   s.config.embed_options);
  } else {
    s.embedding = embed_similarity(s.matrix, s.config.embedding_dim, layout_seed, nullptr, s.config.stress_target,
                                   s.config.embed_options);
  }
  s.metrics = compute_metrics(s);
}

std::vector<Signature> gather(const SessionState& s, std::span<const std::string> ids) {
  std::vector<Signature> out;
  out.reserve(ids.size());
  for (const auto& id : ids) out.push_back(s.signatures[s.position_of(id)]);
  return out;
}

}  // namespace

LabelList SessionState::labels() const {
  LabelList out;
  out.reserve(dataset.items.size());
  for (const auto& item : dataset.items) out.push_back(item.label);
  return out;
}

std::size_t SessionState::position_of(const std::string& id) const {
  const auto it = positions.find(id);
  if (it == positions.end()) throw Error(ErrorKind::SelectionError, "unknown item id '" + id + "'");
  return it->second;
}

SessionState initialize_session(Dataset dataset, const SessionConfig& config) {
  if (dataset.items.size() < 2) throw Error(ErrorKind::DatasetTooSmall, "a session needs >= 2 items");
  if (config.embedding_dim != 1 && config.embedding_dim != 2)
    throw Error(ErrorKind::ConfigError, "embedding dimension must be 1 or 2");
  if (config.maxlen < 1) throw Error(ErrorKind::ConfigError, "maxlen must be >= 1");
  if (!(config.minsup > 0.0 && config.minsup <= 1.0)) throw Error(ErrorKind::ConfigError, "minsup must lie in (0,1]");

  SessionState s;
  s.config = config;
  s.dataset = std::move(dataset);
  s.vocab = Vocabulary(s.dataset.descriptor.dimension);
  s.family = HashFamily(derive(config.seed, kFamilySalt), config.num_hashes, config.sketch_size);
  for (std::size_t i = 0; i < s.dataset.items.size(); ++i) s.positions.emplace(s.dataset.items[i].id, i);

  const auto normalized = normalize_features(s.dataset.items, config.normalize);
  const auto budget = effective_budget(s);
  s.signatures.reserve(normalized.size());
  for (const auto& item : normalized) s.signatures.push_back(symbolize(item, budget));

  recompute(s, nullptr);
  s.baseline_metrics = s.metrics;
  return s;
}

void validate_selection(const SessionState& state, const Selection& selection) {
  std::unordered_set<std::string> seen;
  for (const auto* list : {&selection.positives, &selection.negatives})
    for (const auto& id : *list) {
      state.position_of(id);
      if (!seen.insert(id).second)
        throw Error(ErrorKind::SelectionError, "item '" + id + "' selected more than once");
    }
  if (selection.mode == RuleMode::pull && selection.positives.empty())
    throw Error(ErrorKind::SelectionError, "pull needs at least one positive");
  if (selection.mode == RuleMode::push && selection.size() < 2)
    throw Error(ErrorKind::SelectionError, "push needs at least two selected items");
}

SessionState iterate(SessionState state, const Selection& selection) {
  validate_selection(state, selection);
  const int index = state.iteration() + 1;

  MinedRuleSet rules;
  if (selection.mode == RuleMode::pull) {
    const auto pos = gather(state, selection.positives);
    const auto neg = gather(state, selection.negatives);
    rules = mine_discriminative(pos, neg, state.vocab, state.config.minsup, state.config.maxlen);
  } else {
    std::vector<std::string> all = selection.positives;
    all.insert(all.end(), selection.negatives.begin(), selection.negatives.end());
    rules = mine_common(gather(state, all), state.vocab, state.config.maxlen);
  }

  if (!rules.empty()) {
    const std::vector<Signature> previous = state.signatures;
    apply_rules_all(rules.rules, state.signatures, state.vocab, index);
    if (previous != state.signatures) {
      // The layout seed is drawn from history length, so append first.
      state.history.push_back({index, selection, rules, state.vocab.size(), {}});
      recompute(state, &previous);
      state.history.back().metrics_after = state.metrics;
      return state;
    }
  }
  state.history.push_back({index, selection, std::move(rules), state.vocab.size(), state.metrics});
  return state;
}

SessionState replay_session(Dataset dataset, const SessionConfig& config, std::span<const Selection> selections) {
  auto state = initialize_session(std::move(dataset), config);
  for (const auto& sel : selections) state = iterate(std::move(state), sel);
  return state;
}

double mean_pairwise_jaccard(const SessionState& state, std::span<const std::size_t> items) {
  double total = 0.0;
  std::size_t pairs = 0;
  for (std::size_t a = 0; a < items.size(); ++a)
    for (std::size_t b = a + 1; b < items.size(); ++b) {
      total += exact_jaccard(state.signatures[items[a]], state.signatures[items[b]]);
      ++pairs;
    }
  return pairs == 0 ? 0.0 : total / static_cast<double>(pairs);
}

SelectionRatio parse_ratio(std::string_view text) {
  const auto colon = text.find(':');
  SelectionRatio r;
  auto parse = [&](std::string_view part, std::size_t& out) {
    const auto res = std::from_chars(part.data(), part.data() + part.size(), out);
    return !part.empty() && res.ec == std::errc() && res.ptr == part.data() + part.size();
  };
  if (colon == std::string_view::npos || !parse(text.substr(0, colon), r.correct) ||
      !parse(text.substr(colon + 1), r.incorrect) || r.correct < 1)
    throw Error(ErrorKind::ConfigError, "ratio must look like k:m with k >= 1");
  return r;
}

Selection simulate_user(const SessionState& state, const LabelList& ground_truth, SelectionRatio ratio,
                        std::uint64_t seed, std::span<const std::size_t> pool) {
  if (ratio.correct < 1) throw Error(ErrorKind::ConfigError, "ratio needs at least one correct example");
  if (ground_truth.size() != state.item_count())
    throw Error(ErrorKind::ConfigError, "ground truth must cover every item");

  std::vector<bool> allowed(state.item_count(), pool.empty());
  for (auto p : pool) allowed.at(p) = true;
  for (std::size_t i = 0; i < allowed.size(); ++i)
    if (!ground_truth[i]) allowed[i] = false;

  std::map<std::string, std::vector<std::size_t>> members;
  for (std::size_t i = 0; i < allowed.size(); ++i)
    if (allowed[i]) members[*ground_truth[i]].push_back(i);

  // Grouping as the user sees it, restricted to items they may label.
  Grouping visible;
  visible.threshold = state.grouping.threshold;
  for (const auto& g : state.grouping.groups) {
    std::vector<std::size_t> kept;
    for (auto i : g)
      if (allowed[i]) kept.push_back(i);
    if (!kept.empty()) visible.groups.push_back(std::move(kept));
  }
  const auto class_purity = per_class_purity(visible, ground_truth);

  std::optional<std::string> target;
  double lowest = 2.0;
  for (const auto& [label, items] : members) {
    if (items.size() < ratio.correct) continue;
    const double p = class_purity.at(label);
    if (p < lowest) {
      lowest = p;
      target = label;
    }
  }
  if (!target) throw Error(ErrorKind::ConfigError, "no class has enough items for the requested ratio");

  SplitMix64 rng(seed);
  auto is_target = [&](std::size_t i) { return *ground_truth[i] == *target; };

  std::optional<std::size_t> chosen;
  std::vector<std::size_t> candidates;
  for (std::size_t g = 0; g < visible.groups.size(); ++g) {
    const auto& group = visible.groups[g];
    const auto hits = std::count_if(group.begin(), group.end(), is_target);
    if (hits == 0) continue;
    candidates.push_back(g);
    const bool impure = static_cast<std::size_t>(hits) < group.size();
    if (impure && (!chosen || group.size() > visible.groups[*chosen].size())) chosen = g;
  }
  if (!chosen) chosen = candidates[rng.next() % candidates.size()];
  const auto& group = visible.groups[*chosen];

  std::vector<std::size_t> in_group_pos, in_group_neg;
  for (auto i : group) (is_target(i) ? in_group_pos : in_group_neg).push_back(i);
  shuffle(in_group_pos, rng);
  shuffle(in_group_neg, rng);

  std::vector<std::size_t> positives(in_group_pos.begin(),
                                     in_group_pos.begin() + static_cast<std::ptrdiff_t>(
                                                                std::min(ratio.correct, in_group_pos.size())));
  if (positives.size() < ratio.correct) {
    std::vector<std::size_t> rest;
    for (auto i : members[*target])
      if (std::find(positives.begin(), positives.end(), i) == positives.end()) rest.push_back(i);
    shuffle(rest, rng);
    for (std::size_t k = 0; positives.size() < ratio.correct && k < rest.size(); ++k) positives.push_back(rest[k]);
  }

  std::vector<std::size_t> negatives(in_group_neg.begin(),
                                     in_group_neg.begin() + static_cast<std::ptrdiff_t>(
                                                                std::min(ratio.incorrect, in_group_neg.size())));
  const bool co_grouped_negative = !negatives.empty();
  if (negatives.size() < ratio.incorrect) {
    std::vector<std::size_t> rest;
    for (std::size_t i = 0; i < allowed.size(); ++i)
      if (allowed[i] && !is_target(i) && std::find(negatives.begin(), negatives.end(), i) == negatives.end())
        rest.push_back(i);
    shuffle(rest, rng);
    for (std::size_t k = 0; negatives.size() < ratio.incorrect && k < rest.size(); ++k) negatives.push_back(rest[k]);
  }

  const double group_purity = static_cast<double>(std::max(in_group_pos.size(), [&] {
                                std::map<std::string, std::size_t> c;
                                std::size_t best = 0;
                                for (auto i : in_group_neg) best = std::max(best, ++c[*ground_truth[i]]);
                                return best;
                              }())) /
                              static_cast<double>(group.size());

  Selection sel;
  sel.mode = (co_grouped_negative && group_purity < 0.5) ? RuleMode::push : RuleMode::pull;
  for (auto i : positives) sel.positives.push_back(state.signatures[i].item_id());
  for (auto i : negatives) sel.negatives.push_back(state.signatures[i].item_id());
  return sel;
}

ExperimentReport run_experiment(const Dataset& dataset, const ExperimentConfig& config) {
  const auto started = std::chrono::steady_clock::now();
  if (config.folds < 2) throw Error(ErrorKind::ConfigError, "need at least 2 folds");
  const LabelList truth = [&] {
    LabelList l;
    for (const auto& item : dataset.items) {
      if (!item.label) throw Error(ErrorKind::ConfigError, "experiments need a fully labelled dataset");
      l.push_back(item.label);
    }
    return l;
  }();

  std::vector<std::size_t> shuffled(dataset.items.size());
  std::iota(shuffled.begin(), shuffled.end(), std::size_t{0});
  SplitMix64 fold_rng(derive(config.seed, kFoldSalt));
  shuffle(shuffled, fold_rng);
  std::vector<std::size_t> fold_of(dataset.items.size());
  for (std::size_t k = 0; k < shuffled.size(); ++k) fold_of[shuffled[k]] = k % config.folds;

  ExperimentReport report;
  report.dataset = dataset.descriptor.name;
  report.config = config;
  std::vector<std::vector<double>> purity_runs;
  std::vector<std::vector<std::size_t>> labels_runs;

  SplitMix64 master(config.seed);
  for (std::size_t run = 0; run < config.runs; ++run) {
    const std::uint64_t run_seed = master.next();
    std::vector<std::size_t> train, test;
    for (std::size_t i = 0; i < fold_of.size(); ++i)
      (fold_of[i] == run % config.folds ? test : train).push_back(i);

    SessionConfig sc = config.session;
    sc.seed = run_seed;
    auto state = initialize_session(dataset, sc);
    std::vector<double> acc, pur;
    std::vector<std::size_t> used;
    std::size_t labels_used = 0;
    auto record = [&] {
      acc.push_back(nn_classify(test, train, truth, state.matrix).accuracy);
      pur.push_back(purity(state.grouping, truth));
      used.push_back(labels_used);
    };
    record();
    for (std::size_t it = 0; it < config.iterations; ++it) {
      const auto sel = simulate_user(state, truth, config.ratio, derive(run_seed, it + 1), train);
      labels_used += sel.size();
      state = iterate(std::move(state), sel);
      record();
    }
    report.run_accuracy.push_back(std::move(acc));
    purity_runs.push_back(std::move(pur));
    labels_runs.push_back(std::move(used));
  }

  for (std::size_t it = 0; it <= config.iterations && config.runs > 0; ++it) {
    ExperimentRow row;
    row.iter = it;
    double sum = 0.0, psum = 0.0;
    for (std::size_t r = 0; r < config.runs; ++r) {
      sum += report.run_accuracy[r][it];
      psum += purity_runs[r][it];
    }
    const double runs = static_cast<double>(config.runs);
    row.mean_accuracy = sum / runs;
    row.mean_purity = psum / runs;
    double var = 0.0;
    for (std::size_t r = 0; r < config.runs; ++r) {
      const double d = report.run_accuracy[r][it] - row.mean_accuracy;
      var += d * d;
    }
    row.sigma = config.runs > 1 ? std::sqrt(var / (runs - 1.0)) : 0.0;
    row.labels_used = labels_runs.front()[it];
    report.rows.push_back(row);
  }
  report.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  return report;
}

}  // namespace sigloop
