#include "sigloop/json_io.hpp"

namespace sigloop {
namespace {

Json optional_number(const std::optional<double>& v) { return v ? Json(*v) : Json(nullptr); }

std::vector<std::string> string_list(const Json& j, const char* field) {
  std::vector<std::string> out;
  if (!j.contains(field)) return out;
  if (!j[field].is_array()) throw Error(ErrorKind::SelectionError, std::string(field) + " must be an array of ids");
  for (const auto& v : j[field]) {
    if (!v.is_string()) throw Error(ErrorKind::SelectionError, std::string(field) + " must contain string ids");
    out.push_back(v.get<std::string>());
  }
  return out;
}

}  // namespace

Json signature_to_json(const Signature& sig, const Vocabulary& vocab) {
  Json counts = Json::array();
  for (const auto& [feature, count] : sig.counts()) counts.push_back(Json::array({vocab.key(feature), count}));
  return {{"item_id", sig.item_id()}, {"counts", std::move(counts)}};
}

Signature signature_from_json(const Json& j, Vocabulary& vocab, int iteration) {
  try {
    Signature sig(j.at("item_id").get<std::string>());
    for (const auto& entry : j.at("counts")) {
      const auto id = FeatureId::from_key(entry.at(0).get<std::string>());
      const auto count = entry.at(1).get<SymbolCount>();
      if (count == 0) throw Error(ErrorKind::VocabularyError, "stored counts must be positive");
      sig.set_count(vocab.intern(id, iteration), count);
    }
    return sig;
  } catch (const Json::exception& e) {
    throw Error(ErrorKind::VocabularyError, std::string("bad signature snapshot: ") + e.what());
  }
}

Json rule_to_json(const MiningRule& rule) {
  Json keys = Json::array();
  for (const auto& f : rule.antecedent) keys.push_back(f.key());
  return {{"mode", std::string(to_string(rule.mode))},
          {"antecedent", std::move(keys)},
          {"support", rule.support},
          {"confidence", rule.confidence}};
}

MiningRule rule_from_json(const Json& j) {
  MiningRule rule;
  rule.mode = parse_rule_mode(j.at("mode").get<std::string>());
  for (const auto& k : j.at("antecedent")) rule.antecedent.push_back(FeatureId::from_key(k.get<std::string>()));
  std::sort(rule.antecedent.begin(), rule.antecedent.end());
  rule.support = j.at("support").get<double>();
  rule.confidence = j.at("confidence").get<double>();
  return rule;
}

Json rules_to_json(const MinedRuleSet& rules) {
  Json list = Json::array();
  for (const auto& r : rules.rules) list.push_back(rule_to_json(r));
  return {{"mode", std::string(to_string(rules.mode))},
          {"minsup", rules.params.minsup},
          {"maxlen", rules.params.maxlen},
          {"confidence", rules.params.confidence},
          {"rules", std::move(list)}};
}

Json matrix_to_json(const SimilarityMatrix& matrix) {
  Json values = Json::array();
  for (Eigen::Index i = 0; i < matrix.values.rows(); ++i) {
    Json row = Json::array();
    for (Eigen::Index k = 0; k < matrix.values.cols(); ++k) row.push_back(matrix.values(i, k));
    values.push_back(std::move(row));
  }
  return {{"order", matrix.order}, {"values", std::move(values)}};
}

Json metrics_to_json(const MetricsSnapshot& m) {
  Json per_class = Json::object();
  for (const auto& [label, p] : m.per_class_purity) per_class[label] = p;
  return {{"accuracy", optional_number(m.accuracy)},
          {"purity", m.purity},
          {"kendall_tau", optional_number(m.kendall_tau)},
          {"per_class_purity", std::move(per_class)}};
}

Json config_to_json(const SessionConfig& c) {
  return {{"seed", c.seed},
          {"normalize", std::string(to_string(c.normalize))},
          {"budget", c.budget ? Json(*c.budget) : Json(nullptr)},
          {"integer_counts", c.integer_counts},
          {"num_hashes", c.num_hashes},
          {"sketch_size", c.sketch_size},
          {"similarity", std::string(to_string(c.similarity))},
          {"group_threshold", c.group_threshold},
          {"embedding_dim", c.embedding_dim},
          {"stress_target", std::string(to_string(c.stress_target))},
          {"mds_step", c.embed_options.step},
          {"mds_max_iterations", c.embed_options.max_iterations},
          {"mds_tolerance", c.embed_options.relative_tolerance},
          {"minsup", c.minsup},
          {"maxlen", c.maxlen}};
}

SessionConfig config_from_json(const Json& j, SessionConfig c) {
  if (!j.is_object()) throw Error(ErrorKind::ConfigError, "config must be a JSON object");
  try {
    if (j.contains("seed")) c.seed = j["seed"].get<std::uint64_t>();
    if (j.contains("normalize")) c.normalize = parse_normalize_mode(j["normalize"].get<std::string>());
    if (j.contains("budget")) {
      if (j["budget"].is_null()) {
        c.budget.reset();
      } else {
        const auto b = j["budget"].get<std::int64_t>();
        if (b < 1) throw Error(ErrorKind::ConfigError, "budget must be >= 1");
        c.budget = static_cast<std::uint32_t>(b);
      }
    }
    if (j.contains("integer_counts")) c.integer_counts = j["integer_counts"].get<bool>();
    if (j.contains("num_hashes")) c.num_hashes = j["num_hashes"].get<std::size_t>();
    if (j.contains("sketch_size")) c.sketch_size = j["sketch_size"].get<std::size_t>();
    if (j.contains("similarity")) c.similarity = parse_similarity_mode(j["similarity"].get<std::string>());
    if (j.contains("group_threshold")) c.group_threshold = j["group_threshold"].get<double>();
    if (j.contains("embedding_dim")) c.embedding_dim = j["embedding_dim"].get<int>();
    if (j.contains("stress_target")) c.stress_target = parse_stress_target(j["stress_target"].get<std::string>());
    if (j.contains("mds_step")) c.embed_options.step = j["mds_step"].get<double>();
    if (j.contains("mds_max_iterations")) c.embed_options.max_iterations = j["mds_max_iterations"].get<int>();
    if (j.contains("mds_tolerance")) c.embed_options.relative_tolerance = j["mds_tolerance"].get<double>();
    if (j.contains("minsup")) c.minsup = j["minsup"].get<double>();
    if (j.contains("maxlen")) c.maxlen = j["maxlen"].get<std::size_t>();
  } catch (const Json::exception& e) {
    throw Error(ErrorKind::ConfigError, e.what());
  }
  return c;
}

Json selection_to_json(const Selection& s) {
  return {{"mode", std::string(to_string(s.mode))}, {"positives", s.positives}, {"negatives", s.negatives}};
}

Selection selection_from_json(const Json& j) {
  if (!j.is_object()) throw Error(ErrorKind::SelectionError, "selection must be a JSON object");
  Selection s;
  if (j.contains("mode")) {
    if (!j["mode"].is_string()) throw Error(ErrorKind::SelectionError, "mode must be \"pull\" or \"push\"");
    const auto mode = j["mode"].get<std::string>();
    if (mode != "pull" && mode != "push") throw Error(ErrorKind::SelectionError, "mode must be \"pull\" or \"push\"");
    s.mode = parse_rule_mode(mode);
  }
  s.positives = string_list(j, "positives");
  s.negatives = string_list(j, "negatives");
  return s;
}

Json report_to_json(const ExperimentReport& r) {
  Json rows = Json::array();
  for (const auto& row : r.rows)
    rows.push_back({{"iter", row.iter},
                    {"mean_accuracy", row.mean_accuracy},
                    {"sigma", row.sigma},
                    {"mean_purity", row.mean_purity},
                    {"labels_used", row.labels_used}});
  return {{"dataset", r.dataset},
          {"config",
           {{"iterations", r.config.iterations},
            {"ratio", std::to_string(r.config.ratio.correct) + ":" + std::to_string(r.config.ratio.incorrect)},
            {"seed", r.config.seed},
            {"runs", r.config.runs},
            {"folds", r.config.folds},
            {"session", config_to_json(r.config.session)}}},
          {"iterations", std::move(rows)},
          {"run_accuracy", r.run_accuracy},
          {"seconds", r.seconds}};
}

Json history_to_json(const SessionState& state) {
  Json rows = Json::array();
  std::size_t labels_used = 0;
  rows.push_back({{"iter", 0},
                  {"selection", nullptr},
                  {"rules", nullptr},
                  {"labels_used", 0},
                  {"vocab_size", state.dataset.descriptor.dimension},
                  {"metrics", metrics_to_json(state.baseline_metrics)}});
  for (const auto& rec : state.history) {
    labels_used += rec.selection.size();
    rows.push_back({{"iter", rec.index},
                    {"selection", selection_to_json(rec.selection)},
                    {"rules", rules_to_json(rec.rules_applied)},
                    {"labels_used", labels_used},
                    {"vocab_size", rec.vocab_size_after},
                    {"metrics", metrics_to_json(rec.metrics_after)}});
  }
  return {{"dataset", state.dataset.descriptor.name},
          {"config", config_to_json(state.config)},
          {"iterations", std::move(rows)}};
}

}  // namespace sigloop
