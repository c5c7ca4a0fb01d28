#pragma once

#include <json.hpp>

#include "sigloop/learning_loop.hpp"

namespace sigloop {

using Json = nlohmann::json;

// {"item_id":..., "counts":[[feature_key, count], ...]} in vocabulary order.
Json signature_to_json(const Signature& sig, const Vocabulary& vocab);
// Unknown compound keys are registered at `iteration`.
Signature signature_from_json(const Json& j, Vocabulary& vocab, int iteration = 0);

Json rule_to_json(const MiningRule& rule);
MiningRule rule_from_json(const Json& j);
Json rules_to_json(const MinedRuleSet& rules);

Json matrix_to_json(const SimilarityMatrix& matrix);
Json metrics_to_json(const MetricsSnapshot& metrics);

Json config_to_json(const SessionConfig& config);
// Missing keys keep their defaults; unknown enum values throw ConfigError.
SessionConfig config_from_json(const Json& j, SessionConfig base = {});

Json selection_to_json(const Selection& selection);
// Throws SelectionError on a malformed body.
Selection selection_from_json(const Json& j);

Json report_to_json(const ExperimentReport& report);
// Per-iteration history of a live session.
Json history_to_json(const SessionState& state);

}  // namespace sigloop
