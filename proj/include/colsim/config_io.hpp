#pragma once

#include <string>

#include <json.hpp>

#include "colsim/engine.hpp"

namespace colsim {

// JSON schema notes
// -----------------
// Top-level keys mirror ScenarioConfig field names. Variant fields carry a
// "type" discriminator; omitted optional keys take the defaults documented in
// the headers. Agent entries accept an optional "count" to replicate a
// profile, and specialization overrides map problem indices (as JSON object
// keys) to abilities. Example:
//
//   {
//     "agents": [{"base": 8.0, "overrides": {"0": 24.0}}, {"base": 5.0,
//                 "count": 3}],
//     "problems": [{"difficulty": 10.0, "tier": "low"}],
//     "response_model": {"type": "monotone_logistic"},
//     "decision_rule": {"type": "optimal_weighted", "source":
//                       "true_accuracy"},
//     "stimulus_rule": {"type": "full_performance"},
//     "threshold_rule": {"type": "performance_dynamic"},
//     "transition_model": {"type": "sigmoid"},
//     "params": {"delta": 4.0, "beta_prime": 4.0},
//     "rounds": 1000, "runs": 50, "seed": 42,
//     "dynamic_events": [{"at_round": 1251, "event":
//         {"type": "swap_specializations", "permutation": [1, 0]}}]
//   }
//
// GeneralizedMeanScaled accepts "exponent" as a number or the strings
// "-inf" / "inf" / "+inf".

// Parses and validates; throws ConfigError naming the offending field.
ScenarioConfig config_from_json(const nlohmann::json& j);

// Canonical serialized form (replicated agents are written out one by one).
nlohmann::json config_to_json(const ScenarioConfig& config);

// File variants. Reading accepts either a bare config object or a manifest
// that wraps one under a "config" key, so a manifest reproduces its bundle.
ScenarioConfig load_config_file(const std::string& path);

}  // namespace colsim
