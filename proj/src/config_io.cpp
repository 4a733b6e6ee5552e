#include "colsim/config_io.hpp"

#include <cmath>
#include <fstream>
#include <limits>

namespace colsim {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& field, const std::string& message) {
  throw ConfigError(field, message);
}

const json& require(const json& j, const char* key, const std::string& path) {
  if (!j.is_object()) fail(path, "expected an object");
  const auto it = j.find(key);
  if (it == j.end()) fail(path + "." + key, "missing required field");
  return *it;
}

double as_number(const json& j, const std::string& path) {
  if (!j.is_number()) fail(path, "expected a number");
  return j.get<double>();
}

double number_or(const json& j, const char* key, double fallback,
                 const std::string& path) {
  if (!j.is_object()) fail(path, "expected an object");
  const auto it = j.find(key);
  if (it == j.end()) return fallback;
  return as_number(*it, path + "." + key);
}

int as_int(const json& j, const std::string& path) {
  if (!j.is_number_integer()) fail(path, "expected an integer");
  return j.get<int>();
}

std::string as_string(const json& j, const std::string& path) {
  if (!j.is_string()) fail(path, "expected a string");
  return j.get<std::string>();
}

std::string type_of(const json& j, const std::string& path) {
  return as_string(require(j, "type", path), path + ".type");
}

AbilityProfile parse_profile(const json& j, const std::string& path) {
  AbilityProfile profile;
  profile.base.value = as_number(require(j, "base", path), path + ".base");
  if (const auto it = j.find("overrides"); it != j.end()) {
    if (!it->is_object()) fail(path + ".overrides", "expected an object");
    for (const auto& [key, value] : it->items()) {
      std::size_t problem = 0;
      try {
        problem = static_cast<std::size_t>(std::stoul(key));
      } catch (const std::exception&) {
        fail(path + ".overrides", "keys must be problem indices");
      }
      profile.overrides[problem] =
          Ability{as_number(value, path + ".overrides." + key)};
    }
  }
  return profile;
}

ResponseModel parse_response_model(const json& j, const std::string& path) {
  const std::string type = type_of(j, path);
  if (type == "monotone_logistic") return MonotoneLogistic{};
  if (type == "three_param_logistic") {
    ThreeParamLogistic model;
    model.a = number_or(j, "a", model.a, path);
    model.b = number_or(j, "b", model.b, path);
    model.c = number_or(j, "c", model.c, path);
    return model;
  }
  if (type == "single_peaked") {
    SinglePeaked model;
    model.plateau = number_or(j, "plateau", model.plateau, path);
    return model;
  }
  fail(path + ".type", "unknown response model '" + type + "'");
}

DecisionRule parse_decision_rule(const json& j, const std::string& path) {
  const std::string type = type_of(j, path);
  if (type == "majority") return Majority{};
  if (type == "ability_weighted") return AbilityWeighted{};
  if (type == "optimal_weighted") {
    OptimalWeighted rule;
    if (const auto it = j.find("source"); it != j.end()) {
      const std::string source = as_string(*it, path + ".source");
      if (source == "true_accuracy") {
        rule.source = WeightSource::TrueAccuracy;
      } else if (source == "empirical_accuracy") {
        rule.source = WeightSource::EmpiricalAccuracy;
      } else {
        fail(path + ".source", "unknown weight source '" + source + "'");
      }
    }
    return rule;
  }
  if (type == "imitation") {
    Imitation rule;
    rule.chi = number_or(j, "chi", rule.chi, path);
    if (const auto it = j.find("order"); it != j.end()) {
      const std::string order = as_string(*it, path + ".order");
      if (order == "random") {
        rule.order = ImitationOrder::RandomOrder;
      } else if (order == "best_first") {
        rule.order = ImitationOrder::BestFirst;
      } else {
        fail(path + ".order", "unknown order '" + order + "'");
      }
    }
    return rule;
  }
  fail(path + ".type", "unknown decision rule '" + type + "'");
}

double parse_exponent(const json& j, const std::string& path) {
  if (j.is_string()) {
    const std::string s = j.get<std::string>();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
    if (s == "inf" || s == "+inf") {
      return std::numeric_limits<double>::infinity();
    }
    fail(path, "expected a number, \"-inf\" or \"inf\"");
  }
  return as_number(j, path);
}

StimulusRule parse_stimulus_rule(const json& j, const std::string& path) {
  const std::string type = type_of(j, path);
  if (type == "standard") return StandardStimulus{};
  if (type == "full_performance") return FullPerformance{};
  if (type == "simplified_performance") return SimplifiedPerformance{};
  if (type == "difficulty_scaled") {
    DifficultyScaled rule;
    rule.f_low = number_or(j, "f_low", rule.f_low, path);
    rule.f_high = number_or(j, "f_high", rule.f_high, path);
    return rule;
  }
  if (type == "generalized_mean_scaled") {
    GeneralizedMeanScaled rule;
    if (const auto it = j.find("exponent"); it != j.end()) {
      rule.exponent = parse_exponent(*it, path + ".exponent");
    }
    return rule;
  }
  if (type == "group_performance_scaled") return GroupPerformanceScaled{};
  if (type == "squared_group_performance") return SquaredGroupPerformance{};
  fail(path + ".type", "unknown stimulus rule '" + type + "'");
}

ThresholdRule parse_threshold_rule(const json& j, const std::string& path) {
  const std::string type = type_of(j, path);
  if (type == "static_specialized") {
    StaticSpecialized rule;
    if (const auto it = j.find("ratio"); it != j.end()) {
      rule.ratio = as_number(*it, path + ".ratio");
    } else {
      rule.theta_approp =
          number_or(j, "theta_approp", rule.theta_approp, path);
      rule.theta_no_approp =
          number_or(j, "theta_no_approp", rule.theta_no_approp, path);
    }
    return rule;
  }
  if (type == "standard_dynamic") return StandardDynamic{};
  if (type == "performance_dynamic") return PerformanceDynamic{};
  if (type == "mailman_dynamic") {
    MailmanDynamic rule;
    rule.xi_strong = number_or(j, "xi_strong", rule.xi_strong, path);
    rule.xi_weak = number_or(j, "xi_weak", rule.xi_weak, path);
    return rule;
  }
  fail(path + ".type", "unknown threshold rule '" + type + "'");
}

TransitionModel parse_transition_model(const json& j, const std::string& path) {
  const std::string type = type_of(j, path);
  if (type == "sigmoid") return Sigmoid{};
  if (type == "noisy_sigmoid") return NoisySigmoid{};
  if (type == "mailman_sigmoid") {
    MailmanSigmoid model;
    model.mu_coeff = number_or(j, "mu_coeff", model.mu_coeff, path);
    model.nu_coeff = number_or(j, "nu_coeff", model.nu_coeff, path);
    return model;
  }
  fail(path + ".type", "unknown transition model '" + type + "'");
}

AllocationParams parse_params(const json& j, const std::string& path) {
  AllocationParams p;
  p.theta_min = number_or(j, "theta_min", p.theta_min, path);
  p.theta_max = number_or(j, "theta_max", p.theta_max, path);
  p.delta = number_or(j, "delta", p.delta, path);
  if (const auto it = j.find("beta"); it != j.end()) {
    p.beta = as_number(*it, path + ".beta");
  }
  p.beta_prime = number_or(j, "beta_prime", p.beta_prime, path);
  p.p_switch = number_or(j, "p_switch", p.p_switch, path);
  p.xi_learn = number_or(j, "xi_learn", p.xi_learn, path);
  p.phi_forget = number_or(j, "phi_forget", p.phi_forget, path);
  p.zeta = number_or(j, "zeta", p.zeta, path);
  p.omega_group = number_or(j, "omega_group", p.omega_group, path);
  p.omega_individual =
      number_or(j, "omega_individual", p.omega_individual, path);
  return p;
}

DynamicEvent parse_event(const json& j, const std::string& path) {
  const std::string type = type_of(j, path);
  if (type == "swap_specializations") {
    SwapSpecializations event;
    const json& perm = require(j, "permutation", path);
    if (!perm.is_array()) fail(path + ".permutation", "expected an array");
    for (std::size_t i = 0; i < perm.size(); ++i) {
      const std::string entry_path =
          path + ".permutation[" + std::to_string(i) + "]";
      const int value = as_int(perm[i], entry_path);
      if (value < 0) fail(entry_path, "must be non-negative");
      event.permutation.push_back(static_cast<std::size_t>(value));
    }
    return event;
  }
  if (type == "set_difficulty") {
    SetDifficulty event;
    const int problem = as_int(require(j, "problem", path), path + ".problem");
    if (problem < 0) fail(path + ".problem", "must be non-negative");
    event.problem = static_cast<std::size_t>(problem);
    event.difficulty =
        as_number(require(j, "difficulty", path), path + ".difficulty");
    return event;
  }
  fail(path + ".type", "unknown event '" + type + "'");
}

const char* tier_name(DifficultyTier tier) {
  switch (tier) {
    case DifficultyTier::Low:
      return "low";
    case DifficultyTier::High:
      return "high";
    default:
      return "mid";
  }
}

json response_model_to_json(const ResponseModel& model) {
  if (std::holds_alternative<MonotoneLogistic>(model)) {
    return {{"type", "monotone_logistic"}};
  }
  if (const auto* three = std::get_if<ThreeParamLogistic>(&model)) {
    return {{"type", "three_param_logistic"},
            {"a", three->a},
            {"b", three->b},
            {"c", three->c}};
  }
  const auto& peaked = std::get<SinglePeaked>(model);
  return {{"type", "single_peaked"}, {"plateau", peaked.plateau}};
}

json decision_rule_to_json(const DecisionRule& rule) {
  if (std::holds_alternative<Majority>(rule)) return {{"type", "majority"}};
  if (std::holds_alternative<AbilityWeighted>(rule)) {
    return {{"type", "ability_weighted"}};
  }
  if (const auto* optimal = std::get_if<OptimalWeighted>(&rule)) {
    return {{"type", "optimal_weighted"},
            {"source", optimal->source == WeightSource::TrueAccuracy
                           ? "true_accuracy"
                           : "empirical_accuracy"}};
  }
  const auto& imitation = std::get<Imitation>(rule);
  return {{"type", "imitation"},
          {"chi", imitation.chi},
          {"order", imitation.order == ImitationOrder::RandomOrder
                        ? "random"
                        : "best_first"}};
}

json stimulus_rule_to_json(const StimulusRule& rule) {
  if (std::holds_alternative<StandardStimulus>(rule)) {
    return {{"type", "standard"}};
  }
  if (std::holds_alternative<FullPerformance>(rule)) {
    return {{"type", "full_performance"}};
  }
  if (std::holds_alternative<SimplifiedPerformance>(rule)) {
    return {{"type", "simplified_performance"}};
  }
  if (const auto* scaled = std::get_if<DifficultyScaled>(&rule)) {
    return {{"type", "difficulty_scaled"},
            {"f_low", scaled->f_low},
            {"f_high", scaled->f_high}};
  }
  if (const auto* mean_rule = std::get_if<GeneralizedMeanScaled>(&rule)) {
    if (std::isinf(mean_rule->exponent)) {
      return {{"type", "generalized_mean_scaled"},
              {"exponent", mean_rule->exponent > 0 ? "inf" : "-inf"}};
    }
    return {{"type", "generalized_mean_scaled"},
            {"exponent", mean_rule->exponent}};
  }
  if (std::holds_alternative<GroupPerformanceScaled>(rule)) {
    return {{"type", "group_performance_scaled"}};
  }
  return {{"type", "squared_group_performance"}};
}

json threshold_rule_to_json(const ThresholdRule& rule) {
  if (const auto* fixed = std::get_if<StaticSpecialized>(&rule)) {
    if (fixed->ratio) {
      return {{"type", "static_specialized"}, {"ratio", *fixed->ratio}};
    }
    return {{"type", "static_specialized"},
            {"theta_approp", fixed->theta_approp},
            {"theta_no_approp", fixed->theta_no_approp}};
  }
  if (std::holds_alternative<StandardDynamic>(rule)) {
    return {{"type", "standard_dynamic"}};
  }
  if (std::holds_alternative<PerformanceDynamic>(rule)) {
    return {{"type", "performance_dynamic"}};
  }
  const auto& mailman = std::get<MailmanDynamic>(rule);
  return {{"type", "mailman_dynamic"},
          {"xi_strong", mailman.xi_strong},
          {"xi_weak", mailman.xi_weak}};
}

json transition_model_to_json(const TransitionModel& model) {
  if (std::holds_alternative<Sigmoid>(model)) return {{"type", "sigmoid"}};
  if (std::holds_alternative<NoisySigmoid>(model)) {
    return {{"type", "noisy_sigmoid"}};
  }
  const auto& mailman = std::get<MailmanSigmoid>(model);
  return {{"type", "mailman_sigmoid"},
          {"mu_coeff", mailman.mu_coeff},
          {"nu_coeff", mailman.nu_coeff}};
}

}  // namespace

ScenarioConfig config_from_json(const json& j) {
  if (!j.is_object()) fail("config", "expected an object");
  ScenarioConfig config;

  const json& agents = require(j, "agents", "config");
  if (!agents.is_array()) fail("agents", "expected an array");
  for (std::size_t i = 0; i < agents.size(); ++i) {
    const std::string path = "agents[" + std::to_string(i) + "]";
    const AbilityProfile profile = parse_profile(agents[i], path);
    int count = 1;
    if (const auto it = agents[i].find("count"); it != agents[i].end()) {
      count = as_int(*it, path + ".count");
      if (count < 0) fail(path + ".count", "must be non-negative");
    }
    for (int c = 0; c < count; ++c) config.agents.push_back(profile);
  }

  const json& problems = require(j, "problems", "config");
  if (!problems.is_array()) fail("problems", "expected an array");
  for (std::size_t i = 0; i < problems.size(); ++i) {
    const std::string path = "problems[" + std::to_string(i) + "]";
    ProblemSpec spec;
    spec.difficulty.value =
        as_number(require(problems[i], "difficulty", path), path + ".difficulty");
    if (const auto it = problems[i].find("tier"); it != problems[i].end()) {
      const std::string tier = as_string(*it, path + ".tier");
      if (tier == "low") {
        spec.tier = DifficultyTier::Low;
      } else if (tier == "mid") {
        spec.tier = DifficultyTier::Mid;
      } else if (tier == "high") {
        spec.tier = DifficultyTier::High;
      } else {
        fail(path + ".tier", "expected low, mid or high");
      }
    }
    config.problems.push_back(spec);
  }

  if (const auto it = j.find("response_model"); it != j.end()) {
    config.response_model = parse_response_model(*it, "response_model");
  }
  if (const auto it = j.find("decision_rule"); it != j.end()) {
    config.decision_rule = parse_decision_rule(*it, "decision_rule");
  }
  if (const auto it = j.find("stimulus_rule"); it != j.end()) {
    config.stimulus_rule = parse_stimulus_rule(*it, "stimulus_rule");
  }
  if (const auto it = j.find("threshold_rule"); it != j.end()) {
    config.threshold_rule = parse_threshold_rule(*it, "threshold_rule");
  }
  if (const auto it = j.find("transition_model"); it != j.end()) {
    config.transition_model = parse_transition_model(*it, "transition_model");
  }
  if (const auto it = j.find("params"); it != j.end()) {
    config.params = parse_params(*it, "params");
  }
  if (const auto it = j.find("rounds"); it != j.end()) {
    config.rounds = as_int(*it, "rounds");
  }
  if (const auto it = j.find("runs"); it != j.end()) {
    config.runs = as_int(*it, "runs");
  }
  if (const auto it = j.find("seed"); it != j.end()) {
    if (!it->is_number_unsigned() && !it->is_number_integer()) {
      fail("seed", "expected an integer");
    }
    config.seed = it->get<std::uint64_t>();
  }
  if (const auto it = j.find("dynamic_events"); it != j.end()) {
    if (!it->is_array()) fail("dynamic_events", "expected an array");
    for (std::size_t e = 0; e < it->size(); ++e) {
      const std::string path = "dynamic_events[" + std::to_string(e) + "]";
      const json& entry = (*it)[e];
      TimedEvent timed;
      timed.at_round =
          as_int(require(entry, "at_round", path), path + ".at_round");
      timed.event = parse_event(require(entry, "event", path), path + ".event");
      config.dynamic_events.push_back(std::move(timed));
    }
  }

  validate_config(config);
  return config;
}

json config_to_json(const ScenarioConfig& config) {
  json j;
  j["agents"] = json::array();
  for (const AbilityProfile& profile : config.agents) {
    json entry;
    entry["base"] = profile.base.value;
    if (!profile.overrides.empty()) {
      json overrides = json::object();
      for (const auto& [problem, ability] : profile.overrides) {
        overrides[std::to_string(problem)] = ability.value;
      }
      entry["overrides"] = std::move(overrides);
    }
    j["agents"].push_back(std::move(entry));
  }
  j["problems"] = json::array();
  for (const ProblemSpec& spec : config.problems) {
    json entry;
    entry["difficulty"] = spec.difficulty.value;
    if (spec.tier != DifficultyTier::Mid) {
      entry["tier"] = tier_name(spec.tier);
    }
    j["problems"].push_back(std::move(entry));
  }
  j["response_model"] = response_model_to_json(config.response_model);
  j["decision_rule"] = decision_rule_to_json(config.decision_rule);
  j["stimulus_rule"] = stimulus_rule_to_json(config.stimulus_rule);
  j["threshold_rule"] = threshold_rule_to_json(config.threshold_rule);
  j["transition_model"] = transition_model_to_json(config.transition_model);
  const AllocationParams& p = config.params;
  json params;
  params["theta_min"] = p.theta_min;
  params["theta_max"] = p.theta_max;
  params["delta"] = p.delta;
  if (p.beta) params["beta"] = *p.beta;
  params["beta_prime"] = p.beta_prime;
  params["p_switch"] = p.p_switch;
  params["xi_learn"] = p.xi_learn;
  params["phi_forget"] = p.phi_forget;
  params["zeta"] = p.zeta;
  params["omega_group"] = p.omega_group;
  params["omega_individual"] = p.omega_individual;
  j["params"] = std::move(params);
  j["rounds"] = config.rounds;
  j["runs"] = config.runs;
  j["seed"] = config.seed;
  if (!config.dynamic_events.empty()) {
    j["dynamic_events"] = json::array();
    for (const TimedEvent& timed : config.dynamic_events) {
      json event;
      if (const auto* swap = std::get_if<SwapSpecializations>(&timed.event)) {
        event["type"] = "swap_specializations";
        event["permutation"] = swap->permutation;
      } else {
        const auto& set = std::get<SetDifficulty>(timed.event);
        event["type"] = "set_difficulty";
        event["problem"] = set.problem;
        event["difficulty"] = set.difficulty;
      }
      j["dynamic_events"].push_back(
          json{{"at_round", timed.at_round}, {"event", std::move(event)}});
    }
  }
  return j;
}

ScenarioConfig load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::ios_base::failure("cannot open config file: " + path);
  }
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw ConfigError("config", std::string("invalid JSON: ") + e.what());
  }
  if (j.is_object() && j.contains("config")) {
    return config_from_json(j["config"]);
  }
  return config_from_json(j);
}

}  // namespace colsim
