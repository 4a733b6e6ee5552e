#include "colsim/engine.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace colsim {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

void validate_permutation(const std::vector<std::size_t>& perm,
                          std::size_t agent_count, const std::string& field) {
  if (perm.size() != agent_count) {
    throw ConfigError(field, "permutation size differs from agent count");
  }
  std::vector<bool> seen(agent_count, false);
  for (const std::size_t p : perm) {
    if (p >= agent_count || seen[p]) {
      throw ConfigError(field, "not a permutation of the agent indices");
    }
    seen[p] = true;
  }
}

double weight_for(const DecisionRule& rule, const AbilityProfile& profile,
                  double true_accuracy, double empirical_accuracy) {
  if (std::holds_alternative<AbilityWeighted>(rule)) {
    return profile.base.value;
  }
  if (const auto* optimal = std::get_if<OptimalWeighted>(&rule)) {
    const double p = optimal->source == WeightSource::TrueAccuracy
                         ? true_accuracy
                         : empirical_accuracy;
    return optimal_weight(p);
  }
  return 1.0;
}

struct RunContext {
  const ScenarioConfig& cfg;
  std::vector<AbilityProfile> profiles;  // mutable: swap events
  std::vector<double> difficulties;      // mutable: difficulty events
  std::vector<DifficultyTier> tiers;
  std::vector<std::vector<std::size_t>> neighbors;
  AllocationState state;
  SplitMix64 rng;
  bool single_problem;

  RunContext(const ScenarioConfig& config, int run_id)
      : cfg(config),
        profiles(config.agents),
        state(AllocationState::initial(config.agents.size(),
                                       config.problems.size(),
                                       config.threshold_rule, config.params,
                                       config.agents)),
        rng(SplitMix64::split(config.seed, static_cast<std::uint64_t>(run_id))),
        single_problem(config.problems.size() == 1) {
    difficulties.reserve(config.problems.size());
    tiers.reserve(config.problems.size());
    for (const ProblemSpec& p : config.problems) {
      difficulties.push_back(p.difficulty.value);
      tiers.push_back(p.tier);
    }
    neighbors = difficulty_neighbors(difficulties);
    if (single_problem) {
      for (std::size_t i = 0; i < state.agent_count(); ++i) {
        state.assignment[i] = 0;
      }
      state.agents_on[0] = static_cast<int>(state.agent_count());
    }
  }
};

void run_one(const ScenarioConfig& config, int run_id,
             std::vector<RoundRecord>& records) {
  RunContext ctx(config, run_id);
  const std::size_t n = ctx.state.agent_count();
  const std::size_t m = ctx.state.problem_count();

  std::vector<BallotEntry> ballots;
  std::vector<std::size_t> on_problem;
  std::vector<double> member_accuracy;

  for (int round = 1; round <= config.rounds; ++round) {
    for (const TimedEvent& timed : config.dynamic_events) {
      if (timed.at_round == round) {
        apply_dynamic_event(ctx.profiles, ctx.difficulties, timed.event);
        ctx.neighbors = difficulty_neighbors(ctx.difficulties);
      }
    }

    // Phase 1: quits, then allocation attempts for everyone unassigned.
    if (!ctx.single_problem) {
      for (std::size_t i = 0; i < n; ++i) {
        if (ctx.state.assignment[i]) {
          maybe_quit(ctx.state, i, config.params.p_switch, ctx.rng);
        }
      }
      for (std::size_t i = 0; i < n; ++i) {
        if (!ctx.state.assignment[i]) {
          attempt_allocation(ctx.state, i, config.transition_model,
                             ctx.profiles[i].base.value, ctx.difficulties,
                             ctx.rng);
        }
      }
    }

    RoundRecord record;
    record.run = run_id;
    record.round = round;
    record.problems.resize(m);
    record.agents.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      record.agents[i].assignment = ctx.state.assignment[i];
    }

    // Phase 2: answers and group votes, problem by problem.
    for (std::size_t j = 0; j < m; ++j) {
      on_problem.clear();
      for (std::size_t i = 0; i < n; ++i) {
        if (ctx.state.assignment[i] == j) on_problem.push_back(i);
      }
      ProblemRound& pr = record.problems[j];
      pr.n_agents = static_cast<int>(on_problem.size());
      if (on_problem.empty()) {
        pr.group_correct = 0;
        continue;
      }
      const Difficulty lambda{ctx.difficulties[j]};
      ballots.clear();
      if (const auto* imitation = std::get_if<Imitation>(&config.decision_rule)) {
        member_accuracy.clear();
        for (const std::size_t i : on_problem) {
          member_accuracy.push_back(effective_accuracy(
              config.response_model, ctx.profiles[i], j, lambda));
        }
        ballots = generate_imitation_answers(member_accuracy, imitation->chi,
                                             imitation->order, ctx.rng);
        for (BallotEntry& b : ballots) b.agent = on_problem[b.agent];
      } else {
        for (const std::size_t i : on_problem) {
          const double p = effective_accuracy(config.response_model,
                                              ctx.profiles[i], j, lambda);
          BallotEntry entry;
          entry.agent = i;
          entry.correct = sample_answer(ctx.rng, p);
          entry.weight = weight_for(config.decision_rule, ctx.profiles[i], p,
                                    ctx.state.psi_individual[i][j]);
          ballots.push_back(entry);
        }
      }
      const GroupVoteOutcome outcome =
          decide(config.decision_rule, ballots, ctx.rng);
      pr.group_correct = outcome.correct ? 1 : 0;
      for (const BallotEntry& b : ballots) {
        record.agents[b.agent].answered_correct = b.correct;
      }
    }

    // Phase 3: EMAs. Unserved problems record a miss; each answering agent
    // feeds its own correctness into its individual estimate.
    for (std::size_t j = 0; j < m; ++j) {
      update_group_ema(ctx.state, j,
                       static_cast<double>(record.problems[j].group_correct),
                       config.params.omega_group);
    }
    for (std::size_t i = 0; i < n; ++i) {
      const AgentRound& ar = record.agents[i];
      if (ar.assignment && ar.answered_correct) {
        update_individual_ema(ctx.state, i, *ar.assignment,
                              *ar.answered_correct ? 1.0 : 0.0,
                              config.params.omega_individual);
      }
    }

    // Phases 4 and 5.
    update_thresholds(ctx.state, config.threshold_rule, config.params,
                      ctx.neighbors);
    update_stimuli(ctx.state, config.stimulus_rule, config.params, ctx.tiers);

    for (std::size_t j = 0; j < m; ++j) {
      record.problems[j].stimulus = ctx.state.stimuli[j];
      record.problems[j].psi_group = ctx.state.psi_group[j];
    }
    records.push_back(std::move(record));
  }
}

}  // namespace

std::vector<std::string> validate_config(const ScenarioConfig& config) {
  if (config.agents.empty()) {
    throw ConfigError("agents", "must list at least one agent");
  }
  if (config.problems.empty()) {
    throw ConfigError("problems", "must list at least one problem");
  }
  const std::size_t n = config.agents.size();
  const std::size_t m = config.problems.size();
  for (std::size_t i = 0; i < n; ++i) {
    const AbilityProfile& a = config.agents[i];
    const std::string base = "agents[" + std::to_string(i) + "]";
    if (!(a.base.value > 0.0)) {
      throw ConfigError(base + ".base", "ability must be positive");
    }
    for (const auto& [j, ability] : a.overrides) {
      if (j >= m) {
        throw ConfigError(base + ".overrides",
                          "problem index " + std::to_string(j) +
                              " out of range");
      }
      if (!(ability.value > 0.0)) {
        throw ConfigError(base + ".overrides", "ability must be positive");
      }
    }
  }
  for (std::size_t j = 0; j < m; ++j) {
    if (config.problems[j].difficulty.value < 0.0) {
      throw ConfigError("problems[" + std::to_string(j) + "].difficulty",
                        "must be non-negative");
    }
  }
  if (config.rounds < 1) throw ConfigError("rounds", "must be at least 1");
  if (config.runs < 1) throw ConfigError("runs", "must be at least 1");

  const AllocationParams& p = config.params;
  if (!(p.theta_min > 0.0) || !(p.theta_max > p.theta_min)) {
    throw ConfigError("params.theta_min",
                      "need 0 < theta_min < theta_max");
  }
  if (p.p_switch < 0.0 || p.p_switch > 1.0) {
    throw ConfigError("params.p_switch", "must lie in [0, 1]");
  }
  if (p.zeta < 0.0 || p.zeta > 1.0) {
    throw ConfigError("params.zeta", "must lie in [0, 1]");
  }
  for (const auto& [name, omega] :
       {std::pair<const char*, double>{"params.omega_group", p.omega_group},
        {"params.omega_individual", p.omega_individual}}) {
    if (!(omega > 0.0) || omega > 1.0) {
      throw ConfigError(name, "must lie in (0, 1]");
    }
  }
  if (p.beta && *p.beta < 0.0) {
    throw ConfigError("params.beta", "must be non-negative");
  }

  if (const auto* imitation = std::get_if<Imitation>(&config.decision_rule)) {
    if (imitation->chi < 0.0 || imitation->chi > 1.0) {
      throw ConfigError("decision_rule.chi", "must lie in [0, 1]");
    }
  }
  if (const auto* three = std::get_if<ThreeParamLogistic>(&config.response_model)) {
    if (three->c < 0.0 || three->c >= 1.0) {
      throw ConfigError("response_model.c", "must lie in [0, 1)");
    }
  }
  if (const auto* peaked = std::get_if<SinglePeaked>(&config.response_model)) {
    if (!(peaked->plateau > 0.0) || peaked->plateau > 1.0) {
      throw ConfigError("response_model.plateau", "must lie in (0, 1]");
    }
  }
  if (const auto* fixed = std::get_if<StaticSpecialized>(&config.threshold_rule)) {
    if (fixed->ratio) {
      if (!(*fixed->ratio > 0.0)) {
        throw ConfigError("threshold_rule.ratio", "must be positive");
      }
    } else {
      for (const auto& [name, value] :
           {std::pair<const char*, double>{"threshold_rule.theta_approp",
                                           fixed->theta_approp},
            {"threshold_rule.theta_no_approp", fixed->theta_no_approp}}) {
        if (value < p.theta_min || value > p.theta_max) {
          throw ConfigError(name, "must lie in [theta_min, theta_max]");
        }
      }
    }
  }
  if (const auto* mailman = std::get_if<MailmanDynamic>(&config.threshold_rule)) {
    if (!(mailman->xi_strong > mailman->xi_weak) || mailman->xi_weak < 0.0) {
      throw ConfigError("threshold_rule.xi_strong",
                        "need xi_strong > xi_weak >= 0");
    }
  }
  for (std::size_t e = 0; e < config.dynamic_events.size(); ++e) {
    const TimedEvent& timed = config.dynamic_events[e];
    const std::string base = "dynamic_events[" + std::to_string(e) + "]";
    if (timed.at_round < 1 || timed.at_round > config.rounds) {
      throw ConfigError(base + ".at_round", "outside [1, rounds]");
    }
    if (const auto* swap = std::get_if<SwapSpecializations>(&timed.event)) {
      validate_permutation(swap->permutation, n, base + ".permutation");
    } else {
      const auto& set = std::get<SetDifficulty>(timed.event);
      if (set.problem >= m) {
        throw ConfigError(base + ".problem", "out of range");
      }
      if (set.difficulty < 0.0) {
        throw ConfigError(base + ".difficulty", "must be non-negative");
      }
    }
  }

  std::vector<std::string> warnings;
  if (m > n) {
    warnings.push_back("more problems (" + std::to_string(m) +
                       ") than agents (" + std::to_string(n) +
                       "); some problems must go unserved");
  }
  return warnings;
}

SimulationResult run_scenario(const ScenarioConfig& config) {
  validate_config(config);
  SimulationResult result;
  result.records.reserve(static_cast<std::size_t>(config.runs) *
                         static_cast<std::size_t>(config.rounds));
  for (int run = 0; run < config.runs; ++run) {
    const std::size_t first = result.records.size();
    run_one(config, run, result.records);
    const std::span<const RoundRecord> slice(result.records.data() + first,
                                             result.records.size() - first);
    RunSummary summary = summarize(config, slice);
    summary.run = run;
    result.summaries.push_back(std::move(summary));
  }
  return result;
}

SimulationResult single_problem_mode(const ScenarioConfig& config) {
  if (config.problems.size() != 1) {
    throw ConfigError("problems", "single-problem mode needs exactly one");
  }
  return run_scenario(config);
}

SimulationResult run_single(const ScenarioConfig& config, int run_id) {
  validate_config(config);
  SimulationResult result;
  run_one(config, run_id, result.records);
  RunSummary summary = summarize(config, result.records);
  summary.run = run_id;
  result.summaries.push_back(std::move(summary));
  return result;
}

RunSummary summarize(const ScenarioConfig& config,
                     std::span<const RoundRecord> run_records) {
  const std::size_t m = config.problems.size();
  const std::size_t n = config.agents.size();
  RunSummary summary;
  summary.problem_accuracy.assign(m, 0.0);
  summary.mean_agents.assign(m, 0.0);
  summary.problem_approp_share.assign(m, kNaN);
  if (run_records.empty()) {
    summary.aggregate_accuracy = kNaN;
    summary.approp_share = kNaN;
    return summary;
  }
  summary.run = run_records.front().run;

  std::vector<AbilityProfile> profiles = config.agents;
  std::vector<double> difficulties;  // replay target, values unused here
  difficulties.reserve(m);
  for (const ProblemSpec& p : config.problems) {
    difficulties.push_back(p.difficulty.value);
  }

  long long specialized_rounds = 0;
  long long specialized_approp = 0;
  std::vector<long long> on_problem(m, 0);
  std::vector<long long> on_problem_approp(m, 0);
  std::vector<long long> specialized_on_problem(m, 0);
  double total_assigned = 0.0;

  for (const RoundRecord& record : run_records) {
    for (const TimedEvent& timed : config.dynamic_events) {
      if (timed.at_round == record.round) {
        apply_dynamic_event(profiles, difficulties, timed.event);
      }
    }
    for (std::size_t j = 0; j < m; ++j) {
      summary.problem_accuracy[j] += record.problems[j].group_correct;
      summary.mean_agents[j] += record.problems[j].n_agents;
      total_assigned += record.problems[j].n_agents;
    }
    for (std::size_t i = 0; i < n; ++i) {
      const auto& assignment = record.agents[i].assignment;
      if (!assignment) continue;
      ++on_problem[*assignment];
      if (!profiles[i].specialized()) continue;
      ++specialized_on_problem[*assignment];
      ++specialized_rounds;
      if (profiles[i].specialized_on(*assignment)) {
        ++specialized_approp;
        ++on_problem_approp[*assignment];
      }
    }
  }

  const double rounds = static_cast<double>(run_records.size());
  double accuracy_sum = 0.0;
  for (std::size_t j = 0; j < m; ++j) {
    summary.problem_accuracy[j] /= rounds;
    summary.mean_agents[j] /= rounds;
    accuracy_sum += summary.problem_accuracy[j];
    if (specialized_on_problem[j] > 0) {
      summary.problem_approp_share[j] =
          static_cast<double>(on_problem_approp[j]) /
          static_cast<double>(specialized_on_problem[j]);
    }
  }
  summary.aggregate_accuracy = accuracy_sum / static_cast<double>(m);
  summary.mean_assigned_total = total_assigned / rounds;
  summary.approp_share =
      specialized_rounds > 0
          ? static_cast<double>(specialized_approp) /
                static_cast<double>(specialized_rounds)
          : kNaN;
  return summary;
}

void apply_dynamic_event(std::vector<AbilityProfile>& profiles,
                         std::vector<double>& difficulties,
                         const DynamicEvent& event) {
  if (const auto* swap = std::get_if<SwapSpecializations>(&event)) {
    validate_permutation(swap->permutation, profiles.size(),
                         "dynamic_events.permutation");
    std::vector<std::map<std::size_t, Ability>> reordered;
    reordered.reserve(profiles.size());
    for (std::size_t i = 0; i < profiles.size(); ++i) {
      reordered.push_back(profiles[swap->permutation[i]].overrides);
    }
    for (std::size_t i = 0; i < profiles.size(); ++i) {
      profiles[i].overrides = std::move(reordered[i]);
    }
  } else {
    const auto& set = std::get<SetDifficulty>(event);
    if (set.problem >= difficulties.size()) {
      throw ConfigError("dynamic_events.problem", "out of range");
    }
    difficulties[set.problem] = set.difficulty;
  }
}

}  // namespace colsim
