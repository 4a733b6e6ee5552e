#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "colsim/allocation.hpp"
#include "colsim/response.hpp"
#include "colsim/voting.hpp"

namespace colsim {

// Configuration problem: carries the path of the offending field.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string field, const std::string& message)
      : std::runtime_error(field + ": " + message), field_(std::move(field)) {}

  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

struct ProblemSpec {
  Difficulty difficulty;
  DifficultyTier tier = DifficultyTier::Mid;
};

// Reassigns specialization maps: agent i receives the overrides previously
// held by agent permutation[i]. The identity permutation is a no-op.
struct SwapSpecializations {
  std::vector<std::size_t> permutation;
};

// Replaces one problem's difficulty mid-run.
struct SetDifficulty {
  std::size_t problem = 0;
  double difficulty = 0.0;
};

using DynamicEvent = std::variant<SwapSpecializations, SetDifficulty>;

// Applied at the start of the given round (rounds are 1-based).
struct TimedEvent {
  int at_round = 1;
  DynamicEvent event;
};

struct ScenarioConfig {
  std::vector<AbilityProfile> agents;
  std::vector<ProblemSpec> problems;
  ResponseModel response_model = MonotoneLogistic{};
  DecisionRule decision_rule = Majority{};
  StimulusRule stimulus_rule = FullPerformance{};
  ThresholdRule threshold_rule = StandardDynamic{};
  TransitionModel transition_model = Sigmoid{};
  AllocationParams params;
  int rounds = 1;
  int runs = 1;
  std::uint64_t seed = 0;
  std::vector<TimedEvent> dynamic_events;
};

// Per-problem observations for one round (state captured after the round's
// updates).
struct ProblemRound {
  int n_agents = 0;
  int group_correct = 0;  // unserved problems score 0
  double stimulus = 0.0;
  double psi_group = 0.5;
};

struct AgentRound {
  std::optional<std::size_t> assignment;
  std::optional<bool> answered_correct;  // empty when the agent idled
};

struct RoundRecord {
  int run = 0;
  int round = 1;  // 1-based
  std::vector<ProblemRound> problems;
  std::vector<AgentRound> agents;
};

struct RunSummary {
  int run = 0;
  std::vector<double> problem_accuracy;   // mean group_correct per problem
  double aggregate_accuracy = 0.0;        // uniform mean over problems
  std::vector<double> mean_agents;        // mean n_j per problem
  double mean_assigned_total = 0.0;
  // Share of specialized agents' assigned rounds spent on a problem they are
  // specialized on; NaN when the scenario has no specialized agents. The
  // per-problem entries restrict to rounds spent on that problem.
  double approp_share = 0.0;
  std::vector<double> problem_approp_share;
};

struct SimulationResult {
  std::vector<RoundRecord> records;
  std::vector<RunSummary> summaries;
};

// Throws ConfigError for hard problems; returns human-readable warnings for
// legal-but-suspicious configurations (e.g. more problems than agents).
std::vector<std::string> validate_config(const ScenarioConfig& config);

// Runs all configured runs sequentially. Run r draws from the stream seeded
// with SplitMix64::split(config.seed, r). Each round proceeds through five
// phases: (1) quit draws for assigned agents then allocation attempts for all
// unassigned agents, both in agent index order; (2) answering and voting per
// problem in index order, agents in index order within a problem; (3) EMA
// updates (unserved problems record a miss); (4) threshold updates;
// (5) stimulus updates. Timed events apply at the start of their round.
// Configurations with a single problem skip phase (1) and keep every agent
// on problem 0 throughout.
SimulationResult run_scenario(const ScenarioConfig& config);

// run_scenario restricted to one-problem configurations; throws ConfigError
// when the config lists more than one problem.
SimulationResult single_problem_mode(const ScenarioConfig& config);

// Exposed for tests: executes one run with the stream of the given run id,
// identical to the corresponding slice of run_scenario's output.
SimulationResult run_single(const ScenarioConfig& config, int run_id);

// Rebuilds a run's summary from its records. Replays SwapSpecializations
// events so appropriateness follows the overrides active in each round.
// `run_records` must all belong to the same run, in round order.
RunSummary summarize(const ScenarioConfig& config,
                     std::span<const RoundRecord> run_records);

// Applies one event to the mutable per-run view (profiles + difficulties).
void apply_dynamic_event(std::vector<AbilityProfile>& profiles,
                         std::vector<double>& difficulties,
                         const DynamicEvent& event);

}  // namespace colsim
