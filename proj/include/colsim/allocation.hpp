#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <variant>
#include <vector>

#include "colsim/response.hpp"
#include "colsim/rng.hpp"

namespace colsim {

// Parameters of the threshold-based self-allocation model. `beta` defaults to
// m/2 (half the problem count) when left unset.
struct AllocationParams {
  double theta_min = 1.0;
  double theta_max = 100.0;
  double delta = 4.0;
  std::optional<double> beta;
  double beta_prime = 4.0;
  double p_switch = 0.5;
  double xi_learn = 2.0;
  double phi_forget = 0.5;
  double zeta = 0.98;
  double omega_group = 0.33;           // EMA weight, ~last 5 rounds dominate
  double omega_individual = 2.0 / 101.0;  // EMA weight over ~last 100 answers

  double beta_for(std::size_t problem_count) const {
    return beta ? *beta : 0.5 * static_cast<double>(problem_count);
  }
};

// EMA floor wherever a performance estimate appears in a denominator.
inline constexpr double kPerformanceFloor = 0.05;

// ---- Stimulus update rules (applied per problem, results floored at 0) ----

// S <- S + delta - beta * n_j / n. No decay, no performance feedback.
struct StandardStimulus {};

// S <- zeta S + delta - beta * n_j / n - beta' * psi_j.
struct FullPerformance {};

// S <- zeta S + delta - beta' * psi_j. Crowding term dropped.
struct SimplifiedPerformance {};

enum class DifficultyTier { Low, Mid, High };

// FullPerformance with per-tier scaling: delta gains f_high on high-tier and
// f_low on low-tier problems, beta gains f_low on high-tier and f_high on
// low-tier problems; mid-tier is unscaled.
struct DifficultyScaled {
  double f_low = 1.0;
  double f_high = 1.0;
};

// S <- zeta S + delta / g - beta * (n_j / n) * g - beta' * psi_j, where g is
// the generalized mean with this exponent of all agents' individual EMAs for
// the problem.
struct GeneralizedMeanScaled {
  double exponent = 1.0;
};

// S <- zeta S + delta / psi_j - beta * (n_j / n) * psi_j - beta' * psi_j.
struct GroupPerformanceScaled {};

// S <- zeta S + delta - beta * n_j / n - beta' * psi_j^2.
struct SquaredGroupPerformance {};

using StimulusRule =
    std::variant<StandardStimulus, FullPerformance, SimplifiedPerformance,
                 DifficultyScaled, GeneralizedMeanScaled,
                 GroupPerformanceScaled, SquaredGroupPerformance>;

// ---- Threshold update rules (applied per assigned agent, clamped) ----

// Fixed thresholds: theta_approp on the agent's specialization problems,
// theta_no_approp elsewhere; never updated. May be given as a ratio r, which
// resolves against theta_max as theta_approp = theta_max / (1 + r) and
// theta_no_approp = r * theta_max / (1 + r), so the two always sum to
// theta_max.
struct StaticSpecialized {
  double theta_approp = 25.0;
  double theta_no_approp = 75.0;
  std::optional<double> ratio;

  std::pair<double, double> resolve(double theta_max) const {
    if (ratio) {
      const double approp = theta_max / (1.0 + *ratio);
      return {approp, theta_max - approp};
    }
    return {theta_approp, theta_no_approp};
  }
};

// Assigned problem: theta -= xi_learn. All others: theta += phi_forget.
struct StandardDynamic {};

// Assigned problem: theta -= xi_learn * psi_ij^2. All others:
// theta += phi_forget / psi_ik^2 (EMA floored, capping the step).
struct PerformanceDynamic {};

// Assigned problem: theta -= xi_strong. Problems of similar difficulty:
// theta -= xi_weak. All others: theta += phi_forget.
struct MailmanDynamic {
  double xi_strong = 2.0;
  double xi_weak = 1.0;
};

using ThresholdRule = std::variant<StaticSpecialized, StandardDynamic,
                                   PerformanceDynamic, MailmanDynamic>;

// ---- Transition probability models ----

// Prob = S^2 / (S^2 + theta^2).
struct Sigmoid {};

// Sigmoid times a log-normal factor exp(N(0, 1/alpha)), clamped into [0, 1].
// Less able agents allocate more erratically.
struct NoisySigmoid {};

// Prob = S^2 / (S^2 + mu theta^2 + nu d^2) with d = |alpha_i - lambda_j|,
// biasing agents towards problems whose difficulty matches their ability.
struct MailmanSigmoid {
  double mu_coeff = 1.0;
  double nu_coeff = 1.0;
};

using TransitionModel = std::variant<Sigmoid, NoisySigmoid, MailmanSigmoid>;

// Agent-and-problem quantities the transition models read besides S and theta.
struct TransitionExtras {
  double alpha = 1.0;     // agent's base ability
  double distance = 0.0;  // |alpha_i - lambda_j|
};

// Mutable allocation state for one run.
struct AllocationState {
  std::vector<double> stimuli;                      // S_j
  std::vector<std::vector<double>> thresholds;      // theta[agent][problem]
  std::vector<std::optional<std::size_t>> assignment;
  std::vector<int> agents_on;                       // n_j
  std::vector<double> psi_group;                    // per-problem EMA
  std::vector<std::vector<double>> psi_individual;  // psi[agent][problem]

  std::size_t agent_count() const { return assignment.size(); }
  std::size_t problem_count() const { return stimuli.size(); }

  // Stimuli start at 0, EMAs at 1/2, dynamic thresholds at the midpoint
  // (theta_min + theta_max) / 2, static thresholds per specialization.
  static AllocationState initial(std::size_t agents, std::size_t problems,
                                 const ThresholdRule& rule,
                                 const AllocationParams& params,
                                 std::span<const AbilityProfile> profiles);
};

// Acceptance probability for one (agent, problem) test. NoisySigmoid draws
// its noise factor from `rng`; the other models leave the generator alone.
double transition_probability(const TransitionModel& model, double stimulus,
                              double threshold, const TransitionExtras& extras,
                              SplitMix64& rng);

// Visits all problems in a fresh uniformly-shuffled order and accepts each
// with its transition probability; first acceptance assigns the agent (state
// and n_j updated) and is returned. No acceptance leaves the agent idle.
std::optional<std::size_t> attempt_allocation(AllocationState& state,
                                              std::size_t agent,
                                              const TransitionModel& model,
                                              double alpha,
                                              std::span<const double> difficulties,
                                              SplitMix64& rng);

// One quit draw with probability p_switch; on success the agent leaves its
// problem. Returns whether the agent is unassigned afterwards.
bool maybe_quit(AllocationState& state, std::size_t agent, double p_switch,
                SplitMix64& rng);

// psi <- omega * observed + (1 - omega) * psi.
void update_group_ema(AllocationState& state, std::size_t problem,
                      double observed, double omega);
void update_individual_ema(AllocationState& state, std::size_t agent,
                           std::size_t problem, double observed, double omega);

// Applies the threshold rule for every assigned agent, in agent index order;
// all results are clamped into [theta_min, theta_max]. `neighbors` gives, per
// problem, the problems of similar difficulty (only MailmanDynamic reads it).
void update_thresholds(AllocationState& state, const ThresholdRule& rule,
                       const AllocationParams& params,
                       const std::vector<std::vector<std::size_t>>& neighbors);

// Applies the stimulus rule to every problem; results floored at 0. `tiers`
// supplies the per-problem difficulty tier for DifficultyScaled (Mid when
// empty).
void update_stimuli(AllocationState& state, const StimulusRule& rule,
                    const AllocationParams& params,
                    std::span<const DifficultyTier> tiers);

// Normalized power mean (sum x^p / n)^(1/p); p = 0 gives the geometric mean,
// p = -inf the minimum, p = +inf the maximum. Values must be positive.
double generalized_mean(std::span<const double> values, double p);

// The MailmanDynamic step for one assigned agent, exposed for direct use:
// current problem -xi_strong, its difficulty neighbors -xi_weak, everything
// else +phi; clamped into [theta_min, theta_max]. Requires
// xi_strong > xi_weak.
void mailman_threshold_update(AllocationState& state, std::size_t agent,
                              std::size_t problem,
                              std::span<const std::size_t> problem_neighbors,
                              double xi_strong, double xi_weak, double phi,
                              double theta_min, double theta_max);

// Problems whose difficulties lie within 10% of each other:
// k is a neighbor of j iff |lambda_j - lambda_k| <= 0.10 * max(lambda_j,
// lambda_k), j != k.
std::vector<std::vector<std::size_t>> difficulty_neighbors(
    std::span<const double> difficulties);

}  // namespace colsim
