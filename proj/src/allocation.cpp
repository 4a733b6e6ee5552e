#include "colsim/allocation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace colsim {

namespace {

double clamp_threshold(double value, const AllocationParams& params) {
  return std::clamp(value, params.theta_min, params.theta_max);
}

double floored(double psi) { return std::max(psi, kPerformanceFloor); }

}  // namespace

AllocationState AllocationState::initial(
    std::size_t agents, std::size_t problems, const ThresholdRule& rule,
    const AllocationParams& params, std::span<const AbilityProfile> profiles) {
  AllocationState state;
  state.stimuli.assign(problems, 0.0);
  state.assignment.assign(agents, std::nullopt);
  state.agents_on.assign(problems, 0);
  state.psi_group.assign(problems, 0.5);
  state.psi_individual.assign(agents, std::vector<double>(problems, 0.5));
  const double midpoint = 0.5 * (params.theta_min + params.theta_max);
  state.thresholds.assign(agents, std::vector<double>(problems, midpoint));
  if (const auto* fixed = std::get_if<StaticSpecialized>(&rule)) {
    const auto [approp, no_approp] = fixed->resolve(params.theta_max);
    for (std::size_t i = 0; i < agents; ++i) {
      for (std::size_t j = 0; j < problems; ++j) {
        state.thresholds[i][j] =
            profiles[i].specialized_on(j) ? approp : no_approp;
      }
    }
  }
  return state;
}

double transition_probability(const TransitionModel& model, double stimulus,
                              double threshold, const TransitionExtras& extras,
                              SplitMix64& rng) {
  if (stimulus <= 0.0) {
    // A problem with no urgency attracts nobody; NoisySigmoid still burns its
    // draws so the consumption count per test stays fixed.
    if (std::holds_alternative<NoisySigmoid>(model)) {
      rng.next_normal();
    }
    return 0.0;
  }
  const double s2 = stimulus * stimulus;
  const double t2 = threshold * threshold;
  if (const auto* mailman = std::get_if<MailmanSigmoid>(&model)) {
    const double d2 = extras.distance * extras.distance;
    return s2 / (s2 + mailman->mu_coeff * t2 + mailman->nu_coeff * d2);
  }
  const double base = s2 / (s2 + t2);
  if (std::holds_alternative<NoisySigmoid>(model)) {
    const double sigma = 1.0 / extras.alpha;
    return std::clamp(base * rng.next_lognormal(0.0, sigma), 0.0, 1.0);
  }
  return base;
}

std::optional<std::size_t> attempt_allocation(
    AllocationState& state, std::size_t agent, const TransitionModel& model,
    double alpha, std::span<const double> difficulties, SplitMix64& rng) {
  const std::size_t m = state.problem_count();
  std::vector<std::size_t> visit(m);
  std::iota(visit.begin(), visit.end(), std::size_t{0});
  rng.shuffle(visit);
  for (const std::size_t j : visit) {
    TransitionExtras extras;
    extras.alpha = alpha;
    extras.distance = std::abs(alpha - difficulties[j]);
    const double p = transition_probability(
        model, state.stimuli[j], state.thresholds[agent][j], extras, rng);
    if (rng.bernoulli(p)) {
      state.assignment[agent] = j;
      ++state.agents_on[j];
      return j;
    }
  }
  return std::nullopt;
}

bool maybe_quit(AllocationState& state, std::size_t agent, double p_switch,
                SplitMix64& rng) {
  if (!state.assignment[agent]) return true;
  if (rng.bernoulli(p_switch)) {
    --state.agents_on[*state.assignment[agent]];
    state.assignment[agent] = std::nullopt;
  }
  return !state.assignment[agent].has_value();
}

void update_group_ema(AllocationState& state, std::size_t problem,
                      double observed, double omega) {
  double& psi = state.psi_group[problem];
  psi = omega * observed + (1.0 - omega) * psi;
}

void update_individual_ema(AllocationState& state, std::size_t agent,
                           std::size_t problem, double observed, double omega) {
  double& psi = state.psi_individual[agent][problem];
  psi = omega * observed + (1.0 - omega) * psi;
}

void update_thresholds(AllocationState& state, const ThresholdRule& rule,
                       const AllocationParams& params,
                       const std::vector<std::vector<std::size_t>>& neighbors) {
  if (std::holds_alternative<StaticSpecialized>(rule)) return;
  const std::size_t m = state.problem_count();
  for (std::size_t i = 0; i < state.agent_count(); ++i) {
    if (!state.assignment[i]) continue;
    const std::size_t j = *state.assignment[i];
    if (std::holds_alternative<StandardDynamic>(rule)) {
      auto& row = state.thresholds[i];
      for (std::size_t k = 0; k < m; ++k) {
        const double step = (k == j) ? -params.xi_learn : params.phi_forget;
        row[k] = clamp_threshold(row[k] + step, params);
      }
    } else if (std::holds_alternative<PerformanceDynamic>(rule)) {
      auto& row = state.thresholds[i];
      const auto& psi = state.psi_individual[i];
      for (std::size_t k = 0; k < m; ++k) {
        double step;
        if (k == j) {
          step = -params.xi_learn * psi[j] * psi[j];
        } else {
          const double f = floored(psi[k]);
          step = params.phi_forget / (f * f);
        }
        row[k] = clamp_threshold(row[k] + step, params);
      }
    } else {
      const auto& mailman = std::get<MailmanDynamic>(rule);
      const std::vector<std::size_t> empty;
      const auto& near = neighbors.empty() ? empty : neighbors[j];
      mailman_threshold_update(state, i, j, near, mailman.xi_strong,
                               mailman.xi_weak, params.phi_forget,
                               params.theta_min, params.theta_max);
    }
  }
}

void update_stimuli(AllocationState& state, const StimulusRule& rule,
                    const AllocationParams& params,
                    std::span<const DifficultyTier> tiers) {
  const std::size_t m = state.problem_count();
  const double n = static_cast<double>(state.agent_count());
  const double beta = params.beta_for(m);
  std::vector<double> column;  // scratch for GeneralizedMeanScaled
  for (std::size_t j = 0; j < m; ++j) {
    const double share = static_cast<double>(state.agents_on[j]) / n;
    const double psi = state.psi_group[j];
    const double decayed = params.zeta * state.stimuli[j];
    double next;
    if (std::holds_alternative<StandardStimulus>(rule)) {
      next = state.stimuli[j] + params.delta - beta * share;
    } else if (std::holds_alternative<FullPerformance>(rule)) {
      next = decayed + params.delta - beta * share - params.beta_prime * psi;
    } else if (std::holds_alternative<SimplifiedPerformance>(rule)) {
      next = decayed + params.delta - params.beta_prime * psi;
    } else if (const auto* scaled = std::get_if<DifficultyScaled>(&rule)) {
      const DifficultyTier tier =
          j < tiers.size() ? tiers[j] : DifficultyTier::Mid;
      double delta_j = params.delta;
      double beta_j = beta;
      if (tier == DifficultyTier::High) {
        delta_j *= scaled->f_high;
        beta_j *= scaled->f_low;
      } else if (tier == DifficultyTier::Low) {
        delta_j *= scaled->f_low;
        beta_j *= scaled->f_high;
      }
      next = decayed + delta_j - beta_j * share - params.beta_prime * psi;
    } else if (const auto* mean_rule = std::get_if<GeneralizedMeanScaled>(&rule)) {
      column.clear();
      for (std::size_t i = 0; i < state.agent_count(); ++i) {
        column.push_back(state.psi_individual[i][j]);
      }
      const double g = generalized_mean(column, mean_rule->exponent);
      next = decayed + params.delta / floored(g) - beta * share * g -
             params.beta_prime * psi;
    } else if (std::holds_alternative<GroupPerformanceScaled>(rule)) {
      next = decayed + params.delta / floored(psi) - beta * share * psi -
             params.beta_prime * psi;
    } else {
      next = decayed + params.delta - beta * share -
             params.beta_prime * psi * psi;
    }
    state.stimuli[j] = std::max(0.0, next);
  }
}

double generalized_mean(std::span<const double> values, double p) {
  if (values.empty()) {
    throw std::domain_error("generalized_mean: empty input");
  }
  for (const double v : values) {
    if (!(v > 0.0)) {
      throw std::domain_error("generalized_mean: values must be positive");
    }
  }
  const double n = static_cast<double>(values.size());
  if (std::isinf(p)) {
    return p > 0.0 ? *std::max_element(values.begin(), values.end())
                   : *std::min_element(values.begin(), values.end());
  }
  if (p == 0.0) {
    double log_sum = 0.0;
    for (const double v : values) log_sum += std::log(v);
    return std::exp(log_sum / n);
  }
  double sum = 0.0;
  for (const double v : values) sum += std::pow(v, p);
  return std::pow(sum / n, 1.0 / p);
}

void mailman_threshold_update(AllocationState& state, std::size_t agent,
                              std::size_t problem,
                              std::span<const std::size_t> problem_neighbors,
                              double xi_strong, double xi_weak, double phi,
                              double theta_min, double theta_max) {
  if (!(xi_strong > xi_weak)) {
    throw std::invalid_argument(
        "mailman_threshold_update: xi_strong must exceed xi_weak");
  }
  auto& row = state.thresholds[agent];
  for (std::size_t k = 0; k < row.size(); ++k) {
    double step;
    if (k == problem) {
      step = -xi_strong;
    } else if (std::find(problem_neighbors.begin(), problem_neighbors.end(),
                         k) != problem_neighbors.end()) {
      step = -xi_weak;
    } else {
      step = phi;
    }
    row[k] = std::clamp(row[k] + step, theta_min, theta_max);
  }
}

std::vector<std::vector<std::size_t>> difficulty_neighbors(
    std::span<const double> difficulties) {
  const std::size_t m = difficulties.size();
  std::vector<std::vector<std::size_t>> neighbors(m);
  for (std::size_t j = 0; j < m; ++j) {
    for (std::size_t k = 0; k < m; ++k) {
      if (k == j) continue;
      const double gap = std::abs(difficulties[j] - difficulties[k]);
      if (gap <= 0.10 * std::max(difficulties[j], difficulties[k])) {
        neighbors[j].push_back(k);
      }
    }
  }
  return neighbors;
}

}  // namespace colsim
