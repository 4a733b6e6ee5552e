// Acceptance gate for the artifact: ten checks covering the closed-form
// oracles, the preset accuracy and allocation targets, and the core engine
// properties. Each check prints exactly one [PASS]/[FAIL] line with its
// measured values and wall time; the process exits nonzero if any check
// fails or exceeds its time budget. All tolerances are pinned here.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdint>
#include <cstdio>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "colsim/allocation.hpp"
#include "colsim/engine.hpp"
#include "colsim/experiments.hpp"
#include "colsim/response.hpp"
#include "colsim/rng.hpp"
#include "colsim/voting.hpp"

using namespace colsim;

namespace {

constexpr std::uint64_t kSeed = 42;

std::string text(const char* format, ...) {
  char buffer[512];
  va_list args;
  va_start(args, format);
  std::vsnprintf(buffer, sizeof buffer, format, args);
  va_end(args);
  return buffer;
}

struct Outcome {
  bool ok = true;
  std::string detail;

  void require(bool condition, const std::string& on_failure) {
    if (!condition) {
      ok = false;
      if (!detail.empty()) detail += "; ";
      detail += on_failure;
    }
  }
};

std::optional<double> find_metric(const PresetReport& report,
                                  const std::string& label) {
  for (const MetricRow& row : report.metrics) {
    if (row.label == label) return row.value;
  }
  return std::nullopt;
}

// Looks the metric up and records a failure for missing labels, so a renamed
// metric cannot silently pass.
double metric(Outcome& outcome, const PresetReport& report,
              const std::string& label) {
  const std::optional<double> value = find_metric(report, label);
  if (!value) {
    outcome.require(false, "missing metric " + label);
    return std::numeric_limits<double>::quiet_NaN();
  }
  return *value;
}

bool within(double measured, double target, double tolerance) {
  return std::abs(measured - target) <= tolerance;
}

// ---- criterion 1: even/odd parity and enumeration agreement ----

Outcome criterion_parity() {
  Outcome outcome;
  const double ps[] = {0.51, 0.6192, 0.7689, 0.9};
  double max_dev = 0.0;
  for (int n = 1; n <= 6; ++n) {
    for (const double p : ps) {
      const double odd = analytic_majority_accuracy(2 * n - 1, p);
      const double even = analytic_majority_accuracy(2 * n, p);
      max_dev = std::max(max_dev, std::abs(even - odd));
      for (const int size : {2 * n - 1, 2 * n}) {
        const std::vector<double> acc(static_cast<std::size_t>(size), p);
        const std::vector<double> unit(static_cast<std::size_t>(size), 1.0);
        const double exact = enumerate_group_accuracy(acc, unit);
        max_dev = std::max(
            max_dev, std::abs(exact - analytic_majority_accuracy(size, p)));
      }
    }
  }
  outcome.require(max_dev <= 1e-12, text("max deviation %.3e", max_dev));
  outcome.detail = text("max dev %.1e", max_dev);
  return outcome;
}

// ---- criterion 2: voting rules on graded abilities ----

Outcome criterion_voting_comparison() {
  Outcome outcome;
  const PresetReport report = run_preset("sec5_5_empirical_weights", kSeed);
  const double maj = metric(outcome, report, "accuracy@majority");
  const double ow = metric(outcome, report, "accuracy@ow_true");
  const double emp = metric(outcome, report, "accuracy@ow_empirical");
  outcome.require(within(maj, 0.681, 0.015), text("majority %.4f", maj));
  outcome.require(within(ow, 0.731, 0.015), text("true-weighted %.4f", ow));
  outcome.require(within(emp, 0.728, 0.015),
                  text("empirically weighted %.4f", emp));
  outcome.detail = text("maj %.3f, ow %.3f, emp %.3f", maj, ow, emp);
  return outcome;
}

// ---- criterion 3: weighted vote immune to added weak agents ----

Outcome criterion_weak_agent_dilution() {
  Outcome outcome;
  const PresetReport report = run_preset("fig5_2_bad_agents", kSeed);
  double max_dev = 0.0;
  for (int k = 0; k <= 8; ++k) {
    const double ow =
        metric(outcome, report, "bad5_ow_k" + std::to_string(k));
    if (!within(ow, 0.769, 0.015)) {
      outcome.require(false, text("weighted accuracy %.4f at k=%d", ow, k));
    }
    max_dev = std::max(max_dev, std::abs(ow - 0.769));
  }
  const double maj0 = metric(outcome, report, "bad5_majority_k0");
  const double maj8 = metric(outcome, report, "bad5_majority_k8");
  outcome.require(maj0 - maj8 >= 0.05,
                  text("majority drop %.4f < 0.05", maj0 - maj8));
  outcome.detail =
      text("weighted dev <= %.3f, majority drop %.3f", max_dev, maj0 - maj8);
  return outcome;
}

// ---- criterion 4: static thresholds and the specialization ratio ----

Outcome criterion_static_allocation() {
  Outcome outcome;
  const PresetReport report = run_preset("fig5_4_static_ratio", kSeed);
  const double r1 = metric(outcome, report, "approp_share@ratio=1");
  const double r2 = metric(outcome, report, "approp_share@ratio=2");
  const double r3 = metric(outcome, report, "approp_share@ratio=3");
  const double r5 = metric(outcome, report, "approp_share@ratio=5");
  outcome.require(within(r3, 0.80, 0.05), text("share@3 %.4f", r3));
  outcome.require(within(r1, 0.50, 0.03), text("share@1 %.4f", r1));
  outcome.require(r1 < r2 && r2 < r3 && r3 < r5,
                  text("not monotone: %.3f %.3f %.3f %.3f", r1, r2, r3, r5));
  outcome.detail = text("shares %.3f %.3f %.3f %.3f", r1, r2, r3, r5);
  return outcome;
}

// ---- criterion 5: dynamic threshold variants (a)-(d) ----

Outcome criterion_dynamic_allocation() {
  Outcome outcome;
  const PresetReport report = run_preset("fig5_5_alloc_cases_abcd", kSeed);
  const double a = metric(outcome, report, "approp_share@case_a");
  const double b = metric(outcome, report, "approp_share@case_b");
  const double c = metric(outcome, report, "approp_share@case_c");
  const double d = metric(outcome, report, "approp_share@case_d");
  outcome.require(within(a, 0.50, 0.05), text("case a %.4f", a));
  outcome.require(within(b, 0.70, 0.05), text("case b %.4f", b));
  outcome.require(c > b + 0.02, text("case c %.4f not above b %.4f + 0.02", c, b));
  outcome.require(d > b, text("case d %.4f not above b %.4f", d, b));
  outcome.detail = text("shares a %.3f, b %.3f, c %.3f, d %.3f", a, b, c, d);
  return outcome;
}

// ---- criterion 6: re-adaptation after swapped specializations ----

Outcome criterion_swap_readaptation() {
  Outcome outcome;
  const PresetReport report = run_preset("fig5_6_dynamic_swap", kSeed);
  const double s0 = metric(outcome, report, "agent0_final_500_share");
  const double s1 = metric(outcome, report, "agent1_final_500_share");
  outcome.require(s0 > 0.6, text("agent 0 final share %.4f", s0));
  outcome.require(s1 > 0.6, text("agent 1 final share %.4f", s1));
  outcome.detail = text("final shares %.3f, %.3f", s0, s1);
  return outcome;
}

// ---- criterion 7: imitation endpoints and monotone decay ----

Outcome criterion_imitation() {
  Outcome outcome;
  const PresetReport random = run_preset("fig5_9_imitation_random", kSeed);
  const double full_copy = metric(outcome, random, "accuracy@chi=1");
  outcome.require(within(full_copy, 0.584, 0.015),
                  text("random-order full copying %.4f", full_copy));

  const char* chis[] = {"0", "0.25", "0.5", "0.75", "1"};
  double previous = std::numeric_limits<double>::infinity();
  for (const char* chi : chis) {
    const double acc =
        metric(outcome, random, std::string("accuracy@chi=") + chi);
    // monotone decrease, with a pinned slack for Monte Carlo noise
    outcome.require(acc <= previous + 0.005,
                    text("accuracy rose to %.4f at chi=%s", acc, chi));
    previous = acc;
  }

  const PresetReport best = run_preset("fig5_10_imitation_best", kSeed);
  const double best_copy = metric(outcome, best, "accuracy@ladder_chi1");
  outcome.require(within(best_copy, 0.693, 0.015),
                  text("best-first full copying %.4f", best_copy));
  outcome.detail =
      text("random %.3f, best-first %.3f", full_copy, best_copy);
  return outcome;
}

// ---- criterion 8: enumeration lies inside the analytic bounds ----

Outcome criterion_bound_containment() {
  Outcome outcome;
  SplitMix64 rng(20260823);
  const int sizes[] = {3, 5, 7};
  double worst_slack = 0.0;
  for (int group = 0; group < 200; ++group) {
    const int n = sizes[group % 3];
    std::vector<double> accuracies;
    for (int i = 0; i < n; ++i) {
      accuracies.push_back(0.5 + 0.45 * rng.next_double());
    }
    std::sort(accuracies.begin(), accuracies.end());
    const auto [lower, upper] = majority_accuracy_bounds(accuracies);
    const std::vector<double> unit(accuracies.size(), 1.0);
    const double exact = enumerate_group_accuracy(accuracies, unit);
    if (exact < lower - 1e-9 || exact > upper + 1e-9) {
      outcome.require(false, text("group %d: %.6f outside [%.6f, %.6f]",
                                  group, exact, lower, upper));
    }
    worst_slack = std::max({worst_slack, lower - exact, exact - upper});
  }
  outcome.detail = text("200 groups, worst slack %.1e", worst_slack);
  return outcome;
}

// ---- criterion 9: library property suite ----

void check_response_shape(Outcome& outcome) {
  const MonotoneLogistic model;
  double previous = 0.0;
  for (double alpha = 0.25; alpha <= 64.0; alpha *= 2.0) {
    const double p = accuracy(model, Ability{alpha}, Difficulty{5.0});
    outcome.require(p > previous, "accuracy not increasing in ability");
    outcome.require(p >= 0.5 && p <= 1.0, "accuracy outside [1/2, 1]");
    previous = p;
  }
  previous = 1.0;
  for (double lambda = 0.5; lambda <= 64.0; lambda *= 2.0) {
    const double p = accuracy(model, Ability{5.0}, Difficulty{lambda});
    outcome.require(p < previous, "accuracy not decreasing in difficulty");
    previous = p;
  }
  outcome.require(
      accuracy(model, Ability{1e9}, Difficulty{5.0}) > 1.0 - 1e-6,
      "high-ability asymptote misses 1");
  outcome.require(
      accuracy(model, Ability{5.0}, Difficulty{1e9}) < 0.5 + 1e-6,
      "high-difficulty asymptote misses 1/2");
}

void check_ema_closed_form(Outcome& outcome) {
  const AllocationParams params;
  const std::vector<AbilityProfile> profiles{AbilityProfile{Ability{1.0}, {}}};
  AllocationState state =
      AllocationState::initial(1, 1, StandardDynamic{}, params, profiles);
  const double omega_g = params.omega_group;
  const double omega_i = params.omega_individual;
  double max_dev = 0.0;
  for (int k = 1; k <= 40; ++k) {
    update_group_ema(state, 0, 1.0, omega_g);
    update_individual_ema(state, 0, 0, 0.0, omega_i);
    const double group_expected = 1.0 - 0.5 * std::pow(1.0 - omega_g, k);
    const double individual_expected = 0.5 * std::pow(1.0 - omega_i, k);
    max_dev = std::max(max_dev, std::abs(state.psi_group[0] - group_expected));
    max_dev = std::max(
        max_dev, std::abs(state.psi_individual[0][0] - individual_expected));
  }
  outcome.require(max_dev <= 1e-12,
                  text("ema deviates from closed form by %.1e", max_dev));
}

void check_threshold_clamping(Outcome& outcome) {
  SplitMix64 rng(99);
  AllocationParams params;
  // harsh updates so both clamp edges are actually reached
  params.xi_learn = 1e6;
  params.phi_forget = 1e6;
  const std::vector<AbilityProfile> profiles(3,
                                             AbilityProfile{Ability{5.0}, {}});
  const std::vector<std::vector<std::size_t>> neighbors(2);
  const ThresholdRule rules[] = {ThresholdRule{StandardDynamic{}},
                                 ThresholdRule{PerformanceDynamic{}}};
  for (int iter = 0; iter < 500; ++iter) {
    AllocationState state = AllocationState::initial(
        3, 2, rules[iter % 2], params, profiles);
    for (std::size_t j = 0; j < 2; ++j) {
      state.stimuli[j] = 200.0 * rng.next_double();
      state.psi_group[j] = rng.next_double();
    }
    for (std::size_t i = 0; i < 3; ++i) {
      const auto j = static_cast<std::size_t>(rng.next_below(2));
      state.assignment[i] = j;
      state.agents_on[j] += 1;
      for (std::size_t p = 0; p < 2; ++p) {
        state.thresholds[i][p] =
            params.theta_min +
            (params.theta_max - params.theta_min) * rng.next_double();
        state.psi_individual[i][p] = rng.next_double();
      }
    }
    update_thresholds(state, rules[iter % 2], params, neighbors);
    for (std::size_t i = 0; i < 3; ++i) {
      for (std::size_t p = 0; p < 2; ++p) {
        const double theta = state.thresholds[i][p];
        if (theta < params.theta_min || theta > params.theta_max) {
          outcome.require(false, text("threshold %.3f escaped the clamp", theta));
          return;
        }
      }
    }
  }
}

void check_generalized_mean_limits(Outcome& outcome) {
  SplitMix64 rng(7);
  const double inf = std::numeric_limits<double>::infinity();
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<double> values;
    const auto size = 1 + rng.next_below(6);
    double low = inf;
    double high = 0.0;
    double sum = 0.0;
    double log_sum = 0.0;
    for (std::uint64_t i = 0; i < size; ++i) {
      const double v = 0.1 + 9.9 * rng.next_double();
      values.push_back(v);
      low = std::min(low, v);
      high = std::max(high, v);
      sum += v;
      log_sum += std::log(v);
    }
    const double n = static_cast<double>(size);
    outcome.require(std::abs(generalized_mean(values, inf) - high) <= 1e-12,
                    "p=+inf is not the maximum");
    outcome.require(std::abs(generalized_mean(values, -inf) - low) <= 1e-12,
                    "p=-inf is not the minimum");
    outcome.require(
        std::abs(generalized_mean(values, 1.0) - sum / n) <= 1e-12,
        "p=1 is not the arithmetic mean");
    outcome.require(
        std::abs(generalized_mean(values, 0.0) - std::exp(log_sum / n)) <=
            1e-9,
        "p=0 is not the geometric mean");
    const double p_grid[] = {-inf, -2.0, 0.0, 1.0, 4.0, inf};
    double previous = -inf;
    for (const double p : p_grid) {
      const double m = generalized_mean(values, p);
      outcome.require(m >= previous - 1e-12, "power mean not monotone in p");
      previous = m;
    }
  }
}

void check_dwell_time(Outcome& outcome) {
  const AllocationParams params;
  const std::vector<AbilityProfile> profiles{AbilityProfile{Ability{5.0}, {}}};
  AllocationState state =
      AllocationState::initial(1, 1, StandardDynamic{}, params, profiles);
  // overwhelming stimulus, so every allocation attempt succeeds and the
  // dwell length is governed purely by the quit draw
  state.stimuli[0] = 1e9;
  const std::vector<double> difficulties{5.0};
  SplitMix64 rng(4242);
  const int trials = 20000;
  long long total_rounds = 0;
  for (int trial = 0; trial < trials; ++trial) {
    if (!state.assignment[0].has_value()) {
      attempt_allocation(state, 0, Sigmoid{}, 5.0, difficulties, rng);
      if (!state.assignment[0].has_value()) {
        outcome.require(false, "allocation failed under extreme stimulus");
        return;
      }
    }
    int dwell = 1;
    while (!maybe_quit(state, 0, 0.5, rng)) ++dwell;
    total_rounds += dwell;
  }
  const double mean_dwell =
      static_cast<double>(total_rounds) / static_cast<double>(trials);
  outcome.require(within(mean_dwell, 2.0, 0.1),
                  text("mean dwell %.4f outside 2.0 +/- 5%%", mean_dwell));
}

void check_bit_identical_reruns(Outcome& outcome) {
  const Preset* preset = find_preset("fig5_6_dynamic_swap");
  if (preset == nullptr) {
    outcome.require(false, "swap preset missing");
    return;
  }
  ScenarioConfig config = preset->base_config();
  config.runs = 2;
  config.rounds = 300;
  // keep the swap event inside the shortened horizon
  for (TimedEvent& event : config.dynamic_events) event.at_round = 150;
  // second config exercises the noisy transition model
  ScenarioConfig noisy = config;
  noisy.transition_model = NoisySigmoid{};
  for (const ScenarioConfig* candidate : {&config, &noisy}) {
    const SimulationResult first = run_scenario(*candidate);
    const SimulationResult second = run_scenario(*candidate);
    if (first.records.size() != second.records.size()) {
      outcome.require(false, "rerun changed the record count");
      return;
    }
    for (std::size_t k = 0; k < first.records.size(); ++k) {
      const RoundRecord& a = first.records[k];
      const RoundRecord& b = second.records[k];
      bool same = a.run == b.run && a.round == b.round;
      for (std::size_t j = 0; same && j < a.problems.size(); ++j) {
        same = a.problems[j].n_agents == b.problems[j].n_agents &&
               a.problems[j].group_correct == b.problems[j].group_correct &&
               a.problems[j].stimulus == b.problems[j].stimulus &&
               a.problems[j].psi_group == b.problems[j].psi_group;
      }
      for (std::size_t i = 0; same && i < a.agents.size(); ++i) {
        same = a.agents[i].assignment == b.agents[i].assignment &&
               a.agents[i].answered_correct == b.agents[i].answered_correct;
      }
      if (!same) {
        outcome.require(false, text("rerun diverged at record %zu", k));
        return;
      }
    }
  }
}

Outcome criterion_properties() {
  Outcome outcome;
  check_response_shape(outcome);
  check_ema_closed_form(outcome);
  check_threshold_clamping(outcome);
  check_generalized_mean_limits(outcome);
  check_dwell_time(outcome);
  check_bit_identical_reruns(outcome);
  if (outcome.ok) {
    outcome.detail =
        "response shape, ema, clamping, power-mean limits, dwell, reruns";
  }
  return outcome;
}

// ---- criterion 10: allocation shape across difficulty tiers ----

Outcome criterion_difficulty_shapes() {
  Outcome outcome;
  const PresetReport shifted = run_preset("fig5_7_difficulty_scaled", kSeed);
  const double easy = metric(outcome, shifted, "agents_easy@case_d");
  const double hard = metric(outcome, shifted, "agents_hard@case_d");
  outcome.require(hard - easy >= 1.0,
                  text("shift %.4f agents < 1.0", hard - easy));

  const PresetReport uniform = run_preset("fig5_8_uniformize_cases", kSeed);
  const double spread = metric(outcome, uniform, "accuracy_spread@case_f");
  outcome.require(spread <= 0.05, text("accuracy spread %.4f > 0.05", spread));
  outcome.detail = text("shift %.2f agents, spread %.3f", hard - easy, spread);
  return outcome;
}

struct Criterion {
  int id;
  const char* name;
  Outcome (*run)();
  double budget_seconds;
};

}  // namespace

int main() {
  const Criterion criteria[] = {
      {1, "even/odd parity and enumeration agreement", criterion_parity, 1.0},
      {2, "voting rules on graded abilities", criterion_voting_comparison,
       10.0},
      {3, "weighted vote immune to weak-agent dilution",
       criterion_weak_agent_dilution, 20.0},
      {4, "static thresholds track the specialization ratio",
       criterion_static_allocation, 10.0},
      {5, "dynamic threshold variants order correctly",
       criterion_dynamic_allocation, 30.0},
      {6, "agents re-adapt after swapped specializations",
       criterion_swap_readaptation, 5.0},
      {7, "imitation endpoints and monotone decay", criterion_imitation, 10.0},
      {8, "enumeration lies inside the analytic bounds",
       criterion_bound_containment, 5.0},
      {9, "library property suite", criterion_properties, 30.0},
      {10, "difficulty-tier allocation shapes", criterion_difficulty_shapes,
       20.0},
  };

  int failures = 0;
  for (const Criterion& criterion : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome outcome = criterion.run();
    const double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
            .count();
    if (elapsed > criterion.budget_seconds) {
      outcome.require(false, text("over budget: %.2f s", elapsed));
    }
    std::printf("[%s] criterion %d: %s (%s) [%.2f s, budget %.0f s]\n",
                outcome.ok ? "PASS" : "FAIL", criterion.id, criterion.name,
                outcome.detail.c_str(), elapsed, criterion.budget_seconds);
    if (!outcome.ok) ++failures;
  }
  return failures == 0 ? 0 : 1;
}
