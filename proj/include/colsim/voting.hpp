#pragma once

#include <cstddef>
#include <span>
#include <utility>
#include <variant>
#include <vector>

#include "colsim/rng.hpp"

namespace colsim {

// One agent's contribution to a group vote on a binary problem.
struct BallotEntry {
  std::size_t agent = 0;
  bool correct = false;
  double weight = 1.0;
};

// Every ballot counts once.
struct Majority {};

// Weight = the agent's base ability (not the specialization override).
struct AbilityWeighted {};

enum class WeightSource { TrueAccuracy, EmpiricalAccuracy };

// Weight = log(p / (1 - p)). TrueAccuracy uses the response model's value,
// EmpiricalAccuracy the agent's running performance estimate.
struct OptimalWeighted {
  WeightSource source = WeightSource::TrueAccuracy;
};

enum class ImitationOrder { RandomOrder, BestFirst };

// Imitation shapes answer *generation* (see generate_imitation_answers), not
// the aggregation itself: the resulting ballots are combined like Majority.
struct Imitation {
  double chi = 0.0;
  ImitationOrder order = ImitationOrder::RandomOrder;
};

using DecisionRule =
    std::variant<Majority, AbilityWeighted, OptimalWeighted, Imitation>;

struct GroupVoteOutcome {
  bool correct = false;
  bool tie_broken = false;
  double margin = 0.0;  // weighted correct minus weighted incorrect
};

// Weighted sums within this distance of each other count as a tie.
inline constexpr double kTieTolerance = 1e-12;

// Accuracy clamp for the optimal weight's log-odds.
inline constexpr double kWeightEpsilon = 1e-6;

// Combines ballots into a group answer. Majority and Imitation count each
// ballot once; the weighted rules use the weights carried by the ballots.
// Ties are resolved by one fair-coin draw; the generator is not touched
// otherwise. Throws std::invalid_argument on an empty ballot list.
GroupVoteOutcome decide(const DecisionRule& rule,
                        std::span<const BallotEntry> ballots, SplitMix64& rng);

// log(p / (1 - p)) with p clamped into [eps, 1 - eps]. Negative for p < 1/2,
// which inverts that agent's vote.
double optimal_weight(double p_hat);

// Closed-form accuracy of simple majority over n independent agents of equal
// accuracy p:
//   sum_{k=floor(n/2)+1}^{n} C(n,k) p^k q^(n-k)
//   + [n even] (1/2) C(n, n/2) p^(n/2) q^(n/2).
// The second term is the fair-coin tie credit.
double analytic_majority_accuracy(int n, double p);

// {lower, upper} bounds on majority-vote accuracy for heterogeneous agents.
// Input must be sorted ascending (throws std::invalid_argument otherwise).
// With k = floor(n/2) + 1:
//   upper = min(1, min_{m=1..k} (1/m) sum_{i=1}^{n-k+m} p_i)
//   lower = max(0, max_{m=1..k} (1/m) sum_{i=k-m+1}^{n} p_i - (n-k)/m).
std::pair<double, double> majority_accuracy_bounds(
    std::span<const double> accuracies_ascending);

// Exact group accuracy by enumerating all 2^n correctness outcomes; ties
// contribute half their probability. Oracle for the Monte Carlo paths; kept
// independent of decide() on purpose. Throws std::length_error for n > 20
// and std::invalid_argument on size mismatch or empty input.
double enumerate_group_accuracy(std::span<const double> accuracies,
                                std::span<const double> weights);

// Sequential answer generation with social copying. The first agent answers
// from its own accuracy; agent at position l >= 2 is correct with probability
//   (1 - chi) p_l + chi * (fraction of earlier answers that were correct).
// BestFirst orders agents by accuracy descending (ties by index); RandomOrder
// draws a fresh uniform shuffle. Returned ballots carry the original agent
// indices, unit weights, and appear in answering order.
std::vector<BallotEntry> generate_imitation_answers(
    std::span<const double> accuracies, double chi, ImitationOrder order,
    SplitMix64& rng);

}  // namespace colsim
