#include "colsim/voting.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <stdexcept>

namespace colsim {

namespace {

bool counts_every_ballot_once(const DecisionRule& rule) {
  return std::holds_alternative<Majority>(rule) ||
         std::holds_alternative<Imitation>(rule);
}

// C(n, k) by running product; exact in double for the small n used here.
double binomial(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  k = std::min(k, n - k);
  double result = 1.0;
  for (int i = 1; i <= k; ++i) {
    result = result * static_cast<double>(n - k + i) / static_cast<double>(i);
  }
  return result;
}

}  // namespace

GroupVoteOutcome decide(const DecisionRule& rule,
                        std::span<const BallotEntry> ballots, SplitMix64& rng) {
  if (ballots.empty()) {
    throw std::invalid_argument("decide: ballot list is empty");
  }
  const bool unit = counts_every_ballot_once(rule);
  double correct_sum = 0.0;
  double incorrect_sum = 0.0;
  for (const BallotEntry& b : ballots) {
    const double w = unit ? 1.0 : b.weight;
    (b.correct ? correct_sum : incorrect_sum) += w;
  }
  GroupVoteOutcome outcome;
  outcome.margin = correct_sum - incorrect_sum;
  if (std::abs(outcome.margin) <= kTieTolerance) {
    outcome.tie_broken = true;
    outcome.correct = rng.bernoulli(0.5);
  } else {
    outcome.correct = outcome.margin > 0.0;
  }
  return outcome;
}

double optimal_weight(double p_hat) {
  const double p = std::clamp(p_hat, kWeightEpsilon, 1.0 - kWeightEpsilon);
  return std::log(p / (1.0 - p));
}

double analytic_majority_accuracy(int n, double p) {
  if (n < 1) throw std::invalid_argument("analytic_majority_accuracy: n < 1");
  if (p < 0.0 || p > 1.0) {
    throw std::domain_error("analytic_majority_accuracy: p outside [0, 1]");
  }
  const double q = 1.0 - p;
  double total = 0.0;
  for (int k = n / 2 + 1; k <= n; ++k) {
    total += binomial(n, k) * std::pow(p, k) * std::pow(q, n - k);
  }
  if (n % 2 == 0) {
    const int h = n / 2;
    total += 0.5 * binomial(n, h) * std::pow(p, h) * std::pow(q, h);
  }
  return total;
}

std::pair<double, double> majority_accuracy_bounds(
    std::span<const double> accuracies_ascending) {
  const auto n = static_cast<int>(accuracies_ascending.size());
  if (n < 1) {
    throw std::invalid_argument("majority_accuracy_bounds: empty input");
  }
  if (!std::is_sorted(accuracies_ascending.begin(),
                      accuracies_ascending.end())) {
    throw std::invalid_argument(
        "majority_accuracy_bounds: accuracies must be sorted ascending");
  }
  const int k = n / 2 + 1;
  // prefix[i] = sum of the first i accuracies
  std::vector<double> prefix(static_cast<std::size_t>(n) + 1, 0.0);
  for (int i = 0; i < n; ++i) {
    prefix[static_cast<std::size_t>(i) + 1] =
        prefix[static_cast<std::size_t>(i)] + accuracies_ascending[i];
  }
  double upper = 1.0;
  double lower = 0.0;
  for (int m = 1; m <= k; ++m) {
    const double sigma = prefix[static_cast<std::size_t>(n - k + m)] / m;
    upper = std::min(upper, sigma);
    const double tail =
        prefix[static_cast<std::size_t>(n)] -
        prefix[static_cast<std::size_t>(k - m)];
    const double xi = tail / m - static_cast<double>(n - k) / m;
    lower = std::max(lower, xi);
  }
  return {lower, upper};
}

double enumerate_group_accuracy(std::span<const double> accuracies,
                                std::span<const double> weights) {
  const std::size_t n = accuracies.size();
  if (n == 0) {
    throw std::invalid_argument("enumerate_group_accuracy: empty input");
  }
  if (weights.size() != n) {
    throw std::invalid_argument(
        "enumerate_group_accuracy: weights size differs from accuracies");
  }
  if (n > 20) {
    throw std::length_error("enumerate_group_accuracy: at most 20 agents");
  }
  double total = 0.0;
  const std::uint32_t limit = 1u << n;
  for (std::uint32_t mask = 0; mask < limit; ++mask) {
    double prob = 1.0;
    double margin = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      if (mask & (1u << i)) {
        prob *= accuracies[i];
        margin += weights[i];
      } else {
        prob *= 1.0 - accuracies[i];
        margin -= weights[i];
      }
    }
    if (std::abs(margin) <= kTieTolerance) {
      total += 0.5 * prob;
    } else if (margin > 0.0) {
      total += prob;
    }
  }
  return total;
}

std::vector<BallotEntry> generate_imitation_answers(
    std::span<const double> accuracies, double chi, ImitationOrder order,
    SplitMix64& rng) {
  const std::size_t n = accuracies.size();
  if (n == 0) {
    throw std::invalid_argument("generate_imitation_answers: empty input");
  }
  if (chi < 0.0 || chi > 1.0) {
    throw std::domain_error("generate_imitation_answers: chi outside [0, 1]");
  }
  std::vector<std::size_t> sequence(n);
  std::iota(sequence.begin(), sequence.end(), std::size_t{0});
  if (order == ImitationOrder::BestFirst) {
    std::sort(sequence.begin(), sequence.end(),
              [&](std::size_t a, std::size_t b) {
                if (accuracies[a] != accuracies[b]) {
                  return accuracies[a] > accuracies[b];
                }
                return a < b;
              });
  } else {
    rng.shuffle(sequence);
  }
  std::vector<BallotEntry> ballots;
  ballots.reserve(n);
  std::size_t correct_so_far = 0;
  for (std::size_t pos = 0; pos < n; ++pos) {
    const std::size_t agent = sequence[pos];
    double p = accuracies[agent];
    if (pos > 0) {
      const double peer_rate =
          static_cast<double>(correct_so_far) / static_cast<double>(pos);
      p = (1.0 - chi) * p + chi * peer_rate;
    }
    const bool correct = rng.bernoulli(p);
    correct_so_far += correct ? 1u : 0u;
    ballots.push_back(BallotEntry{agent, correct, 1.0});
  }
  return ballots;
}

}  // namespace colsim
