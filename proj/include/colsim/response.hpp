#pragma once

#include <cstddef>
#include <map>
#include <variant>

#include "colsim/rng.hpp"

namespace colsim {

// Agent ability. Must be strictly positive wherever an accuracy is evaluated.
struct Ability {
  double value = 1.0;
};

// Problem difficulty; zero means a problem every agent solves with certainty
// under the monotone model.
struct Difficulty {
  double value = 0.0;
};

// Per-agent ability with optional per-problem specializations. An override
// replaces the base ability when the agent works on that problem.
struct AbilityProfile {
  Ability base;
  std::map<std::size_t, Ability> overrides;

  Ability ability_for(std::size_t problem) const {
    const auto it = overrides.find(problem);
    return it == overrides.end() ? base : it->second;
  }

  bool specialized_on(std::size_t problem) const {
    return overrides.find(problem) != overrides.end();
  }

  bool specialized() const { return !overrides.empty(); }
};

// p(correct) = 1/2 + 1 / (1 + exp(2 lambda / alpha)).
// Rises from 1/2 (hopeless) towards 1 as ability grows; difficulty 0 gives 1.
struct MonotoneLogistic {};

// Three-parameter logistic: c + (1 - c) / (1 + exp(-a (alpha - b))).
// c is the guessing floor, b the location, a the slope.
struct ThreeParamLogistic {
  double a = 1.0;
  double b = 0.0;
  double c = 0.0;
};

// Single-peaked curve: 1/2 + plateau / (1 + exp(2 ((lambda - alpha)/alpha)^2)).
// Maximal (1/2 + plateau/2) when ability matches difficulty exactly, decaying
// towards 1/2 for both over- and under-qualified agents.
struct SinglePeaked {
  double plateau = 0.9;
};

using ResponseModel =
    std::variant<MonotoneLogistic, ThreeParamLogistic, SinglePeaked>;

// Probability that an agent of the given ability answers a problem of the
// given difficulty correctly. Throws std::domain_error for alpha <= 0.
double accuracy(const ResponseModel& model, Ability alpha, Difficulty lambda);

// accuracy() evaluated with the profile's effective ability on `problem`.
double effective_accuracy(const ResponseModel& model,
                          const AbilityProfile& profile, std::size_t problem,
                          Difficulty lambda);

// One Bernoulli draw; consumes exactly one value from the generator.
bool sample_answer(SplitMix64& rng, double p_correct);

}  // namespace colsim
