#include "colsim/response.hpp"

#include <cmath>
#include <stdexcept>

namespace colsim {

double accuracy(const ResponseModel& model, Ability alpha, Difficulty lambda) {
  if (!(alpha.value > 0.0)) {
    throw std::domain_error("ability must be positive");
  }
  struct Visitor {
    double alpha;
    double lambda;
    double operator()(const MonotoneLogistic&) const {
      return 0.5 + 1.0 / (1.0 + std::exp(2.0 * lambda / alpha));
    }
    double operator()(const ThreeParamLogistic& m) const {
      return m.c + (1.0 - m.c) / (1.0 + std::exp(-m.a * (alpha - m.b)));
    }
    double operator()(const SinglePeaked& m) const {
      const double z = (lambda - alpha) / alpha;
      return 0.5 + m.plateau / (1.0 + std::exp(2.0 * z * z));
    }
  };
  return std::visit(Visitor{alpha.value, lambda.value}, model);
}

double effective_accuracy(const ResponseModel& model,
                          const AbilityProfile& profile, std::size_t problem,
                          Difficulty lambda) {
  return accuracy(model, profile.ability_for(problem), lambda);
}

bool sample_answer(SplitMix64& rng, double p_correct) {
  return rng.bernoulli(p_correct);
}

}  // namespace colsim
