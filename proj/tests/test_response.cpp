#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <stdexcept>

#include "colsim/response.hpp"

using namespace colsim;

namespace {
const ResponseModel kMonotone = MonotoneLogistic{};
}

TEST_CASE("monotone logistic reference values") {
  CHECK(accuracy(kMonotone, Ability{1}, Difficulty{1}) ==
        doctest::Approx(0.6192029).epsilon(1e-6));
  CHECK(accuracy(kMonotone, Ability{20}, Difficulty{10}) ==
        doctest::Approx(0.7689414).epsilon(1e-6));
  CHECK(accuracy(kMonotone, Ability{5}, Difficulty{10}) ==
        doctest::Approx(0.5179862).epsilon(1e-6));
  CHECK(accuracy(kMonotone, Ability{8}, Difficulty{10}) ==
        doctest::Approx(0.5758582).epsilon(1e-6));
  CHECK(accuracy(kMonotone, Ability{24}, Difficulty{10}) ==
        doctest::Approx(0.8029407).epsilon(1e-6));
  CHECK(accuracy(kMonotone, Ability{7}, Difficulty{5}) ==
        doctest::Approx(0.6933214).epsilon(1e-6));
}

TEST_CASE("monotone logistic limits and bounds") {
  // difficulty 0 is solved with certainty
  CHECK(accuracy(kMonotone, Ability{3}, Difficulty{0}) == doctest::Approx(1.0));
  // hopeless problems approach a coin flip from above
  const double p = accuracy(kMonotone, Ability{1}, Difficulty{15});
  CHECK(p > 0.5);
  CHECK(p < 0.5 + 1e-12);
  // extreme mismatch saturates at exactly one half in double precision
  CHECK(accuracy(kMonotone, Ability{1}, Difficulty{500}) == 0.5);
  for (double alpha : {0.1, 0.5, 1.0, 5.0, 40.0}) {
    for (double lambda : {0.0, 0.5, 3.0, 25.0}) {
      const double v = accuracy(kMonotone, Ability{alpha}, Difficulty{lambda});
      REQUIRE(v > 0.5 - 1e-15);
      REQUIRE(v <= 1.0);
    }
  }
}

TEST_CASE("monotone logistic is increasing in ability, decreasing in difficulty") {
  double previous = 0.0;
  for (double alpha = 0.5; alpha <= 30.0; alpha += 0.5) {
    const double v = accuracy(kMonotone, Ability{alpha}, Difficulty{10});
    REQUIRE(v > previous);
    previous = v;
  }
  previous = 2.0;
  for (double lambda = 0.0; lambda <= 30.0; lambda += 0.5) {
    const double v = accuracy(kMonotone, Ability{4}, Difficulty{lambda});
    REQUIRE(v < previous);
    previous = v;
  }
}

TEST_CASE("non-positive ability is rejected") {
  CHECK_THROWS_AS(accuracy(kMonotone, Ability{0}, Difficulty{1}),
                  std::domain_error);
  CHECK_THROWS_AS(accuracy(kMonotone, Ability{-2}, Difficulty{1}),
                  std::domain_error);
  CHECK_THROWS_AS(accuracy(ResponseModel{SinglePeaked{}}, Ability{0},
                           Difficulty{1}),
                  std::domain_error);
}

TEST_CASE("three-parameter logistic") {
  const ResponseModel model = ThreeParamLogistic{2.0, 30.0, 0.25};
  // far below the location the curve sits at the guessing floor
  CHECK(accuracy(model, Ability{5}, Difficulty{0}) ==
        doctest::Approx(0.25).epsilon(1e-6));
  // at the location it is halfway between floor and ceiling
  CHECK(accuracy(model, Ability{30}, Difficulty{0}) ==
        doctest::Approx(0.25 + 0.75 * 0.5).epsilon(1e-9));
  // far above it approaches 1
  CHECK(accuracy(model, Ability{80}, Difficulty{0}) ==
        doctest::Approx(1.0).epsilon(1e-9));
  // output stays inside [c, 1]; strict inequalities hold while the exponent
  // is representable
  for (double alpha : {1.0, 10.0, 29.0, 31.0, 60.0}) {
    const double v = accuracy(model, Ability{alpha}, Difficulty{7});
    REQUIRE(v >= 0.25);
    REQUIRE(v <= 1.0);
  }
  CHECK(accuracy(model, Ability{22}, Difficulty{7}) > 0.25);
  CHECK(accuracy(model, Ability{35}, Difficulty{7}) < 1.0);
}

TEST_CASE("single-peaked curve peaks where ability matches difficulty") {
  const ResponseModel model = SinglePeaked{0.9};
  CHECK(accuracy(model, Ability{6}, Difficulty{6}) ==
        doctest::Approx(0.95).epsilon(1e-12));
  const double at_peak = accuracy(model, Ability{6}, Difficulty{6});
  for (double alpha : {1.0, 3.0, 5.0, 7.0, 12.0, 24.0}) {
    if (alpha == 6.0) continue;
    REQUIRE(accuracy(model, alpha == 0 ? Ability{1} : Ability{alpha},
                     Difficulty{6}) < at_peak);
  }
  // output range (1/2, 1/2 + plateau/2]; badly mismatched agents saturate
  // at one half in double precision
  for (double alpha : {2.0, 4.0, 6.0, 9.0, 40.0}) {
    const double v = accuracy(model, Ability{alpha}, Difficulty{6});
    REQUIRE(v > 0.5);
    REQUIRE(v <= 0.95 + 1e-15);
  }
  CHECK(accuracy(model, Ability{0.2}, Difficulty{6}) == 0.5);
  // a half-plateau variant peaks at 0.75
  CHECK(accuracy(ResponseModel{SinglePeaked{0.5}}, Ability{6}, Difficulty{6}) ==
        doctest::Approx(0.75).epsilon(1e-12));
}

TEST_CASE("specialization overrides apply only to their problem") {
  AbilityProfile profile;
  profile.base = Ability{8};
  profile.overrides[0] = Ability{24};
  CHECK(profile.ability_for(0).value == 24.0);
  CHECK(profile.ability_for(1).value == 8.0);
  CHECK(profile.specialized_on(0));
  CHECK_FALSE(profile.specialized_on(1));
  CHECK(effective_accuracy(kMonotone, profile, 0, Difficulty{10}) ==
        doctest::Approx(0.8029407).epsilon(1e-6));
  CHECK(effective_accuracy(kMonotone, profile, 1, Difficulty{10}) ==
        doctest::Approx(0.5758582).epsilon(1e-6));
}

TEST_CASE("sample_answer consumes one draw and matches its probability") {
  SplitMix64 rng(99);
  SplitMix64 mirror(99);
  int hits = 0;
  const int n = 50000;
  for (int i = 0; i < n; ++i) {
    if (sample_answer(rng, 0.6192)) ++hits;
  }
  // consumption audit: exactly n draws were used
  for (int i = 0; i < n; ++i) mirror();
  CHECK(rng.state() == mirror.state());
  CHECK(hits / static_cast<double>(n) ==
        doctest::Approx(0.6192).epsilon(0.01));
}
