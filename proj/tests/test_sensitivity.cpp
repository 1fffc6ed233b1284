#include <algorithm>
#include <cmath>

#include "doctest.h"
#include "ncv/error.hpp"
#include "ncv/sensitivity.hpp"
#include "ncv/valuation.hpp"
#include "support/generators.hpp"

using namespace ncv;

TEST_CASE("rig cost elasticity is one within delta") {
  gen::Rng rng(51);
  for (int n = 0; n < 100; ++n) {
    const auto s = gen::scenario(rng);
    const double delta = rng.uniform(0.01, 0.5);
    const auto e = elasticity(s, Factor::RigCost, {.delta = delta});
    CHECK(e.central);
    // |1/(1+d) - 1/(1-d)| / (2d) = 1 / (1 - d^2)
    CHECK(e.value == doctest::Approx(1.0 / (1.0 - delta * delta)).epsilon(1e-12));
    CHECK(std::abs(e.value - 1.0) <= delta);
  }
}

TEST_CASE("delivery delay on the S9 baseline rig") {
  const auto s = gen::s9();
  const auto e = elasticity(s, Factor::DeliveryDelay, {.delta = 0.10, .delay_step_days = 140});
  CHECK_FALSE(e.central);
  CHECK(e.delay_normalized_by_lifetime);
  CHECK(e.relative_step == doctest::Approx(140.0 / 540.0));
  CHECK(e.value > 1.0);
  auto delayed = s;
  delayed.delay_days = 140;
  CHECK(e.perturbed_up == roi(delayed));
}

TEST_CASE("delay step defaults") {
  auto s = gen::s9();
  // zero baseline: delta * card lifetime = 54 days
  const auto zero = elasticity(s, Factor::DeliveryDelay, {.delta = 0.10});
  CHECK(zero.relative_step == doctest::Approx(54.0 / 540.0));

  s.delay_days = 100;
  const auto positive = elasticity(s, Factor::DeliveryDelay, {.delta = 0.10});
  CHECK(positive.central);
  CHECK(positive.relative_step == doctest::Approx(0.1));
  CHECK_FALSE(positive.delay_normalized_by_lifetime);

  // step larger than the baseline delay: forward difference only
  const auto forward = elasticity(s, Factor::DeliveryDelay, {.delta = 0.10, .delay_step_days = 140});
  CHECK_FALSE(forward.central);
  CHECK(forward.relative_step == doctest::Approx(1.4));
}

TEST_CASE("electricity elasticity") {
  auto s = gen::s9();
  s.electricity_coin_per_day = 0.0;
  CHECK(elasticity(s, Factor::ElectricityPrice).value == 0.0);
  const auto report = rank_factors(s);
  CHECK(report.ranking.back() == Factor::ElectricityPrice);
  CHECK(report.entry(Factor::ElectricityPrice).result->value == 0.0);

  CHECK(elasticity(gen::s9(), Factor::ElectricityPrice).value > 0.0);
}

TEST_CASE("growth rate elasticity") {
  const auto s = gen::s9();
  const auto e = elasticity(s, Factor::GrowthRate);
  CHECK(e.central);
  CHECK(e.value > 0.0);

  auto flat = s;
  flat.growth = Flat{};
  CHECK_THROWS_AS(elasticity(flat, Factor::GrowthRate), Error);

  auto moore = s;
  moore.growth = MooreLaw{540.0};
  CHECK(elasticity(moore, Factor::GrowthRate).value > 0.0);
}

TEST_CASE("rank_factors on the S9 baseline rig") {
  const auto report = rank_factors(gen::s9(), {.delta = 0.10, .delay_step_days = 140});
  CHECK(report.ranking.front() == Factor::DeliveryDelay);
  CHECK(report.ranking.back() == Factor::ElectricityPrice);
  CHECK(report.baseline == roi(gen::s9()));
  auto sorted = report.ranking;
  std::sort(sorted.begin(), sorted.end());
  CHECK(sorted == kAllFactors);
  for (std::size_t n = 1; n < report.entries.size(); ++n)
    CHECK(report.entries[n - 1].result->value >= report.entries[n].result->value);
}

TEST_CASE("errored factors rank last with a diagnostic") {
  auto s = gen::s9();
  s.growth = Flat{};
  const auto report = rank_factors(s);
  CHECK(report.ranking.back() == Factor::GrowthRate);
  CHECK_FALSE(report.entries.back().result.has_value());
  CHECK(report.entries.back().diagnostic.find("InfeasiblePerturbation") != std::string::npos);
}

TEST_CASE("baseline failures propagate") {
  auto s = gen::unit_flow(20);
  s.electricity_coin_per_day = 2.0;
  s.delay_days = 3;  // NCV is 0 through the delay, negative afterwards
  try {
    rank_factors(s);
    FAIL("expected ZeroBaselineROI");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::ZeroBaselineROI);
  }

  auto never = gen::s9();
  never.rig_cost_fiat *= 100.0;
  CHECK_THROWS_AS(rank_factors(never, {.metric = Metric::PaybackDay}), Error);
  CHECK_NOTHROW(rank_factors(never, {.metric = Metric::Roi}));
}

TEST_CASE("invalid delta") {
  CHECK_THROWS_AS(elasticity(gen::s9(), Factor::RigCost, {.delta = 0.0}), Error);
  CHECK_THROWS_AS(elasticity(gen::s9(), Factor::RigCost, {.delta = 1.0}), Error);
}

TEST_CASE("payback-based sensitivity") {
  const auto report =
      rank_factors(gen::s9(), {.delta = 0.10, .delay_step_days = 140, .metric = Metric::PaybackDay});
  CHECK(report.metric == Metric::PaybackDay);
  CHECK(report.baseline == 101.0);
  CHECK(report.ranking.front() == Factor::DeliveryDelay);
  for (const auto& e : report.entries) CHECK(e.result.has_value());
}

TEST_CASE("reports are deterministic and scale invariant") {
  gen::Rng rng(52);
  for (int n = 0; n < 40; ++n) {
    const auto s = gen::scenario(rng);
    const auto a = rank_factors(s);
    const auto b = rank_factors(s);
    REQUIRE(a.ranking == b.ranking);
    for (std::size_t k = 0; k < 4; ++k) {
      REQUIRE(a.entries[k].result.has_value() == b.entries[k].result.has_value());
      if (a.entries[k].result) REQUIRE(a.entries[k].result->value == b.entries[k].result->value);
    }

    auto scaled = s;
    scaled.coin_per_day *= 4.0;
    scaled.electricity_coin_per_day *= 4.0;
    scaled.rig_cost_fiat *= 4.0;
    REQUIRE(rank_factors(scaled).ranking == a.ranking);
  }
}
