// Randomized invariants of the valuation model.

#include <cmath>

#include "doctest.h"
#include "ncv/valuation.hpp"
#include "support/generators.hpp"
#include "support/oracle.hpp"

using namespace ncv;

namespace {

constexpr int kCases = 300;

// One rounding of the running sum, then the subtraction.
bool telescopes(const CoinFlowSeries& series) {
  const auto f = series.flows();
  const auto c = series.cumulative();
  if (f.size() != c.size() || f.empty() || c[0] != f[0]) return false;
  for (std::size_t t = 1; t < c.size(); ++t) {
    const double scale = std::max(std::abs(c[t]), std::abs(c[t - 1]));
    if (std::abs((c[t] - c[t - 1]) - f[t]) > 2.0 * std::numeric_limits<double>::epsilon() * scale)
      return false;
  }
  return true;
}

}  // namespace

TEST_CASE("series telescope") {
  gen::Rng rng(31);
  for (int n = 0; n < kCases; ++n) REQUIRE(telescopes(ncv_series(gen::scenario(rng))));
}

TEST_CASE("series match the brute-force oracle bit for bit") {
  gen::Rng rng(32);
  for (int n = 0; n < kCases; ++n) {
    const auto s = gen::scenario(rng);
    const auto o = oracle::brute_force(gen::to_oracle(s));
    const auto series = ncv_series(s);
    REQUIRE(std::equal(series.flows().begin(), series.flows().end(), o.flows.begin(), o.flows.end()));
    REQUIRE(std::equal(series.cumulative().begin(), series.cumulative().end(), o.cumulative.begin(),
                       o.cumulative.end()));
    REQUIRE(payback_day(s) == o.payback);
    REQUIRE(doubling_day(s) == o.doubling);
    REQUIRE(peak(s).day == o.peak_day);
    REQUIRE(peak(s).ncv == o.peak);
  }
}

TEST_CASE("exponential growth without electricity matches the geometric sum") {
  gen::Rng rng(33);
  for (int n = 0; n < kCases; ++n) {
    const auto s = gen::exponential_no_electricity(rng);
    const double r = std::get<Exponential>(s.growth).rate;
    const double closed = oracle::geometric_ncv(s.fee_fraction, s.coin_per_day, r, s.horizon_days);
    const double iterated = ncv_series(s).ncv(s.horizon_days);
    REQUIRE(std::abs(iterated - closed) <= 1e-9 * closed);
  }
}

TEST_CASE("free electricity caps NCV") {
  gen::Rng rng(34);
  for (int n = 0; n < kCases; ++n) {
    const auto s = gen::scenario(rng);
    auto free_power = s;
    free_power.electricity_coin_per_day = 0.0;
    const auto capped_series = ncv_series(s);
    const auto cap_series = ncv_series(free_power);
    const auto capped = capped_series.cumulative();
    const auto cap = cap_series.cumulative();
    for (std::size_t t = 0; t < cap.size(); ++t) REQUIRE(cap[t] >= capped[t]);
  }
}

TEST_CASE("longer delays never raise the peak") {
  gen::Rng rng(35);
  for (int n = 0; n < kCases; ++n) {
    auto s = gen::scenario(rng);
    const long d1 = rng.integer(0, s.horizon_days - 1);
    const long d2 = rng.integer(d1, s.horizon_days - 1);
    auto a = s;
    a.delay_days = d1;
    auto b = s;
    b.delay_days = d2;
    REQUIRE(peak(a).ncv >= peak(b).ncv);
  }
}

TEST_CASE("halving electricity less than doubles a positive peak") {
  gen::Rng rng(36);
  int checked = 0;
  for (int n = 0; n < kCases; ++n) {
    const auto s = gen::scenario(rng);
    const double base = peak(s).ncv;
    if (!(base > 0.0)) continue;
    auto half = s;
    half.electricity_coin_per_day /= 2.0;
    REQUIRE(peak(half).ncv < 2.0 * base);
    ++checked;
  }
  CHECK(checked > kCases / 2);
}

TEST_CASE("flows scale with a common production and electricity factor") {
  gen::Rng rng(37);
  for (int n = 0; n < kCases; ++n) {
    const auto s = gen::scenario(rng);
    const double lambda = rng.log_uniform(0.01, 100.0);
    auto scaled = s;
    scaled.coin_per_day *= lambda;
    scaled.electricity_coin_per_day *= lambda;
    const auto a = ncv_series(s);
    const auto b = ncv_series(scaled);
    for (std::size_t t = 0; t < a.size(); ++t) {
      const double tol = 1e-12 * (std::abs(lambda * a.flows()[t]) + lambda * s.coin_per_day);
      REQUIRE(std::abs(b.flows()[t] - lambda * a.flows()[t]) <= tol);
    }
    // exact for powers of two, including the day found by the payback rule
    auto twice = s;
    twice.coin_per_day *= 2.0;
    twice.electricity_coin_per_day *= 2.0;
    twice.rig_cost_fiat *= 2.0;
    const auto c = ncv_series(twice);
    for (std::size_t t = 0; t < a.size(); ++t) REQUIRE(c.cumulative()[t] == 2.0 * a.cumulative()[t]);
    REQUIRE(payback_day(twice) == payback_day(s));
  }
}

TEST_CASE("doubling never precedes payback") {
  gen::Rng rng(38);
  for (int n = 0; n < kCases; ++n) {
    auto s = gen::scenario(rng);
    s.rig_cost_fiat = s.coin_price_fiat * s.coin_per_day * rng.log_uniform(1.0, 200.0);
    const auto p = payback_day(s);
    const auto d = doubling_day(s);
    if (p && d) REQUIRE(*d >= *p);
    if (d) REQUIRE(p.has_value());
  }
}

TEST_CASE("cooling term vanishes as CoP grows") {
  // C_i(with CoP) - C_i(without) = -e / CoP exactly, so the gap is bounded by
  // e / CoP plus one rounding of the production term.
  gen::Rng rng(39);
  for (int n = 0; n < kCases; ++n) {
    auto plain = gen::scenario(rng);
    plain.cop.reset();
    for (double cop : {1e9, 1e12}) {
      auto cooled = plain;
      cooled.cop = cop;
      for (long i = plain.delay_days + 1; i <= plain.horizon_days; i += 17) {
        const double diff = std::abs(daily_coin_flow(cooled, i) - daily_coin_flow(plain, i));
        const double rounding = 4.0 * std::numeric_limits<double>::epsilon() * plain.coin_per_day;
        REQUIRE(diff <= plain.electricity_coin_per_day / cop * (1.0 + 1e-6) + rounding);
      }
    }
  }
}

TEST_CASE("rig cost scales ROI inversely") {
  gen::Rng rng(40);
  for (int n = 0; n < kCases; ++n) {
    const auto s = gen::scenario(rng);
    const double c = rng.log_uniform(0.1, 10.0);
    auto pricier = s;
    pricier.rig_cost_fiat *= c;
    REQUIRE(std::abs(roi(pricier) - roi(s) / c) <= 1e-14 * std::abs(roi(s) / c));
  }
}

TEST_CASE("series are deterministic") {
  gen::Rng rng(41);
  for (int n = 0; n < 50; ++n) {
    const auto s = gen::scenario(rng);
    const auto a = ncv_series(s);
    const auto b = ncv_series(s);
    REQUIRE(std::equal(a.cumulative().begin(), a.cumulative().end(), b.cumulative().begin()));
  }
}
