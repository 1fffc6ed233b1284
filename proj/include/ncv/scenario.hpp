#pragma once

#include <optional>

#include "ncv/growth.hpp"

namespace ncv {

inline constexpr long kDefaultCardLifetimeDays = 540;

/// Economic parameters of one mining investment. Coin-denominated values use
/// the coin price on the purchase day throughout.
struct Scenario {
  double fee_fraction = 0.0;              // pool + software + hosting share of mined coin
  double coin_per_day = 0.0;              // production on day 0
  GrowthModel growth = Flat{};
  double electricity_coin_per_day = 0.0;  // daily electricity bill / coin price
  double coin_price_fiat = 1.0;
  double rig_cost_fiat = 1.0;
  std::optional<double> cop;              // cooling coefficient of performance
  long delay_days = 0;                    // payment to first mined coin
  long horizon_days = 1;
  std::optional<double> card_cost_fiat;
  long card_lifetime_days = kDefaultCardLifetimeDays;

  double electricity_fiat_per_day() const { return electricity_coin_per_day * coin_price_fiat; }

  /// 1 + 1/CoP with a cooling load, 1 without.
  double cooling_multiplier() const { return cop ? 1.0 + 1.0 / *cop : 1.0; }

  bool operator==(const Scenario&) const = default;
};

/// Throws Error(InvalidScenario) naming the first violated invariant.
void validate(const Scenario& scenario);

}  // namespace ncv
