#pragma once

// Net-coin-value accounting for a mining rig: daily net coin flow after fees,
// electricity and cooling, its running sum, and the decision points read off
// that sum (payback, doubling, peak, end of life). Everything here is a pure
// function of its inputs.

#include <optional>
#include <span>
#include <variant>
#include <vector>

#include "ncv/scenario.hpp"

namespace ncv {

/// Net coin flows for days start_day..horizon and their running sum.
/// Day 0 is the purchase day; NCV(0) = 0.
class CoinFlowSeries {
 public:
  CoinFlowSeries(long start_day, std::vector<double> flows);

  long start_day() const noexcept { return start_day_; }
  long last_day() const noexcept { return start_day_ + static_cast<long>(flows_.size()) - 1; }
  std::size_t size() const noexcept { return flows_.size(); }

  std::span<const double> flows() const& noexcept { return flows_; }
  std::span<const double> cumulative() const& noexcept { return cumulative_; }
  std::span<const double> flows() const&& = delete;
  std::span<const double> cumulative() const&& = delete;

  /// Flow on an absolute day; throws DayOutOfRange outside the series.
  double flow(long day) const;
  /// NCV(day); 0 before start_day, throws DayOutOfRange past the last day.
  double ncv(long day) const;

 private:
  long start_day_;
  std::vector<double> flows_;
  std::vector<double> cumulative_;
};

struct Peak {
  long day = 0;
  double ncv = 0.0;
};

struct Obsolescence {
  long day = 0;
};
struct ElectricityBound {
  long day = 0;
};
using EndOfLife = std::variant<Obsolescence, ElectricityBound>;

struct ValuationSummary {
  long peak_day = 0;
  double peak_ncv = 0.0;
  std::optional<long> payback_day;
  std::optional<long> doubling_day;
  double hodl_coins = 0.0;
  double roi = 0.0;
  EndOfLife eol;
  double peak_ncv_fiat_at_p0 = 0.0;
};

/// C_i for day 1 <= i <= horizon. Zero while the rig awaits delivery;
/// afterwards (1-k) m0 decay(i) - cool e. Decay uses the absolute day since
/// payment, so difficulty keeps growing during a delivery delay.
double daily_coin_flow(const Scenario& s, long day);

CoinFlowSeries ncv_series(const Scenario& s);

/// First day whose NCV strictly exceeds `threshold`.
std::optional<long> first_day_above(const CoinFlowSeries& series, double threshold);

std::optional<long> payback_day(const Scenario& s);
std::optional<long> doubling_day(const Scenario& s);

/// Maximum NCV over the series, earliest day on ties.
Peak peak(const CoinFlowSeries& series);
Peak peak(const Scenario& s);

/// Coins bought with the rig's price on purchase day.
double hodl_baseline(const Scenario& s);

/// Peak NCV over the HODL baseline; above 1 mining beats holding.
double roi(const Scenario& s);

/// Daily coin cost of treating GPU cards as a consumable over their
/// lifetime. Throws MissingCardParameters without a card price.
double marginal_card_cost(const Scenario& s);

/// Highest card price, in coin at P0, recoverable over the card lifetime:
/// NCV(card_lifetime_days). Non-positive means no card price is profitable.
double frontier_card_price(const Scenario& s);

/// Electricity-bound when the daily flow of a delivered rig turns
/// non-positive before the card lifetime ends, obsolescence otherwise.
EndOfLife eol_cause(const Scenario& s);

ValuationSummary summarize(const Scenario& s);

/// Coin price over time in fiat, plus a daily discount rate.
class FiatPricePath {
 public:
  struct Knot {
    double day = 0.0;
    double price = 0.0;
  };

  static FiatPricePath constant(double price, double discount_rate_daily = 0.0);
  /// Linear between knots, flat beyond the first and last knot.
  static FiatPricePath piecewise_linear(std::vector<Knot> knots, double discount_rate_daily = 0.0);

  double price(double day) const;
  double discount_rate_daily() const noexcept { return discount_rate_daily_; }

 private:
  FiatPricePath(std::vector<Knot> knots, double discount_rate_daily);

  std::vector<Knot> knots_;
  double discount_rate_daily_;
};

struct FiatComparison {
  double mining_npv = 0.0;  // discounted fiat value of the coin flows
  double hodl_value = 0.0;  // HODL coins valued at the horizon price
};

FiatComparison fiat_npv(const Scenario& s, const FiatPricePath& path);

}  // namespace ncv
