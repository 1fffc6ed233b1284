#include "ncv/valuation.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

#include "ncv/error.hpp"

namespace ncv {

namespace {

[[noreturn]] void invalid(const std::string& what) { throw Error(ErrorKind::InvalidScenario, what); }

bool finite(double v) { return std::isfinite(v); }

// Flow formula without the horizon check; eol_cause looks past the horizon.
double net_flow(const Scenario& s, long day) {
  if (day <= s.delay_days) return 0.0;
  return (1.0 - s.fee_fraction) * s.coin_per_day * decay_factor(s.growth, day) -
         s.cooling_multiplier() * s.electricity_coin_per_day;
}

}  // namespace

void validate(const Scenario& s) {
  if (!(s.fee_fraction >= 0.0 && s.fee_fraction < 1.0)) invalid("admin fee must lie in [0, 1)");
  if (!(s.coin_per_day > 0.0) || !finite(s.coin_per_day)) invalid("coin_per_day must be > 0");
  if (!(s.coin_price_fiat > 0.0) || !finite(s.coin_price_fiat)) invalid("coin price must be > 0");
  if (!(s.rig_cost_fiat > 0.0) || !finite(s.rig_cost_fiat)) invalid("rig cost must be > 0");
  if (!(s.electricity_coin_per_day >= 0.0) || !finite(s.electricity_coin_per_day))
    invalid("electricity cost must be finite and >= 0");
  if (s.cop && (!(*s.cop > 0.0) || !finite(*s.cop))) invalid("CoP must be > 0");
  if (s.horizon_days < 1) invalid("horizon must be at least one day");
  if (s.delay_days < 0 || s.delay_days >= s.horizon_days)
    invalid("delay must satisfy 0 <= delay < horizon");
  if (s.card_cost_fiat && (!(*s.card_cost_fiat >= 0.0) || !finite(*s.card_cost_fiat)))
    invalid("card cost must be >= 0");
  if (s.card_lifetime_days < 1) invalid("card lifetime must be at least one day");
  validate(s.growth);
}

CoinFlowSeries::CoinFlowSeries(long start_day, std::vector<double> flows)
    : start_day_(start_day), flows_(std::move(flows)) {
  cumulative_.reserve(flows_.size());
  double running = 0.0;
  for (double f : flows_) {
    running += f;
    cumulative_.push_back(running);
  }
}

double CoinFlowSeries::flow(long day) const {
  if (day < start_day_ || day > last_day())
    throw Error(ErrorKind::DayOutOfRange, "day " + std::to_string(day) + " outside series");
  return flows_[static_cast<std::size_t>(day - start_day_)];
}

double CoinFlowSeries::ncv(long day) const {
  if (day < start_day_) return 0.0;
  if (day > last_day())
    throw Error(ErrorKind::DayOutOfRange, "day " + std::to_string(day) + " past series end");
  return cumulative_[static_cast<std::size_t>(day - start_day_)];
}

double daily_coin_flow(const Scenario& s, long day) {
  if (day < 1 || day > s.horizon_days)
    throw Error(ErrorKind::DayOutOfRange,
                "day " + std::to_string(day) + " outside [1, " + std::to_string(s.horizon_days) + "]");
  return net_flow(s, day);
}

CoinFlowSeries ncv_series(const Scenario& s) {
  validate(s);
  std::vector<double> flows;
  flows.reserve(static_cast<std::size_t>(s.horizon_days));
  for (long day = 1; day <= s.horizon_days; ++day) flows.push_back(net_flow(s, day));
  return CoinFlowSeries(1, std::move(flows));
}

std::optional<long> first_day_above(const CoinFlowSeries& series, double threshold) {
  const auto cumulative = series.cumulative();
  const auto it = std::find_if(cumulative.begin(), cumulative.end(),
                               [threshold](double v) { return v > threshold; });
  if (it == cumulative.end()) return std::nullopt;
  return series.start_day() + static_cast<long>(it - cumulative.begin());
}

std::optional<long> payback_day(const Scenario& s) {
  return first_day_above(ncv_series(s), hodl_baseline(s));
}

std::optional<long> doubling_day(const Scenario& s) {
  return first_day_above(ncv_series(s), 2.0 * hodl_baseline(s));
}

Peak peak(const CoinFlowSeries& series) {
  const auto cumulative = series.cumulative();
  if (cumulative.empty()) throw Error(ErrorKind::EmptySeries, "peak of an empty series");
  // max_element returns the first maximum, which is the earliest day.
  const auto it = std::max_element(cumulative.begin(), cumulative.end());
  return {series.start_day() + static_cast<long>(it - cumulative.begin()), *it};
}

Peak peak(const Scenario& s) { return peak(ncv_series(s)); }

double hodl_baseline(const Scenario& s) { return s.rig_cost_fiat / s.coin_price_fiat; }

double roi(const Scenario& s) { return peak(s).ncv / hodl_baseline(s); }

double marginal_card_cost(const Scenario& s) {
  if (!s.card_cost_fiat)
    throw Error(ErrorKind::MissingCardParameters, "card_cost_fiat is required", "card_cost_fiat");
  if (s.card_lifetime_days <= 0)
    throw Error(ErrorKind::MissingCardParameters, "card_lifetime_days must be positive",
                "card_lifetime_days");
  return (*s.card_cost_fiat / s.coin_price_fiat) / static_cast<double>(s.card_lifetime_days);
}

double frontier_card_price(const Scenario& s) {
  if (s.card_lifetime_days > s.horizon_days)
    throw Error(ErrorKind::DayOutOfRange, "card lifetime " + std::to_string(s.card_lifetime_days) +
                                              " exceeds horizon " + std::to_string(s.horizon_days));
  return ncv_series(s).ncv(s.card_lifetime_days);
}

EndOfLife eol_cause(const Scenario& s) {
  validate(s);
  for (long day = s.delay_days + 1; day < s.card_lifetime_days; ++day) {
    if (net_flow(s, day) <= 0.0) return ElectricityBound{day};
  }
  return Obsolescence{s.card_lifetime_days};
}

ValuationSummary summarize(const Scenario& s) {
  const auto series = ncv_series(s);
  const auto top = peak(series);
  ValuationSummary out;
  out.peak_day = top.day;
  out.peak_ncv = top.ncv;
  out.hodl_coins = hodl_baseline(s);
  out.payback_day = first_day_above(series, out.hodl_coins);
  out.doubling_day = first_day_above(series, 2.0 * out.hodl_coins);
  out.roi = top.ncv / out.hodl_coins;
  out.eol = eol_cause(s);
  out.peak_ncv_fiat_at_p0 = top.ncv * s.coin_price_fiat;
  return out;
}

FiatPricePath::FiatPricePath(std::vector<Knot> knots, double discount_rate_daily)
    : knots_(std::move(knots)), discount_rate_daily_(discount_rate_daily) {
  if (knots_.empty()) invalid("price path needs at least one knot");
  if (!(discount_rate_daily_ >= 0.0) || !finite(discount_rate_daily_))
    invalid("discount rate must be >= 0");
  for (std::size_t n = 0; n < knots_.size(); ++n) {
    if (!(knots_[n].price > 0.0) || !finite(knots_[n].price)) invalid("prices must be > 0");
    if (n > 0 && !(knots_[n].day > knots_[n - 1].day))
      invalid("price knot days must be strictly increasing");
  }
}

FiatPricePath FiatPricePath::constant(double price, double discount_rate_daily) {
  return FiatPricePath({{0.0, price}}, discount_rate_daily);
}

FiatPricePath FiatPricePath::piecewise_linear(std::vector<Knot> knots, double discount_rate_daily) {
  return FiatPricePath(std::move(knots), discount_rate_daily);
}

double FiatPricePath::price(double day) const {
  if (day <= knots_.front().day) return knots_.front().price;
  if (day >= knots_.back().day) return knots_.back().price;
  const auto hi = std::upper_bound(knots_.begin(), knots_.end(), day,
                                   [](double d, const Knot& k) { return d < k.day; });
  const auto lo = hi - 1;
  const double w = (day - lo->day) / (hi->day - lo->day);
  return lo->price + w * (hi->price - lo->price);
}

FiatComparison fiat_npv(const Scenario& s, const FiatPricePath& path) {
  const auto series = ncv_series(s);
  FiatComparison out;
  for (long day = 1; day <= s.horizon_days; ++day) {
    const auto t = static_cast<double>(day);
    out.mining_npv +=
        series.flow(day) * path.price(t) / std::pow(1.0 + path.discount_rate_daily(), t);
  }
  out.hodl_value = hodl_baseline(s) * path.price(static_cast<double>(s.horizon_days));
  return out;
}

}  // namespace ncv
