#include "ncv/growth.hpp"

#include <cmath>
#include <numbers>
#include <string>
#include <utility>

#include "ncv/error.hpp"

namespace ncv {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};

}  // namespace

void validate(const GrowthModel& model) {
  std::visit(overloaded{
                 [](const Exponential& m) {
                   if (!(m.rate > -1.0) || !std::isfinite(m.rate))
                     throw Error(ErrorKind::InvalidScenario, "exponential growth rate must be > -1");
                 },
                 [](const Linear& m) {
                   if (!(m.daily_fraction >= 0.0) || !std::isfinite(m.daily_fraction))
                     throw Error(ErrorKind::InvalidScenario, "linear growth fraction must be >= 0");
                 },
                 [](const MooreLaw& m) {
                   if (!(m.doubling_days > 0.0) || !std::isfinite(m.doubling_days))
                     throw Error(ErrorKind::InvalidScenario, "Moore doubling period must be > 0");
                 },
                 [](const Flat&) {},
             },
             model);
}

double decay_factor(const GrowthModel& model, long day) {
  const auto i = static_cast<double>(day);
  return std::visit(overloaded{
                        [i](const Exponential& m) { return 1.0 / std::pow(1.0 + m.rate, i); },
                        [i](const Linear& m) { return 1.0 / (1.0 + m.daily_fraction * i); },
                        [i](const MooreLaw& m) { return std::exp2(-i / m.doubling_days); },
                        [](const Flat&) { return 1.0; },
                    },
                    model);
}

double growth_rate_parameter(const GrowthModel& model) {
  return std::visit(overloaded{
                        [](const Exponential& m) { return m.rate; },
                        [](const Linear& m) { return m.daily_fraction; },
                        [](const MooreLaw& m) { return std::numbers::ln2 / m.doubling_days; },
                        [](const Flat&) { return 0.0; },
                    },
                    model);
}

GrowthModel scale_growth_rate(const GrowthModel& model, double factor) {
  return std::visit(overloaded{
                        [factor](const Exponential& m) -> GrowthModel {
                          return Exponential{m.rate * factor};
                        },
                        [factor](const Linear& m) -> GrowthModel {
                          return Linear{m.daily_fraction * factor};
                        },
                        [factor](const MooreLaw& m) -> GrowthModel {
                          return MooreLaw{m.doubling_days / factor};
                        },
                        [](const Flat& m) -> GrowthModel { return m; },
                    },
                    model);
}

HashrateHistory::HashrateHistory(std::vector<HashrateSample> samples) : samples_(std::move(samples)) {
  if (samples_.size() < 2)
    throw Error(ErrorKind::DegenerateHistory, "hashrate history needs at least two samples");
  for (std::size_t n = 0; n < samples_.size(); ++n) {
    if (!(samples_[n].hashrate > 0.0) || !std::isfinite(samples_[n].hashrate))
      throw Error(ErrorKind::UnitViolation, "hashrate must be positive", "hashrate");
    if (n > 0 && samples_[n].day <= samples_[n - 1].day)
      throw Error(ErrorKind::DegenerateHistory, "hashrate sample days must be strictly increasing",
                  "day");
  }
}

LinearFit fit_linear(const HashrateHistory& history, LinearFitMethod method) {
  const auto samples = history.samples();
  const double t_last = static_cast<double>(history.last().day);

  double slope = 0.0;
  double fitted_last = 0.0;
  if (method == LinearFitMethod::Endpoints) {
    const auto& first = samples.front();
    const auto& last = samples.back();
    slope = (last.hashrate - first.hashrate) / static_cast<double>(last.day - first.day);
    fitted_last = last.hashrate;
  } else {
    // Centered sums keep the normal equations well conditioned for large day
    // offsets.
    const auto count = static_cast<double>(samples.size());
    double mean_t = 0.0;
    double mean_h = 0.0;
    for (const auto& s : samples) {
      mean_t += static_cast<double>(s.day);
      mean_h += s.hashrate;
    }
    mean_t /= count;
    mean_h /= count;
    double sxx = 0.0;
    double sxy = 0.0;
    for (const auto& s : samples) {
      const double dt = static_cast<double>(s.day) - mean_t;
      sxx += dt * dt;
      sxy += dt * (s.hashrate - mean_h);
    }
    if (sxx <= 0.0) throw Error(ErrorKind::DegenerateHistory, "all hashrate samples share one day");
    slope = sxy / sxx;
    fitted_last = mean_h + slope * (t_last - mean_t);
  }

  if (!(fitted_last > 0.0))
    throw Error(ErrorKind::DegenerateHistory,
                "fitted hashrate at the latest sample is not positive (" +
                    std::to_string(fitted_last) + ")");

  LinearFit fit;
  fit.slope = slope;
  fit.fitted_last = fitted_last;
  if (slope < 0.0) {
    fit.negative_slope_clamped = true;
    fit.model = Linear{0.0};
  } else {
    fit.model = Linear{slope / fitted_last};
  }
  return fit;
}

}  // namespace ncv
