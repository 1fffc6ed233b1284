#pragma once

// Network hashing-capacity growth laws and the per-day production decay they
// imply. A rig's share of the block reward scales inversely with total
// network hashrate, so each law maps a day index to the fraction of day-0
// production still earned on that day.

#include <span>
#include <variant>
#include <vector>

namespace ncv {

/// Compound daily growth: hashrate(i) = hashrate(0) * (1 + rate)^i.
struct Exponential {
  double rate = 0.0;
  bool operator==(const Exponential&) const = default;
};

/// Hashrate grows by a fixed fraction of the day-0 hashrate every day.
struct Linear {
  double daily_fraction = 0.0;
  bool operator==(const Linear&) const = default;
};

/// Hashrate doubles every `doubling_days`.
struct MooreLaw {
  double doubling_days = 540.0;
  bool operator==(const MooreLaw&) const = default;
};

/// Static network.
struct Flat {
  bool operator==(const Flat&) const = default;
};

using GrowthModel = std::variant<Exponential, Linear, MooreLaw, Flat>;

inline constexpr double kDefaultMooreDoublingDays = 540.0;

/// Throws Error(InvalidScenario) when the model's parameter is outside its
/// domain (rate <= -1, negative linear fraction, non-positive doubling time).
void validate(const GrowthModel& model);

/// Fraction of day-0 production earned on day `day` (day >= 0).
double decay_factor(const GrowthModel& model, long day);

/// The scalar that sensitivity analysis perturbs: r, g, or ln(2)/T. Flat has
/// none and returns 0.
double growth_rate_parameter(const GrowthModel& model);

/// Returns a copy whose growth-rate parameter is multiplied by `factor`.
/// For Moore's law this divides the doubling period.
GrowthModel scale_growth_rate(const GrowthModel& model, double factor);

struct HashrateSample {
  long day = 0;
  double hashrate = 0.0;
};

/// Historical network hashrate, at least two samples, days strictly
/// increasing, hashrates positive.
class HashrateHistory {
 public:
  explicit HashrateHistory(std::vector<HashrateSample> samples);

  std::span<const HashrateSample> samples() const noexcept { return samples_; }
  const HashrateSample& last() const noexcept { return samples_.back(); }

 private:
  std::vector<HashrateSample> samples_;
};

enum class LinearFitMethod { LeastSquares, Endpoints };

struct LinearFit {
  Linear model;
  double slope = 0.0;            // hashes/s per day, before clamping
  double fitted_last = 0.0;      // fitted hashrate at the last sample day
  bool negative_slope_clamped = false;
};

/// Fits hashrate(t) = a + b t and normalizes b by the fitted hashrate at
/// the latest sample, so scenario day 0 is "today". Negative slopes are
/// clamped to zero growth and flagged.
LinearFit fit_linear(const HashrateHistory& history,
                     LinearFitMethod method = LinearFitMethod::LeastSquares);

}  // namespace ncv
