#pragma once

// One-at-a-time elasticity of a profitability metric with respect to the
// four drivers of a mining investment, and their rank ordering.

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ncv/scenario.hpp"

namespace ncv {

/// Declaration order is the tie-break order used by rank_factors.
enum class Factor { DeliveryDelay, RigCost, GrowthRate, ElectricityPrice };

inline constexpr std::array<Factor, 4> kAllFactors = {
    Factor::DeliveryDelay, Factor::RigCost, Factor::GrowthRate, Factor::ElectricityPrice};

std::string_view to_string(Factor factor) noexcept;

/// What the elasticity is measured on.
enum class Metric { Roi, PaybackDay };

std::string_view to_string(Metric metric) noexcept;

struct SensitivityOptions {
  /// Relative perturbation for continuous factors, in (0, 1).
  double delta = 0.10;
  /// Perturbation of the delivery delay in days. When unset it is
  /// delta * delay_days, or delta * card_lifetime_days for a zero delay,
  /// rounded and at least one day.
  std::optional<long> delay_step_days;
  Metric metric = Metric::Roi;
};

struct Elasticity {
  double value = 0.0;  // |relative metric change| / |relative factor change|, >= 0
  double baseline_metric = 0.0;
  double perturbed_up = 0.0;                 // metric with the factor increased
  std::optional<double> perturbed_down;      // set when a central difference was used
  double relative_step = 0.0;                // |dX / X| used in the denominator
  bool central = false;
  bool delay_normalized_by_lifetime = false;  // zero-delay baseline
};

/// Throws InfeasiblePerturbation when the perturbed scenario is invalid in
/// both directions or the factor has no parameter to perturb, ZeroBaselineROI
/// when the baseline ROI is zero, and UndefinedMetric when the payback metric
/// has no payback day.
Elasticity elasticity(const Scenario& s, Factor factor, const SensitivityOptions& options = {});

struct FactorEntry {
  Factor factor = Factor::DeliveryDelay;
  std::optional<Elasticity> result;  // empty when the factor errored
  std::string diagnostic;
};

struct SensitivityReport {
  Metric metric = Metric::Roi;
  double baseline = 0.0;
  std::vector<FactorEntry> entries;  // in rank order
  std::array<Factor, 4> ranking{};

  const FactorEntry& entry(Factor factor) const;
};

/// Elasticities of all four factors sorted descending; errored factors go
/// last with their diagnostic. Baseline failures (zero ROI, no payback)
/// propagate.
SensitivityReport rank_factors(const Scenario& s, const SensitivityOptions& options = {});

}  // namespace ncv
