#include "ncv/sensitivity.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "ncv/error.hpp"
#include "ncv/valuation.hpp"

namespace ncv {

std::string_view to_string(Factor factor) noexcept {
  switch (factor) {
    case Factor::DeliveryDelay: return "DeliveryDelay";
    case Factor::RigCost: return "RigCost";
    case Factor::GrowthRate: return "GrowthRate";
    case Factor::ElectricityPrice: return "ElectricityPrice";
  }
  return "Unknown";
}

std::string_view to_string(Metric metric) noexcept {
  return metric == Metric::Roi ? "roi" : "payback_day";
}

namespace {

bool is_valid(const Scenario& s) {
  try {
    validate(s);
    return true;
  } catch (const Error&) {
    return false;
  }
}

double measure(const Scenario& s, Metric metric) {
  if (metric == Metric::Roi) return roi(s);
  const auto day = payback_day(s);
  if (!day) throw Error(ErrorKind::UndefinedMetric, "scenario never pays back within the horizon");
  return static_cast<double>(*day);
}

double baseline_metric(const Scenario& s, Metric metric) {
  validate(s);
  const double value = measure(s, metric);
  if (metric == Metric::Roi && value == 0.0)
    throw Error(ErrorKind::ZeroBaselineROI, "baseline ROI is zero");
  return value;
}

struct Perturbation {
  std::optional<Scenario> up;
  std::optional<Scenario> down;
  double relative_step = 0.0;
  bool delay_normalized_by_lifetime = false;
};

std::optional<Scenario> feasible(Scenario s) {
  if (is_valid(s)) return s;
  return std::nullopt;
}

Perturbation perturb(const Scenario& s, Factor factor, const SensitivityOptions& options) {
  const double delta = options.delta;
  Perturbation p;
  switch (factor) {
    case Factor::DeliveryDelay: {
      const bool zero = s.delay_days == 0;
      const double reference =
          static_cast<double>(zero ? s.card_lifetime_days : s.delay_days);
      const long step = options.delay_step_days
                            ? *options.delay_step_days
                            : std::max(1L, std::lround(delta * reference));
      if (step < 1)
        throw Error(ErrorKind::InfeasiblePerturbation, "delay step must be at least one day");
      Scenario up = s;
      up.delay_days += step;
      Scenario down = s;
      down.delay_days -= step;
      p.up = feasible(up);
      p.down = feasible(down);
      p.relative_step = static_cast<double>(step) / reference;
      p.delay_normalized_by_lifetime = zero;
      break;
    }
    case Factor::RigCost: {
      Scenario up = s;
      up.rig_cost_fiat *= 1.0 + delta;
      Scenario down = s;
      down.rig_cost_fiat *= 1.0 - delta;
      p.up = feasible(up);
      p.down = feasible(down);
      p.relative_step = delta;
      break;
    }
    case Factor::GrowthRate: {
      if (growth_rate_parameter(s.growth) == 0.0)
        throw Error(ErrorKind::InfeasiblePerturbation, "growth model has no non-zero rate to perturb");
      Scenario up = s;
      up.growth = scale_growth_rate(s.growth, 1.0 + delta);
      Scenario down = s;
      down.growth = scale_growth_rate(s.growth, 1.0 - delta);
      p.up = feasible(up);
      p.down = feasible(down);
      p.relative_step = delta;
      break;
    }
    case Factor::ElectricityPrice: {
      Scenario up = s;
      up.electricity_coin_per_day *= 1.0 + delta;
      Scenario down = s;
      down.electricity_coin_per_day *= 1.0 - delta;
      p.up = feasible(up);
      p.down = feasible(down);
      p.relative_step = delta;
      break;
    }
  }
  return p;
}

Elasticity elasticity_against(const Scenario& s, Factor factor, const SensitivityOptions& options,
                              double base) {
  if (!(options.delta > 0.0 && options.delta < 1.0))
    throw Error(ErrorKind::InfeasiblePerturbation, "delta must lie in (0, 1)");

  const auto p = perturb(s, factor, options);
  Elasticity out;
  out.baseline_metric = base;
  out.relative_step = p.relative_step;
  out.delay_normalized_by_lifetime = p.delay_normalized_by_lifetime;

  if (p.up && p.down) {
    const double up = measure(*p.up, options.metric);
    const double down = measure(*p.down, options.metric);
    out.perturbed_up = up;
    out.perturbed_down = down;
    out.central = true;
    out.value = std::abs((up - down) / (2.0 * base)) / p.relative_step;
  } else if (p.up) {
    const double up = measure(*p.up, options.metric);
    out.perturbed_up = up;
    out.value = std::abs((up - base) / base) / p.relative_step;
  } else if (p.down) {
    const double down = measure(*p.down, options.metric);
    out.perturbed_up = base;
    out.perturbed_down = down;
    out.value = std::abs((base - down) / base) / p.relative_step;
  } else {
    throw Error(ErrorKind::InfeasiblePerturbation,
                std::string("perturbing ") + std::string(to_string(factor)) +
                    " leaves the scenario invalid in both directions");
  }
  return out;
}

}  // namespace

Elasticity elasticity(const Scenario& s, Factor factor, const SensitivityOptions& options) {
  return elasticity_against(s, factor, options, baseline_metric(s, options.metric));
}

const FactorEntry& SensitivityReport::entry(Factor factor) const {
  for (const auto& e : entries)
    if (e.factor == factor) return e;
  throw Error(ErrorKind::InvalidScenario, "factor missing from report");
}

SensitivityReport rank_factors(const Scenario& s, const SensitivityOptions& options) {
  SensitivityReport report;
  report.metric = options.metric;
  report.baseline = baseline_metric(s, options.metric);

  for (Factor factor : kAllFactors) {
    FactorEntry entry;
    entry.factor = factor;
    try {
      entry.result = elasticity_against(s, factor, options, report.baseline);
    } catch (const Error& e) {
      entry.diagnostic = std::string(to_string(e.kind())) + ": " + e.what();
    }
    report.entries.push_back(std::move(entry));
  }

  // Stable sort keeps declaration order among ties and among errored factors.
  std::stable_sort(report.entries.begin(), report.entries.end(),
                   [](const FactorEntry& a, const FactorEntry& b) {
                     if (a.result.has_value() != b.result.has_value()) return a.result.has_value();
                     if (!a.result) return false;
                     return a.result->value > b.result->value;
                   });
  for (std::size_t n = 0; n < report.entries.size(); ++n)
    report.ranking[n] = report.entries[n].factor;
  return report;
}

}  // namespace ncv
