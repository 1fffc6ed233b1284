#include "ncv/ncv.h"

#include <cmath>
#include <cstring>
#include <limits>
#include <new>
#include <string>
#include <utility>
#include <vector>

#include "ncv/error.hpp"
#include "ncv/report.hpp"
#include "ncv/scenario_io.hpp"
#include "ncv/sensitivity.hpp"
#include "ncv/valuation.hpp"

struct ncv_text {
  std::string data;
};

struct ncv_scenario {
  ncv::ScenarioDocument doc;
};

struct ncv_series {
  ncv::CoinFlowSeries series;
};

namespace {

struct LastError {
  std::string message;
  std::string file;
  std::string key;
  int line = 0;
};

thread_local LastError last_error;

ncv_status to_status(ncv::ErrorKind kind) {
  using K = ncv::ErrorKind;
  switch (kind) {
    case K::MissingKey: return NCV_E_MISSING_KEY;
    case K::DuplicateKey: return NCV_E_DUPLICATE_KEY;
    case K::BadNumber: return NCV_E_BAD_NUMBER;
    case K::UnitViolation: return NCV_E_UNIT_VIOLATION;
    case K::InconsistentPair: return NCV_E_INCONSISTENT_PAIR;
    case K::UnknownKey: return NCV_E_UNKNOWN_KEY;
    case K::Syntax: return NCV_E_SYNTAX;
    case K::Io: return NCV_E_IO;
    case K::DegenerateHistory: return NCV_E_DEGENERATE_HISTORY;
    case K::InvalidScenario: return NCV_E_INVALID_SCENARIO;
    case K::DayOutOfRange: return NCV_E_DAY_OUT_OF_RANGE;
    case K::MissingCardParameters: return NCV_E_MISSING_CARD_PARAMETERS;
    case K::InfeasiblePerturbation: return NCV_E_INFEASIBLE_PERTURBATION;
    case K::ZeroBaselineROI: return NCV_E_ZERO_BASELINE_ROI;
    case K::UndefinedMetric: return NCV_E_UNDEFINED_METRIC;
    case K::EmptySeries: return NCV_E_EMPTY_SERIES;
    case K::MismatchedSeries: return NCV_E_MISMATCHED_SERIES;
  }
  return NCV_E_INTERNAL;
}

ncv_status fail(ncv_status status, std::string message, std::string file = {}, std::string key = {},
                int line = 0) {
  last_error = {std::move(message), std::move(file), std::move(key), line};
  return status;
}

template <class Fn>
ncv_status guarded(Fn&& fn) noexcept {
  try {
    return fn();
  } catch (const ncv::Error& e) {
    return fail(to_status(e.kind()), e.what(), e.file(), e.key(), e.line());
  } catch (const std::bad_alloc&) {
    return fail(NCV_E_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(NCV_E_INTERNAL, e.what());
  } catch (...) {
    return fail(NCV_E_INTERNAL, "unknown exception");
  }
}

ncv_status null_argument(const char* name) {
  return fail(NCV_E_INVALID_ARGUMENT, std::string(name) + " must not be null");
}

ncv::GrowthModel to_model(ncv_growth g) {
  switch (g.kind) {
    case NCV_GROWTH_EXPONENTIAL: return ncv::Exponential{g.parameter};
    case NCV_GROWTH_LINEAR: return ncv::Linear{g.parameter};
    case NCV_GROWTH_MOORE: return ncv::MooreLaw{g.parameter};
    case NCV_GROWTH_FLAT: return ncv::Flat{};
  }
  throw ncv::Error(ncv::ErrorKind::InvalidScenario, "unknown growth kind");
}

ncv_growth from_model(const ncv::GrowthModel& m) {
  if (const auto* e = std::get_if<ncv::Exponential>(&m)) return {NCV_GROWTH_EXPONENTIAL, e->rate};
  if (const auto* l = std::get_if<ncv::Linear>(&m)) return {NCV_GROWTH_LINEAR, l->daily_fraction};
  if (const auto* t = std::get_if<ncv::MooreLaw>(&m)) return {NCV_GROWTH_MOORE, t->doubling_days};
  return {NCV_GROWTH_FLAT, 0.0};
}

long as_day(double value, const char* what) {
  if (!std::isfinite(value) || value != std::floor(value) ||
      std::abs(value) > static_cast<double>(std::numeric_limits<int>::max()))
    throw ncv::Error(ncv::ErrorKind::InvalidScenario, std::string(what) + " must be an integer");
  return static_cast<long>(value);
}

void copy_diagnostic(char (&dst)[192], const std::string& src) {
  const std::size_t n = std::min(src.size(), sizeof(dst) - 1);
  std::memcpy(dst, src.data(), n);
  dst[n] = '\0';
}

ncv_text* make_text(std::string s) { return new ncv_text{std::move(s)}; }

}  // namespace

extern "C" {

const char* ncv_status_name(ncv_status status) {
  switch (status) {
    case NCV_OK: return "ok";
    case NCV_E_MISSING_KEY: return "MissingKey";
    case NCV_E_DUPLICATE_KEY: return "DuplicateKey";
    case NCV_E_BAD_NUMBER: return "BadNumber";
    case NCV_E_UNIT_VIOLATION: return "UnitViolation";
    case NCV_E_INCONSISTENT_PAIR: return "InconsistentPair";
    case NCV_E_UNKNOWN_KEY: return "UnknownKey";
    case NCV_E_SYNTAX: return "Syntax";
    case NCV_E_IO: return "Io";
    case NCV_E_DEGENERATE_HISTORY: return "DegenerateHistory";
    case NCV_E_INVALID_SCENARIO: return "InvalidScenario";
    case NCV_E_DAY_OUT_OF_RANGE: return "DayOutOfRange";
    case NCV_E_MISSING_CARD_PARAMETERS: return "MissingCardParameters";
    case NCV_E_INFEASIBLE_PERTURBATION: return "InfeasiblePerturbation";
    case NCV_E_ZERO_BASELINE_ROI: return "ZeroBaselineROI";
    case NCV_E_UNDEFINED_METRIC: return "UndefinedMetric";
    case NCV_E_EMPTY_SERIES: return "EmptySeries";
    case NCV_E_MISMATCHED_SERIES: return "MismatchedSeries";
    case NCV_E_INVALID_ARGUMENT: return "InvalidArgument";
    case NCV_E_INTERNAL: return "Internal";
  }
  return "Unknown";
}

int ncv_status_is_input_error(ncv_status status) {
  return status >= NCV_E_MISSING_KEY && status <= NCV_E_DEGENERATE_HISTORY;
}

const char* ncv_last_error_message(void) { return last_error.message.c_str(); }
const char* ncv_last_error_file(void) { return last_error.file.c_str(); }
const char* ncv_last_error_key(void) { return last_error.key.c_str(); }
int ncv_last_error_line(void) { return last_error.line; }

const char* ncv_text_data(const ncv_text* text) { return text ? text->data.c_str() : ""; }
size_t ncv_text_size(const ncv_text* text) { return text ? text->data.size() : 0; }
void ncv_text_free(ncv_text* text) { delete text; }

ncv_status ncv_growth_decay_factor(ncv_growth growth, int64_t day, double* out) {
  if (!out) return null_argument("out");
  return guarded([&] {
    if (day < 0) throw ncv::Error(ncv::ErrorKind::DayOutOfRange, "day must be >= 0");
    const auto model = to_model(growth);
    ncv::validate(model);
    *out = ncv::decay_factor(model, static_cast<long>(day));
    return NCV_OK;
  });
}

ncv_status ncv_fit_linear_csv(const char* text, size_t length, int endpoints, double* daily_fraction,
                              int* negative_slope_clamped) {
  if (!text) return null_argument("text");
  if (!daily_fraction) return null_argument("daily_fraction");
  return guarded([&] {
    const auto fit = ncv::fit_linear(ncv::parse_hashrate_csv({text, length}),
                                     endpoints ? ncv::LinearFitMethod::Endpoints
                                               : ncv::LinearFitMethod::LeastSquares);
    *daily_fraction = fit.model.daily_fraction;
    if (negative_slope_clamped) *negative_slope_clamped = fit.negative_slope_clamped ? 1 : 0;
    return NCV_OK;
  });
}

ncv_status ncv_scenario_load(const char* path, ncv_scenario** out) {
  if (!path) return null_argument("path");
  if (!out) return null_argument("out");
  *out = nullptr;
  return guarded([&] {
    *out = new ncv_scenario{ncv::load_scenario(path)};
    return NCV_OK;
  });
}

ncv_status ncv_scenario_parse(const char* text, size_t length, const char* base_dir,
                              ncv_scenario** out) {
  if (!text) return null_argument("text");
  if (!out) return null_argument("out");
  *out = nullptr;
  return guarded([&] {
    *out = new ncv_scenario{
        ncv::parse_scenario({text, length}, base_dir ? std::filesystem::path(base_dir) : std::filesystem::path())};
    return NCV_OK;
  });
}

ncv_status ncv_scenario_clone(const ncv_scenario* scenario, ncv_scenario** out) {
  if (!scenario) return null_argument("scenario");
  if (!out) return null_argument("out");
  return guarded([&] {
    *out = new ncv_scenario(*scenario);
    return NCV_OK;
  });
}

void ncv_scenario_free(ncv_scenario* scenario) { delete scenario; }

size_t ncv_scenario_warning_count(const ncv_scenario* scenario) {
  return scenario ? scenario->doc.warnings.size() : 0;
}

const char* ncv_scenario_warning(const ncv_scenario* scenario, size_t index) {
  if (!scenario || index >= scenario->doc.warnings.size()) return nullptr;
  return scenario->doc.warnings[index].c_str();
}

ncv_status ncv_scenario_serialize(const ncv_scenario* scenario, ncv_text** out) {
  if (!scenario) return null_argument("scenario");
  if (!out) return null_argument("out");
  return guarded([&] {
    *out = make_text(ncv::serialize_scenario(scenario->doc.scenario));
    return NCV_OK;
  });
}

ncv_status ncv_scenario_get(const ncv_scenario* scenario, ncv_param param, double* out) {
  if (!scenario) return null_argument("scenario");
  if (!out) return null_argument("out");
  const auto& s = scenario->doc.scenario;
  constexpr double none = std::numeric_limits<double>::quiet_NaN();
  switch (param) {
    case NCV_PARAM_ADMIN_FEE: *out = s.fee_fraction; break;
    case NCV_PARAM_COIN_PER_DAY: *out = s.coin_per_day; break;
    case NCV_PARAM_ELECTRICITY_COIN_PER_DAY: *out = s.electricity_coin_per_day; break;
    case NCV_PARAM_COIN_PRICE_FIAT: *out = s.coin_price_fiat; break;
    case NCV_PARAM_RIG_COST_FIAT: *out = s.rig_cost_fiat; break;
    case NCV_PARAM_DELAY_DAYS: *out = static_cast<double>(s.delay_days); break;
    case NCV_PARAM_HORIZON_DAYS: *out = static_cast<double>(s.horizon_days); break;
    case NCV_PARAM_CARD_LIFETIME_DAYS: *out = static_cast<double>(s.card_lifetime_days); break;
    case NCV_PARAM_COP: *out = s.cop.value_or(none); break;
    case NCV_PARAM_CARD_COST_FIAT: *out = s.card_cost_fiat.value_or(none); break;
    default: return fail(NCV_E_INVALID_ARGUMENT, "unknown parameter");
  }
  return NCV_OK;
}

ncv_status ncv_scenario_set(ncv_scenario* scenario, ncv_param param, double value) {
  if (!scenario) return null_argument("scenario");
  return guarded([&] {
    auto s = scenario->doc.scenario;
    switch (param) {
      case NCV_PARAM_ADMIN_FEE: s.fee_fraction = value; break;
      case NCV_PARAM_COIN_PER_DAY: s.coin_per_day = value; break;
      case NCV_PARAM_ELECTRICITY_COIN_PER_DAY: s.electricity_coin_per_day = value; break;
      case NCV_PARAM_COIN_PRICE_FIAT: s.coin_price_fiat = value; break;
      case NCV_PARAM_RIG_COST_FIAT: s.rig_cost_fiat = value; break;
      case NCV_PARAM_DELAY_DAYS: s.delay_days = as_day(value, "delay_days"); break;
      case NCV_PARAM_HORIZON_DAYS: s.horizon_days = as_day(value, "horizon_days"); break;
      case NCV_PARAM_CARD_LIFETIME_DAYS:
        s.card_lifetime_days = as_day(value, "card_lifetime_days");
        break;
      case NCV_PARAM_COP:
        s.cop = std::isnan(value) ? std::nullopt : std::optional<double>(value);
        break;
      case NCV_PARAM_CARD_COST_FIAT:
        s.card_cost_fiat = std::isnan(value) ? std::nullopt : std::optional<double>(value);
        break;
      default: return fail(NCV_E_INVALID_ARGUMENT, "unknown parameter");
    }
    ncv::validate(s);
    scenario->doc.scenario = s;
    return NCV_OK;
  });
}

double ncv_scenario_rig_kw(const ncv_scenario* scenario) {
  if (!scenario || !scenario->doc.rig_kw) return std::numeric_limits<double>::quiet_NaN();
  return *scenario->doc.rig_kw;
}

ncv_status ncv_scenario_get_growth(const ncv_scenario* scenario, ncv_growth* out) {
  if (!scenario) return null_argument("scenario");
  if (!out) return null_argument("out");
  *out = from_model(scenario->doc.scenario.growth);
  return NCV_OK;
}

ncv_status ncv_scenario_set_growth(ncv_scenario* scenario, ncv_growth growth) {
  if (!scenario) return null_argument("scenario");
  return guarded([&] {
    const auto model = to_model(growth);
    ncv::validate(model);
    scenario->doc.scenario.growth = model;
    return NCV_OK;
  });
}

ncv_status ncv_scenario_alternative_growth(const ncv_scenario* scenario, ncv_growth_kind kind,
                                           ncv_growth* out) {
  if (!scenario) return null_argument("scenario");
  if (!out) return null_argument("out");
  const auto& alt = scenario->doc.alternatives;
  switch (kind) {
    case NCV_GROWTH_EXPONENTIAL: *out = from_model(alt.exponential); break;
    case NCV_GROWTH_LINEAR: *out = from_model(alt.linear); break;
    case NCV_GROWTH_MOORE: *out = from_model(alt.moore); break;
    case NCV_GROWTH_FLAT: *out = {NCV_GROWTH_FLAT, 0.0}; break;
    default: return fail(NCV_E_INVALID_ARGUMENT, "unknown growth kind");
  }
  return NCV_OK;
}

ncv_status ncv_series_compute(const ncv_scenario* scenario, ncv_series** out) {
  if (!scenario) return null_argument("scenario");
  if (!out) return null_argument("out");
  *out = nullptr;
  return guarded([&] {
    *out = new ncv_series{ncv::ncv_series(scenario->doc.scenario)};
    return NCV_OK;
  });
}

void ncv_series_free(ncv_series* series) { delete series; }
size_t ncv_series_length(const ncv_series* series) { return series ? series->series.size() : 0; }
int64_t ncv_series_start_day(const ncv_series* series) {
  return series ? series->series.start_day() : 0;
}
const double* ncv_series_flows(const ncv_series* series) {
  return series ? series->series.flows().data() : nullptr;
}
const double* ncv_series_cumulative(const ncv_series* series) {
  return series ? series->series.cumulative().data() : nullptr;
}

ncv_status ncv_daily_coin_flow(const ncv_scenario* scenario, int64_t day, double* out) {
  if (!scenario) return null_argument("scenario");
  if (!out) return null_argument("out");
  return guarded([&] {
    *out = ncv::daily_coin_flow(scenario->doc.scenario, static_cast<long>(day));
    return NCV_OK;
  });
}

ncv_status ncv_summarize(const ncv_scenario* scenario, ncv_summary* out) {
  if (!scenario) return null_argument("scenario");
  if (!out) return null_argument("out");
  return guarded([&] {
    const auto s = ncv::summarize(scenario->doc.scenario);
    ncv_summary r{};
    r.peak_day = s.peak_day;
    r.peak_ncv = s.peak_ncv;
    r.payback_day = s.payback_day.value_or(0);
    r.doubling_day = s.doubling_day.value_or(0);
    r.hodl_coins = s.hodl_coins;
    r.roi = s.roi;
    if (const auto* e = std::get_if<ncv::ElectricityBound>(&s.eol)) {
      r.eol_kind = NCV_EOL_ELECTRICITY;
      r.eol_day = e->day;
    } else {
      r.eol_kind = NCV_EOL_OBSOLESCENCE;
      r.eol_day = std::get<ncv::Obsolescence>(s.eol).day;
    }
    r.peak_ncv_fiat_at_p0 = s.peak_ncv_fiat_at_p0;
    *out = r;
    return NCV_OK;
  });
}

ncv_status ncv_marginal_card_cost(const ncv_scenario* scenario, double* out) {
  if (!scenario) return null_argument("scenario");
  if (!out) return null_argument("out");
  return guarded([&] {
    *out = ncv::marginal_card_cost(scenario->doc.scenario);
    return NCV_OK;
  });
}

ncv_status ncv_frontier_card_price(const ncv_scenario* scenario, double* out) {
  if (!scenario) return null_argument("scenario");
  if (!out) return null_argument("out");
  return guarded([&] {
    *out = ncv::frontier_card_price(scenario->doc.scenario);
    return NCV_OK;
  });
}

ncv_status ncv_eol_cause(const ncv_scenario* scenario, ncv_eol_kind* kind, int64_t* day) {
  if (!scenario) return null_argument("scenario");
  if (!kind || !day) return null_argument("kind/day");
  return guarded([&] {
    const auto eol = ncv::eol_cause(scenario->doc.scenario);
    if (const auto* e = std::get_if<ncv::ElectricityBound>(&eol)) {
      *kind = NCV_EOL_ELECTRICITY;
      *day = e->day;
    } else {
      *kind = NCV_EOL_OBSOLESCENCE;
      *day = std::get<ncv::Obsolescence>(eol).day;
    }
    return NCV_OK;
  });
}

ncv_status ncv_fiat_npv(const ncv_scenario* scenario, const ncv_price_knot* knots, size_t knot_count,
                        double discount_rate_daily, double* mining_npv, double* hodl_value) {
  if (!scenario) return null_argument("scenario");
  if (!knots || knot_count == 0) return null_argument("knots");
  if (!mining_npv || !hodl_value) return null_argument("outputs");
  return guarded([&] {
    std::vector<ncv::FiatPricePath::Knot> path;
    for (size_t n = 0; n < knot_count; ++n) path.push_back({knots[n].day, knots[n].price});
    const auto r = ncv::fiat_npv(scenario->doc.scenario,
                                 ncv::FiatPricePath::piecewise_linear(std::move(path), discount_rate_daily));
    *mining_npv = r.mining_npv;
    *hodl_value = r.hodl_value;
    return NCV_OK;
  });
}

ncv_sensitivity_options ncv_sensitivity_defaults(void) {
  return {ncv::SensitivityOptions{}.delta, 0, NCV_METRIC_ROI};
}

const char* ncv_factor_name(ncv_factor factor) {
  switch (factor) {
    case NCV_FACTOR_DELIVERY_DELAY: return "DeliveryDelay";
    case NCV_FACTOR_RIG_COST: return "RigCost";
    case NCV_FACTOR_GROWTH_RATE: return "GrowthRate";
    case NCV_FACTOR_ELECTRICITY_PRICE: return "ElectricityPrice";
  }
  return "Unknown";
}

ncv_status ncv_rank_factors(const ncv_scenario* scenario, const ncv_sensitivity_options* options,
                            ncv_sensitivity_report* out) {
  if (!scenario) return null_argument("scenario");
  if (!out) return null_argument("out");
  return guarded([&] {
    ncv::SensitivityOptions opts;
    if (options) {
      opts.delta = options->delta;
      if (options->delay_step_days > 0) opts.delay_step_days = static_cast<long>(options->delay_step_days);
      opts.metric = options->metric == NCV_METRIC_PAYBACK_DAY ? ncv::Metric::PaybackDay : ncv::Metric::Roi;
    }
    const auto report = ncv::rank_factors(scenario->doc.scenario, opts);
    ncv_sensitivity_report r{};
    r.metric = report.metric == ncv::Metric::PaybackDay ? NCV_METRIC_PAYBACK_DAY : NCV_METRIC_ROI;
    r.baseline = report.baseline;
    for (std::size_t n = 0; n < report.entries.size() && n < 4; ++n) {
      const auto& e = report.entries[n];
      auto& dst = r.entries[n];
      dst.factor = static_cast<ncv_factor>(static_cast<int>(e.factor));
      dst.perturbed_down = std::numeric_limits<double>::quiet_NaN();
      if (e.result) {
        dst.ok = 1;
        dst.elasticity = e.result->value;
        dst.perturbed_up = e.result->perturbed_up;
        if (e.result->perturbed_down) dst.perturbed_down = *e.result->perturbed_down;
        dst.relative_step = e.result->relative_step;
        dst.central = e.result->central ? 1 : 0;
        dst.delay_normalized_by_lifetime = e.result->delay_normalized_by_lifetime ? 1 : 0;
      }
      copy_diagnostic(dst.diagnostic, e.diagnostic);
    }
    *out = r;
    return NCV_OK;
  });
}

ncv_status ncv_render_svg(const ncv_plot_series* series, size_t series_count, const char* title,
                          ncv_text** out) {
  if (!out) return null_argument("out");
  if (!series && series_count > 0) return null_argument("series");
  return guarded([&] {
    std::vector<ncv::NamedSeries> named;
    for (size_t n = 0; n < series_count; ++n) {
      const auto& s = series[n];
      if (s.count > 0 && (!s.days || !s.values))
        throw ncv::Error(ncv::ErrorKind::EmptySeries, "series data must not be null");
      named.push_back({s.label ? s.label : "", std::vector<double>(s.days, s.days + s.count),
                       std::vector<double>(s.values, s.values + s.count)});
    }
    *out = make_text(ncv::render_svg(named, title ? title : ""));
    return NCV_OK;
  });
}

ncv_status ncv_format_csv(const char* const* header, size_t columns, const double* values, size_t rows,
                          ncv_text** out) {
  if (!header) return null_argument("header");
  if (!values && rows > 0) return null_argument("values");
  if (!out) return null_argument("out");
  return guarded([&] {
    ncv::CsvTable table;
    for (size_t c = 0; c < columns; ++c) table.header.emplace_back(header[c]);
    for (size_t r = 0; r < rows; ++r)
      table.rows.emplace_back(values + r * columns, values + (r + 1) * columns);
    *out = make_text(ncv::to_csv(table));
    return NCV_OK;
  });
}

ncv_status ncv_format_table(const char* const* header, size_t columns, const char* const* cells,
                            size_t rows, ncv_text** out) {
  if (!header) return null_argument("header");
  if (!cells && rows > 0) return null_argument("cells");
  if (!out) return null_argument("out");
  return guarded([&] {
    std::vector<std::string> head(header, header + columns);
    std::vector<std::vector<std::string>> body;
    for (size_t r = 0; r < rows; ++r)
      body.emplace_back(cells + r * columns, cells + (r + 1) * columns);
    *out = make_text(ncv::format_table(head, body));
    return NCV_OK;
  });
}

ncv_status ncv_format_significant(double value, int digits, char* buffer, size_t capacity) {
  if (!buffer || capacity == 0) return null_argument("buffer");
  return guarded([&] {
    const auto s = ncv::format_significant(value, digits);
    if (s.size() + 1 > capacity) return fail(NCV_E_INVALID_ARGUMENT, "buffer too small");
    std::memcpy(buffer, s.c_str(), s.size() + 1);
    return NCV_OK;
  });
}

ncv_status ncv_write_file_atomic(const char* path, const char* data, size_t length) {
  if (!path) return null_argument("path");
  if (!data && length > 0) return null_argument("data");
  return guarded([&] {
    ncv::write_file_atomic(path, {data ? data : "", length});
    return NCV_OK;
  });
}

}  // extern "C"
