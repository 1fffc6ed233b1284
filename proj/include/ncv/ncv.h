/*
 * C interface to the net-coin-value engine.
 *
 * Objects are opaque handles created by *_load / *_parse / *_compute
 * functions and released with the matching *_free. Every fallible call
 * returns an ncv_status; on failure the thread's last-error slots describe
 * what went wrong until the next failing call on the same thread.
 *
 * Days are 1-based; a day field of 0 in a result struct means "none".
 */
#ifndef NCV_NCV_H
#define NCV_NCV_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(NCV_BUILDING_LIBRARY)
#    define NCV_API __declspec(dllexport)
#  else
#    define NCV_API __declspec(dllimport)
#  endif
#else
#  define NCV_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum ncv_status {
  NCV_OK = 0,

  /* input files */
  NCV_E_MISSING_KEY = 1,
  NCV_E_DUPLICATE_KEY = 2,
  NCV_E_BAD_NUMBER = 3,
  NCV_E_UNIT_VIOLATION = 4,
  NCV_E_INCONSISTENT_PAIR = 5,
  NCV_E_UNKNOWN_KEY = 6,
  NCV_E_SYNTAX = 7,
  NCV_E_IO = 8,
  NCV_E_DEGENERATE_HISTORY = 9,

  /* model */
  NCV_E_INVALID_SCENARIO = 20,
  NCV_E_DAY_OUT_OF_RANGE = 21,
  NCV_E_MISSING_CARD_PARAMETERS = 22,

  /* sensitivity */
  NCV_E_INFEASIBLE_PERTURBATION = 30,
  NCV_E_ZERO_BASELINE_ROI = 31,
  NCV_E_UNDEFINED_METRIC = 32,

  /* rendering */
  NCV_E_EMPTY_SERIES = 40,
  NCV_E_MISMATCHED_SERIES = 41,

  NCV_E_INVALID_ARGUMENT = 90,
  NCV_E_INTERNAL = 99
} ncv_status;

NCV_API const char* ncv_status_name(ncv_status status);
/* Non-zero for errors caused by scenario or CSV input. */
NCV_API int ncv_status_is_input_error(ncv_status status);

NCV_API const char* ncv_last_error_message(void);
NCV_API const char* ncv_last_error_file(void);
NCV_API const char* ncv_last_error_key(void);
NCV_API int ncv_last_error_line(void);

/* ---- owned text --------------------------------------------------------- */

typedef struct ncv_text ncv_text;

NCV_API const char* ncv_text_data(const ncv_text* text);
NCV_API size_t ncv_text_size(const ncv_text* text);
NCV_API void ncv_text_free(ncv_text* text);

/* ---- growth models ------------------------------------------------------ */

typedef enum ncv_growth_kind {
  NCV_GROWTH_EXPONENTIAL = 0, /* parameter: daily rate r */
  NCV_GROWTH_LINEAR = 1,      /* parameter: daily fraction g of day-0 hashrate */
  NCV_GROWTH_MOORE = 2,       /* parameter: doubling period in days */
  NCV_GROWTH_FLAT = 3         /* parameter ignored */
} ncv_growth_kind;

typedef struct ncv_growth {
  ncv_growth_kind kind;
  double parameter;
} ncv_growth;

NCV_API ncv_status ncv_growth_decay_factor(ncv_growth growth, int64_t day, double* out);

/* Fits linear growth to `day,hashrate` CSV text. `endpoints` selects the
 * two-point fit instead of least squares. */
NCV_API ncv_status ncv_fit_linear_csv(const char* text, size_t length, int endpoints,
                                      double* daily_fraction, int* negative_slope_clamped);

/* ---- scenarios ---------------------------------------------------------- */

typedef struct ncv_scenario ncv_scenario;

typedef enum ncv_param {
  NCV_PARAM_ADMIN_FEE = 0,
  NCV_PARAM_COIN_PER_DAY = 1,
  NCV_PARAM_ELECTRICITY_COIN_PER_DAY = 2,
  NCV_PARAM_COIN_PRICE_FIAT = 3,
  NCV_PARAM_RIG_COST_FIAT = 4,
  NCV_PARAM_DELAY_DAYS = 5,
  NCV_PARAM_HORIZON_DAYS = 6,
  NCV_PARAM_CARD_LIFETIME_DAYS = 7,
  NCV_PARAM_COP = 8,            /* NaN means no cooling load */
  NCV_PARAM_CARD_COST_FIAT = 9  /* NaN means unset */
} ncv_param;

NCV_API ncv_status ncv_scenario_load(const char* path, ncv_scenario** out);
/* `base_dir` resolves a relative hashrate_csv path; may be NULL. */
NCV_API ncv_status ncv_scenario_parse(const char* text, size_t length, const char* base_dir,
                                      ncv_scenario** out);
NCV_API ncv_status ncv_scenario_clone(const ncv_scenario* scenario, ncv_scenario** out);
NCV_API void ncv_scenario_free(ncv_scenario* scenario);

NCV_API size_t ncv_scenario_warning_count(const ncv_scenario* scenario);
NCV_API const char* ncv_scenario_warning(const ncv_scenario* scenario, size_t index);

NCV_API ncv_status ncv_scenario_serialize(const ncv_scenario* scenario, ncv_text** out);

NCV_API ncv_status ncv_scenario_get(const ncv_scenario* scenario, ncv_param param, double* out);
/* Integer parameters must be integral. The scenario is unchanged when the
 * new value would violate an invariant. */
NCV_API ncv_status ncv_scenario_set(ncv_scenario* scenario, ncv_param param, double value);

/* Rig power draw in kW when the file gave electricity as a kWh price;
 * NaN otherwise. */
NCV_API double ncv_scenario_rig_kw(const ncv_scenario* scenario);

NCV_API ncv_status ncv_scenario_get_growth(const ncv_scenario* scenario, ncv_growth* out);
NCV_API ncv_status ncv_scenario_set_growth(ncv_scenario* scenario, ncv_growth growth);
/* The exponential / linear / Moore curve the scenario file describes, for
 * side-by-side comparison. */
NCV_API ncv_status ncv_scenario_alternative_growth(const ncv_scenario* scenario,
                                                   ncv_growth_kind kind, ncv_growth* out);

/* ---- valuation ---------------------------------------------------------- */

typedef struct ncv_series ncv_series;

NCV_API ncv_status ncv_series_compute(const ncv_scenario* scenario, ncv_series** out);
NCV_API void ncv_series_free(ncv_series* series);
NCV_API size_t ncv_series_length(const ncv_series* series);
NCV_API int64_t ncv_series_start_day(const ncv_series* series);
NCV_API const double* ncv_series_flows(const ncv_series* series);
NCV_API const double* ncv_series_cumulative(const ncv_series* series);

NCV_API ncv_status ncv_daily_coin_flow(const ncv_scenario* scenario, int64_t day, double* out);

typedef enum ncv_eol_kind { NCV_EOL_OBSOLESCENCE = 0, NCV_EOL_ELECTRICITY = 1 } ncv_eol_kind;

typedef struct ncv_summary {
  int64_t peak_day;
  double peak_ncv;
  int64_t payback_day;  /* 0 = never within horizon */
  int64_t doubling_day; /* 0 = never within horizon */
  double hodl_coins;
  double roi;
  ncv_eol_kind eol_kind;
  int64_t eol_day;
  double peak_ncv_fiat_at_p0;
} ncv_summary;

NCV_API ncv_status ncv_summarize(const ncv_scenario* scenario, ncv_summary* out);
NCV_API ncv_status ncv_marginal_card_cost(const ncv_scenario* scenario, double* out);
NCV_API ncv_status ncv_frontier_card_price(const ncv_scenario* scenario, double* out);
NCV_API ncv_status ncv_eol_cause(const ncv_scenario* scenario, ncv_eol_kind* kind, int64_t* day);

typedef struct ncv_price_knot {
  double day;
  double price;
} ncv_price_knot;

/* Piecewise-linear price path (a single knot is a constant price). */
NCV_API ncv_status ncv_fiat_npv(const ncv_scenario* scenario, const ncv_price_knot* knots,
                                size_t knot_count, double discount_rate_daily,
                                double* mining_npv, double* hodl_value);

/* ---- sensitivity -------------------------------------------------------- */

typedef enum ncv_factor {
  NCV_FACTOR_DELIVERY_DELAY = 0,
  NCV_FACTOR_RIG_COST = 1,
  NCV_FACTOR_GROWTH_RATE = 2,
  NCV_FACTOR_ELECTRICITY_PRICE = 3
} ncv_factor;

typedef enum ncv_metric { NCV_METRIC_ROI = 0, NCV_METRIC_PAYBACK_DAY = 1 } ncv_metric;

typedef struct ncv_sensitivity_options {
  double delta;            /* relative step in (0, 1) */
  int64_t delay_step_days; /* <= 0 selects the default step */
  ncv_metric metric;
} ncv_sensitivity_options;

typedef struct ncv_factor_result {
  ncv_factor factor;
  int ok;
  double elasticity;
  double perturbed_up;
  double perturbed_down; /* NaN for a one-sided difference */
  double relative_step;
  int central;
  int delay_normalized_by_lifetime;
  char diagnostic[192];
} ncv_factor_result;

typedef struct ncv_sensitivity_report {
  ncv_metric metric;
  double baseline;
  ncv_factor_result entries[4]; /* rank order */
} ncv_sensitivity_report;

NCV_API ncv_sensitivity_options ncv_sensitivity_defaults(void);
NCV_API const char* ncv_factor_name(ncv_factor factor);
NCV_API ncv_status ncv_rank_factors(const ncv_scenario* scenario,
                                    const ncv_sensitivity_options* options,
                                    ncv_sensitivity_report* out);

/* ---- output ------------------------------------------------------------- */

typedef struct ncv_plot_series {
  const char* label;
  const double* days;
  const double* values;
  size_t count;
} ncv_plot_series;

NCV_API ncv_status ncv_render_svg(const ncv_plot_series* series, size_t series_count,
                                  const char* title, ncv_text** out);

/* Row-major `values` of rows x columns, printed at full round-trip precision. */
NCV_API ncv_status ncv_format_csv(const char* const* header, size_t columns, const double* values,
                                  size_t rows, ncv_text** out);

/* Row-major cells of rows x columns under `header`, column-aligned. */
NCV_API ncv_status ncv_format_table(const char* const* header, size_t columns,
                                    const char* const* cells, size_t rows, ncv_text** out);

/* Writes snprintf-style into `buffer`; `digits` significant digits. */
NCV_API ncv_status ncv_format_significant(double value, int digits, char* buffer, size_t capacity);

NCV_API ncv_status ncv_write_file_atomic(const char* path, const char* data, size_t length);

#ifdef __cplusplus
}
#endif

#endif /* NCV_NCV_H */
