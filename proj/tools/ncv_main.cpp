// ncv: command-line front end over the C API.
//
//   ncv value <scenario>              summary, or day,c_i,ncv rows
//   ncv compare <scenario>            HODL vs exponential/linear/Moore NCV
//   ncv delay <scenario> --delays 0,140
//   ncv sweep-electricity <scenario> --prices 0,0.1,0.19
//   ncv sensitivity <scenario>
//   ncv frontier <scenario>
//
// Exit status: 0 ok, 1 usage, 2 scenario/CSV input error, 3 infeasible
// computation.

#include <cmath>
#include <cstdio>
#include <iostream>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "ncv/ncv.h"

namespace {

struct ScenarioDeleter {
  void operator()(ncv_scenario* p) const { ncv_scenario_free(p); }
};
struct SeriesDeleter {
  void operator()(ncv_series* p) const { ncv_series_free(p); }
};
struct TextDeleter {
  void operator()(ncv_text* p) const { ncv_text_free(p); }
};
using ScenarioPtr = std::unique_ptr<ncv_scenario, ScenarioDeleter>;
using SeriesPtr = std::unique_ptr<ncv_series, SeriesDeleter>;
using TextPtr = std::unique_ptr<ncv_text, TextDeleter>;

/// Carries a failed ncv_status out to main().
struct ApiFailure : std::runtime_error {
  ncv_status status;
  explicit ApiFailure(ncv_status s) : std::runtime_error(ncv_last_error_message()), status(s) {}
};

void check(ncv_status status) {
  if (status != NCV_OK) throw ApiFailure(status);
}

int report_failure(const ApiFailure& e) {
  std::string where;
  if (*ncv_last_error_file()) where += ncv_last_error_file();
  if (ncv_last_error_line() > 0) where += ":" + std::to_string(ncv_last_error_line());
  std::cerr << "ncv: error: " << (where.empty() ? "" : where + ": ") << ncv_status_name(e.status)
            << ": " << e.what();
  if (*ncv_last_error_key()) std::cerr << " [key " << ncv_last_error_key() << "]";
  std::cerr << '\n';
  return ncv_status_is_input_error(e.status) ? 2 : 3;
}

enum class Format { Table, Csv, Svg };

struct Options {
  std::string scenario_path;
  std::optional<long> horizon;
  std::string format = "table";
  std::string output;
  double delta = 0.10;
  long delay_step = 0;
  std::vector<long> delays{0, 140};
  std::vector<double> prices;
  std::string price_unit = "kwh";
  std::optional<double> rig_kw;
};

Format parse_format(const std::string& f) {
  if (f == "csv") return Format::Csv;
  if (f == "svg") return Format::Svg;
  return Format::Table;
}

std::string sig(double v) {
  char buf[64];
  check(ncv_format_significant(v, 5, buf, sizeof buf));
  return buf;
}

std::string day_or_none(int64_t day) { return day > 0 ? std::to_string(day) : "none"; }

std::string text_of(ncv_text* t) {
  TextPtr owned(t);
  return std::string(ncv_text_data(owned.get()), ncv_text_size(owned.get()));
}

std::string csv(const std::vector<std::string>& header, const std::vector<std::vector<double>>& rows) {
  std::vector<const char*> head;
  for (const auto& h : header) head.push_back(h.c_str());
  std::vector<double> flat;
  for (const auto& r : rows) flat.insert(flat.end(), r.begin(), r.end());
  ncv_text* out = nullptr;
  check(ncv_format_csv(head.data(), head.size(), flat.data(), rows.size(), &out));
  return text_of(out);
}

std::string table(const std::vector<std::string>& header,
                  const std::vector<std::vector<std::string>>& rows) {
  std::vector<const char*> head;
  for (const auto& h : header) head.push_back(h.c_str());
  std::vector<const char*> cells;
  for (const auto& r : rows)
    for (const auto& c : r) cells.push_back(c.c_str());
  ncv_text* out = nullptr;
  check(ncv_format_table(head.data(), head.size(), cells.data(), rows.size(), &out));
  return text_of(out);
}

struct Curve {
  std::string label;
  std::vector<double> days;
  std::vector<double> values;
};

std::string svg(const std::vector<Curve>& curves, const std::string& title) {
  std::vector<ncv_plot_series> plot;
  for (const auto& c : curves) plot.push_back({c.label.c_str(), c.days.data(), c.values.data(), c.days.size()});
  ncv_text* out = nullptr;
  check(ncv_render_svg(plot.data(), plot.size(), title.c_str(), &out));
  return text_of(out);
}

void emit(const Options& opts, const std::string& content) {
  if (opts.output.empty()) {
    std::cout << content;
    std::cout.flush();
    return;
  }
  check(ncv_write_file_atomic(opts.output.c_str(), content.data(), content.size()));
}

ScenarioPtr load(const Options& opts) {
  ncv_scenario* raw = nullptr;
  check(ncv_scenario_load(opts.scenario_path.c_str(), &raw));
  ScenarioPtr s(raw);
  for (size_t n = 0; n < ncv_scenario_warning_count(s.get()); ++n)
    std::cerr << "ncv: warning: " << ncv_scenario_warning(s.get(), n) << '\n';
  if (opts.horizon) check(ncv_scenario_set(s.get(), NCV_PARAM_HORIZON_DAYS, static_cast<double>(*opts.horizon)));
  return s;
}

ScenarioPtr clone(const ncv_scenario* s) {
  ncv_scenario* raw = nullptr;
  check(ncv_scenario_clone(s, &raw));
  return ScenarioPtr(raw);
}

SeriesPtr series_of(const ncv_scenario* s) {
  ncv_series* raw = nullptr;
  check(ncv_series_compute(s, &raw));
  return SeriesPtr(raw);
}

Curve ncv_curve(const ncv_scenario* s, std::string label) {
  const auto series = series_of(s);
  Curve c{std::move(label), {}, {}};
  const auto n = ncv_series_length(series.get());
  const auto start = ncv_series_start_day(series.get());
  const double* cum = ncv_series_cumulative(series.get());
  for (size_t k = 0; k < n; ++k) {
    c.days.push_back(static_cast<double>(start + static_cast<int64_t>(k)));
    c.values.push_back(cum[k]);
  }
  return c;
}

ncv_summary summary_of(const ncv_scenario* s) {
  ncv_summary out{};
  check(ncv_summarize(s, &out));
  return out;
}

std::string eol_text(ncv_eol_kind kind, int64_t day) {
  return std::string(kind == NCV_EOL_ELECTRICITY ? "electricity" : "obsolescence") + " @ day " +
         std::to_string(day);
}

int run_value(const Options& opts) {
  const auto s = load(opts);
  switch (parse_format(opts.format)) {
    case Format::Csv: {
      const auto series = series_of(s.get());
      std::vector<std::vector<double>> rows;
      const auto start = ncv_series_start_day(series.get());
      for (size_t k = 0; k < ncv_series_length(series.get()); ++k)
        rows.push_back({static_cast<double>(start + static_cast<int64_t>(k)),
                        ncv_series_flows(series.get())[k], ncv_series_cumulative(series.get())[k]});
      emit(opts, csv({"day", "c_i", "ncv"}, rows));
      break;
    }
    case Format::Svg: {
      auto mining = ncv_curve(s.get(), "mining NCV");
      const auto sum = summary_of(s.get());
      Curve hodl{"HODL", mining.days, std::vector<double>(mining.days.size(), sum.hodl_coins)};
      emit(opts, svg({hodl, mining}, "Net coin value"));
      break;
    }
    case Format::Table: {
      const auto sum = summary_of(s.get());
      emit(opts, table({"quantity", "value"},
                       {{"peak_day", std::to_string(sum.peak_day)},
                        {"peak_ncv", sig(sum.peak_ncv)},
                        {"peak_ncv_fiat_at_p0", sig(sum.peak_ncv_fiat_at_p0)},
                        {"payback_day", day_or_none(sum.payback_day)},
                        {"doubling_day", day_or_none(sum.doubling_day)},
                        {"hodl_coins", sig(sum.hodl_coins)},
                        {"roi", sig(sum.roi)},
                        {"end_of_life", eol_text(sum.eol_kind, sum.eol_day)}}));
      break;
    }
  }
  return 0;
}

int run_compare(const Options& opts) {
  const auto base = load(opts);
  const std::pair<ncv_growth_kind, const char*> kinds[] = {
      {NCV_GROWTH_EXPONENTIAL, "ncv_exponential"},
      {NCV_GROWTH_LINEAR, "ncv_linear"},
      {NCV_GROWTH_MOORE, "ncv_moore"}};

  std::vector<Curve> curves;
  std::vector<ncv_summary> summaries;
  for (const auto& [kind, label] : kinds) {
    auto s = clone(base.get());
    ncv_growth g{};
    check(ncv_scenario_alternative_growth(base.get(), kind, &g));
    check(ncv_scenario_set_growth(s.get(), g));
    curves.push_back(ncv_curve(s.get(), label));
    summaries.push_back(summary_of(s.get()));
  }
  const double hodl = summaries.front().hodl_coins;
  curves.insert(curves.begin(), Curve{"hodl", curves.front().days,
                                      std::vector<double>(curves.front().days.size(), hodl)});

  switch (parse_format(opts.format)) {
    case Format::Csv: {
      std::vector<std::vector<double>> rows;
      for (size_t k = 0; k < curves.front().days.size(); ++k) {
        std::vector<double> row{curves.front().days[k]};
        for (const auto& c : curves) row.push_back(c.values[k]);
        rows.push_back(std::move(row));
      }
      emit(opts, csv({"day", "hodl", "ncv_exponential", "ncv_linear", "ncv_moore"}, rows));
      break;
    }
    case Format::Svg:
      emit(opts, svg(curves, "HODL vs mining under three growth laws"));
      break;
    case Format::Table: {
      std::vector<std::vector<std::string>> rows;
      for (size_t n = 0; n < summaries.size(); ++n) {
        const auto& sum = summaries[n];
        rows.push_back({kinds[n].second, std::to_string(sum.peak_day), sig(sum.peak_ncv), sig(sum.roi),
                        day_or_none(sum.payback_day)});
      }
      rows.push_back({"hodl", "-", sig(hodl), "1", "-"});
      emit(opts, table({"curve", "peak_day", "peak_ncv", "roi", "payback_day"}, rows));
      break;
    }
  }
  return 0;
}

int run_delay(const Options& opts) {
  const auto base = load(opts);
  std::vector<std::vector<double>> rows;
  std::vector<Curve> curves;
  for (long d : opts.delays) {
    auto s = clone(base.get());
    check(ncv_scenario_set(s.get(), NCV_PARAM_DELAY_DAYS, static_cast<double>(d)));
    const auto sum = summary_of(s.get());
    rows.push_back({static_cast<double>(d), sum.peak_ncv, sum.peak_ncv_fiat_at_p0, sum.roi});
    curves.push_back(ncv_curve(s.get(), "delay " + std::to_string(d) + " d"));
  }
  const std::vector<std::string> header{"delay_days", "max_ncv", "max_ncv_fiat_at_p0", "roi"};
  switch (parse_format(opts.format)) {
    case Format::Csv: emit(opts, csv(header, rows)); break;
    case Format::Svg: emit(opts, svg(curves, "Effect of delivery delay")); break;
    case Format::Table: {
      std::vector<std::vector<std::string>> cells;
      for (const auto& r : rows)
        cells.push_back({std::to_string(static_cast<long>(r[0])), sig(r[1]), sig(r[2]), sig(r[3])});
      emit(opts, table(header, cells));
      break;
    }
  }
  return 0;
}

int run_sweep(const Options& opts) {
  const auto base = load(opts);
  double price_per_coin = 0.0;
  check(ncv_scenario_get(base.get(), NCV_PARAM_COIN_PRICE_FIAT, &price_per_coin));
  const bool per_kwh = opts.price_unit == "kwh";
  double kw = opts.rig_kw.value_or(ncv_scenario_rig_kw(base.get()));
  if (per_kwh && std::isnan(kw)) {
    std::cerr << "ncv: error: " << opts.scenario_path
              << ": kWh prices need the rig power draw; give rig_kw in the scenario or --rig-kw\n";
    return 2;
  }

  std::vector<std::vector<double>> rows;
  std::vector<Curve> curves;
  for (double price : opts.prices) {
    auto s = clone(base.get());
    const double coin_per_day = per_kwh ? price * kw * 24.0 / price_per_coin : price;
    check(ncv_scenario_set(s.get(), NCV_PARAM_ELECTRICITY_COIN_PER_DAY, coin_per_day));
    const auto sum = summary_of(s.get());
    rows.push_back({price, static_cast<double>(sum.peak_day), sum.peak_ncv});
    curves.push_back(ncv_curve(s.get(), "price " + sig(price)));
  }
  const std::vector<std::string> header{"price", "peak_day", "peak_ncv"};
  switch (parse_format(opts.format)) {
    case Format::Csv: emit(opts, csv(header, rows)); break;
    case Format::Svg: emit(opts, svg(curves, "Effect of electricity price")); break;
    case Format::Table: {
      std::vector<std::vector<std::string>> cells;
      for (const auto& r : rows) cells.push_back({sig(r[0]), std::to_string(static_cast<long>(r[1])), sig(r[2])});
      emit(opts, table(header, cells));
      break;
    }
  }
  return 0;
}

int run_sensitivity(const Options& opts) {
  const auto s = load(opts);
  const ncv_metric metrics[] = {NCV_METRIC_ROI, NCV_METRIC_PAYBACK_DAY};
  const bool as_csv = parse_format(opts.format) == Format::Csv;
  std::vector<std::vector<std::string>> cells;
  std::string text;
  std::string csv_text = "metric,rank,factor,elasticity,perturbed_up,perturbed_down,difference\n";
  bool roi_ok = false;

  for (ncv_metric metric : metrics) {
    ncv_sensitivity_options o = ncv_sensitivity_defaults();
    o.delta = opts.delta;
    o.delay_step_days = opts.delay_step;
    o.metric = metric;
    ncv_sensitivity_report r{};
    const ncv_status status = ncv_rank_factors(s.get(), &o, &r);
    const std::string name = metric == NCV_METRIC_ROI ? "roi" : "payback_day";
    if (status != NCV_OK) {
      // Payback elasticity is undefined for rigs that never pay back; the
      // ROI ranking is still meaningful.
      if (metric == NCV_METRIC_PAYBACK_DAY && status == NCV_E_UNDEFINED_METRIC && roi_ok) {
        text += "\npayback_day sensitivity unavailable: " + std::string(ncv_last_error_message()) + "\n";
        continue;
      }
      throw ApiFailure(status);
    }
    if (metric == NCV_METRIC_ROI) roi_ok = true;

    cells.clear();
    bool lifetime_note = false;
    for (int k = 0; k < 4; ++k) {
      const auto& e = r.entries[k];
      const std::string diff = e.central ? "central" : "one-sided";
      if (e.ok) {
        lifetime_note |= e.delay_normalized_by_lifetime != 0;
        cells.push_back({std::to_string(k + 1), ncv_factor_name(e.factor), sig(e.elasticity),
                         e.elasticity > 1.0 ? "s > 1" : "s <= 1", diff});
        char row[512];
        std::snprintf(row, sizeof row, "%s,%d,%s,%.17g,%.17g,%.17g,%s\n", name.c_str(), k + 1,
                      ncv_factor_name(e.factor), e.elasticity, e.perturbed_up, e.perturbed_down, diff.c_str());
        csv_text += row;
      } else {
        cells.push_back({std::to_string(k + 1), ncv_factor_name(e.factor), "n/a", e.diagnostic, "-"});
        csv_text += name + "," + std::to_string(k + 1) + "," + ncv_factor_name(e.factor) + ",nan,nan,nan,error\n";
      }
    }
    text += (text.empty() ? "" : "\n") + name + " elasticity (baseline " + sig(r.baseline) +
            ", delta " + sig(opts.delta) + ")\n";
    text += table({"rank", "factor", "elasticity", "class", "difference"}, cells);
    if (lifetime_note)
      text += "note: zero baseline delay; delay step normalized by card lifetime\n";
  }
  emit(opts, as_csv ? csv_text : text);
  return 0;
}

int run_frontier(const Options& opts) {
  const auto s = load(opts);
  double frontier = 0.0;
  check(ncv_frontier_card_price(s.get(), &frontier));
  ncv_eol_kind kind{};
  int64_t day = 0;
  check(ncv_eol_cause(s.get(), &kind, &day));
  double lifetime = 0.0;
  check(ncv_scenario_get(s.get(), NCV_PARAM_CARD_LIFETIME_DAYS, &lifetime));
  double card = 0.0;
  check(ncv_scenario_get(s.get(), NCV_PARAM_CARD_COST_FIAT, &card));
  std::optional<double> marginal;
  if (!std::isnan(card)) {
    double m = 0.0;
    check(ncv_marginal_card_cost(s.get(), &m));
    marginal = m;
  }

  if (parse_format(opts.format) == Format::Csv) {
    char buf[512];
    std::snprintf(buf, sizeof buf,
                  "card_lifetime_days,frontier_card_price,marginal_card_cost,eol_cause,eol_day\n"
                  "%ld,%.17g,%.17g,%s,%ld\n",
                  static_cast<long>(lifetime), frontier, marginal.value_or(std::nan("")),
                  kind == NCV_EOL_ELECTRICITY ? "electricity" : "obsolescence", static_cast<long>(day));
    emit(opts, buf);
    return 0;
  }
  std::vector<std::vector<std::string>> rows{
      {"card_lifetime_days", std::to_string(static_cast<long>(lifetime))},
      {"frontier_card_price", sig(frontier)},
      {"marginal_card_cost", marginal ? sig(*marginal) : "n/a (no card_cost_fiat)"},
      {"end_of_life", eol_text(kind, day)}};
  emit(opts, table({"quantity", "value"}, rows));
  return 0;
}

void add_common(CLI::App* cmd, Options& opts, bool formats_svg = true) {
  cmd->add_option("scenario", opts.scenario_path, "Scenario file")->required();
  cmd->add_option("--horizon", opts.horizon, "Override horizon_days")->check(CLI::PositiveNumber);
  std::vector<std::string> formats{"table", "csv"};
  if (formats_svg) formats.push_back("svg");
  cmd->add_option("--format", opts.format, "Output format")->check(CLI::IsMember(formats));
  cmd->add_option("-o,--output", opts.output, "Write to this file instead of stdout");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Net coin value of crypto-mining hardware"};
  app.require_subcommand(1);
  Options opts;

  auto* value = app.add_subcommand("value", "Valuation summary or daily coin flows");
  add_common(value, opts);
  auto* compare = app.add_subcommand("compare", "HODL against three network-growth laws");
  add_common(compare, opts);
  auto* delay = app.add_subcommand("delay", "Peak NCV and ROI per delivery delay");
  add_common(delay, opts);
  delay->add_option("--delays", opts.delays, "Delivery delays in days")->delimiter(',');
  auto* sweep = app.add_subcommand("sweep-electricity", "Peak NCV per electricity price");
  add_common(sweep, opts);
  sweep->add_option("--prices", opts.prices, "Electricity prices")->delimiter(',')->required();
  sweep->add_option("--price-unit", opts.price_unit, "kwh (fiat per kWh) or coin (coin per day)")
      ->check(CLI::IsMember({"kwh", "coin"}));
  sweep->add_option("--rig-kw", opts.rig_kw, "Rig power draw for kWh prices");
  auto* sensitivity = app.add_subcommand("sensitivity", "Elasticity ranking of profitability drivers");
  add_common(sensitivity, opts, false);
  sensitivity->add_option("--delta", opts.delta, "Relative perturbation")->check(CLI::Range(0.0, 1.0));
  sensitivity->add_option("--delay-step", opts.delay_step, "Delay perturbation in days");
  auto* frontier = app.add_subcommand("frontier", "Break-even card price and end-of-life cause");
  add_common(frontier, opts, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (value->parsed()) return run_value(opts);
    if (compare->parsed()) return run_compare(opts);
    if (delay->parsed()) return run_delay(opts);
    if (sweep->parsed()) return run_sweep(opts);
    if (sensitivity->parsed()) return run_sensitivity(opts);
    if (frontier->parsed()) return run_frontier(opts);
  } catch (const ApiFailure& e) {
    return report_failure(e);
  }
  return 1;
}
