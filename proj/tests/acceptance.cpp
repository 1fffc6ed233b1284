// Reproduction report: one PASS/FAIL line per acceptance criterion.
// Exit status is the number of failed criteria.

#include <sys/wait.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <iostream>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "ncv/report.hpp"
#include "ncv/scenario_io.hpp"
#include "ncv/sensitivity.hpp"
#include "ncv/valuation.hpp"
#include "support/generators.hpp"
#include "support/oracle.hpp"

using namespace ncv;

namespace {

const std::string kData = NCV_DATA_DIR;
const std::string kCli = NCV_CLI_PATH;

int failures = 0;

void report(int id, const std::string& title, bool ok, const std::string& detail) {
  std::cout << (ok ? "PASS" : "FAIL") << "  [" << id << "] " << title << ": " << detail << '\n';
  if (!ok) ++failures;
}

// Runs a criterion body; exceptions count as failure.
void criterion(int id, const std::string& title, const std::function<bool(std::ostringstream&)>& body) {
  std::ostringstream detail;
  detail.precision(10);
  bool ok = false;
  try {
    ok = body(detail);
  } catch (const std::exception& e) {
    detail << "exception: " << e.what();
  }
  report(id, title, ok, detail.str());
}

bool within(double v, double lo, double hi) { return v >= lo && v <= hi; }

std::string cli(const std::string& args, int* status) {
  const std::string cmd = "'" + kCli + "' " + args + " 2>/dev/null";
  std::string out;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) throw std::runtime_error("popen failed");
  char buf[4096];
  size_t n = 0;
  while ((n = std::fread(buf, 1, sizeof buf, pipe)) > 0) out.append(buf, n);
  const int raw = pclose(pipe);
  *status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  return out;
}

Scenario s9_file() { return load_scenario(kData + "/s9_baseline.scenario").scenario; }

bool same_bits(const std::vector<double>& a, std::span<const double> b) {
  return std::equal(a.begin(), a.end(), b.begin(), b.end());
}

}  // namespace

int main() {
  std::cout << "ncv reproduction report\n";

  criterion(1, "S9 baseline golden values", [](std::ostringstream& d) {
    const auto t0 = std::chrono::steady_clock::now();
    const auto s = s9_file();
    const auto sum = summarize(s);
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    d << "peak_ncv=" << sum.peak_ncv << " (published 2.92) roi=" << sum.roi << " (published 2.45) fiat="
      << sum.peak_ncv_fiat_at_p0 << " (published 6875) runtime=" << secs << "s";
    return within(sum.peak_ncv, 2.84, 3.01) && within(sum.roi, 2.38, 2.53) &&
           within(sum.peak_ncv_fiat_at_p0, 6670, 7080) && secs < 1.0;
  });

  criterion(2, "140-day delivery delay", [](std::ostringstream& d) {
    const auto base = s9_file();
    auto delayed = load_scenario(kData + "/s9_delay140.scenario").scenario;
    const auto sum = summarize(delayed);
    const double hodl = hodl_baseline(delayed);
    const double rel = std::abs(sum.roi - sum.peak_ncv / hodl) / (sum.peak_ncv / hodl);
    d << "peak_ncv=" << sum.peak_ncv << " (published 1.253) no-delay peak=" << peak(base).ncv
      << " roi=" << sum.roi << " hodl=" << hodl << " (published 1.19149) roi rel err=" << rel;
    return delayed.delay_days == 140 && sum.peak_ncv < peak(base).ncv && rel <= 1e-9 &&
           within(sum.peak_ncv, 1.00, 1.55);
  });

  criterion(3, "geometric closed form, 100 scenarios", [](std::ostringstream& d) {
    gen::Rng rng(2024);
    double worst = 0.0;
    long longest = 0;
    for (int n = 0; n < 100; ++n) {
      const auto s = gen::exponential_no_electricity(rng);
      const double r = std::get<Exponential>(s.growth).rate;
      const double closed = oracle::geometric_ncv(s.fee_fraction, s.coin_per_day, r, s.horizon_days);
      worst = std::max(worst, std::abs(ncv_series(s).ncv(s.horizon_days) - closed) / closed);
      longest = std::max(longest, s.horizon_days);
    }
    d << "max relative error=" << worst << " (limit 1e-9), longest n=" << longest;
    return worst <= 1e-9;
  });

  criterion(4, "brute-force oracle, 100 scenarios", [](std::ostringstream& d) {
    gen::Rng rng(2025);
    int mismatches = 0;
    for (int n = 0; n < 100; ++n) {
      const auto s = gen::scenario(rng);
      const auto o = oracle::brute_force(gen::to_oracle(s));
      const auto series = ncv_series(s);
      const auto p = peak(series);
      const bool ok = same_bits(o.flows, series.flows()) && same_bits(o.cumulative, series.cumulative()) &&
                      payback_day(s) == o.payback && doubling_day(s) == o.doubling &&
                      p.day == o.peak_day && p.ncv == o.peak;
      if (!ok) ++mismatches;
    }
    d << mismatches << " of 100 scenarios differ";
    return mismatches == 0;
  });

  criterion(5, "property suite", [](std::ostringstream& d) {
    gen::Rng rng(2026);
    int cap = 0, delay = 0, halving = 0, scale = 0, order = 0, cop = 0, telescope = 0;
    constexpr double eps = std::numeric_limits<double>::epsilon();
    for (int n = 0; n < 200; ++n) {
      const auto s = gen::scenario(rng);
      const auto series = ncv_series(s);
      const auto c = series.cumulative();
      const auto f = series.flows();

      auto free_power = s;
      free_power.electricity_coin_per_day = 0.0;
      const auto free_series = ncv_series(free_power);
      const auto uncapped = free_series.cumulative();
      for (std::size_t t = 0; t < c.size(); ++t)
        if (uncapped[t] < c[t]) { ++cap; break; }

      auto later = s;
      later.delay_days = rng.integer(s.delay_days, s.horizon_days - 1);
      if (peak(later).ncv > peak(s).ncv) ++delay;

      const double base = peak(series).ncv;
      if (base > 0.0) {
        auto half = s;
        half.electricity_coin_per_day /= 2.0;
        if (!(peak(half).ncv < 2.0 * base)) ++halving;
      }

      auto twice = s;
      twice.coin_per_day *= 2.0;
      twice.electricity_coin_per_day *= 2.0;
      const auto twice_series = ncv_series(twice);
      const auto tf = twice_series.flows();
      for (std::size_t t = 0; t < f.size(); ++t)
        if (tf[t] != 2.0 * f[t]) { ++scale; break; }

      const auto p = payback_day(s);
      const auto dd = doubling_day(s);
      if (dd && (!p || *dd < *p)) ++order;

      auto plain = s;
      plain.cop.reset();
      auto cooled = plain;
      cooled.cop = 1e12;
      for (long i = s.delay_days + 1; i <= s.horizon_days; i += 31) {
        const double gap = std::abs(daily_coin_flow(cooled, i) - daily_coin_flow(plain, i));
        if (gap > plain.electricity_coin_per_day / 1e12 * (1.0 + 1e-6) + 4.0 * eps * plain.coin_per_day) {
          ++cop;
          break;
        }
      }

      if (c[0] != f[0]) ++telescope;
      for (std::size_t t = 1; t < c.size(); ++t)
        if (std::abs((c[t] - c[t - 1]) - f[t]) > 2.0 * eps * std::max(std::abs(c[t]), std::abs(c[t - 1]))) {
          ++telescope;
          break;
        }
    }
    d << "violations over 200 scenarios: cap=" << cap << " delay=" << delay << " halving=" << halving
      << " scale=" << scale << " doubling<payback=" << order << " cop=" << cop << " telescope=" << telescope;
    return cap + delay + halving + scale + order + cop + telescope == 0;
  });

  criterion(6, "sensitivity ordering", [](std::ostringstream& d) {
    SensitivityOptions opts;
    opts.delta = 0.10;
    opts.delay_step_days = 140;
    const auto r = rank_factors(s9_file(), opts);
    for (const auto f : r.ranking) d << to_string(f) << ' ';
    const auto& rig = r.entry(Factor::RigCost);
    const double s_rig = rig.result ? rig.result->value : std::nan("");
    d << "| RigCost elasticity=" << s_rig;
    return r.ranking.size() == 4 && r.ranking.front() == Factor::DeliveryDelay &&
           r.ranking.back() == Factor::ElectricityPrice && std::abs(s_rig - 1.0) <= opts.delta;
  });

  criterion(7, "card frontier and end-of-life cause", [](std::ostringstream& d) {
    auto s = s9_file();
    const auto o = oracle::brute_force(gen::to_oracle(s));
    const double frontier = frontier_card_price(s);
    const auto base_eol = eol_cause(s);
    auto pricey = s;
    pricey.electricity_coin_per_day *= 10.0;
    const auto hot_eol = eol_cause(pricey);
    const auto* obs = std::get_if<Obsolescence>(&base_eol);
    const auto* hot = std::get_if<ElectricityBound>(&hot_eol);
    d << "frontier=" << frontier << " oracle NCV(540)=" << o.cumulative[539];
    if (obs) d << " baseline=Obsolescence(" << obs->day << ")";
    if (hot) d << " x10=Electricity(" << hot->day << ")";
    return s.card_lifetime_days == 540 && frontier == o.cumulative[539] && obs && obs->day == 540 && hot &&
           hot->day < 540;
  });

  criterion(8, "HODL beats mining in fiat on a rising price", [](std::ostringstream& d) {
    const auto s = load_scenario(kData + "/gpu_rig_eth.scenario").scenario;
    const double r = roi(s);
    const auto path = FiatPricePath::piecewise_linear(
        {{0.0, s.coin_price_fiat}, {static_cast<double>(s.horizon_days), 3.0 * s.coin_price_fiat}});
    const auto cmp = fiat_npv(s, path);
    d << "roi=" << r << " mining fiat=" << cmp.mining_npv << " rig cost=" << s.rig_cost_fiat
      << " hodl fiat=" << cmp.hodl_value << " ratio=" << cmp.hodl_value / cmp.mining_npv << " (published ~2)";
    return r < 1.0 && cmp.mining_npv > s.rig_cost_fiat && cmp.hodl_value >= 1.8 * cmp.mining_npv;
  });

  criterion(9, "scenario and CSV round-trips", [](std::ostringstream& d) {
    int bad = 0;
    for (const auto& entry : std::filesystem::directory_iterator(kData)) {
      if (entry.path().extension() != ".scenario") continue;
      const auto s = load_scenario(entry.path()).scenario;
      const auto text = serialize_scenario(s);
      const auto again = parse_scenario(text).scenario;
      if (!(again == s) || serialize_scenario(again) != text) {
        ++bad;
        d << "scenario mismatch " << entry.path().filename() << "; ";
      }
    }
    const std::string scen = "'" + kData + "/s9_baseline.scenario'";
    const auto s = s9_file();
    const auto series = ncv_series(s);

    int status = 0;
    const auto value = parse_csv_table(cli("value " + scen + " --format csv", &status));
    bool value_ok = status == 0 && value.rows.size() == series.size();
    for (std::size_t t = 0; value_ok && t < value.rows.size(); ++t)
      value_ok = value.rows[t][1] == series.flows()[t] && value.rows[t][2] == series.cumulative()[t];
    if (value_ok) value_ok = to_csv(value) == cli("value " + scen + " --format csv", &status);

    const auto delay = parse_csv_table(cli("delay " + scen + " --delays 0 --format csv", &status));
    double best = -std::numeric_limits<double>::infinity();
    for (const auto& row : value.rows) best = std::max(best, row[2]);
    const bool delay_ok = status == 0 && delay.rows.size() == 1 && delay.rows[0][1] == best &&
                          delay.rows[0][3] == roi(s);

    const auto cmp = parse_csv_table(cli("compare " + scen + " --format csv", &status));
    bool compare_ok = status == 0 && cmp.header.size() == 5 && !cmp.rows.empty();
    for (const auto& row : cmp.rows) compare_ok = compare_ok && row[1] == cmp.rows[0][1];

    d << "scenario files bad=" << bad << " value csv " << (value_ok ? "bit-exact" : "MISMATCH")
      << ", delay 0 == value peak " << (delay_ok ? "yes" : "NO") << ", compare 4 curves + constant hodl "
      << (compare_ok ? "yes" : "NO");
    return bad == 0 && value_ok && delay_ok && compare_ok;
  });

  std::cout << (failures == 0 ? "all criteria passed" : std::to_string(failures) + " criteria failed") << '\n';
  return failures;
}
