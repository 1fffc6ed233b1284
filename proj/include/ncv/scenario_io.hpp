#pragma once

// Plain-text scenario files and hashrate-history CSV.
//
// Scenario file: UTF-8, LF or CRLF, one `key = value` per line, `#` starts a
// comment. Keys are case-sensitive:
//
//   admin_fee                fee fraction k, 0 <= k < 1            (required)
//   coin_per_day             day-0 production m0, > 0             (required)
//   growth_model             exponential | linear | moore | flat  (required)
//   growth_rate_daily        r for exponential, g for linear
//   moore_doubling_days      T for moore, default 540
//   hashrate_csv             path, relative to the scenario file; fits g
//   linear_fit               ols (default) | endpoints
//   electricity_kwh_fiat     fiat per kWh  \  both, or
//   rig_kw                   kW drawn      /  electricity_coin_per_day
//   electricity_coin_per_day coin per day, used as is
//   coin_price_fiat          P0, > 0                              (required)
//   rig_cost_fiat            capital cost, > 0                    (required)
//   cop                      cooling CoP, > 0
//   delay_days               default 0, < horizon_days
//   horizon_days             >= 1                                 (required)
//   card_cost_fiat           GPU card price
//   card_lifetime_days       default 540
//
// Hashrate CSV: header `day,hashrate`, then one `day,hashrate` row per line;
// blank lines are skipped.

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ncv/growth.hpp"
#include "ncv/scenario.hpp"

namespace ncv {

inline constexpr double kDefaultExponentialRate = 0.0045;

/// The three network-growth curves a scenario file describes, used to
/// compare growth laws side by side.
struct GrowthAlternatives {
  Exponential exponential;
  Linear linear;
  MooreLaw moore;
};

struct ScenarioDocument {
  Scenario scenario;
  GrowthAlternatives alternatives;
  std::optional<double> rig_kw;  // known only for the kWh electricity form
  std::vector<std::string> warnings;
};

ScenarioDocument parse_scenario(std::string_view text, const std::filesystem::path& base_dir = {});

/// Reads and parses a scenario file. Errors carry the file path.
ScenarioDocument load_scenario(const std::filesystem::path& path);

HashrateHistory parse_hashrate_csv(std::string_view text);

/// Writes `s` in the scenario file format. Numbers use the shortest
/// representation that parses back to the same double.
std::string serialize_scenario(const Scenario& s);

/// Shortest round-trip decimal form of a double.
std::string format_double(double value);

std::string read_text_file(const std::filesystem::path& path);

}  // namespace ncv
