#include "ncv/scenario_io.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <variant>

#include "ncv/error.hpp"

namespace ncv {

namespace {

constexpr std::array<std::string_view, 17> kKeys = {
    "admin_fee",      "coin_per_day",         "growth_model",       "growth_rate_daily",
    "moore_doubling_days", "hashrate_csv",    "linear_fit",         "electricity_kwh_fiat",
    "rig_kw",         "electricity_coin_per_day", "coin_price_fiat", "rig_cost_fiat",
    "cop",            "delay_days",           "horizon_days",       "card_cost_fiat",
    "card_lifetime_days"};

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::string_view strip_bom(std::string_view text) {
  if (text.starts_with("\xEF\xBB\xBF")) text.remove_prefix(3);
  return text;
}

// Splits on '\n' and keeps 1-based line numbers; '\r' is trimmed later.
template <class Fn>
void for_each_line(std::string_view text, Fn&& fn) {
  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto end = text.find('\n', pos);
    const auto line = text.substr(pos, end == std::string_view::npos ? text.size() - pos : end - pos);
    ++line_no;
    if (end == std::string_view::npos && line.empty()) break;
    fn(line, line_no);
    if (end == std::string_view::npos) break;
    pos = end + 1;
  }
}

std::optional<double> to_double(std::string_view s) {
  double value = 0.0;
  const auto* begin = s.data();
  const auto* end = s.data() + s.size();
  if (begin != end && *begin == '+') ++begin;
  const auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc{} || ptr != end || !std::isfinite(value)) return std::nullopt;
  return value;
}

std::optional<long> to_long(std::string_view s) {
  long value = 0;
  const auto* begin = s.data();
  const auto* end = s.data() + s.size();
  if (begin != end && *begin == '+') ++begin;
  const auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc{} || ptr != end) return std::nullopt;
  return value;
}

struct Entry {
  std::string value;
  int line = 0;
};

class KeyValues {
 public:
  KeyValues(std::string_view text) {
    for_each_line(strip_bom(text), [this](std::string_view raw, int line_no) {
      last_line_ = line_no;
      auto line = raw;
      if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
      line = trim(line);
      if (line.empty()) return;
      const auto eq = line.find('=');
      if (eq == std::string_view::npos)
        throw Error(ErrorKind::Syntax, "expected `key = value`", std::string(line), line_no);
      const std::string key(trim(line.substr(0, eq)));
      const std::string value(trim(line.substr(eq + 1)));
      if (std::find(kKeys.begin(), kKeys.end(), key) == kKeys.end())
        throw Error(ErrorKind::UnknownKey, "unknown key `" + key + "`", key, line_no);
      if (const auto it = entries_.find(key); it != entries_.end())
        throw Error(ErrorKind::DuplicateKey,
                    "key `" + key + "` already set on line " + std::to_string(it->second.line), key,
                    line_no);
      entries_.emplace(key, Entry{value, line_no});
    });
    if (last_line_ == 0) last_line_ = 1;
  }

  bool has(const std::string& key) const { return entries_.contains(key); }

  const Entry* find(const std::string& key) const {
    const auto it = entries_.find(key);
    return it == entries_.end() ? nullptr : &it->second;
  }

  int line_of(const std::string& key) const {
    const auto* e = find(key);
    return e ? e->line : last_line_;
  }

  [[noreturn]] void missing(const std::string& key) const {
    throw Error(ErrorKind::MissingKey, "missing required key `" + key + "`", key, last_line_);
  }

  const Entry& require(const std::string& key) const {
    const auto* e = find(key);
    if (!e) missing(key);
    return *e;
  }

  std::optional<double> number(const std::string& key) const {
    const auto* e = find(key);
    if (!e) return std::nullopt;
    const auto v = to_double(e->value);
    if (!v) throw Error(ErrorKind::BadNumber, "`" + e->value + "` is not a number", key, e->line);
    return v;
  }

  double required_number(const std::string& key) const {
    require(key);
    return *number(key);
  }

  std::optional<long> integer(const std::string& key) const {
    const auto* e = find(key);
    if (!e) return std::nullopt;
    const auto v = to_long(e->value);
    if (!v) throw Error(ErrorKind::BadNumber, "`" + e->value + "` is not an integer", key, e->line);
    return v;
  }

  [[noreturn]] void violation(const std::string& key, const std::string& what) const {
    throw Error(ErrorKind::UnitViolation, key + " " + what, key, line_of(key));
  }

 private:
  std::map<std::string, Entry, std::less<>> entries_;
  int last_line_ = 0;
};

void require_positive(const KeyValues& kv, const std::string& key, double v) {
  if (!(v > 0.0)) kv.violation(key, "must be > 0");
}

void require_non_negative(const KeyValues& kv, const std::string& key, double v) {
  if (!(v >= 0.0)) kv.violation(key, "must be >= 0");
}

}  // namespace

std::string format_double(double value) {
  std::array<char, 64> buf{};
  const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
  return std::string(buf.data(), ptr);
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::Io, "cannot open " + path.string(), {}, 0, path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

HashrateHistory parse_hashrate_csv(std::string_view text) {
  std::vector<HashrateSample> samples;
  bool header_seen = false;
  for_each_line(strip_bom(text), [&](std::string_view raw, int line_no) {
    const auto line = trim(raw);
    if (line.empty()) return;
    const auto comma = line.find(',');
    const auto first = trim(line.substr(0, comma));
    const auto second = comma == std::string_view::npos ? std::string_view{} : trim(line.substr(comma + 1));
    if (!header_seen) {
      if (first != "day" || second != "hashrate")
        throw Error(ErrorKind::MissingKey, "expected header `day,hashrate`", "day,hashrate", line_no);
      header_seen = true;
      return;
    }
    if (comma == std::string_view::npos)
      throw Error(ErrorKind::BadNumber, "expected `day,hashrate`", "hashrate", line_no);
    const auto day = to_long(first);
    if (!day) throw Error(ErrorKind::BadNumber, "`" + std::string(first) + "` is not an integer day", "day", line_no);
    if (*day < 0) throw Error(ErrorKind::UnitViolation, "day must be >= 0", "day", line_no);
    const auto rate = to_double(second);
    if (!rate)
      throw Error(ErrorKind::BadNumber, "`" + std::string(second) + "` is not a number", "hashrate", line_no);
    if (!(*rate > 0.0)) throw Error(ErrorKind::UnitViolation, "hashrate must be > 0", "hashrate", line_no);
    if (!samples.empty() && *day <= samples.back().day)
      throw Error(ErrorKind::UnitViolation, "days must be strictly increasing", "day", line_no);
    samples.push_back({*day, *rate});
  });
  if (!header_seen) throw Error(ErrorKind::MissingKey, "missing header `day,hashrate`", "day,hashrate", 1);
  if (samples.size() < 2)
    throw Error(ErrorKind::DegenerateHistory, "hashrate history needs at least two samples", "hashrate", 1);
  return HashrateHistory(std::move(samples));
}

ScenarioDocument parse_scenario(std::string_view text, const std::filesystem::path& base_dir) {
  const KeyValues kv(text);
  ScenarioDocument doc;
  Scenario& s = doc.scenario;

  s.fee_fraction = kv.required_number("admin_fee");
  if (!(s.fee_fraction >= 0.0 && s.fee_fraction < 1.0)) kv.violation("admin_fee", "must lie in [0, 1)");
  s.coin_per_day = kv.required_number("coin_per_day");
  require_positive(kv, "coin_per_day", s.coin_per_day);
  s.coin_price_fiat = kv.required_number("coin_price_fiat");
  require_positive(kv, "coin_price_fiat", s.coin_price_fiat);
  s.rig_cost_fiat = kv.required_number("rig_cost_fiat");
  require_positive(kv, "rig_cost_fiat", s.rig_cost_fiat);

  // Electricity: kWh price with rig draw, or a direct coin/day figure.
  const bool direct = kv.has("electricity_coin_per_day");
  const bool kwh = kv.has("electricity_kwh_fiat");
  const bool kw = kv.has("rig_kw");
  if (direct && (kwh || kw)) {
    const std::string other = kwh ? "electricity_kwh_fiat" : "rig_kw";
    throw Error(ErrorKind::InconsistentPair,
                "give either electricity_coin_per_day or electricity_kwh_fiat with rig_kw, not both",
                other, std::max(kv.line_of("electricity_coin_per_day"), kv.line_of(other)));
  }
  if (direct) {
    s.electricity_coin_per_day = *kv.number("electricity_coin_per_day");
    require_non_negative(kv, "electricity_coin_per_day", s.electricity_coin_per_day);
  } else {
    const double price = kv.required_number("electricity_kwh_fiat");
    require_non_negative(kv, "electricity_kwh_fiat", price);
    const double draw = kv.required_number("rig_kw");
    require_non_negative(kv, "rig_kw", draw);
    doc.rig_kw = draw;
    s.electricity_coin_per_day = price * draw * 24.0 / s.coin_price_fiat;
  }

  if (const auto cop = kv.number("cop")) {
    require_positive(kv, "cop", *cop);
    s.cop = *cop;
  }

  if (!kv.has("horizon_days")) kv.missing("horizon_days");
  s.horizon_days = *kv.integer("horizon_days");
  if (s.horizon_days < 1) kv.violation("horizon_days", "must be >= 1");
  s.delay_days = kv.integer("delay_days").value_or(0);
  if (s.delay_days < 0) kv.violation("delay_days", "must be >= 0");
  if (s.delay_days >= s.horizon_days)
    throw Error(ErrorKind::InconsistentPair, "delay_days must be smaller than horizon_days", "delay_days",
                kv.line_of("delay_days"));

  if (const auto card = kv.number("card_cost_fiat")) {
    require_non_negative(kv, "card_cost_fiat", *card);
    s.card_cost_fiat = *card;
  }
  s.card_lifetime_days = kv.integer("card_lifetime_days").value_or(kDefaultCardLifetimeDays);
  if (s.card_lifetime_days < 1) kv.violation("card_lifetime_days", "must be >= 1");

  // Growth.
  const auto rate = kv.number("growth_rate_daily");
  const double doubling = kv.number("moore_doubling_days").value_or(kDefaultMooreDoublingDays);
  require_positive(kv, "moore_doubling_days", doubling);

  auto method = LinearFitMethod::LeastSquares;
  if (const auto* fit = kv.find("linear_fit")) {
    if (fit->value == "endpoints")
      method = LinearFitMethod::Endpoints;
    else if (fit->value != "ols")
      kv.violation("linear_fit", "must be `ols` or `endpoints`");
  }

  std::optional<Linear> fitted;
  if (const auto* csv = kv.find("hashrate_csv")) {
    const auto path = base_dir / csv->value;
    try {
      const auto fit = fit_linear(parse_hashrate_csv(read_text_file(path)), method);
      fitted = fit.model;
      if (fit.negative_slope_clamped)
        doc.warnings.push_back("hashrate history " + path.string() +
                               " has a negative fitted slope; linear growth clamped to 0");
    } catch (const Error& e) {
      throw e.with_file(path.string());
    }
  }

  const auto* model = &kv.require("growth_model");
  const std::string& name = model->value;
  if (name == "exponential") {
    if (!rate) kv.missing("growth_rate_daily");
    if (!(*rate > -1.0)) kv.violation("growth_rate_daily", "must be > -1 for exponential growth");
    s.growth = Exponential{*rate};
  } else if (name == "linear") {
    if (fitted) {
      s.growth = *fitted;
    } else {
      if (!rate) kv.missing("hashrate_csv");
      if (!(*rate >= 0.0)) kv.violation("growth_rate_daily", "must be >= 0 for linear growth");
      s.growth = Linear{*rate};
    }
  } else if (name == "moore") {
    s.growth = MooreLaw{doubling};
  } else if (name == "flat") {
    s.growth = Flat{};
  } else {
    throw Error(ErrorKind::UnitViolation, "growth_model must be exponential, linear, moore or flat",
                "growth_model", model->line);
  }

  if (rate && *rate > -1.0) {
    doc.alternatives.exponential = Exponential{*rate};
  } else {
    doc.alternatives.exponential = Exponential{kDefaultExponentialRate};
    if (name != "exponential")
      doc.warnings.push_back("growth_rate_daily absent; exponential comparison curve uses r = " +
                             format_double(kDefaultExponentialRate));
  }
  doc.alternatives.linear = fitted ? *fitted : Linear{rate && *rate >= 0.0 ? *rate : kDefaultExponentialRate};
  doc.alternatives.moore = MooreLaw{doubling};

  validate(s);
  return doc;
}

ScenarioDocument load_scenario(const std::filesystem::path& path) {
  const auto text = read_text_file(path);
  try {
    return parse_scenario(text, path.parent_path());
  } catch (const Error& e) {
    if (!e.file().empty()) throw;
    throw e.with_file(path.string());
  }
}

std::string serialize_scenario(const Scenario& s) {
  std::ostringstream out;
  out << "admin_fee = " << format_double(s.fee_fraction) << '\n';
  out << "coin_per_day = " << format_double(s.coin_per_day) << '\n';
  std::visit(
      [&out](const auto& m) {
        using M = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<M, Exponential>) {
          out << "growth_model = exponential\n";
          out << "growth_rate_daily = " << format_double(m.rate) << '\n';
        } else if constexpr (std::is_same_v<M, Linear>) {
          out << "growth_model = linear\n";
          out << "growth_rate_daily = " << format_double(m.daily_fraction) << '\n';
        } else if constexpr (std::is_same_v<M, MooreLaw>) {
          out << "growth_model = moore\n";
          out << "moore_doubling_days = " << format_double(m.doubling_days) << '\n';
        } else {
          out << "growth_model = flat\n";
        }
      },
      s.growth);
  out << "electricity_coin_per_day = " << format_double(s.electricity_coin_per_day) << '\n';
  out << "coin_price_fiat = " << format_double(s.coin_price_fiat) << '\n';
  out << "rig_cost_fiat = " << format_double(s.rig_cost_fiat) << '\n';
  if (s.cop) out << "cop = " << format_double(*s.cop) << '\n';
  out << "delay_days = " << s.delay_days << '\n';
  out << "horizon_days = " << s.horizon_days << '\n';
  if (s.card_cost_fiat) out << "card_cost_fiat = " << format_double(*s.card_cost_fiat) << '\n';
  out << "card_lifetime_days = " << s.card_lifetime_days << '\n';
  return out.str();
}

}  // namespace ncv
