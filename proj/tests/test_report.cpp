#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "ncv/error.hpp"
#include "ncv/report.hpp"
#include "ncv/scenario_io.hpp"
#include "ncv/valuation.hpp"
#include "support/generators.hpp"

using namespace ncv;

namespace {

std::size_t count(const std::string& haystack, const std::string& needle) {
  std::size_t n = 0;
  for (auto pos = haystack.find(needle); pos != std::string::npos; pos = haystack.find(needle, pos + 1)) ++n;
  return n;
}

NamedSeries flat_series(const std::string& label, double value, int days) {
  NamedSeries s{label, {}, {}};
  for (int d = 1; d <= days; ++d) {
    s.days.push_back(d);
    s.values.push_back(value);
  }
  return s;
}

}  // namespace

TEST_CASE("CSV round-trips series at full precision") {
  gen::Rng rng(71);
  for (int n = 0; n < 20; ++n) {
    const auto series = ncv_series(gen::scenario(rng));
    CsvTable table{{"day", "c_i", "ncv"}, {}};
    for (std::size_t t = 0; t < series.size(); ++t)
      table.rows.push_back({static_cast<double>(t + 1), series.flows()[t], series.cumulative()[t]});
    const auto back = parse_csv_table(to_csv(table));
    REQUIRE(back.header == table.header);
    REQUIRE(back.rows == table.rows);
  }
}

TEST_CASE("CSV layout") {
  const CsvTable t{{"day", "c_i", "ncv"}, {{1, 1, 1}, {2, 1, 2}, {3, 1, 3}}};
  CHECK(to_csv(t) == "day,c_i,ncv\n1,1,1\n2,1,2\n3,1,3\n");
  CHECK_THROWS_AS(parse_csv_table("a,b\n1\n"), Error);
  CHECK_THROWS_AS(parse_csv_table("a\nx\n"), Error);
}

TEST_CASE("significant digits") {
  CHECK(format_significant(2.9504534948388317) == "2.9505");
  CHECK(format_significant(6933.565712871255) == "6933.6");
  CHECK(format_significant(0.00045) == "0.00045");
  CHECK(format_significant(2.0) == "2");
}

TEST_CASE("text tables align") {
  const auto text = format_table({"name", "value"}, {{"roi", "2.4763"}, {"peak_day", "785"}});
  std::istringstream in(text);
  std::string line;
  std::vector<std::string> lines;
  while (std::getline(in, line)) lines.push_back(line);
  REQUIRE(lines.size() == 4);
  for (const auto& l : lines) CHECK(l.size() == lines.front().size());
  CHECK(lines[2].starts_with("roi"));
  CHECK(lines[3].ends_with("785"));
}

TEST_CASE("SVG of a single flat series") {
  const std::vector<NamedSeries> one{flat_series("flat", 1.0, 10)};
  const auto svg = render_svg(one);
  CHECK(count(svg, "<polyline") == 1);
  CHECK(svg.find(">days</text>") != std::string::npos);
  CHECK(svg.find(">coin</text>") != std::string::npos);
  CHECK(svg.find(">flat</text>") != std::string::npos);

  // every vertex shares one y coordinate
  const auto pts_begin = svg.find("points=\"") + 8;
  const auto pts = svg.substr(pts_begin, svg.find('"', pts_begin) - pts_begin);
  std::istringstream in(pts);
  std::string pair;
  std::string y;
  while (in >> pair) {
    const auto comma = pair.find(',');
    if (y.empty()) y = pair.substr(comma + 1);
    CHECK(pair.substr(comma + 1) == y);
  }
}

TEST_CASE("SVG of four curves is deterministic") {
  std::vector<NamedSeries> four;
  for (const char* label : {"hodl", "ncv_exponential", "ncv_linear", "ncv_moore"})
    four.push_back(flat_series(label, 1.0 + four.size(), 50));
  const auto a = render_svg(four, "four <curves>");
  const auto b = render_svg(four, "four <curves>");
  CHECK(a == b);
  CHECK(count(a, "<polyline") == 4);
  for (const char* label : {"hodl", "ncv_exponential", "ncv_linear", "ncv_moore"})
    CHECK(a.find(std::string(">") + label + "</text>") != std::string::npos);
  CHECK(a.find("four &lt;curves&gt;") != std::string::npos);
  CHECK(a.find("stylesheet") == std::string::npos);
}

TEST_CASE("SVG errors") {
  CHECK_THROWS_AS(render_svg({}), Error);
  std::vector<NamedSeries> empty{{"x", {}, {}}};
  CHECK_THROWS_AS(render_svg(empty), Error);
  std::vector<NamedSeries> mismatched{flat_series("a", 1, 10), flat_series("b", 1, 11)};
  try {
    render_svg(mismatched);
    FAIL("expected MismatchedSeries");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::MismatchedSeries);
  }
}

TEST_CASE("atomic writes replace the target and leave no temporaries") {
  const auto dir = std::filesystem::temp_directory_path() / "ncv_report_test";
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  const auto target = dir / "out.csv";

  write_file_atomic(target, "first\n");
  write_file_atomic(target, "second\n");
  CHECK(read_text_file(target) == "second\n");
  CHECK(std::distance(std::filesystem::directory_iterator(dir), std::filesystem::directory_iterator{}) == 1);

  // an unwritable destination fails without touching anything
  CHECK_THROWS_AS(write_file_atomic(dir / "no_such_dir" / "x.csv", "data"), Error);
  CHECK(read_text_file(target) == "second\n");
  std::filesystem::remove_all(dir);
}
