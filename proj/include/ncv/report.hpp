#pragma once

// Output formats: full-precision CSV, 5-significant-digit text tables, and
// self-contained SVG line charts. File outputs are written atomically.

#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace ncv {

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
};

/// Header line then one line per row; every value in shortest round-trip
/// form, so parse_csv_table recovers identical doubles.
std::string to_csv(const CsvTable& table);
CsvTable parse_csv_table(std::string_view text);

/// `value` with `digits` significant digits, e.g. 2.9505 for 2.950453.
std::string format_significant(double value, int digits = 5);

/// Column-aligned plain text table.
std::string format_table(const std::vector<std::string>& header,
                         const std::vector<std::vector<std::string>>& rows);

struct NamedSeries {
  std::string label;
  std::vector<double> days;
  std::vector<double> values;
};

/// One polyline per series over shared linear axes ("days" by "coin"),
/// padded 5% beyond the data extrema, with a legend. Byte-identical output
/// for identical input. Throws EmptySeries when there is nothing to plot and
/// MismatchedSeries when day ranges differ.
std::string render_svg(std::span<const NamedSeries> series, std::string_view title = {});

/// Writes to a sibling temporary file, then renames over `path`; the target
/// is never left truncated.
void write_file_atomic(const std::filesystem::path& path, std::string_view content);

}  // namespace ncv
