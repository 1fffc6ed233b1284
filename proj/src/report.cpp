#include "ncv/report.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <system_error>

#include "ncv/error.hpp"
#include "ncv/scenario_io.hpp"

namespace ncv {

namespace {

std::vector<std::string_view> split(std::string_view line, char sep) {
  std::vector<std::string_view> out;
  std::size_t pos = 0;
  while (true) {
    const auto next = line.find(sep, pos);
    out.push_back(line.substr(pos, next == std::string_view::npos ? line.size() - pos : next - pos));
    if (next == std::string_view::npos) break;
    pos = next + 1;
  }
  return out;
}

// Fixed two-decimal coordinates keep the SVG stable across platforms.
std::string coord(double v) {
  std::array<char, 32> buf{};
  std::snprintf(buf.data(), buf.size(), "%.2f", v);
  return buf.data();
}

std::string escape_xml(std::string_view s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

constexpr std::array<const char*, 8> kPalette = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e",
                                                 "#9467bd", "#8c564b", "#e377c2", "#7f7f7f"};

struct Range {
  double lo;
  double hi;
};

Range padded(double lo, double hi) {
  if (hi == lo) {
    const double half = lo == 0.0 ? 0.5 : std::abs(lo) * 0.05;
    return {lo - half, hi + half};
  }
  const double pad = 0.05 * (hi - lo);
  return {lo - pad, hi + pad};
}

}  // namespace

std::string to_csv(const CsvTable& table) {
  std::string out;
  for (std::size_t c = 0; c < table.header.size(); ++c) {
    if (c) out += ',';
    out += table.header[c];
  }
  out += '\n';
  for (const auto& row : table.rows) {
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (c) out += ',';
      out += format_double(row[c]);
    }
    out += '\n';
  }
  return out;
}

CsvTable parse_csv_table(std::string_view text) {
  CsvTable table;
  int line_no = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    auto end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    auto line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty()) continue;
    const auto cells = split(line, ',');
    if (table.header.empty()) {
      for (auto c : cells) table.header.emplace_back(c);
      continue;
    }
    if (cells.size() != table.header.size())
      throw Error(ErrorKind::Syntax, "expected " + std::to_string(table.header.size()) + " columns", {},
                  line_no);
    std::vector<double> row;
    for (auto c : cells) {
      double v = 0.0;
      const auto [ptr, ec] = std::from_chars(c.data(), c.data() + c.size(), v);
      if (ec != std::errc{} || ptr != c.data() + c.size())
        throw Error(ErrorKind::BadNumber, "`" + std::string(c) + "` is not a number", {}, line_no);
      row.push_back(v);
    }
    table.rows.push_back(std::move(row));
  }
  return table;
}

std::string format_significant(double value, int digits) {
  std::array<char, 64> buf{};
  std::snprintf(buf.data(), buf.size(), "%.*g", digits, value);
  return buf.data();
}

std::string format_table(const std::vector<std::string>& header,
                         const std::vector<std::vector<std::string>>& rows) {
  std::vector<std::size_t> width(header.size(), 0);
  for (std::size_t c = 0; c < header.size(); ++c) width[c] = header[c].size();
  for (const auto& row : rows)
    for (std::size_t c = 0; c < row.size() && c < width.size(); ++c)
      width[c] = std::max(width[c], row[c].size());

  std::ostringstream out;
  auto emit = [&](const std::vector<std::string>& cells) {
    for (std::size_t c = 0; c < width.size(); ++c) {
      const std::string cell = c < cells.size() ? cells[c] : "";
      if (c) out << "  ";
      // first column left-aligned, numbers right-aligned
      if (c == 0)
        out << cell << std::string(width[c] - cell.size(), ' ');
      else
        out << std::string(width[c] - cell.size(), ' ') << cell;
    }
    out << '\n';
  };
  emit(header);
  std::size_t total = 0;
  for (auto w : width) total += w;
  out << std::string(total + 2 * (width.empty() ? 0 : width.size() - 1), '-') << '\n';
  for (const auto& row : rows) emit(row);
  return out.str();
}

std::string render_svg(std::span<const NamedSeries> series, std::string_view title) {
  if (series.empty()) throw Error(ErrorKind::EmptySeries, "no series to plot");
  for (const auto& s : series) {
    if (s.days.empty() || s.values.empty())
      throw Error(ErrorKind::EmptySeries, "series `" + s.label + "` is empty");
    if (s.days.size() != s.values.size())
      throw Error(ErrorKind::MismatchedSeries, "series `" + s.label + "` has unequal day/value counts");
    if (s.days != series.front().days)
      throw Error(ErrorKind::MismatchedSeries, "series `" + s.label + "` covers different days");
  }

  const auto& days = series.front().days;
  const auto [dmin, dmax] = std::minmax_element(days.begin(), days.end());
  double vmin = series.front().values.front();
  double vmax = vmin;
  for (const auto& s : series)
    for (double v : s.values) {
      vmin = std::min(vmin, v);
      vmax = std::max(vmax, v);
    }
  const Range xr = padded(*dmin, *dmax);
  const Range yr = padded(vmin, vmax);

  constexpr double kWidth = 800.0;
  constexpr double kHeight = 500.0;
  constexpr double kLeft = 70.0;
  constexpr double kRight = 170.0;
  constexpr double kTop = 40.0;
  constexpr double kBottom = 60.0;
  const double plot_w = kWidth - kLeft - kRight;
  const double plot_h = kHeight - kTop - kBottom;
  auto x_of = [&](double d) { return kLeft + (d - xr.lo) / (xr.hi - xr.lo) * plot_w; };
  auto y_of = [&](double v) { return kTop + (yr.hi - v) / (yr.hi - yr.lo) * plot_h; };

  std::ostringstream out;
  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << kHeight
      << "\" viewBox=\"0 0 " << kWidth << ' ' << kHeight << "\">\n";
  out << "<rect x=\"0\" y=\"0\" width=\"" << kWidth << "\" height=\"" << kHeight
      << "\" fill=\"white\"/>\n";
  if (!title.empty())
    out << "<text x=\"" << coord(kLeft + plot_w / 2) << "\" y=\"24\" text-anchor=\"middle\" "
        << "font-family=\"sans-serif\" font-size=\"16\">" << escape_xml(title) << "</text>\n";

  // axes box and ticks
  out << "<rect x=\"" << coord(kLeft) << "\" y=\"" << coord(kTop) << "\" width=\"" << coord(plot_w)
      << "\" height=\"" << coord(plot_h) << "\" fill=\"none\" stroke=\"black\"/>\n";
  constexpr int kTicks = 5;
  for (int t = 0; t <= kTicks; ++t) {
    const double f = static_cast<double>(t) / kTicks;
    const double xv = xr.lo + f * (xr.hi - xr.lo);
    const double yv = yr.lo + f * (yr.hi - yr.lo);
    const double px = x_of(xv);
    const double py = y_of(yv);
    out << "<line x1=\"" << coord(px) << "\" y1=\"" << coord(kTop + plot_h) << "\" x2=\"" << coord(px)
        << "\" y2=\"" << coord(kTop + plot_h + 5) << "\" stroke=\"black\"/>\n";
    out << "<text x=\"" << coord(px) << "\" y=\"" << coord(kTop + plot_h + 20)
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">"
        << format_significant(xv, 4) << "</text>\n";
    out << "<line x1=\"" << coord(kLeft - 5) << "\" y1=\"" << coord(py) << "\" x2=\"" << coord(kLeft)
        << "\" y2=\"" << coord(py) << "\" stroke=\"black\"/>\n";
    out << "<text x=\"" << coord(kLeft - 8) << "\" y=\"" << coord(py + 4)
        << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">"
        << format_significant(yv, 4) << "</text>\n";
  }
  out << "<text x=\"" << coord(kLeft + plot_w / 2) << "\" y=\"" << coord(kHeight - 15)
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\">days</text>\n";
  out << "<text x=\"18\" y=\"" << coord(kTop + plot_h / 2)
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\" transform=\"rotate(-90 18 "
      << coord(kTop + plot_h / 2) << ")\">coin</text>\n";

  for (std::size_t n = 0; n < series.size(); ++n) {
    const auto& s = series[n];
    const char* color = kPalette[n % kPalette.size()];
    out << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
    for (std::size_t k = 0; k < s.days.size(); ++k) {
      if (k) out << ' ';
      out << coord(x_of(s.days[k])) << ',' << coord(y_of(s.values[k]));
    }
    out << "\"/>\n";
    const double ly = kTop + 10.0 + 20.0 * static_cast<double>(n);
    const double lx = kLeft + plot_w + 15.0;
    out << "<line x1=\"" << coord(lx) << "\" y1=\"" << coord(ly) << "\" x2=\"" << coord(lx + 25)
        << "\" y2=\"" << coord(ly) << "\" stroke=\"" << color << "\" stroke-width=\"2\"/>\n";
    out << "<text x=\"" << coord(lx + 32) << "\" y=\"" << coord(ly + 4)
        << "\" font-family=\"sans-serif\" font-size=\"12\">" << escape_xml(s.label) << "</text>\n";
  }
  out << "</svg>\n";
  return out.str();
}

void write_file_atomic(const std::filesystem::path& path, std::string_view content) {
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorKind::Io, "cannot create " + tmp.string(), {}, 0, tmp.string());
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.flush();
    if (!out) {
      out.close();
      std::error_code ignored;
      std::filesystem::remove(tmp, ignored);
      throw Error(ErrorKind::Io, "failed writing " + tmp.string(), {}, 0, tmp.string());
    }
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::error_code ignored;
    std::filesystem::remove(tmp, ignored);
    throw Error(ErrorKind::Io, "cannot rename onto " + path.string() + ": " + ec.message(), {}, 0,
                path.string());
  }
}

}  // namespace ncv
