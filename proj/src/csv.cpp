#include "dynsamp/csv.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "dynsamp/error.hpp"

namespace dynsamp {

Layout parse_layout(const std::string& text) {
  if (text == "rows-are-time") return Layout::rows_are_time;
  if (text == "rows-are-space") return Layout::rows_are_space;
  throw ValidationError("unknown layout '" + text + "'");
}

namespace {

std::string_view strip(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t begin = 0;
  while (true) {
    const auto comma = line.find(',', begin);
    out.push_back(strip(line.substr(begin, comma == std::string_view::npos ? comma : comma - begin)));
    if (comma == std::string_view::npos) break;
    begin = comma + 1;
  }
  return out;
}

}  // namespace

Matrix parse_table(std::istream& in, bool header) {
  std::vector<std::vector<double>> rows;
  std::string line;
  std::size_t lineno = 0;
  std::size_t width = 0;
  bool skipped_header = !header;
  while (std::getline(in, line)) {
    ++lineno;
    if (lineno == 1 && line.size() >= 3 && line.compare(0, 3, "\xEF\xBB\xBF") == 0) line.erase(0, 3);
    if (strip(line).empty()) continue;
    if (!skipped_header) {
      skipped_header = true;
      continue;
    }
    const auto cells = split_fields(line);
    if (width == 0) width = cells.size();
    if (cells.size() != width) {
      throw IoError("row " + std::to_string(lineno) + ": expected " + std::to_string(width) +
                    " fields, got " + std::to_string(cells.size()));
    }
    std::vector<double> row(width);
    for (std::size_t c = 0; c < width; ++c) {
      const auto cell = cells[c];
      const char* first = cell.data();
      const char* last = cell.data() + cell.size();
      if (first != last && *first == '+') ++first;
      const auto [ptr, ec] = std::from_chars(first, last, row[c]);
      if (cell.empty() || ec != std::errc() || ptr != last) {
        throw IoError("row " + std::to_string(lineno) + ", column " + std::to_string(c + 1) +
                      ": '" + std::string(cell) + "' is not a number");
      }
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw IoError("table has no data rows");

  Matrix out(static_cast<Index>(rows.size()), static_cast<Index>(width));
  for (Index r = 0; r < out.rows(); ++r)
    for (Index c = 0; c < out.cols(); ++c) out(r, c) = rows[r][c];
  return out;
}

MeasurementSeries load_series(const std::filesystem::path& path, Layout layout, bool header) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  Matrix table;
  try {
    table = parse_table(in, header);
  } catch (const IoError& e) {
    throw IoError(path.string() + ": " + e.what());
  }
  Matrix values = layout == Layout::rows_are_time ? Matrix(table.transpose()) : table;
  const Index d = values.rows();
  return MeasurementSeries(std::move(values), SamplingPattern::all(d), SeriesKind::noisy);
}

std::string format_number(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

void save_series(const std::filesystem::path& path, const Matrix& values, Layout layout, bool header) {
  const Matrix table = layout == Layout::rows_are_time ? Matrix(values.transpose()) : values;
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path.string());
  if (header) {
    const char* prefix = layout == Layout::rows_are_time ? "x" : "t";
    for (Index c = 0; c < table.cols(); ++c) out << (c ? "," : "") << prefix << c + 1;
    out << "\n";
  }
  for (Index r = 0; r < table.rows(); ++r) {
    for (Index c = 0; c < table.cols(); ++c) out << (c ? "," : "") << format_number(table(r, c));
    out << "\n";
  }
  if (!out) throw IoError("write failed for " + path.string());
}

void write_table(std::ostream& out, const Table& table) {
  for (std::size_t c = 0; c < table.columns.size(); ++c) out << (c ? "," : "") << table.columns[c];
  out << "\n";
  for (const auto& row : table.rows) {
    for (std::size_t c = 0; c < row.size(); ++c) out << (c ? "," : "") << row[c];
    out << "\n";
  }
}

void save_table(const std::filesystem::path& path, const Table& table) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path.string());
  write_table(out, table);
  if (!out) throw IoError("write failed for " + path.string());
}

}  // namespace dynsamp
