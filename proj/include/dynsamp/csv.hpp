#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "dynsamp/core.hpp"
#include "dynsamp/simulate.hpp"

namespace dynsamp {

// Numeric CSV: UTF-8, ',' separator, '.' decimal point, at most one header
// row, no quoting. Output uses 17 significant digits.

enum class Layout { rows_are_time, rows_are_space };

Layout parse_layout(const std::string& text);

/// Parses a rectangular numeric table. Ragged rows, non-numeric cells and
/// empty input throw IoError naming the row (and column).
Matrix parse_table(std::istream& in, bool header);

/// Loads a sensor log into d x T orientation (rows = locations) regardless
/// of the file layout. The series covers all d locations.
MeasurementSeries load_series(const std::filesystem::path& path, Layout layout, bool header);

/// Writes a d x T matrix in the requested layout.
void save_series(const std::filesystem::path& path, const Matrix& values, Layout layout,
                 bool header = false);

std::string format_number(double x);

/// Tidy output table: one row per point.
struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;

  void add_row(std::vector<std::string> row) { rows.push_back(std::move(row)); }
};

void write_table(std::ostream& out, const Table& table);
void save_table(const std::filesystem::path& path, const Table& table);

}  // namespace dynsamp
