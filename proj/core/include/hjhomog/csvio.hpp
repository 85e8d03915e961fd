#pragma once

#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

namespace hjhomog {

/// Rectangular numeric table with named columns. Values serialize at full
/// precision (%.17g) so a write/read cycle reproduces every double exactly.
struct CsvTable {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;

  void add_row(std::vector<double> row);
};

std::string to_csv_string(const CsvTable& table);

/// Writes the table (creating parent directories); bytes are exactly
/// to_csv_string(table), with '\n' line endings.
void write_csv(const std::string& path, const CsvTable& table);

/// Strict reader for files produced by write_csv: a header line and numeric
/// rows of equal width. Throws std::runtime_error on anything else.
CsvTable read_csv(const std::string& path);

/// Writes pretty-printed JSON (2-space indent, trailing newline), creating
/// parent directories.
void write_json(const std::string& path, const nlohmann::json& j);

struct PotentialField;
struct MetricField;

/// Node tables for the two gridded field types: axis coordinates followed by
/// the value, one row per node in index order.
CsvTable field_table(const PotentialField& field);
CsvTable metric_table(const MetricField& field);

}  // namespace hjhomog
