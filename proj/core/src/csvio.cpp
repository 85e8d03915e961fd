#include "hjhomog/csvio.hpp"

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "hjhomog/metric.hpp"
#include "hjhomog/potential.hpp"

namespace hjhomog {

void CsvTable::add_row(std::vector<double> row) {
  if (row.size() != columns.size())
    throw std::runtime_error("csv: row width " + std::to_string(row.size()) +
                             " does not match " + std::to_string(columns.size()) + " columns");
  rows.push_back(std::move(row));
}

std::string to_csv_string(const CsvTable& table) {
  std::string out;
  for (std::size_t i = 0; i < table.columns.size(); ++i) {
    if (i) out += ',';
    out += table.columns[i];
  }
  out += '\n';
  char buf[40];
  for (const auto& row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out += ',';
      std::snprintf(buf, sizeof buf, "%.17g", row[i]);
      out += buf;
    }
    out += '\n';
  }
  return out;
}

namespace {

void ensure_parent(const std::string& path) {
  const std::filesystem::path p(path);
  if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
}

}  // namespace

void write_csv(const std::string& path, const CsvTable& table) {
  ensure_parent(path);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("csv: cannot open '" + path + "' for writing");
  out << to_csv_string(table);
  if (!out) throw std::runtime_error("csv: write failed for '" + path + "'");
}

CsvTable read_csv(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("csv: cannot open '" + path + "'");
  CsvTable table;
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("csv: empty file '" + path + "'");
  std::stringstream hs(line);
  std::string cell;
  while (std::getline(hs, cell, ',')) table.columns.push_back(cell);
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<double> row;
    std::stringstream rs(line);
    while (std::getline(rs, cell, ',')) {
      char* end = nullptr;
      const double v = std::strtod(cell.c_str(), &end);
      if (end != cell.c_str() + cell.size() || cell.empty())
        throw std::runtime_error("csv: non-numeric cell '" + cell + "' in '" + path + "'");
      row.push_back(v);
    }
    table.add_row(std::move(row));
  }
  return table;
}

void write_json(const std::string& path, const nlohmann::json& j) {
  ensure_parent(path);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("json: cannot open '" + path + "' for writing");
  out << j.dump(2) << '\n';
  if (!out) throw std::runtime_error("json: write failed for '" + path + "'");
}

namespace {

CsvTable node_table(const Grid& grid, const std::vector<double>& values) {
  CsvTable t;
  t.columns = grid.dim == 1 ? std::vector<std::string>{"x", "value"}
                            : std::vector<std::string>{"x", "y", "value"};
  t.rows.reserve(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    const Vec x = grid.node_coord(i);
    if (grid.dim == 1)
      t.rows.push_back({x[0], values[i]});
    else
      t.rows.push_back({x[0], x[1], values[i]});
  }
  return t;
}

}  // namespace

CsvTable field_table(const PotentialField& field) {
  return node_table(field.grid, field.values);
}

CsvTable metric_table(const MetricField& field) {
  return node_table(field.grid, field.values);
}

}  // namespace hjhomog
