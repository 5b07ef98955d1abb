#pragma once

#include <cstdio>
#include <initializer_list>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace crcap {

/// Rectangular table of results plus free-form metadata (seed, counts,
/// derived summary statistics). Serialized as CSV with 12 significant
/// digits and LF line endings.
struct ResultTable {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
  std::map<std::string, std::string> metadata;

  void add_row(std::initializer_list<double> values) {
    if (values.size() != columns.size())
      throw std::invalid_argument("ResultTable: row width mismatch");
    rows.emplace_back(values);
  }

  void add_row(std::vector<double> values) {
    if (values.size() != columns.size())
      throw std::invalid_argument("ResultTable: row width mismatch");
    rows.push_back(std::move(values));
  }

  double metadata_num(const std::string& key) const {
    return std::stod(metadata.at(key));
  }

  void set_metadata(const std::string& key, double value) {
    metadata[key] = format_number(value);
  }

  static std::string format_number(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
  }

  std::string to_csv() const {
    std::string out;
    for (std::size_t j = 0; j < columns.size(); ++j) {
      if (j) out += ',';
      out += columns[j];
    }
    out += '\n';
    for (const auto& row : rows) {
      for (std::size_t j = 0; j < row.size(); ++j) {
        if (j) out += ',';
        out += format_number(row[j]);
      }
      out += '\n';
    }
    return out;
  }
};

}  // namespace crcap
