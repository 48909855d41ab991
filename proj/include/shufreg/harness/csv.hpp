#pragma once

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "shufreg/types.hpp"

namespace shufreg::harness {

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
  std::vector<std::size_t> line_numbers;  // 1-based file line of each row
};

namespace detail {

inline std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

/// Splits one CSV record. Double-quoted fields may contain commas and "".
inline std::vector<std::string> split_record(std::string_view line) {
  std::vector<std::string> out;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        cur.push_back('"');
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        cur.push_back(c);
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      out.push_back(trim(cur));
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  out.push_back(trim(cur));
  return out;
}

inline bool parse_double(const std::string& cell, double& value) {
  if (cell.empty()) return false;
  const char* first = cell.data();
  const char* last = cell.data() + cell.size();
  if (*first == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, last, value);
  return ec == std::errc() && ptr == last && std::isfinite(value);
}

}  // namespace detail

inline CsvTable read_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open '" + path + "'");
  CsvTable table;
  std::string line;
  std::size_t line_no = 0;
  bool have_header = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (line_no == 1 && line.starts_with("\xEF\xBB\xBF")) line.erase(0, 3);
    if (detail::trim(line).empty()) continue;
    auto fields = detail::split_record(line);
    if (!have_header) {
      table.header = std::move(fields);
      have_header = true;
      continue;
    }
    if (fields.size() != table.header.size()) {
      throw DataError(path + ":" + std::to_string(line_no) + ": expected " +
                      std::to_string(table.header.size()) + " fields, found " +
                      std::to_string(fields.size()));
    }
    table.rows.push_back(std::move(fields));
    table.line_numbers.push_back(line_no);
  }
  if (!have_header) throw DataError("'" + path + "' is empty");
  return table;
}

/// Numeric matrix of the named columns, with row-numbered diagnostics.
inline Matrix numeric_columns(const CsvTable& table, const std::vector<std::size_t>& cols,
                              const std::string& source) {
  Matrix m(static_cast<Index>(table.rows.size()), static_cast<Index>(cols.size()));
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    for (std::size_t c = 0; c < cols.size(); ++c) {
      const std::string& cell = table.rows[r][cols[c]];
      double v = 0.0;
      if (!detail::parse_double(cell, v)) {
        throw DataError(source + ": row " + std::to_string(r + 1) + " (line " +
                        std::to_string(table.line_numbers[r]) + "), column '" +
                        table.header[cols[c]] + "': " +
                        (cell.empty() ? std::string("empty cell") : "not a number: '" + cell + "'"));
      }
      m(static_cast<Index>(r), static_cast<Index>(c)) = v;
    }
  }
  return m;
}

/// Features are every non-label column in file order; labels follow
/// `label_columns` order.
inline Dataset load_csv(const std::string& path, const std::vector<std::string>& label_columns) {
  const CsvTable table = read_csv(path);
  if (label_columns.empty()) throw DataError("at least one label column is required");
  std::vector<std::size_t> label_idx;
  for (const auto& name : label_columns) {
    std::size_t k = 0;
    while (k < table.header.size() && table.header[k] != name) ++k;
    if (k == table.header.size()) throw DataError(path + ": no column named '" + name + "'");
    label_idx.push_back(k);
  }
  std::vector<std::size_t> feature_idx;
  for (std::size_t k = 0; k < table.header.size(); ++k) {
    if (std::find(label_idx.begin(), label_idx.end(), k) == label_idx.end()) {
      feature_idx.push_back(k);
    }
  }
  if (feature_idx.empty()) throw DataError(path + ": no feature columns");
  if (table.rows.empty()) throw DataError(path + ": no data rows");
  return Dataset(numeric_columns(table, feature_idx, path), numeric_columns(table, label_idx, path));
}

/// Seed pairs from a CSV with integer columns x_row,y_row.
inline SeedSet load_seeds_csv(const std::string& path) {
  const CsvTable table = read_csv(path);
  if (table.header.size() != 2 || table.header[0] != "x_row" || table.header[1] != "y_row") {
    throw DataError(path + ": seeds file header must be 'x_row,y_row'");
  }
  std::vector<std::pair<Index, Index>> pairs;
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    Index ij[2];
    for (int c = 0; c < 2; ++c) {
      const std::string& cell = table.rows[r][c];
      long long v = 0;
      const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
      if (cell.empty() || ec != std::errc() || ptr != cell.data() + cell.size() || v < 0) {
        throw DataError(path + ": line " + std::to_string(table.line_numbers[r]) +
                        ": seed index must be a non-negative integer, got '" + cell + "'");
      }
      ij[c] = static_cast<Index>(v);
    }
    pairs.emplace_back(ij[0], ij[1]);
  }
  return SeedSet(pairs);
}

}  // namespace shufreg::harness
