// Copyright 2026 The covplan Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "covplan/dataset.hpp"
#include "covplan/error.hpp"

namespace covplan::cli {

/// Shortest decimal string that parses back to exactly `v`.
inline std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

/// Numeric CSV with a header row. Rectangular, every cell a finite real.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;

  [[nodiscard]] std::optional<std::size_t> column(std::string_view name) const {
    const auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end()) return std::nullopt;
    return static_cast<std::size_t>(it - header.begin());
  }
};

namespace detail {

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() &&
         (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
    s.remove_suffix(1);
  }
  return s;
}

inline std::vector<std::string_view> split(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    const auto comma = line.find(',', start);
    out.push_back(trim(line.substr(start, comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

inline double parse_cell(std::string_view cell, std::size_t line_no) {
  double v = 0.0;
  const auto res = std::from_chars(cell.data(), cell.data() + cell.size(), v);
  if (res.ec != std::errc{} || res.ptr != cell.data() + cell.size() ||
      !std::isfinite(v)) {
    throw InvalidArgument("line " + std::to_string(line_no) +
                          ": not a finite number: '" + std::string(cell) + "'");
  }
  return v;
}

}  // namespace detail

inline CsvTable read_csv(std::istream& in) {
  CsvTable t;
  std::string line;
  std::size_t line_no = 0;
  bool have_header = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (detail::trim(line).empty()) continue;
    const auto cells = detail::split(line);
    if (!have_header) {
      for (auto c : cells) t.header.emplace_back(c);
      have_header = true;
      continue;
    }
    if (cells.size() != t.header.size()) {
      throw InvalidArgument("line " + std::to_string(line_no) + ": expected " +
                            std::to_string(t.header.size()) + " cells, got " +
                            std::to_string(cells.size()));
    }
    std::vector<double> row;
    row.reserve(cells.size());
    for (auto c : cells) row.push_back(detail::parse_cell(c, line_no));
    t.rows.push_back(std::move(row));
  }
  if (!have_header) throw InvalidArgument("CSV has no header row");
  return t;
}

inline CsvTable read_csv_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open '" + path + "'");
  return read_csv(in);
}

inline void write_csv(std::ostream& out, const CsvTable& t) {
  for (std::size_t j = 0; j < t.header.size(); ++j) {
    out << (j ? "," : "") << t.header[j];
  }
  out << '\n';
  for (const auto& row : t.rows) {
    for (std::size_t j = 0; j < row.size(); ++j) {
      out << (j ? "," : "") << format_double(row[j]);
    }
    out << '\n';
  }
}

/// Splits a table into features (every column except `y`) and response.
/// `require_response` = false yields a dataset with zero responses when the
/// table has no `y` column; check has_response() on the result.
struct LabeledTable {
  std::vector<std::string> features;
  Dataset data;
  bool has_response;
};

inline LabeledTable to_dataset(const CsvTable& t, bool require_response) {
  const auto ycol = t.column("y");
  if (!ycol && require_response) {
    throw InvalidArgument("table lacks a response column 'y'");
  }
  LabeledTable out;
  out.has_response = ycol.has_value();
  std::vector<std::size_t> fcols;
  for (std::size_t j = 0; j < t.header.size(); ++j) {
    if (ycol && j == *ycol) continue;
    fcols.push_back(j);
    out.features.push_back(t.header[j]);
  }
  if (fcols.empty()) throw InvalidArgument("table has no feature columns");
  std::vector<double> x;
  std::vector<double> y;
  x.reserve(t.rows.size() * fcols.size());
  y.reserve(t.rows.size());
  for (const auto& row : t.rows) {
    for (auto j : fcols) x.push_back(row[j]);
    y.push_back(ycol ? row[*ycol] : 0.0);
  }
  out.data = Dataset(fcols.size(), std::move(x), std::move(y));
  return out;
}

}  // namespace covplan::cli
