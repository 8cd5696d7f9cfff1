// Copyright 2026 The Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Minimal reader for the comma-separated inputs (headers required, no
// quoting, '.' decimal separator).

#pragma once

#include <charconv>
#include <cstdint>
#include <fstream>
#include <istream>
#include <string>
#include <string_view>
#include <vector>

#include "rideshare/common.hpp"

namespace rideshare::csv {

struct Row {
  std::size_t line = 0;  // 1-based line in the source, header is line 1
  std::vector<std::string> fields;
};

struct Table {
  std::vector<std::string> header;
  std::vector<Row> rows;

  int column(std::string_view name) const {
    for (std::size_t i = 0; i < header.size(); ++i) {
      if (header[i] == name) return static_cast<int>(i);
    }
    return -1;
  }
};

inline std::string trim(std::string_view s) {
  std::size_t b = 0;
  std::size_t e = s.size();
  while (b < e && (s[b] == ' ' || s[b] == '\t' || s[b] == '\r')) ++b;
  while (e > b && (s[e - 1] == ' ' || s[e - 1] == '\t' || s[e - 1] == '\r')) --e;
  return std::string(s.substr(b, e - b));
}

inline std::vector<std::string> split(std::string_view line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      out.push_back(trim(line.substr(start)));
      break;
    }
    out.push_back(trim(line.substr(start, comma - start)));
    start = comma + 1;
  }
  return out;
}

// Reads a table and checks that every required column is present. Blank
// lines are skipped; rows with the wrong arity are rejected with their line.
inline Table read(std::istream& in, const std::vector<std::string>& required,
                  std::string_view source) {
  Table table;
  std::string line;
  std::size_t line_no = 0;
  bool have_header = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (line_no == 1 && line.size() >= 3 &&
        static_cast<unsigned char>(line[0]) == 0xEF &&
        static_cast<unsigned char>(line[1]) == 0xBB &&
        static_cast<unsigned char>(line[2]) == 0xBF) {
      line.erase(0, 3);  // UTF-8 BOM
    }
    if (trim(line).empty()) continue;
    if (!have_header) {
      table.header = split(line);
      have_header = true;
      for (const auto& name : required) {
        if (table.column(name) < 0) {
          fail_invalid(source, ": missing required column '", name, "'");
        }
      }
      continue;
    }
    Row row{line_no, split(line)};
    if (row.fields.size() != table.header.size()) {
      fail_invalid(source, ": line ", line_no, ": expected ",
                   table.header.size(), " fields, found ", row.fields.size());
    }
    table.rows.push_back(std::move(row));
  }
  if (!have_header) fail_invalid(source, ": empty file (header required)");
  return table;
}

inline Table read_file(const std::string& path,
                       const std::vector<std::string>& required) {
  std::ifstream in(path);
  if (!in) fail_invalid("cannot open ", path);
  return read(in, required, path);
}

inline double to_double(const std::string& s, std::string_view source,
                        std::size_t line) {
  double value = 0.0;
  const auto* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(s.data(), end, value);
  if (ec != std::errc() || ptr != end || s.empty()) {
    fail_invalid(source, ": line ", line, ": not a number: '", s, "'");
  }
  return value;
}

inline std::int64_t to_int(const std::string& s, std::string_view source,
                           std::size_t line) {
  std::int64_t value = 0;
  const auto* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(s.data(), end, value);
  if (ec != std::errc() || ptr != end || s.empty()) {
    fail_invalid(source, ": line ", line, ": not an integer: '", s, "'");
  }
  return value;
}

}  // namespace rideshare::csv
