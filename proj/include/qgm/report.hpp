// Copyright 2026 The qgm Authors
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

#include <charconv>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <system_error>
#include <utility>
#include <variant>
#include <vector>

namespace qgm {

/// Null, integer, real or text.
using Cell = std::variant<std::monostate, std::int64_t, double, std::string>;

/// One result row: named cells in column order.
class ReportRow {
 public:
  ReportRow& set(std::string column, Cell value) {
    for (auto& [name, v] : cells_) {
      if (name == column) {
        v = std::move(value);
        return *this;
      }
    }
    cells_.emplace_back(std::move(column), std::move(value));
    return *this;
  }
  ReportRow& set(std::string column, int v) { return set(std::move(column), Cell{std::int64_t{v}}); }
  ReportRow& set(std::string column, std::size_t v) {
    return set(std::move(column), Cell{static_cast<std::int64_t>(v)});
  }
  ReportRow& set(std::string column, const char* v) { return set(std::move(column), Cell{std::string(v)}); }
  ReportRow& set(std::string column, bool v) {
    return set(std::move(column), Cell{std::string(v ? "true" : "false")});
  }

  const std::vector<std::pair<std::string, Cell>>& cells() const { return cells_; }

  const Cell& at(const std::string& column) const {
    for (const auto& [name, v] : cells_)
      if (name == column) return v;
    throw std::out_of_range("no column \"" + column + "\"");
  }

  double number(const std::string& column) const {
    const Cell& c = at(column);
    if (const auto* i = std::get_if<std::int64_t>(&c)) return static_cast<double>(*i);
    if (const auto* d = std::get_if<double>(&c)) return *d;
    throw std::invalid_argument("column \"" + column + "\" is not numeric");
  }

  friend bool operator==(const ReportRow&, const ReportRow&) = default;

 private:
  std::vector<std::pair<std::string, Cell>> cells_;
};

inline Cell parse_cell(const std::string& s);

/// Shortest round-trip text; integral doubles keep a ".0" so they read back
/// as reals, and text that would read back as a number or null is quoted.
inline std::string format_cell(const Cell& c) {
  struct Visitor {
    std::string operator()(std::monostate) const { return ""; }
    std::string operator()(std::int64_t v) const { return std::to_string(v); }
    std::string operator()(double v) const {
      if (std::isnan(v)) return "nan";
      if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
      char buf[64];
      auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
      std::string s(buf, end);
      if (s.find_first_of(".e") == std::string::npos) s += ".0";
      return s;
    }
    std::string operator()(const std::string& v) const {
      if (v.find_first_of(",\"\n") == std::string::npos &&
          std::holds_alternative<std::string>(parse_cell(v))) {
        return v;
      }
      std::string q = "\"";
      for (char ch : v) {
        if (ch == '"') q += '"';
        q += ch;
      }
      return q + "\"";
    }
  };
  return std::visit(Visitor{}, c);
}

/// Inverse of format_cell for unquoted fields.
inline Cell parse_cell(const std::string& s) {
  if (s.empty()) return std::monostate{};
  if (s == "nan") return std::nan("");
  if (s == "inf") return INFINITY;
  if (s == "-inf") return -INFINITY;
  const bool real = s.find_first_of(".eE") != std::string::npos;
  if (!real) {
    std::int64_t i = 0;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), i);
    if (ec == std::errc{} && p == s.data() + s.size()) return i;
  } else {
    double d = 0;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), d);
    if (ec == std::errc{} && p == s.data() + s.size()) return d;
  }
  return s;
}

inline void write_csv(std::ostream& os, const std::vector<ReportRow>& rows) {
  if (rows.empty()) return;
  const auto& header = rows.front().cells();
  for (std::size_t i = 0; i < header.size(); ++i) os << (i ? "," : "") << header[i].first;
  os << '\n';
  for (const auto& row : rows) {
    if (row.cells().size() != header.size()) {
      throw std::invalid_argument("CSV rows have differing column sets");
    }
    for (std::size_t i = 0; i < row.cells().size(); ++i) {
      if (row.cells()[i].first != header[i].first) {
        throw std::invalid_argument("CSV rows have differing column order");
      }
      os << (i ? "," : "") << format_cell(row.cells()[i].second);
    }
    os << '\n';
  }
}

inline std::string to_csv(const std::vector<ReportRow>& rows) {
  std::ostringstream os;
  write_csv(os, rows);
  return os.str();
}

namespace detail {
inline std::vector<std::pair<std::string, bool>> split_csv_line(const std::string& line) {
  std::vector<std::pair<std::string, bool>> out;  // (field, was_quoted)
  std::string cur;
  bool quoted = false, in_quotes = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char ch = line[i];
    if (in_quotes) {
      if (ch == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        cur += '"';
        ++i;
      } else if (ch == '"') {
        in_quotes = false;
      } else {
        cur += ch;
      }
    } else if (ch == '"') {
      in_quotes = quoted = true;
    } else if (ch == ',') {
      out.emplace_back(std::move(cur), quoted);
      cur.clear();
      quoted = false;
    } else if (ch != '\r') {
      cur += ch;
    }
  }
  out.emplace_back(std::move(cur), quoted);
  return out;
}
}  // namespace detail

inline std::vector<ReportRow> read_csv(std::istream& is) {
  std::vector<ReportRow> rows;
  std::string line;
  if (!std::getline(is, line)) return rows;
  const auto header = detail::split_csv_line(line);
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    const auto fields = detail::split_csv_line(line);
    if (fields.size() != header.size()) {
      throw std::invalid_argument("CSV row has " + std::to_string(fields.size()) +
                                  " fields, header has " + std::to_string(header.size()));
    }
    ReportRow row;
    for (std::size_t i = 0; i < fields.size(); ++i) {
      row.set(header[i].first,
              fields[i].second ? Cell{fields[i].first} : parse_cell(fields[i].first));
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

inline std::vector<ReportRow> from_csv(const std::string& text) {
  std::istringstream is(text);
  return read_csv(is);
}

}  // namespace qgm
