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

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "qgm/errors.hpp"
#include "qgm/report.hpp"

namespace qgm::cli {

struct Series {
  std::string name;
  std::vector<std::pair<double, double>> points;  // sorted by x
};

/// Mean of each y column per distinct x, skipping null cells. Text cells in
/// the chosen columns are rejected.
inline std::vector<Series> collect_series(const std::vector<ReportRow>& rows, const std::string& x,
                                          const std::vector<std::string>& ys) {
  if (rows.empty()) throw QgmError(ErrorCode::kNoRows, "no rows");
  const auto numeric = [&](const ReportRow& row, const std::string& col) -> std::optional<double> {
    const Cell* cell = nullptr;
    try {
      cell = &row.at(col);
    } catch (const std::out_of_range&) {
      throw QgmError(ErrorCode::kUsage, "CSV has no column \"" + col + "\"");
    }
    if (std::holds_alternative<std::monostate>(*cell)) return std::nullopt;
    if (std::holds_alternative<std::string>(*cell)) {
      throw QgmError(ErrorCode::kInputError, "column \"" + col + "\" is not numeric");
    }
    return row.number(col);
  };
  std::vector<Series> out;
  for (const auto& y : ys) {
    std::map<double, std::pair<double, std::size_t>> acc;
    for (const auto& row : rows) {
      const auto xv = numeric(row, x);
      const auto yv = numeric(row, y);
      if (!xv || !yv) continue;
      auto& [sum, count] = acc[*xv];
      sum += *yv;
      ++count;
    }
    Series s{y, {}};
    for (const auto& [xv, a] : acc) s.points.emplace_back(xv, a.first / static_cast<double>(a.second));
    out.push_back(std::move(s));
  }
  return out;
}

namespace detail {

inline std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", v);
  return buf;
}

inline std::string escape(const std::string& s) {
  std::string o;
  for (char c : s) {
    switch (c) {
      case '<': o += "&lt;"; break;
      case '>': o += "&gt;"; break;
      case '&': o += "&amp;"; break;
      case '"': o += "&quot;"; break;
      default: o += c;
    }
  }
  return o;
}

}  // namespace detail

/// Minimal SVG line chart: frame, five ticks per axis, one polyline per series.
inline std::string render_svg(const std::vector<Series>& series, const std::string& xlabel,
                              const std::string& title) {
  constexpr double W = 640, H = 420, L = 70, R = 20, T = 40, B = 50;
  double x0 = INFINITY, x1 = -INFINITY, y0 = INFINITY, y1 = -INFINITY;
  for (const auto& s : series) {
    for (const auto& [x, y] : s.points) {
      x0 = std::min(x0, x);
      x1 = std::max(x1, x);
      y0 = std::min(y0, y);
      y1 = std::max(y1, y);
    }
  }
  if (!(x0 <= x1)) throw QgmError(ErrorCode::kNoRows, "no rows");
  if (x0 == x1) { x0 -= 0.5; x1 += 0.5; }
  if (y0 == y1) { y0 -= 0.5; y1 += 0.5; }
  const auto px = [&](double x) { return L + (x - x0) / (x1 - x0) * (W - L - R); };
  const auto py = [&](double y) { return H - B - (y - y0) / (y1 - y0) * (H - T - B); };
  static const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};

  std::ostringstream o;
  o << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H
    << "\" viewBox=\"0 0 " << W << ' ' << H << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  o << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  o << "<text x=\"" << W / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"15\">"
    << detail::escape(title) << "</text>\n";
  o << "<rect x=\"" << L << "\" y=\"" << T << "\" width=\"" << W - L - R << "\" height=\"" << H - T - B
    << "\" fill=\"none\" stroke=\"black\"/>\n";
  for (int i = 0; i <= 4; ++i) {
    const double xv = x0 + (x1 - x0) * i / 4, yv = y0 + (y1 - y0) * i / 4;
    o << "<line x1=\"" << px(xv) << "\" y1=\"" << H - B << "\" x2=\"" << px(xv) << "\" y2=\"" << H - B + 5
      << "\" stroke=\"black\"/>\n";
    o << "<text x=\"" << px(xv) << "\" y=\"" << H - B + 18 << "\" text-anchor=\"middle\">" << detail::fmt(xv)
      << "</text>\n";
    o << "<line x1=\"" << L - 5 << "\" y1=\"" << py(yv) << "\" x2=\"" << L << "\" y2=\"" << py(yv)
      << "\" stroke=\"black\"/>\n";
    o << "<text x=\"" << L - 8 << "\" y=\"" << py(yv) + 4 << "\" text-anchor=\"end\">" << detail::fmt(yv)
      << "</text>\n";
  }
  o << "<text x=\"" << (L + W - R) / 2 << "\" y=\"" << H - 12 << "\" text-anchor=\"middle\">"
    << detail::escape(xlabel) << "</text>\n";
  for (std::size_t i = 0; i < series.size(); ++i) {
    const char* color = colors[i % 6];
    o << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"2\" points=\"";
    for (std::size_t k = 0; k < series[i].points.size(); ++k) {
      o << (k ? " " : "") << px(series[i].points[k].first) << ',' << py(series[i].points[k].second);
    }
    o << "\"/>\n";
    for (const auto& [x, y] : series[i].points) {
      o << "<circle cx=\"" << px(x) << "\" cy=\"" << py(y) << "\" r=\"3\" fill=\"" << color << "\"/>\n";
    }
    o << "<text x=\"" << L + 10 << "\" y=\"" << T + 16 + 16 * i << "\" fill=\"" << color << "\">"
      << detail::escape(series[i].name) << "</text>\n";
  }
  o << "</svg>\n";
  return o.str();
}

}  // namespace qgm::cli
