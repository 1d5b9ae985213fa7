#pragma once

// Minimal SVG charts: axes with end labels, polylines, points, vertical
// error segments and an optional y = x diagonal.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <string>
#include <vector>

namespace vpboot::svg {

struct Series {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
  std::vector<double> err;  // half-length of the vertical error bar; may be empty
  bool lines = true;
};

struct Chart {
  std::string title;
  std::string x_label;
  std::string y_label;
  bool log_x = false;
  bool log_y = false;
  bool diagonal = false;
  std::vector<Series> series;
};

namespace detail {

inline const char* color(std::size_t i) {
  static const char* palette[] = {"#1b9e77", "#d95f02", "#7570b3", "#e7298a", "#66a61e"};
  return palette[i % 5];
}

inline std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

inline std::string tick(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

inline std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '<') out += "&lt;";
    else if (c == '>') out += "&gt;";
    else if (c == '&') out += "&amp;";
    else out += c;
  }
  return out;
}

}  // namespace detail

inline std::string render(const Chart& chart) {
  constexpr double width = 640, height = 440, left = 70, right = 20, top = 40, bottom = 60;
  constexpr double floor_value = 1e-6;
  auto tx = [&](double v) { return chart.log_x ? std::log10(std::max(v, floor_value)) : v; };
  auto ty = [&](double v) { return chart.log_y ? std::log10(std::max(v, floor_value)) : v; };

  double x0 = INFINITY, x1 = -INFINITY, y0 = INFINITY, y1 = -INFINITY;
  for (const auto& s : chart.series)
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
      const double e = s.err.empty() ? 0.0 : s.err[i];
      x0 = std::min(x0, tx(s.x[i]));
      x1 = std::max(x1, tx(s.x[i]));
      y0 = std::min(y0, ty(s.y[i] - e));
      y1 = std::max(y1, ty(s.y[i] + e));
    }
  if (!std::isfinite(x0)) x0 = 0, x1 = 1, y0 = 0, y1 = 1;
  if (chart.diagonal) x0 = y0 = std::min(x0, y0), x1 = y1 = std::max(x1, y1);
  if (x1 == x0) x1 = x0 + 1;
  if (y1 == y0) y1 = y0 + 1;
  auto px = [&](double v) { return left + (tx(v) - x0) / (x1 - x0) * (width - left - right); };
  auto py = [&](double v) { return height - bottom - (ty(v) - y0) / (y1 - y0) * (height - top - bottom); };
  auto raw_px = [&](double t) { return left + (t - x0) / (x1 - x0) * (width - left - right); };
  auto raw_py = [&](double t) { return height - bottom - (t - y0) / (y1 - y0) * (height - top - bottom); };
  auto shown = [](double t, bool log) { return log ? std::pow(10.0, t) : t; };

  using detail::num;
  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
     << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  os << "<text x=\"" << width / 2 << "\" y=\"20\" text-anchor=\"middle\">"
     << detail::escape(chart.title) << "</text>\n";
  os << "<line x1=\"" << left << "\" y1=\"" << height - bottom << "\" x2=\"" << width - right
     << "\" y2=\"" << height - bottom << "\" stroke=\"black\"/>\n";
  os << "<line x1=\"" << left << "\" y1=\"" << top << "\" x2=\"" << left << "\" y2=\""
     << height - bottom << "\" stroke=\"black\"/>\n";
  for (double t : {x0, x1})
    os << "<text x=\"" << num(raw_px(t)) << "\" y=\"" << height - bottom + 16
       << "\" text-anchor=\"middle\">" << detail::tick(shown(t, chart.log_x)) << "</text>\n";
  for (double t : {y0, y1})
    os << "<text x=\"" << left - 6 << "\" y=\"" << num(raw_py(t) + 4)
       << "\" text-anchor=\"end\">" << detail::tick(shown(t, chart.log_y)) << "</text>\n";
  os << "<text x=\"" << width / 2 << "\" y=\"" << height - 20 << "\" text-anchor=\"middle\">"
     << detail::escape(chart.x_label) << (chart.log_x ? " (log)" : "") << "</text>\n";
  os << "<text x=\"16\" y=\"" << height / 2 << "\" text-anchor=\"middle\" transform=\"rotate(-90 16 "
     << height / 2 << ")\">" << detail::escape(chart.y_label) << (chart.log_y ? " (log)" : "")
     << "</text>\n";
  if (chart.diagonal)
    os << "<line x1=\"" << num(raw_px(x0)) << "\" y1=\"" << num(raw_py(y0)) << "\" x2=\""
       << num(raw_px(x1)) << "\" y2=\"" << num(raw_py(y1))
       << "\" stroke=\"gray\" stroke-dasharray=\"6,4\"/>\n";

  for (std::size_t k = 0; k < chart.series.size(); ++k) {
    const auto& s = chart.series[k];
    const char* c = detail::color(k);
    std::ostringstream pts;
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
      pts << num(px(s.x[i])) << ',' << num(py(s.y[i])) << ' ';
      if (!s.err.empty() && std::isfinite(s.err[i]))
        os << "<line x1=\"" << num(px(s.x[i])) << "\" y1=\"" << num(py(s.y[i] - s.err[i]))
           << "\" x2=\"" << num(px(s.x[i])) << "\" y2=\"" << num(py(s.y[i] + s.err[i]))
           << "\" stroke=\"" << c << "\"/>\n";
      os << "<circle cx=\"" << num(px(s.x[i])) << "\" cy=\"" << num(py(s.y[i]))
         << "\" r=\"3\" fill=\"" << c << "\"/>\n";
    }
    if (s.lines)
      os << "<polyline fill=\"none\" stroke=\"" << c << "\" points=\"" << pts.str() << "\"/>\n";
    os << "<text x=\"" << width - right - 150 << "\" y=\"" << top + 14 * (k + 1) << "\" fill=\""
       << c << "\">" << detail::escape(s.label) << "</text>\n";
  }
  os << "</svg>\n";
  return os.str();
}

}  // namespace vpboot::svg
