#include "scrip/plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <vector>

#include "scrip/errors.hpp"

namespace scrip {

namespace {

struct Dataset {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
};

Dataset read_csv(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw DomainError("emit_plot: cannot open " + path);
  Dataset d;
  std::string line;
  bool first = true;
  while (std::getline(f, line)) {
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (first) {
      d.header = cells;
      first = false;
      continue;
    }
    std::vector<double> row;
    row.reserve(cells.size());
    for (const std::string& cc : cells) row.push_back(std::strtod(cc.c_str(), nullptr));
    d.rows.push_back(std::move(row));
  }
  return d;
}

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

struct Frame {
  double x0, x1, y0, y1;                       // data ranges
  static constexpr double W = 640, H = 440;
  static constexpr double L = 70, R = 616, T = 24, B = 392;

  double px(double x) const { return L + (x - x0) / (x1 - x0) * (R - L); }
  double py(double y) const { return B - (y - y0) / (y1 - y0) * (B - T); }
};

void pad_range(double& lo, double& hi) {
  if (!(hi > lo)) {
    lo -= 1.0;
    hi += 1.0;
  } else {
    double pad = 0.05 * (hi - lo);
    lo -= pad;
    hi += pad;
  }
}

void axes(std::ostream& os, const Frame& fr, const std::string& xlabel,
          const std::string& ylabel) {
  os << "<rect x='" << Frame::L << "' y='" << Frame::T << "' width='" << Frame::R - Frame::L
     << "' height='" << Frame::B - Frame::T << "' fill='none' stroke='#333'/>\n";
  for (int i = 0; i <= 5; ++i) {
    double fx = fr.x0 + (fr.x1 - fr.x0) * i / 5.0;
    double fy = fr.y0 + (fr.y1 - fr.y0) * i / 5.0;
    double px = fr.px(fx), py = fr.py(fy);
    os << "<line x1='" << num(px) << "' y1='" << Frame::B << "' x2='" << num(px) << "' y2='"
       << Frame::B + 5 << "' stroke='#333'/>\n"
       << "<text x='" << num(px) << "' y='" << Frame::B + 18
       << "' font-size='11' text-anchor='middle'>" << num(fx) << "</text>\n"
       << "<line x1='" << Frame::L - 5 << "' y1='" << num(py) << "' x2='" << Frame::L
       << "' y2='" << num(py) << "' stroke='#333'/>\n"
       << "<text x='" << Frame::L - 8 << "' y='" << num(py + 4)
       << "' font-size='11' text-anchor='end'>" << num(fy) << "</text>\n";
  }
  os << "<text x='" << (Frame::L + Frame::R) / 2 << "' y='" << Frame::H - 14
     << "' font-size='12' text-anchor='middle'>" << xlabel << "</text>\n";
  os << "<text x='16' y='" << (Frame::T + Frame::B) / 2
     << "' font-size='12' text-anchor='middle' transform='rotate(-90 16 "
     << (Frame::T + Frame::B) / 2 << ")'>" << ylabel << "</text>\n";
}

void polyline(std::ostream& os, const Frame& fr, const std::vector<std::vector<double>>& rows,
              std::size_t xc, std::size_t yc, const char* color) {
  os << "<polyline fill='none' stroke='" << color << "' stroke-width='1.5' points='";
  for (const auto& r : rows) os << num(fr.px(r[xc])) << "," << num(fr.py(r[yc])) << " ";
  os << "'/>\n";
}

void markers(std::ostream& os, const Frame& fr, const std::vector<std::vector<double>>& rows,
             std::size_t xc, std::size_t yc, const char* color) {
  for (const auto& r : rows)
    os << "<circle cx='" << num(fr.px(r[xc])) << "' cy='" << num(fr.py(r[yc]))
       << "' r='3' fill='" << color << "'/>\n";
}

void staircase(std::ostream& os, const Frame& fr, const std::vector<std::vector<double>>& rows,
               std::size_t xc, std::size_t yc, const char* color) {
  os << "<polyline fill='none' stroke='" << color << "' stroke-width='1.5' points='";
  for (std::size_t i = 0; i < rows.size(); ++i) {
    double x = rows[i][xc], y = rows[i][yc];
    if (i > 0) os << num(fr.px(x)) << "," << num(fr.py(rows[i - 1][yc])) << " ";
    os << num(fr.px(x)) << "," << num(fr.py(y)) << " ";
  }
  os << "'/>\n";
}

}  // namespace

void emit_plot(const std::string& csvPath, const std::string& style,
               const std::string& svgPath) {
  Dataset d = read_csv(csvPath);
  std::size_t cols = d.header.size();
  std::size_t xc = 0;
  std::size_t yc = cols > 1 ? 1 : 0;
  std::size_t y2 = cols >= 4 ? cols - 1 : yc;
  const bool twoSeries = style == "series2" && cols >= 4;
  const bool stepStyle = style == "step";

  if ((style != "line" && style != "points" && !twoSeries && !stepStyle) &&
      style != "series2")
    throw DomainError("emit_plot: unknown style '" + style + "'");
  for (const auto& r : d.rows)
    if (r.size() < cols) throw DomainError("emit_plot: ragged CSV row in " + csvPath);

  Frame fr{0.0, 1.0, 0.0, 1.0};
  if (!d.rows.empty()) {
    fr.x0 = fr.x1 = d.rows[0][xc];
    fr.y0 = fr.y1 = d.rows[0][yc];
    for (const auto& r : d.rows) {
      fr.x0 = std::min(fr.x0, r[xc]);
      fr.x1 = std::max(fr.x1, r[xc]);
      for (std::size_t c : {yc, twoSeries ? y2 : yc}) {
        fr.y0 = std::min(fr.y0, r[c]);
        fr.y1 = std::max(fr.y1, r[c]);
      }
    }
    if (stepStyle) {  // show the diagonal square
      fr.y0 = std::min(fr.y0, fr.x0);
      fr.y1 = std::max(fr.y1, fr.x1);
    }
  } else {
    std::cerr << "emit_plot: warning: empty dataset " << csvPath << "\n";
  }
  pad_range(fr.x0, fr.x1);
  pad_range(fr.y0, fr.y1);

  std::ofstream os(svgPath, std::ios::binary);
  if (!os) throw DomainError("emit_plot: cannot open " + svgPath);
  os << "<svg xmlns='http://www.w3.org/2000/svg' width='" << Frame::W << "' height='"
     << Frame::H << "' viewBox='0 0 " << Frame::W << " " << Frame::H << "'>\n"
     << "<rect width='100%' height='100%' fill='white'/>\n";
  axes(os, fr, d.header.empty() ? "x" : d.header[xc],
       d.header.size() > yc ? d.header[yc] : "y");
  if (!d.rows.empty()) {
    if (stepStyle) {
      double lo = std::max(fr.x0, fr.y0), hi = std::min(fr.x1, fr.y1);
      os << "<line x1='" << num(fr.px(lo)) << "' y1='" << num(fr.py(lo)) << "' x2='"
         << num(fr.px(hi)) << "' y2='" << num(fr.py(hi))
         << "' stroke='#999' stroke-dasharray='4 3'/>\n";
      staircase(os, fr, d.rows, xc, yc, "#1f6fb2");
    } else if (twoSeries) {
      polyline(os, fr, d.rows, xc, yc, "#1f6fb2");
      polyline(os, fr, d.rows, xc, y2, "#b2421f");
    } else if (style == "points") {
      polyline(os, fr, d.rows, xc, yc, "#1f6fb2");
      markers(os, fr, d.rows, xc, yc, "#1f6fb2");
    } else {
      polyline(os, fr, d.rows, xc, yc, "#1f6fb2");
    }
  }
  os << "</svg>\n";
}

}  // namespace scrip
