#pragma once

// Minimal self-contained SVG rendering of a solver trace: the iterate path
// (n = 2) or coordinate against k (n = 1), next to total value against k.

#include "ell0/io/csv.hpp"
#include "ell0/solvers.hpp"

#include <algorithm>
#include <sstream>
#include <string>
#include <vector>

namespace ell0::io {

enum class PlotMode { path, value };

namespace detail {

struct Panel {
  double x0, y0, width, height;  // pixel frame
  double xmin, xmax, ymin, ymax;  // data range

  double px(double v) const { return x0 + (v - xmin) / (xmax - xmin) * width; }
  double py(double v) const { return y0 + height - (v - ymin) / (ymax - ymin) * height; }
};

inline void widen(double& lo, double& hi) {
  if (hi - lo < 1e-12) {
    const double pad = std::max(1.0, std::abs(lo)) * 0.5;
    lo -= pad;
    hi += pad;
  } else {
    const double pad = 0.05 * (hi - lo);
    lo -= pad;
    hi += pad;
  }
}

inline Panel make_panel(double x0, double y0, double w, double h, const std::vector<double>& xs,
                        const std::vector<double>& ys) {
  Panel p{x0, y0, w, h, *std::min_element(xs.begin(), xs.end()), *std::max_element(xs.begin(), xs.end()),
          *std::min_element(ys.begin(), ys.end()), *std::max_element(ys.begin(), ys.end())};
  widen(p.xmin, p.xmax);
  widen(p.ymin, p.ymax);
  return p;
}

inline void draw_panel(std::ostringstream& svg, const Panel& p, const std::vector<double>& xs,
                       const std::vector<double>& ys, const std::string& title, const std::string& xlabel,
                       const std::string& ylabel, bool markers) {
  svg << "<rect x=\"" << p.x0 << "\" y=\"" << p.y0 << "\" width=\"" << p.width << "\" height=\"" << p.height
      << "\" fill=\"none\" stroke=\"#444\"/>\n";
  // zero axes when in range
  if (p.xmin < 0 && p.xmax > 0)
    svg << "<line x1=\"" << p.px(0) << "\" y1=\"" << p.y0 << "\" x2=\"" << p.px(0) << "\" y2=\"" << p.y0 + p.height
        << "\" stroke=\"#bbb\" stroke-dasharray=\"4 3\"/>\n";
  if (p.ymin < 0 && p.ymax > 0)
    svg << "<line x1=\"" << p.x0 << "\" y1=\"" << p.py(0) << "\" x2=\"" << p.x0 + p.width << "\" y2=\"" << p.py(0)
        << "\" stroke=\"#bbb\" stroke-dasharray=\"4 3\"/>\n";
  svg << "<polyline fill=\"none\" stroke=\"#1f77b4\" stroke-width=\"1.5\" points=\"";
  for (std::size_t i = 0; i < xs.size(); ++i) svg << p.px(xs[i]) << ',' << p.py(ys[i]) << ' ';
  svg << "\"/>\n";
  if (markers) {
    for (std::size_t i = 0; i < xs.size(); ++i)
      svg << "<circle cx=\"" << p.px(xs[i]) << "\" cy=\"" << p.py(ys[i]) << "\" r=\"2\" fill=\"#1f77b4\"/>\n";
  }
  svg << "<circle cx=\"" << p.px(xs.front()) << "\" cy=\"" << p.py(ys.front()) << "\" r=\"4\" fill=\"#2ca02c\"/>\n";
  svg << "<circle cx=\"" << p.px(xs.back()) << "\" cy=\"" << p.py(ys.back()) << "\" r=\"4\" fill=\"#d62728\"/>\n";
  auto text = [&](double x, double y, const std::string& s, const char* anchor) {
    svg << "<text x=\"" << x << "\" y=\"" << y << "\" font-family=\"sans-serif\" font-size=\"11\" text-anchor=\""
        << anchor << "\">" << s << "</text>\n";
  };
  text(p.x0 + p.width / 2, p.y0 - 8, title, "middle");
  text(p.x0 + p.width / 2, p.y0 + p.height + 30, xlabel, "middle");
  text(p.x0 - 40, p.y0 + p.height / 2, ylabel, "middle");
  text(p.x0, p.y0 + p.height + 14, format_double(p.xmin).substr(0, 8), "start");
  text(p.x0 + p.width, p.y0 + p.height + 14, format_double(p.xmax).substr(0, 8), "end");
  text(p.x0 - 4, p.y0 + p.height, format_double(p.ymin).substr(0, 8), "end");
  text(p.x0 - 4, p.y0 + 10, format_double(p.ymax).substr(0, 8), "end");
}

}  // namespace detail

inline std::string render_trace_svg(const std::vector<TraceRow>& rows, PlotMode mode) {
  if (rows.empty()) throw ConfigError("plot: trace has no rows");
  const Eigen::Index n = rows.front().x.size();
  if (mode == PlotMode::path && n > 2)
    throw ConfigError("plot: path plots need n <= 2 (trace has n = " + std::to_string(n) + "); use --mode value");

  std::vector<double> ks, totals;
  for (const auto& r : rows) {
    ks.push_back(static_cast<double>(r.k));
    totals.push_back(r.total);
  }

  const double panel_w = 360, panel_h = 300, margin = 70;
  const int panels = mode == PlotMode::path ? 2 : 1;
  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << panels * (panel_w + margin) + margin / 2
      << "\" height=\"" << panel_h + 2 * margin << "\">\n<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";

  double x_off = margin;
  if (mode == PlotMode::path) {
    std::vector<double> xs, ys;
    std::string title, xl, yl;
    if (n == 2) {
      for (const auto& r : rows) {
        xs.push_back(r.x[0]);
        ys.push_back(r.x[1]);
      }
      title = "iterate path";
      xl = "x_1";
      yl = "x_2";
    } else {
      xs = ks;
      for (const auto& r : rows) ys.push_back(r.x[0]);
      title = "coordinate";
      xl = "k";
      yl = "x_1";
    }
    detail::draw_panel(svg, detail::make_panel(x_off, margin, panel_w, panel_h, xs, ys), xs, ys, title, xl, yl, true);
    x_off += panel_w + margin;
  }
  detail::draw_panel(svg, detail::make_panel(x_off, margin, panel_w, panel_h, ks, totals), ks, totals,
                     "f + l0 by iteration", "k", "total", false);
  svg << "</svg>\n";
  return svg.str();
}

}  // namespace ell0::io
