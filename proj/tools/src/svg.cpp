#include "svg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>

#include "mmbin/csv.hpp"

namespace mmbin::cli {

namespace {

constexpr double kWidth = 800.0;
constexpr double kHeight = 600.0;
constexpr double kLeft = 70.0, kRight = 20.0, kTop = 30.0, kBottom = 45.0;

std::string fmt(double x) {
  const double r = std::round(x * 100.0) / 100.0;
  return format_double(r == 0.0 ? 0.0 : r);
}

// Round tick step: 1, 2 or 5 times a power of ten.
double tick_step(double span) {
  const double raw = span / 5.0;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  for (double m : {1.0, 2.0, 5.0})
    if (m * mag >= raw) return m * mag;
  return 10.0 * mag;
}

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      default: out += c;
    }
  }
  return out;
}

void write_panel(std::ostream& out, const Panel& panel, double top, double height) {
  double x0 = std::numeric_limits<double>::infinity(), x1 = -x0, y0 = x0, y1 = -x0;
  for (const Series& s : panel.series) {
    for (double v : s.x) {
      x0 = std::min(x0, v);
      x1 = std::max(x1, v);
    }
    for (double v : s.y) {
      if (!std::isfinite(v)) continue;
      y0 = std::min(y0, v);
      y1 = std::max(y1, v);
    }
  }
  if (!(x1 > x0)) x1 = x0 + 1.0;
  if (!std::isfinite(y0)) y0 = 0.0, y1 = 1.0;
  if (!(y1 > y0)) {
    y0 -= 0.5;
    y1 += 0.5;
  }
  const double pad = 0.05 * (y1 - y0);
  y0 -= pad;
  y1 += pad;

  const double left = kLeft, right = kWidth - kRight;
  const double plot_top = top + kTop, plot_bottom = top + height - kBottom;
  auto px = [&](double x) { return left + (x - x0) / (x1 - x0) * (right - left); };
  auto py = [&](double y) { return plot_bottom - (y - y0) / (y1 - y0) * (plot_bottom - plot_top); };

  out << "<rect x=\"" << left << "\" y=\"" << plot_top << "\" width=\"" << right - left
      << "\" height=\"" << plot_bottom - plot_top << "\" fill=\"none\" stroke=\"#444\"/>\n";
  out << "<text x=\"" << kWidth / 2 << "\" y=\"" << top + 20
      << "\" text-anchor=\"middle\" font-size=\"14\">" << escape(panel.title) << "</text>\n";

  const double xs = tick_step(x1 - x0);
  for (double t = std::ceil(x0 / xs) * xs; t <= x1 + 1e-9 * xs; t += xs) {
    out << "<line x1=\"" << fmt(px(t)) << "\" y1=\"" << plot_bottom << "\" x2=\"" << fmt(px(t))
        << "\" y2=\"" << plot_bottom + 5 << "\" stroke=\"#444\"/>"
        << "<text x=\"" << fmt(px(t)) << "\" y=\"" << plot_bottom + 18
        << "\" text-anchor=\"middle\" font-size=\"11\">" << format_double(std::round(t / xs) * xs)
        << "</text>\n";
  }
  const double ys = tick_step(y1 - y0);
  for (double t = std::ceil(y0 / ys) * ys; t <= y1 + 1e-9 * ys; t += ys) {
    const double shown = std::abs(t) < 1e-9 * ys ? 0.0 : t;
    out << "<line x1=\"" << left - 5 << "\" y1=\"" << fmt(py(t)) << "\" x2=\"" << left
        << "\" y2=\"" << fmt(py(t)) << "\" stroke=\"#444\"/>"
        << "<text x=\"" << left - 8 << "\" y=\"" << fmt(py(t) + 4)
        << "\" text-anchor=\"end\" font-size=\"11\">" << format_double(shown) << "</text>\n";
  }
  out << "<text x=\"" << (left + right) / 2 << "\" y=\"" << plot_bottom + 36
      << "\" text-anchor=\"middle\" font-size=\"12\">" << escape(panel.x_label) << "</text>\n";
  out << "<text x=\"16\" y=\"" << (plot_top + plot_bottom) / 2
      << "\" text-anchor=\"middle\" font-size=\"12\" transform=\"rotate(-90 16 "
      << (plot_top + plot_bottom) / 2 << ")\">" << escape(panel.y_label) << "</text>\n";

  for (const Series& s : panel.series) {
    out << "<polyline fill=\"none\" stroke=\"" << s.color << "\" stroke-width=\"" << s.width
        << "\"";
    if (s.dashed) out << " stroke-dasharray=\"6 4\"";
    if (s.opacity < 1.0) out << " stroke-opacity=\"" << s.opacity << "\"";
    out << " points=\"";
    for (std::size_t i = 0; i < s.x.size() && i < s.y.size(); ++i) {
      if (!std::isfinite(s.y[i])) continue;
      out << fmt(px(s.x[i])) << ',' << fmt(py(s.y[i])) << ' ';
    }
    out << "\"/>\n";
  }
}

}  // namespace

void write_svg(std::ostream& out, const std::vector<Panel>& panels) {
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 800 600\" width=\"800\" "
         "height=\"600\" font-family=\"sans-serif\">\n"
      << "<rect width=\"800\" height=\"600\" fill=\"white\"/>\n";
  const double height = kHeight / static_cast<double>(std::max<std::size_t>(panels.size(), 1));
  for (std::size_t i = 0; i < panels.size(); ++i) {
    write_panel(out, panels[i], height * static_cast<double>(i), height);
  }
  out << "</svg>\n";
}

Series step_series(const std::vector<double>& x, const std::vector<double>& y, double x_end) {
  Series s;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (i > 0) {
      s.x.push_back(x[i]);
      s.y.push_back(y[i - 1]);
    }
    s.x.push_back(x[i]);
    s.y.push_back(y[i]);
  }
  if (!x.empty() && x_end > x.back()) {
    s.x.push_back(x_end);
    s.y.push_back(y.back());
  }
  return s;
}

}  // namespace mmbin::cli
