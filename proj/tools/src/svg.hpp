#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace mmbin::cli {

struct Series {
  std::vector<double> x;
  std::vector<double> y;
  std::string color = "#1f77b4";
  double width = 1.0;
  bool dashed = false;
  double opacity = 1.0;
};

struct Panel {
  std::string title;
  std::string x_label;
  std::string y_label;
  std::vector<Series> series;
};

/// Panels stacked vertically in a fixed 800×600 viewBox, one polyline per
/// series, linear axes fitted to the data.
void write_svg(std::ostream& out, const std::vector<Panel>& panels);

/// Staircase (x, y) pairs for a right-continuous step function.
Series step_series(const std::vector<double>& x, const std::vector<double>& y, double x_end);

}  // namespace mmbin::cli
