#pragma once

#include <string>
#include <utility>
#include <vector>

namespace uracf {

struct PlotSeries {
  std::string label;
  std::vector<std::pair<double, double>> points;  ///< (x, y), plotted in order
};

struct PlotSpec {
  std::string title;
  std::string x_label;
  std::string y_label;
  bool log_y = false;
  double y_floor = 0.0;  ///< log plots clamp y values below this (0 = auto)
};

/// Self-contained SVG line plot (fixed 640x440 canvas, axes, ticks, legend).
/// Deterministic output for identical inputs.
std::string render_line_plot(const PlotSpec& spec, const std::vector<PlotSeries>& series);

}  // namespace uracf
