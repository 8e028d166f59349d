#include "uracf/svg_plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>

namespace uracf {
namespace {

constexpr double kWidth = 640, kHeight = 440;
constexpr double kLeft = 72, kRight = 24, kTop = 40, kBottom = 56;

const char* kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};

std::string fmt(double v) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

std::string escape(const std::string& s) {
  std::string out;
  for (const char c : s) {
    if (c == '&') out += "&amp;";
    else if (c == '<') out += "&lt;";
    else if (c == '>') out += "&gt;";
    else out += c;
  }
  return out;
}

/// Round-number tick positions covering [lo, hi].
std::vector<double> linear_ticks(double lo, double hi) {
  const double span = hi - lo;
  if (!(span > 0)) return {lo};
  const double raw = span / 5.0;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  double step = mag;
  for (const double m : {1.0, 2.0, 5.0, 10.0}) {
    if (raw <= m * mag) {
      step = m * mag;
      break;
    }
  }
  std::vector<double> ticks;
  for (double t = std::ceil(lo / step) * step; t <= hi + 1e-9 * span; t += step)
    ticks.push_back(std::abs(t) < 1e-12 * span ? 0.0 : t);
  return ticks;
}

}  // namespace

std::string render_line_plot(const PlotSpec& spec, const std::vector<PlotSeries>& series) {
  double x_lo = std::numeric_limits<double>::infinity(), x_hi = -x_lo;
  double y_lo = std::numeric_limits<double>::infinity(), y_hi = -y_lo;
  const double floor = spec.y_floor;
  for (const auto& s : series)
    for (const auto& [x, y] : s.points) {
      const double yy = spec.log_y ? std::max(y, floor > 0 ? floor : 1e-12) : y;
      x_lo = std::min(x_lo, x);
      x_hi = std::max(x_hi, x);
      y_lo = std::min(y_lo, yy);
      y_hi = std::max(y_hi, yy);
    }
  if (!std::isfinite(x_lo) || !std::isfinite(y_lo))
    throw std::invalid_argument("render_line_plot: no points");
  if (x_hi == x_lo) x_hi = x_lo + 1;
  if (spec.log_y) {
    if (floor > 0) y_lo = std::min(y_lo, floor);
    y_lo = std::pow(10.0, std::floor(std::log10(y_lo)));
    y_hi = std::pow(10.0, std::ceil(std::log10(std::max(y_hi, y_lo * 1.0001))));
  } else {
    const double pad = 0.05 * (y_hi - y_lo + 1e-12);
    y_lo -= pad;
    y_hi += pad;
  }

  const double px0 = kLeft, px1 = kWidth - kRight, py0 = kHeight - kBottom, py1 = kTop;
  auto sx = [&](double x) { return px0 + (x - x_lo) / (x_hi - x_lo) * (px1 - px0); };
  auto sy = [&](double y) {
    if (spec.log_y) {
      const double ly = std::log10(std::max(y, floor > 0 ? floor : y_lo));
      return py0 + (ly - std::log10(y_lo)) / (std::log10(y_hi) - std::log10(y_lo)) * (py1 - py0);
    }
    return py0 + (y - y_lo) / (y_hi - y_lo) * (py1 - py0);
  };

  std::string svg;
  svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + fmt(kWidth) + "\" height=\"" +
         fmt(kHeight) + "\" viewBox=\"0 0 " + fmt(kWidth) + " " + fmt(kHeight) + "\">\n";
  svg += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  svg += "<text x=\"" + fmt(kWidth / 2) + "\" y=\"24\" font-size=\"15\" text-anchor=\"middle\" "
         "font-family=\"sans-serif\">" + escape(spec.title) + "</text>\n";

  // Gridlines and ticks.
  std::vector<double> yticks;
  if (spec.log_y) {
    for (double d = std::log10(y_lo); d <= std::log10(y_hi) + 1e-9; d += 1.0)
      yticks.push_back(std::pow(10.0, d));
  } else {
    yticks = linear_ticks(y_lo, y_hi);
  }
  for (const double t : yticks) {
    const double y = sy(t);
    svg += "<line x1=\"" + fmt(px0) + "\" y1=\"" + fmt(y) + "\" x2=\"" + fmt(px1) + "\" y2=\"" +
           fmt(y) + "\" stroke=\"#dddddd\"/>\n";
    svg += "<text x=\"" + fmt(px0 - 6) + "\" y=\"" + fmt(y + 4) +
           "\" font-size=\"11\" text-anchor=\"end\" font-family=\"sans-serif\">" + fmt(t) +
           "</text>\n";
  }
  for (const double t : linear_ticks(x_lo, x_hi)) {
    const double x = sx(t);
    svg += "<line x1=\"" + fmt(x) + "\" y1=\"" + fmt(py0) + "\" x2=\"" + fmt(x) + "\" y2=\"" +
           fmt(py1) + "\" stroke=\"#eeeeee\"/>\n";
    svg += "<text x=\"" + fmt(x) + "\" y=\"" + fmt(py0 + 16) +
           "\" font-size=\"11\" text-anchor=\"middle\" font-family=\"sans-serif\">" + fmt(t) +
           "</text>\n";
  }
  svg += "<rect x=\"" + fmt(px0) + "\" y=\"" + fmt(py1) + "\" width=\"" + fmt(px1 - px0) +
         "\" height=\"" + fmt(py0 - py1) + "\" fill=\"none\" stroke=\"#444444\"/>\n";
  svg += "<text x=\"" + fmt((px0 + px1) / 2) + "\" y=\"" + fmt(kHeight - 14) +
         "\" font-size=\"13\" text-anchor=\"middle\" font-family=\"sans-serif\">" +
         escape(spec.x_label) + "</text>\n";
  svg += "<text x=\"18\" y=\"" + fmt((py0 + py1) / 2) +
         "\" font-size=\"13\" text-anchor=\"middle\" font-family=\"sans-serif\" transform=\"rotate(-90 18 " +
         fmt((py0 + py1) / 2) + ")\">" + escape(spec.y_label) + "</text>\n";

  for (std::size_t i = 0; i < series.size(); ++i) {
    const char* color = kColors[i % (sizeof kColors / sizeof kColors[0])];
    std::string pts;
    for (const auto& [x, y] : series[i].points) {
      pts += fmt(sx(x)) + "," + fmt(sy(y)) + " ";
      svg += "<circle cx=\"" + fmt(sx(x)) + "\" cy=\"" + fmt(sy(y)) + "\" r=\"3\" fill=\"" +
             color + "\"/>\n";
    }
    svg += "<polyline points=\"" + pts + "\" fill=\"none\" stroke=\"" + color +
           "\" stroke-width=\"1.6\"/>\n";
    const double ly = py1 + 14 + 16 * static_cast<double>(i);
    svg += "<line x1=\"" + fmt(px1 - 130) + "\" y1=\"" + fmt(ly - 4) + "\" x2=\"" +
           fmt(px1 - 106) + "\" y2=\"" + fmt(ly - 4) + "\" stroke=\"" + color +
           "\" stroke-width=\"2\"/>\n";
    svg += "<text x=\"" + fmt(px1 - 100) + "\" y=\"" + fmt(ly) +
           "\" font-size=\"11\" font-family=\"sans-serif\">" + escape(series[i].label) +
           "</text>\n";
  }
  svg += "</svg>\n";
  return svg;
}

}  // namespace uracf
