#pragma once

#include <array>
#include <string>
#include <vector>

namespace codesign::svg {

struct Series {
  std::string label;
  std::vector<std::array<double, 2>> points;
  std::string color = "#1f77b4";
  /// Polyline through the points instead of markers.
  bool line = false;
};

struct PlotOptions {
  std::string title;
  std::string x_label;
  std::string y_label;
  int width = 640;
  int height = 480;
};

/// Standalone SVG document with axes, ticks, a legend and one entry per series.
/// Nonfinite points are skipped.
std::string render_plot(const std::vector<Series>& series, const PlotOptions& options);

}  // namespace codesign::svg
