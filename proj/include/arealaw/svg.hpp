#pragma once

#include <string>
#include <vector>

namespace arealaw {

struct PlotSeries {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
  bool markers = false;
  bool dashed = false;
};

struct LinePlot {
  std::string title;
  std::string x_label;
  std::string y_label;
  bool log_x = false;
  bool log_y = false;
  std::vector<PlotSeries> series;
};

/// Standalone SVG document. Points that are not finite, or not positive on a log axis, are dropped.
std::string render_svg(const LinePlot& plot);

}  // namespace arealaw
