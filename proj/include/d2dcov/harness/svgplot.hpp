#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace d2dcov {

/// One line series of an x/y chart. Points with non-finite y are skipped.
struct PlotSeries {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
  bool markers = false;  // draw circles at the data points
  bool dashed = false;
  int color = -1;  // palette index; -1 follows the series position
};

struct PlotSpec {
  std::string title;
  std::string x_label;
  std::string y_label;
  std::vector<PlotSeries> series;
};

/// Render a deterministic static SVG line chart. The CSV outputs are the
/// contract; this is a convenience view of the same data.
void write_svg_plot(const std::filesystem::path& path, const PlotSpec& spec);

}  // namespace d2dcov
