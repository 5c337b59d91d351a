#include "d2dcov/harness/svgplot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <stdexcept>

namespace d2dcov {

namespace {

constexpr double kWidth = 760.0;
constexpr double kHeight = 520.0;
constexpr double kLeft = 72.0;
constexpr double kRight = 736.0;
constexpr double kTop = 44.0;
constexpr double kBottom = 464.0;

const char* const kPalette[] = {"#1f77b4", "#d62728", "#2ca02c",
                                "#9467bd", "#ff7f0e", "#8c564b"};
constexpr std::size_t kPaletteSize = sizeof(kPalette) / sizeof(kPalette[0]);

std::string fmt(double v, const char* spec = "%.2f") {
  char buf[48];
  std::snprintf(buf, sizeof buf, spec, v);
  return buf;
}

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      default: out += c;
    }
  }
  return out;
}

struct Range {
  double lo = 0.0;
  double hi = 1.0;
};

Range data_range(const PlotSpec& spec, bool y_axis) {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (const PlotSeries& s : spec.series) {
    const std::size_t n = std::min(s.x.size(), s.y.size());
    for (std::size_t i = 0; i < n; ++i) {
      if (!std::isfinite(s.y[i]) || !std::isfinite(s.x[i])) continue;
      const double v = y_axis ? s.y[i] : s.x[i];
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
  }
  if (!(lo <= hi)) return {0.0, 1.0};
  if (lo == hi) {
    const double pad = std::max(1.0, std::fabs(lo) * 0.1);
    return {lo - pad, hi + pad};
  }
  const double pad = 0.04 * (hi - lo);
  return {lo - pad, hi + pad};
}

double nice_step(double range) {
  const double raw = range / 5.0;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  const double norm = raw / mag;
  double step;
  if (norm <= 1.0) step = 1.0;
  else if (norm <= 2.0) step = 2.0;
  else if (norm <= 2.5) step = 2.5;
  else if (norm <= 5.0) step = 5.0;
  else step = 10.0;
  return step * mag;
}

std::vector<double> ticks(const Range& r) {
  const double step = nice_step(r.hi - r.lo);
  std::vector<double> out;
  double t = std::ceil(r.lo / step) * step;
  for (; t <= r.hi + 1e-9 * step; t += step) {
    out.push_back(std::fabs(t) < 1e-12 * step ? 0.0 : t);
  }
  return out;
}

}  // namespace

void write_svg_plot(const std::filesystem::path& path, const PlotSpec& spec) {
  const Range xr = data_range(spec, false);
  const Range yr = data_range(spec, true);
  const auto sx = [&xr](double x) {
    return kLeft + (x - xr.lo) / (xr.hi - xr.lo) * (kRight - kLeft);
  };
  const auto sy = [&yr](double y) {
    return kBottom - (y - yr.lo) / (yr.hi - yr.lo) * (kBottom - kTop);
  };

  std::string svg;
  svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + fmt(kWidth, "%.0f") +
         "\" height=\"" + fmt(kHeight, "%.0f") + "\" viewBox=\"0 0 " +
         fmt(kWidth, "%.0f") + " " + fmt(kHeight, "%.0f") + "\">\n";
  svg += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  svg += "<text x=\"" + fmt((kLeft + kRight) / 2) + "\" y=\"26\" font-family=\"sans-serif\" "
         "font-size=\"16\" text-anchor=\"middle\">" + escape(spec.title) + "</text>\n";

  // Gridlines and tick labels.
  for (double t : ticks(xr)) {
    const double x = sx(t);
    svg += "<line x1=\"" + fmt(x) + "\" y1=\"" + fmt(kTop) + "\" x2=\"" + fmt(x) +
           "\" y2=\"" + fmt(kBottom) + "\" stroke=\"#dddddd\" stroke-width=\"1\"/>\n";
    svg += "<text x=\"" + fmt(x) + "\" y=\"" + fmt(kBottom + 18) +
           "\" font-family=\"sans-serif\" font-size=\"12\" text-anchor=\"middle\">" +
           fmt(t, "%g") + "</text>\n";
  }
  for (double t : ticks(yr)) {
    const double y = sy(t);
    svg += "<line x1=\"" + fmt(kLeft) + "\" y1=\"" + fmt(y) + "\" x2=\"" + fmt(kRight) +
           "\" y2=\"" + fmt(y) + "\" stroke=\"#dddddd\" stroke-width=\"1\"/>\n";
    svg += "<text x=\"" + fmt(kLeft - 8) + "\" y=\"" + fmt(y + 4) +
           "\" font-family=\"sans-serif\" font-size=\"12\" text-anchor=\"end\">" +
           fmt(t, "%g") + "</text>\n";
  }
  svg += "<rect x=\"" + fmt(kLeft) + "\" y=\"" + fmt(kTop) + "\" width=\"" +
         fmt(kRight - kLeft) + "\" height=\"" + fmt(kBottom - kTop) +
         "\" fill=\"none\" stroke=\"#333333\" stroke-width=\"1\"/>\n";

  // Axis labels.
  svg += "<text x=\"" + fmt((kLeft + kRight) / 2) + "\" y=\"" + fmt(kHeight - 12) +
         "\" font-family=\"sans-serif\" font-size=\"13\" text-anchor=\"middle\">" +
         escape(spec.x_label) + "</text>\n";
  svg += "<text x=\"18\" y=\"" + fmt((kTop + kBottom) / 2) +
         "\" font-family=\"sans-serif\" font-size=\"13\" text-anchor=\"middle\" "
         "transform=\"rotate(-90 18 " + fmt((kTop + kBottom) / 2) + ")\">" +
         escape(spec.y_label) + "</text>\n";

  const auto series_color = [](const PlotSeries& series, std::size_t position) {
    const std::size_t idx =
        series.color >= 0 ? static_cast<std::size_t>(series.color) : position;
    return kPalette[idx % kPaletteSize];
  };

  // Series.
  for (std::size_t s = 0; s < spec.series.size(); ++s) {
    const PlotSeries& series = spec.series[s];
    const char* color = series_color(series, s);
    std::string points;
    const std::size_t n = std::min(series.x.size(), series.y.size());
    for (std::size_t i = 0; i < n; ++i) {
      if (!std::isfinite(series.y[i]) || !std::isfinite(series.x[i])) continue;
      if (!points.empty()) points += ' ';
      points += fmt(sx(series.x[i])) + "," + fmt(sy(series.y[i]));
    }
    if (points.empty()) continue;
    svg += "<polyline fill=\"none\" stroke=\"" + std::string(color) +
           "\" stroke-width=\"1.8\"" +
           (series.dashed ? " stroke-dasharray=\"6,4\"" : "") + " points=\"" +
           points + "\"/>\n";
    if (series.markers) {
      for (std::size_t i = 0; i < n; ++i) {
        if (!std::isfinite(series.y[i]) || !std::isfinite(series.x[i])) continue;
        svg += "<circle cx=\"" + fmt(sx(series.x[i])) + "\" cy=\"" +
               fmt(sy(series.y[i])) + "\" r=\"3.2\" fill=\"" + color + "\"/>\n";
      }
    }
  }

  // Legend, top-right corner of the plot area.
  const double lx = kRight - 220.0;
  double ly = kTop + 14.0;
  for (std::size_t s = 0; s < spec.series.size(); ++s) {
    const PlotSeries& series = spec.series[s];
    const char* color = series_color(series, s);
    svg += "<line x1=\"" + fmt(lx) + "\" y1=\"" + fmt(ly - 4) + "\" x2=\"" +
           fmt(lx + 26) + "\" y2=\"" + fmt(ly - 4) + "\" stroke=\"" + color +
           "\" stroke-width=\"1.8\"" +
           (series.dashed ? " stroke-dasharray=\"6,4\"" : "") + "/>\n";
    if (series.markers)
      svg += "<circle cx=\"" + fmt(lx + 13) + "\" cy=\"" + fmt(ly - 4) +
             "\" r=\"3.2\" fill=\"" + color + "\"/>\n";
    svg += "<text x=\"" + fmt(lx + 32) + "\" y=\"" + fmt(ly) +
           "\" font-family=\"sans-serif\" font-size=\"12\">" +
           escape(series.label) + "</text>\n";
    ly += 18.0;
  }
  svg += "</svg>\n";

  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << svg;
  if (!out) throw std::runtime_error("failed writing " + path.string());
}

}  // namespace d2dcov
