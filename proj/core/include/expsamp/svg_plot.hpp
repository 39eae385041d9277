#pragma once

#include <string>
#include <vector>

namespace expsamp {

struct Curve {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
};

struct PlotStyle {
  int width = 800;
  int height = 500;
  int margin = 50;
  int ticks = 6;
  std::string title;
};

/// Static SVG with linear axes, one polyline per curve and a legend.
/// Non-finite points are skipped. Output depends only on the inputs.
[[nodiscard]] std::string render_svg(const std::vector<Curve>& curves, const PlotStyle& style = {});

} // namespace expsamp
