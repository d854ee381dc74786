#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace blendnet::report {

// Minimal hand-rolled SVG plots for the CLI artifacts. Output is fully
// deterministic: fixed canvas, fixed-precision coordinates, no timestamps.

struct LinePlot {
  std::string title;
  std::string x_label;
  std::string y_label;
  std::vector<double> x;
  std::vector<double> y;
  // Horizontal rule (the decision criterion); drawn when has_rule is true.
  bool has_rule = false;
  double rule_y = 0.0;
};

// Polyline through the points plus one <circle class="pt"> per point and,
// when requested, one <line class="rule"> at rule_y.
std::string line_plot_svg(const LinePlot& plot);

struct StripPlot {
  std::string title;
  std::string x_label;
  std::vector<double> values;
};

// One-dimensional scatter of values with a deterministic vertical jitter,
// for attribution distributions.
std::string strip_plot_svg(const StripPlot& plot);

}  // namespace blendnet::report
