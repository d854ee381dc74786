#include "blendnet/report/svg.hpp"

#include <algorithm>
#include <cmath>

#include "blendnet/error.hpp"
#include "blendnet/hash.hpp"
#include "blendnet/text.hpp"

namespace blendnet::report {

namespace {

constexpr double kWidth = 640.0;
constexpr double kHeight = 420.0;
constexpr double kMarginLeft = 64.0;
constexpr double kMarginRight = 20.0;
constexpr double kMarginTop = 36.0;
constexpr double kMarginBottom = 48.0;

struct Range {
  double lo = 0.0;
  double hi = 1.0;
};

Range padded_range(const std::vector<double>& values, double extra) {
  Range r;
  r.lo = *std::min_element(values.begin(), values.end());
  r.hi = *std::max_element(values.begin(), values.end());
  r.lo = std::min(r.lo, extra);
  r.hi = std::max(r.hi, extra);
  if (r.hi - r.lo < 1e-12) {
    r.lo -= 0.5;
    r.hi += 0.5;
  }
  const double pad = 0.05 * (r.hi - r.lo);
  r.lo -= pad;
  r.hi += pad;
  return r;
}

double scale_x(double v, const Range& r) {
  return kMarginLeft + (v - r.lo) / (r.hi - r.lo) * (kWidth - kMarginLeft - kMarginRight);
}

double scale_y(double v, const Range& r) {
  return kHeight - kMarginBottom -
         (v - r.lo) / (r.hi - r.lo) * (kHeight - kMarginTop - kMarginBottom);
}

std::string coord(double v) { return format_fixed(v, 2); }

std::string escape_text(std::string_view s) {
  std::string out;
  out.reserve(s.size());
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

void open_canvas(std::string& svg, const std::string& title) {
  svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + coord(kWidth) + "\" height=\"" +
         coord(kHeight) + "\" viewBox=\"0 0 " + coord(kWidth) + " " + coord(kHeight) + "\">\n";
  svg += "  <style>text{font:12px sans-serif}.title{font:14px sans-serif}"
         ".axis{stroke:#333;stroke-width:1}.grid{stroke:#ddd;stroke-width:0.5}"
         ".series{fill:none;stroke:#1f6fb2;stroke-width:1.5}"
         ".pt{fill:#1f6fb2}.rule{stroke:#c0392b;stroke-width:1;stroke-dasharray:6 3}</style>\n";
  svg += "  <rect width=\"" + coord(kWidth) + "\" height=\"" + coord(kHeight) +
         "\" fill=\"white\"/>\n";
  svg += "  <text class=\"title\" x=\"" + coord(kWidth / 2) +
         "\" y=\"20\" text-anchor=\"middle\">" + escape_text(title) + "</text>\n";
}

void axes(std::string& svg, const Range& rx, const Range& ry, const std::string& x_label,
          const std::string& y_label) {
  const double x0 = kMarginLeft;
  const double x1 = kWidth - kMarginRight;
  const double y0 = kHeight - kMarginBottom;
  const double y1 = kMarginTop;
  svg += "  <line class=\"axis\" x1=\"" + coord(x0) + "\" y1=\"" + coord(y0) + "\" x2=\"" +
         coord(x1) + "\" y2=\"" + coord(y0) + "\"/>\n";
  svg += "  <line class=\"axis\" x1=\"" + coord(x0) + "\" y1=\"" + coord(y0) + "\" x2=\"" +
         coord(x0) + "\" y2=\"" + coord(y1) + "\"/>\n";

  for (int k = 0; k <= 4; ++k) {
    const double fx = rx.lo + (rx.hi - rx.lo) * k / 4.0;
    const double fy = ry.lo + (ry.hi - ry.lo) * k / 4.0;
    const double px = scale_x(fx, rx);
    const double py = scale_y(fy, ry);
    svg += "  <line class=\"grid\" x1=\"" + coord(px) + "\" y1=\"" + coord(y0) + "\" x2=\"" +
           coord(px) + "\" y2=\"" + coord(y1) + "\"/>\n";
    svg += "  <text x=\"" + coord(px) + "\" y=\"" + coord(y0 + 16) +
           "\" text-anchor=\"middle\">" + format_fixed(fx, 2) + "</text>\n";
    svg += "  <line class=\"grid\" x1=\"" + coord(x0) + "\" y1=\"" + coord(py) + "\" x2=\"" +
           coord(x1) + "\" y2=\"" + coord(py) + "\"/>\n";
    svg += "  <text x=\"" + coord(x0 - 6) + "\" y=\"" + coord(py + 4) +
           "\" text-anchor=\"end\">" + format_fixed(fy, 2) + "</text>\n";
  }
  svg += "  <text x=\"" + coord((x0 + x1) / 2) + "\" y=\"" + coord(kHeight - 10) +
         "\" text-anchor=\"middle\">" + escape_text(x_label) + "</text>\n";
  svg += "  <text x=\"16\" y=\"" + coord((y0 + y1) / 2) + "\" text-anchor=\"middle\" transform=\"rotate(-90 16 " +
         coord((y0 + y1) / 2) + ")\">" + escape_text(y_label) + "</text>\n";
}

}  // namespace

std::string line_plot_svg(const LinePlot& plot) {
  if (plot.x.empty() || plot.x.size() != plot.y.size()) {
    throw Error(Errc::LengthMismatch, "line plot needs matching non-empty x and y");
  }

  const Range rx = padded_range(plot.x, plot.x.front());
  const Range ry = padded_range(plot.y, plot.has_rule ? plot.rule_y : plot.y.front());

  std::string svg;
  open_canvas(svg, plot.title);
  axes(svg, rx, ry, plot.x_label, plot.y_label);

  if (plot.has_rule) {
    const double py = scale_y(plot.rule_y, ry);
    svg += "  <line class=\"rule\" x1=\"" + coord(kMarginLeft) + "\" y1=\"" + coord(py) +
           "\" x2=\"" + coord(kWidth - kMarginRight) + "\" y2=\"" + coord(py) + "\"/>\n";
  }

  svg += "  <polyline class=\"series\" points=\"";
  for (std::size_t i = 0; i < plot.x.size(); ++i) {
    if (i) svg += " ";
    svg += coord(scale_x(plot.x[i], rx)) + "," + coord(scale_y(plot.y[i], ry));
  }
  svg += "\"/>\n";

  for (std::size_t i = 0; i < plot.x.size(); ++i) {
    svg += "  <circle class=\"pt\" cx=\"" + coord(scale_x(plot.x[i], rx)) + "\" cy=\"" +
           coord(scale_y(plot.y[i], ry)) + "\" r=\"3\"/>\n";
  }
  svg += "</svg>\n";
  return svg;
}

std::string strip_plot_svg(const StripPlot& plot) {
  if (plot.values.empty()) {
    throw Error(Errc::Empty, "strip plot needs at least one value");
  }

  const Range rx = padded_range(plot.values, plot.values.front());
  const Range ry{0.0, 1.0};

  std::string svg;
  open_canvas(svg, plot.title);
  axes(svg, rx, ry, plot.x_label, "");

  for (std::size_t i = 0; i < plot.values.size(); ++i) {
    // A hash of the index spreads the points vertically the same way on
    // every run.
    const std::uint64_t h = Fnv1a64().add_u64(i).digest();
    const double jitter = 0.15 + 0.7 * static_cast<double>(h % 10000) / 10000.0;
    svg += "  <circle class=\"pt\" cx=\"" + coord(scale_x(plot.values[i], rx)) + "\" cy=\"" +
           coord(scale_y(jitter, ry)) + "\" r=\"3\" fill-opacity=\"0.6\"/>\n";
  }
  svg += "</svg>\n";
  return svg;
}

}  // namespace blendnet::report
