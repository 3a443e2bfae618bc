#pragma once

// Static SVG diagram of a plan: tissue surfaces, wound gap, desired and
// achieved bite points, the needle circle and the embedded arc.

#include <algorithm>
#include <cmath>
#include <string>

#include "suture/io/report.hpp"
#include "suture/metrics.hpp"
#include "suture/optimizer.hpp"

namespace suture::io {

/// Pixels per millimetre.
inline constexpr double kSvgScale = 12.0;
inline constexpr double kSvgPadding = 4.0;  // mm around the drawing
inline constexpr double kSvgLegendHeight = 96.0;  // px

namespace detail {

class SvgCanvas {
 public:
  SvgCanvas(double x_min, double y_max) : x_min_(x_min), y_max_(y_max) {}

  std::string x(double mm) const { return format_fixed((mm - x_min_) * kSvgScale, 4); }
  std::string y(double mm) const { return format_fixed((y_max_ - mm) * kSvgScale, 4); }
  std::string len(double mm) const { return format_fixed(mm * kSvgScale, 4); }
  std::string point(Point p) const { return x(p.x) + "," + y(p.y); }

 private:
  double x_min_;
  double y_max_;
};

inline std::string marker(const SvgCanvas& c, const char* cls, Point p, const char* fill, const char* stroke) {
  return "  <circle class=\"" + std::string(cls) + "\" cx=\"" + c.x(p.x) + "\" cy=\"" + c.y(p.y) +
         "\" r=\"5.0000\" fill=\"" + fill + "\" stroke=\"" + stroke + "\" stroke-width=\"2\"/>\n";
}

}  // namespace detail

inline std::string render_svg(const WoundFrame& frame, const Plan& plan) {
  const auto points = entry_exit_points(plan.needle, frame);
  if (!points || !plan.feasibility.overall) throw GeometryError("rendering requires a feasible plan");
  const Circle circle = plan.needle.circle();
  const ArcSegment arc = arc_between(circle, points->entry, points->exit);

  const double extent =
      std::max({std::abs(frame.desired_entry.x), std::abs(circle.center.x) + circle.radius, frame.right_edge.x}) +
      kSvgPadding;
  const double far_y = frame.boundary_height(extent);
  const double y_top = std::max({0.0, far_y, circle.center.y + circle.radius}) + kSvgPadding;
  const double y_bottom = std::min({0.0, far_y, circle.center.y - circle.radius}) - kSvgPadding;
  const detail::SvgCanvas c(-extent, y_top);

  const std::string width = format_fixed(2.0 * extent * kSvgScale, 4);
  const double drawing_height = (y_top - y_bottom) * kSvgScale;
  const std::string height = format_fixed(drawing_height + kSvgLegendHeight, 4);

  std::string s;
  s += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  s += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + width + "\" height=\"" + height +
       "\" viewBox=\"0 0 " + width + " " + height + "\" data-scale=\"" + format_fixed(kSvgScale, 4) + "\">\n";
  s += "  <rect class=\"background\" x=\"0\" y=\"0\" width=\"" + width + "\" height=\"" + height +
       "\" fill=\"#ffffff\"/>\n";

  const Point left_far{-extent, far_y};
  const Point right_far{extent, far_y};
  s += "  <polyline class=\"tissue-surface left\" points=\"" + c.point(left_far) + " " + c.point(frame.left_edge) +
       "\" fill=\"none\" stroke=\"#8b4513\" stroke-width=\"3\"/>\n";
  s += "  <polyline class=\"tissue-surface right\" points=\"" + c.point(frame.right_edge) + " " +
       c.point(right_far) + "\" fill=\"none\" stroke=\"#8b4513\" stroke-width=\"3\"/>\n";
  s += "  <line class=\"wound-gap\" x1=\"" + c.x(frame.left_edge.x) + "\" y1=\"" + c.y(0.0) + "\" x2=\"" +
       c.x(frame.right_edge.x) + "\" y2=\"" + c.y(0.0) +
       "\" stroke=\"#cc0000\" stroke-width=\"2\" stroke-dasharray=\"4 3\"/>\n";

  s += "  <circle class=\"needle-circle\" cx=\"" + c.x(circle.center.x) + "\" cy=\"" + c.y(circle.center.y) +
       "\" r=\"" + c.len(circle.radius) +
       "\" fill=\"none\" stroke=\"#777777\" stroke-width=\"1.5\" stroke-dasharray=\"6 4\"/>\n";

  // Screen y points down, so a counter-clockwise sweep in the wound frame is
  // the SVG positive-angle sweep.
  const int large = arc.swept_angle() > kPi ? 1 : 0;
  const int sweep = arc.direction == Rotation::CounterClockwise ? 1 : 0;
  s += "  <path class=\"embedded-arc\" d=\"M " + c.point(points->entry) + " A " + c.len(circle.radius) + " " +
       c.len(circle.radius) + " 0 " + std::to_string(large) + " " + std::to_string(sweep) + " " +
       c.point(points->exit) + "\" fill=\"none\" stroke=\"#1f5fbf\" stroke-width=\"3\"/>\n";

  s += "  <circle class=\"needle-center\" cx=\"" + c.x(circle.center.x) + "\" cy=\"" + c.y(circle.center.y) +
       "\" r=\"3.0000\" fill=\"#000000\"/>\n";
  s += detail::marker(c, "marker desired-entry", frame.desired_entry, "none", "#2e8b57");
  s += detail::marker(c, "marker desired-exit", frame.desired_exit, "none", "#2e8b57");
  s += detail::marker(c, "marker actual-entry", points->entry, "#1f5fbf", "#1f5fbf");
  s += detail::marker(c, "marker actual-exit", points->exit, "#1f5fbf", "#1f5fbf");

  const std::string ly = format_fixed(drawing_height, 4);
  auto legend_row = [&](int row, const std::string& swatch, const std::string& label) {
    const std::string yy = format_fixed(drawing_height + 16.0 + 18.0 * row, 4);
    return "    " + swatch + "\n    <text x=\"40\" y=\"" + yy +
           "\" font-family=\"sans-serif\" font-size=\"12\" dominant-baseline=\"middle\">" + label + "</text>\n";
  };
  auto row_y = [&](int row) { return format_fixed(drawing_height + 16.0 + 18.0 * row, 4); };
  s += "  <g class=\"legend\">\n";
  s += "    <line x1=\"0\" y1=\"" + ly + "\" x2=\"" + width + "\" y2=\"" + ly + "\" stroke=\"#dddddd\"/>\n";
  s += legend_row(0,
                  "<line x1=\"10\" y1=\"" + row_y(0) + "\" x2=\"30\" y2=\"" + row_y(0) +
                      "\" stroke=\"#8b4513\" stroke-width=\"3\"/>",
                  "tissue surface");
  s += legend_row(1,
                  "<line x1=\"10\" y1=\"" + row_y(1) + "\" x2=\"30\" y2=\"" + row_y(1) +
                      "\" stroke=\"#1f5fbf\" stroke-width=\"3\"/>",
                  "embedded needle arc (a_n " + to_string(plan.needle.an) + ", d_c " +
                      format_fixed(plan.needle.dc, 2) + " mm)");
  s += legend_row(2,
                  "<circle cx=\"20\" cy=\"" + row_y(2) + "\" r=\"5\" fill=\"none\" stroke=\"#2e8b57\" stroke-width=\"2\"/>",
                  "desired entry / exit");
  s += legend_row(3, "<circle cx=\"20\" cy=\"" + row_y(3) + "\" r=\"5\" fill=\"#1f5fbf\"/>",
                  "actual entry / exit");
  s += "  </g>\n";
  s += "</svg>\n";
  return s;
}

}  // namespace suture::io
