#pragma once

// Planar wound-frame geometry: tissue surfaces, desired bite points and the
// circle / half-line / arc primitives used by the needle model.
//
// Frame: origin on the wound centerline at tissue-edge height, +y up, +x
// toward the exit side. All lengths are millimetres, angles radians.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <stdexcept>
#include <string>

namespace suture {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Tolerance for on-circle / on-line membership, in mm.
inline constexpr double kGeomTol = 1e-9;
/// Discriminant threshold below which a circle/line contact is a tangency.
inline constexpr double kTangencyTol = 1e-12;

class GeometryError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct Point {
  double x = 0.0;
  double y = 0.0;

  friend constexpr Point operator+(Point a, Point b) { return {a.x + b.x, a.y + b.y}; }
  friend constexpr Point operator-(Point a, Point b) { return {a.x - b.x, a.y - b.y}; }
  friend constexpr Point operator-(Point a) { return {-a.x, -a.y}; }
  friend constexpr Point operator*(double k, Point a) { return {k * a.x, k * a.y}; }
  friend constexpr Point operator*(Point a, double k) { return {k * a.x, k * a.y}; }
  friend constexpr bool operator==(Point, Point) = default;
};

constexpr double dot(Point a, Point b) { return a.x * b.x + a.y * b.y; }
constexpr double cross(Point a, Point b) { return a.x * b.y - a.y * b.x; }
inline double norm(Point a) { return std::hypot(a.x, a.y); }
inline double distance(Point a, Point b) { return norm(a - b); }
/// Counter-clockwise perpendicular.
constexpr Point perp(Point a) { return {-a.y, a.x}; }

/// Unsigned angle between two non-zero vectors, in [0, pi].
inline double angle_between(Point a, Point b) {
  return std::atan2(std::abs(cross(a, b)), dot(a, b));
}

/// Wraps an angle into [0, 2pi).
inline double wrap_two_pi(double a) {
  double w = std::fmod(a, kTwoPi);
  if (w < 0.0) w += kTwoPi;
  if (w >= kTwoPi) w = 0.0;
  return w;
}

/// Wraps an angle into (-pi, pi].
inline double wrap_pi(double a) {
  double w = wrap_two_pi(a);
  return w > kPi ? w - kTwoPi : w;
}

enum class SlopeConvention {
  DescendingAway,  // "tent": surfaces fall away from the wound
  AscendingAway,   // "valley": surfaces rise away from the wound
};

inline std::string to_string(SlopeConvention s) {
  return s == SlopeConvention::DescendingAway ? "descending-away" : "ascending-away";
}

inline SlopeConvention parse_slope_convention(const std::string& s) {
  if (s == "descending-away") return SlopeConvention::DescendingAway;
  if (s == "ascending-away") return SlopeConvention::AscendingAway;
  throw GeometryError("slope_convention must be 'descending-away' or 'ascending-away', got '" + s + "'");
}

/// Symmetric wound cross-section.
struct TissueGeometry {
  double gamma = kPi;          // opening angle between the surfaces; pi is flat
  double wound_width = 0.0;    // gap between the tissue edges
  double bite_distance = 0.0;  // distance between desired entry and exit points
  SlopeConvention slope = SlopeConvention::DescendingAway;

  void validate() const {
    if (!std::isfinite(gamma) || !(gamma > 0.0) || gamma > kPi)
      throw GeometryError("tissue.gamma must satisfy 0 < gamma <= pi");
    if (!std::isfinite(wound_width) || wound_width < 0.0)
      throw GeometryError("tissue.wound_width must be >= 0");
    if (!std::isfinite(bite_distance) || !(bite_distance > wound_width))
      throw GeometryError("tissue.bite_distance must exceed tissue.wound_width");
  }

  /// Surface angle below (descending) or above (ascending) the horizontal.
  double surface_angle() const { return (kPi - gamma) / 2.0; }
};

/// Ray with unit direction; parameter t >= 0 is arc length from the origin.
struct HalfLine {
  Point origin;
  Point direction;

  Point at(double t) const { return origin + t * direction; }
};

struct WoundFrame {
  Point left_edge;
  Point right_edge;
  HalfLine left_surface;   // direction points away from the wound
  HalfLine right_surface;  // direction points away from the wound
  Point desired_entry;
  Point desired_exit;
  double centerline_x = 0.0;
  double surface_slope = 0.0;  // signed dy/dx magnitude along the right surface
  TissueGeometry tissue;

  /// Height of the tissue boundary above x. Flat y = 0 across the gap.
  double boundary_height(double x) const {
    const double half = right_edge.x;
    const double ax = std::abs(x - centerline_x);
    if (ax <= half) return 0.0;
    return (ax - half) * surface_slope;
  }
};

inline WoundFrame build_wound_frame(const TissueGeometry& tissue) {
  tissue.validate();
  const double alpha = tissue.surface_angle();
  const double c = std::cos(alpha);
  const double s = tissue.slope == SlopeConvention::DescendingAway ? -std::sin(alpha) : std::sin(alpha);
  const double half_gap = tissue.wound_width / 2.0;

  // Symmetric placement: 2 * (w/2 + t cos(alpha)) = l_io.
  const double t = (tissue.bite_distance / 2.0 - half_gap) / c;
  if (!(t > 0.0) || !std::isfinite(t))
    throw GeometryError("desired entry/exit points have no solution on the tissue surfaces");

  WoundFrame f;
  f.tissue = tissue;
  f.left_edge = {-half_gap, 0.0};
  f.right_edge = {half_gap, 0.0};
  f.left_surface = {f.left_edge, {-c, s}};
  f.right_surface = {f.right_edge, {c, s}};
  f.desired_entry = f.left_surface.at(t);
  f.desired_exit = f.right_surface.at(t);
  f.surface_slope = s / c;
  return f;
}

struct Circle {
  Point center;
  double radius = 1.0;

  Circle() = default;
  Circle(Point c, double r) : center(c), radius(r) {
    if (!(r > 0.0) || !std::isfinite(r)) throw GeometryError("circle radius must be > 0");
  }

  Point at_angle(double theta) const {
    return {center.x + radius * std::cos(theta), center.y + radius * std::sin(theta)};
  }
  double angle_of(Point p) const { return std::atan2(p.y - center.y, p.x - center.x); }
  bool contains(Point p, double tol = kGeomTol) const {
    return std::abs(distance(p, center) - radius) <= tol;
  }
};

/// Zero, one or two points, sorted by half-line parameter.
struct Intersections {
  std::array<Point, 2> points{};
  std::array<double, 2> params{};
  std::size_t count = 0;
  bool tangent = false;

  std::size_t size() const { return count; }
  bool empty() const { return count == 0; }
  const Point& operator[](std::size_t i) const { return points[i]; }
  const Point* begin() const { return points.data(); }
  const Point* end() const { return points.data() + count; }
};

inline Intersections circle_halfline_intersections(const Circle& circle, const HalfLine& ray) {
  Intersections out;
  const Point oc = ray.origin - circle.center;
  const double b = dot(ray.direction, oc);
  const double c = dot(oc, oc) - circle.radius * circle.radius;
  const double disc = b * b - c;

  auto push = [&](double t) {
    if (t < -kGeomTol) return;
    t = std::max(t, 0.0);
    out.points[out.count] = ray.at(t);
    out.params[out.count] = t;
    ++out.count;
  };

  if (std::abs(disc) < kTangencyTol) {
    out.tangent = true;
    push(-b);
    if (out.count == 0) out.tangent = false;
    return out;
  }
  if (disc < 0.0) return out;

  const double root = std::sqrt(disc);
  push(-b - root);
  push(-b + root);
  return out;
}

enum class Rotation { Clockwise, CounterClockwise };

enum class ArcSide { BelowSurface };

/// Circular arc swept from start_angle in the given direction.
struct ArcSegment {
  Circle circle;
  double start_angle = 0.0;
  double end_angle = 0.0;
  Rotation direction = Rotation::CounterClockwise;

  double sign() const { return direction == Rotation::CounterClockwise ? 1.0 : -1.0; }

  double swept_angle() const {
    const double ccw = wrap_two_pi(end_angle - start_angle);
    return direction == Rotation::CounterClockwise ? ccw : kTwoPi - ccw;
  }

  double length() const { return circle.radius * swept_angle(); }

  /// Point after rotating `phi` radians from the start along the arc.
  Point point_after(double phi) const { return circle.at_angle(start_angle + sign() * phi); }

  Point midpoint() const { return point_after(swept_angle() / 2.0); }

  /// Unit tangent in the direction of travel at rotation `phi`.
  Point tangent_after(double phi) const {
    const double theta = start_angle + sign() * phi;
    const Point radial{std::cos(theta), std::sin(theta)};
    return direction == Rotation::CounterClockwise ? perp(radial) : -perp(radial);
  }

  /// True when p's angular position lies within the arc, endpoints excluded
  /// by at least `angular_tol`.
  bool contains_interior_angle(double theta, double angular_tol) const {
    const double rel = direction == Rotation::CounterClockwise ? wrap_two_pi(theta - start_angle)
                                                              : wrap_two_pi(start_angle - theta);
    return rel > angular_tol && rel < swept_angle() - angular_tol;
  }
};

/// The arc from p_a to p_b that passes through the circle's lowest point.
inline ArcSegment arc_between(const Circle& circle, Point p_a, Point p_b,
                              ArcSide /*side*/ = ArcSide::BelowSurface) {
  if (!circle.contains(p_a) || !circle.contains(p_b))
    throw GeometryError("arc endpoints must lie on the circle");
  if (distance(p_a, p_b) <= kGeomTol) throw GeometryError("arc endpoints must be distinct");

  const double a = circle.angle_of(p_a);
  const double b = circle.angle_of(p_b);
  const double ccw = wrap_two_pi(b - a);
  const double lowest = -kPi / 2.0;
  const bool through_lowest_ccw = wrap_two_pi(lowest - a) <= ccw;
  return {circle, a, b, through_lowest_ccw ? Rotation::CounterClockwise : Rotation::Clockwise};
}

}  // namespace suture
