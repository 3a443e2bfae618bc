#pragma once

// The six suture parameters of a fixed-center needle path, evaluated from
// the four needle variables in a wound frame.

#include <array>
#include <cmath>
#include <optional>
#include <string>
#include <string_view>

#include "suture/geometry.hpp"

namespace suture {

/// Needle arc length as a fraction of a full circle.
enum class NeedleShape { Quarter, ThreeEighths, Half, FiveEighths };

inline constexpr std::array<NeedleShape, 4> kAllShapes{NeedleShape::Quarter, NeedleShape::ThreeEighths,
                                                       NeedleShape::Half, NeedleShape::FiveEighths};

constexpr double shape_fraction(NeedleShape s) {
  switch (s) {
    case NeedleShape::Quarter: return 0.25;
    case NeedleShape::ThreeEighths: return 0.375;
    case NeedleShape::Half: return 0.5;
    case NeedleShape::FiveEighths: return 0.625;
  }
  return 0.0;
}

/// Total angle subtended by the needle body.
constexpr double shape_arc_angle(NeedleShape s) { return kTwoPi * shape_fraction(s); }

inline std::string to_string(NeedleShape s) {
  switch (s) {
    case NeedleShape::Quarter: return "1/4";
    case NeedleShape::ThreeEighths: return "3/8";
    case NeedleShape::Half: return "1/2";
    case NeedleShape::FiveEighths: return "5/8";
  }
  return "?";
}

inline NeedleShape parse_shape(std::string_view text) {
  for (NeedleShape s : kAllShapes)
    if (text == to_string(s)) return s;
  throw GeometryError("needle shape must be one of 1/4, 3/8, 1/2, 5/8, got '" + std::string(text) + "'");
}

/// Accepts a decimal fraction (0.5) as well as the "1/2" spelling.
inline NeedleShape shape_from_fraction(double fraction) {
  for (NeedleShape s : kAllShapes)
    if (std::abs(fraction - shape_fraction(s)) < 1e-12) return s;
  throw GeometryError("needle shape fraction must be one of 0.25, 0.375, 0.5, 0.625");
}

struct NeedleVariables {
  double s0 = 0.0;  // needle center x
  double l0 = 0.0;  // needle center y
  double dc = 1.0;  // needle diameter
  NeedleShape an = NeedleShape::Half;

  void validate() const {
    if (!std::isfinite(s0) || !std::isfinite(l0)) throw GeometryError("needle center must be finite");
    if (!(dc > 0.0) || !std::isfinite(dc)) throw GeometryError("needle diameter dc must be > 0");
  }

  Circle circle() const { return Circle({s0, l0}, dc / 2.0); }

  friend bool operator==(const NeedleVariables&, const NeedleVariables&) = default;
};

inline constexpr std::size_t kParameterCount = 6;

/// Canonical parameter order, matching the reporting table.
inline constexpr std::array<std::string_view, kParameterCount> kParameterNames{
    "beta_in", "e_in", "d_h", "s_n", "beta_out", "e_out"};

/// True for the angular components (radians); the rest are millimetres.
inline constexpr std::array<bool, kParameterCount> kIsAngle{true, false, false, false, true, false};

struct SutureParameters {
  double beta_in = 0.0;
  double e_in = 0.0;
  double d_h = 0.0;
  double s_n = 0.0;
  double beta_out = 0.0;
  double e_out = 0.0;

  std::array<double, kParameterCount> to_array() const { return {beta_in, e_in, d_h, s_n, beta_out, e_out}; }

  static SutureParameters from_array(const std::array<double, kParameterCount>& v) {
    return {v[0], v[1], v[2], v[3], v[4], v[5]};
  }

  void validate(const char* what = "parameters") const {
    for (double v : to_array())
      if (!std::isfinite(v)) throw GeometryError(std::string(what) + " must be finite");
    if (!(beta_in > 0.0 && beta_in < kPi) || !(beta_out > 0.0 && beta_out < kPi))
      throw GeometryError(std::string(what) + ": beta_in/beta_out must lie in (0, pi)");
    if (e_in < 0.0 || e_out < 0.0 || s_n < 0.0)
      throw GeometryError(std::string(what) + ": e_in, e_out and s_n must be >= 0");
  }

  friend bool operator==(const SutureParameters&, const SutureParameters&) = default;
};

/// Target values. Perpendicular entry/exit, no offsets, half-bite depth.
struct DesiredParameters : SutureParameters {
  DesiredParameters() = default;
  explicit DesiredParameters(const TissueGeometry& tissue)
      : SutureParameters{kPi / 2.0, 0.0, tissue.bite_distance / 2.0, 0.0, kPi / 2.0, 0.0} {}
  explicit DesiredParameters(const SutureParameters& p) : SutureParameters(p) {}
};

struct EntryExit {
  Point entry;
  Point exit;
};

/// Single transversal pierce of each surface. Zero, two, or tangent
/// contacts on either side yield nullopt.
inline std::optional<EntryExit> entry_exit_points(const NeedleVariables& needle, const WoundFrame& frame) {
  const Circle circle = needle.circle();
  const Intersections left = circle_halfline_intersections(circle, frame.left_surface);
  const Intersections right = circle_halfline_intersections(circle, frame.right_surface);
  if (left.count != 1 || right.count != 1 || left.tangent || right.tangent) return std::nullopt;
  return EntryExit{left[0], right[0]};
}

struct EntryExitAngles {
  double beta_in = 0.0;
  double beta_out = 0.0;
};

namespace detail {

inline std::optional<EntryExitAngles> try_entry_exit_angles(const ArcSegment& arc, const WoundFrame& frame) {
  // Into-tissue tangent at entry against the surface heading toward the
  // wound; mirrored at the exit.
  const Point t_in = arc.tangent_after(0.0);
  const Point t_out = arc.tangent_after(arc.swept_angle());
  const double b_in = angle_between(t_in, -frame.left_surface.direction);
  const double b_out = angle_between(-t_out, -frame.right_surface.direction);
  constexpr double eps = 1e-12;
  if (!(b_in > eps && b_in < kPi - eps && b_out > eps && b_out < kPi - eps)) return std::nullopt;
  return EntryExitAngles{b_in, b_out};
}

}  // namespace detail

/// Entry/exit angles in (0, pi); pi/2 is a perpendicular pierce.
inline EntryExitAngles entry_exit_angles(const NeedleVariables& needle, const WoundFrame& frame, Point entry,
                                         Point exit) {
  const ArcSegment arc = arc_between(needle.circle(), entry, exit);
  auto angles = detail::try_entry_exit_angles(arc, frame);
  if (!angles) throw GeometryError("needle is tangent to the tissue surface at entry or exit");
  return *angles;
}

/// Distance from the entry-exit chord to the deepest point of the arc.
inline double needle_depth(const ArcSegment& arc, Point entry, Point exit) {
  const double chord = distance(entry, exit);
  if (chord <= kGeomTol) throw GeometryError("needle depth needs distinct entry and exit points");
  const Point u = (1.0 / chord) * (exit - entry);
  Point n = perp(u);
  if (dot(n, arc.midpoint() - entry) < 0.0) n = -n;
  return arc.circle.radius + dot(n, arc.circle.center - entry);
}

inline double wound_symmetry(const NeedleVariables& needle, const WoundFrame& frame) {
  return std::abs(needle.s0 - frame.centerline_x);
}

/// Parameters from an already-resolved crossing; nullopt on degenerate input.
inline std::optional<SutureParameters> suture_parameters_for(const NeedleVariables& needle, const WoundFrame& frame,
                                                            const EntryExit& points) {
  if (distance(points.entry, points.exit) <= kGeomTol) return std::nullopt;
  const ArcSegment arc = arc_between(needle.circle(), points.entry, points.exit);
  const auto angles = detail::try_entry_exit_angles(arc, frame);
  if (!angles) return std::nullopt;

  SutureParameters p;
  p.beta_in = angles->beta_in;
  p.beta_out = angles->beta_out;
  p.e_in = distance(points.entry, frame.desired_entry);
  p.e_out = distance(points.exit, frame.desired_exit);
  p.d_h = needle_depth(arc, points.entry, points.exit);
  p.s_n = wound_symmetry(needle, frame);
  return p;
}

/// All six parameters, or nullopt when the needle does not cross the wound
/// with one pierce per side. Independent of the needle shape.
inline std::optional<SutureParameters> compute_suture_parameters(const NeedleVariables& needle,
                                                                 const WoundFrame& frame) {
  const auto points = entry_exit_points(needle, frame);
  if (!points) return std::nullopt;
  return suture_parameters_for(needle, frame, *points);
}

}  // namespace suture
