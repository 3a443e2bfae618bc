#pragma once

// Kinematic viability of a candidate needle: it must pierce each tissue
// surface exactly once, stay under the tissue between the pierces, reach a
// positive depth and leave enough free needle at both ends for the
// instrument hand-off.

#include <cmath>
#include <optional>

#include "suture/geometry.hpp"
#include "suture/metrics.hpp"

namespace suture {

struct GraspPolicy {
  double min_margin = kPi / 18.0;  // free arc required beyond entry and exit

  void validate() const {
    if (!std::isfinite(min_margin) || min_margin < 0.0) throw GeometryError("grasp.min_margin must be >= 0");
  }
};

struct FeasibilityReport {
  bool bilateral_crossing = false;
  bool single_pierce_per_side = false;
  bool submerged = false;
  bool grasp_margin_ok = false;
  bool depth_positive = false;
  bool overall = false;
  double embedded_arc_angle = 0.0;
  double margin_each_end = 0.0;

  friend bool operator==(const FeasibilityReport&, const FeasibilityReport&) = default;
};

struct GraspCheck {
  bool ok = false;
  double margin_each_end = 0.0;
};

/// Absolute slack on the arc-length comparison, absorbs atan2 rounding.
inline constexpr double kGraspAngleTol = 1e-12;

inline GraspCheck grasp_margin_check(const NeedleVariables& needle, double embedded_arc_angle,
                                     const GraspPolicy& policy) {
  const double needle_arc = shape_arc_angle(needle.an);
  return {needle_arc + kGraspAngleTol >= embedded_arc_angle + 2.0 * policy.min_margin,
          (needle_arc - embedded_arc_angle) / 2.0};
}

/// Arc-length spacing for the submersion scan.
inline constexpr double kSubmersionStep = 0.1;

namespace detail {

inline bool arc_submerged(const ArcSegment& arc, const WoundFrame& frame) {
  // Circle against the wound-gap segment (y = 0, |x| <= w/2): no contact may
  // fall inside the arc.
  const Circle& c = arc.circle;
  const double half_gap = frame.right_edge.x;
  const double h2 = c.radius * c.radius - c.center.y * c.center.y;
  if (h2 >= 0.0) {
    const double h = std::sqrt(h2);
    const double angular_tol = kGeomTol / c.radius;
    for (double x : {c.center.x - h, c.center.x + h}) {
      if (std::abs(x - frame.centerline_x) > half_gap) continue;
      if (arc.contains_interior_angle(c.angle_of({x, 0.0}), angular_tol)) return false;
    }
  }

  const double swept = arc.swept_angle();
  const auto steps = static_cast<long>(std::ceil(arc.length() / kSubmersionStep));
  const long n = steps < 2 ? 2 : steps;
  for (long k = 1; k < n; ++k) {
    const Point p = arc.point_after(swept * static_cast<double>(k) / static_cast<double>(n));
    if (!(p.y < frame.boundary_height(p.x))) return false;
  }
  return true;
}

}  // namespace detail

/// Feasibility report plus the parameters computed on the way, so callers
/// scoring many candidates do not redo the geometry.
struct Evaluation {
  FeasibilityReport report;
  std::optional<SutureParameters> parameters;
};

inline Evaluation evaluate_candidate(const NeedleVariables& needle, const WoundFrame& frame,
                                     const GraspPolicy& policy) {
  Evaluation ev;
  FeasibilityReport& r = ev.report;
  const Circle circle = needle.circle();
  const Intersections left = circle_halfline_intersections(circle, frame.left_surface);
  const Intersections right = circle_halfline_intersections(circle, frame.right_surface);

  r.bilateral_crossing = !left.empty() && !right.empty();
  r.single_pierce_per_side = left.count == 1 && right.count == 1 && !left.tangent && !right.tangent &&
                             distance(left[0], right[0]) > kGeomTol;
  if (!r.single_pierce_per_side) return ev;

  const EntryExit points{left[0], right[0]};
  ev.parameters = suture_parameters_for(needle, frame, points);
  if (!ev.parameters) {
    r.single_pierce_per_side = false;
    return ev;
  }

  const ArcSegment arc = arc_between(circle, points.entry, points.exit);
  r.embedded_arc_angle = arc.swept_angle();
  r.submerged = detail::arc_submerged(arc, frame);
  r.depth_positive = ev.parameters->d_h > 0.0;
  const GraspCheck grasp = grasp_margin_check(needle, r.embedded_arc_angle, policy);
  r.grasp_margin_ok = grasp.ok;
  r.margin_each_end = grasp.margin_each_end;
  r.overall = r.bilateral_crossing && r.single_pierce_per_side && r.submerged && r.grasp_margin_ok &&
              r.depth_positive;
  return ev;
}

inline FeasibilityReport check_feasibility(const NeedleVariables& needle, const WoundFrame& frame,
                                           const GraspPolicy& policy) {
  return evaluate_candidate(needle, frame, policy).report;
}

}  // namespace suture
