#pragma once

// Fixed-center motion: the needle turns about its own center, so the tip
// sweeps the needle circle from the entry point through the tissue and out
// past the exit point until the hand-off pose.

#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "suture/feasibility.hpp"
#include "suture/optimizer.hpp"

namespace suture {

enum class Phase { Approach, Embedded, Exited };

inline std::string to_string(Phase p) {
  switch (p) {
    case Phase::Approach: return "approach";
    case Phase::Embedded: return "embedded";
    case Phase::Exited: return "exited";
  }
  return "?";
}

struct Waypoint {
  Point tip_position;
  double tip_heading = 0.0;     // direction of travel, (-pi, pi]
  double rotation_angle = 0.0;  // rotated since tissue contact
  Phase phase = Phase::Embedded;
};

namespace detail {

struct ResolvedMotion {
  ArcSegment arc;
  FeasibilityReport report;
  Point entry;
};

inline ResolvedMotion resolve_motion(const Plan& plan, const WoundFrame& frame, const GraspPolicy& policy) {
  const Evaluation ev = evaluate_candidate(plan.needle, frame, policy);
  if (!ev.report.overall) throw GeometryError("trajectory requires a feasible plan");
  const auto points = entry_exit_points(plan.needle, frame);
  return {arc_between(plan.needle.circle(), points->entry, points->exit), ev.report, points->entry};
}

inline Waypoint make_waypoint(const ArcSegment& arc, Point start_offset, double rotation, double embedded) {
  const double signed_rot = arc.sign() * rotation;
  const double c = std::cos(signed_rot);
  const double s = std::sin(signed_rot);
  const Point offset{c * start_offset.x - s * start_offset.y, s * start_offset.x + c * start_offset.y};
  Waypoint w;
  w.tip_position = arc.circle.center + offset;
  const Point heading = arc.direction == Rotation::CounterClockwise ? perp(offset) : -perp(offset);
  w.tip_heading = std::atan2(heading.y, heading.x);
  w.rotation_angle = rotation;
  w.phase = rotation >= embedded ? Phase::Exited : Phase::Embedded;
  return w;
}

}  // namespace detail

/// Uniformly spaced tip poses from tissue contact to the hand-off pose.
/// Total rotation is the embedded arc plus the free margin at one end.
inline std::vector<Waypoint> fcm_trajectory(const Plan& plan, const WoundFrame& frame, const GraspPolicy& policy,
                                            std::size_t n_waypoints) {
  if (n_waypoints < 2) throw GeometryError("trajectory needs at least 2 waypoints");
  const auto motion = detail::resolve_motion(plan, frame, policy);
  const double embedded = motion.report.embedded_arc_angle;
  const double total = embedded + motion.report.margin_each_end;
  const Point start_offset = motion.entry - motion.arc.circle.center;

  std::vector<Waypoint> out;
  out.reserve(n_waypoints);
  for (std::size_t k = 0; k < n_waypoints; ++k) {
    const double rotation =
        k + 1 == n_waypoints ? total : total * static_cast<double>(k) / static_cast<double>(n_waypoints - 1);
    out.push_back(detail::make_waypoint(motion.arc, start_offset, rotation, embedded));
  }
  return out;
}

struct SwitchingPose {
  Waypoint pose;
  bool exit_contact_only = false;  // no free margin: tip sits on the exit point
};

/// Pose at which the second instrument takes the protruding tip.
inline SwitchingPose switching_pose(const Plan& plan, const WoundFrame& frame, const GraspPolicy& policy) {
  const auto traj = fcm_trajectory(plan, frame, policy, 2);
  const auto report = check_feasibility(plan.needle, frame, policy);
  return {traj.back(), !(report.margin_each_end > 0.0)};
}

}  // namespace suture
