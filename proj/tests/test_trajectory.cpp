#include <gtest/gtest.h>

#include <cmath>

#include "suture/optimizer.hpp"
#include "suture/trajectory.hpp"

namespace suture {
namespace {

TissueGeometry flat_tissue() { return {kPi, 4.0, 16.0, SlopeConvention::DescendingAway}; }

Plan plan_for(const NeedleVariables& n, const WoundFrame& f, const GraspPolicy& g) {
  Plan p;
  p.needle = n;
  p.feasibility = check_feasibility(n, f, g);
  p.parameters = compute_suture_parameters(n, f).value();
  return p;
}

TEST(Trajectory, FlatSemicircleThreePoints) {
  const WoundFrame f = build_wound_frame(flat_tissue());
  const GraspPolicy g{0.0};
  const auto w = fcm_trajectory(plan_for({0, 0, 16, NeedleShape::Half}, f, g), f, g, 3);
  ASSERT_EQ(w.size(), 3u);
  const Point expected[] = {{-8, 0}, {0, -8}, {8, 0}};
  for (int i = 0; i < 3; ++i) {
    EXPECT_NEAR(w[i].tip_position.x, expected[i].x, 1e-12);
    EXPECT_NEAR(w[i].tip_position.y, expected[i].y, 1e-12);
  }
  EXPECT_EQ(w[0].rotation_angle, 0.0);
  EXPECT_NEAR(w[1].rotation_angle, kPi / 2, 1e-15);
  EXPECT_NEAR(w[2].rotation_angle, kPi, 1e-15);
  EXPECT_EQ(w[0].phase, Phase::Embedded);
  EXPECT_EQ(w[1].phase, Phase::Embedded);
  EXPECT_EQ(w[2].phase, Phase::Exited);
  // Tip travels right along the bottom.
  EXPECT_NEAR(w[1].tip_heading, 0.0, 1e-12);
}

TEST(Trajectory, TwoPointsAreEndpoints) {
  const WoundFrame f = build_wound_frame(flat_tissue());
  const GraspPolicy g{0.0};
  const auto w = fcm_trajectory(plan_for({0, 0, 16, NeedleShape::Half}, f, g), f, g, 2);
  ASSERT_EQ(w.size(), 2u);
  EXPECT_NEAR(w[0].tip_position.x, -8, 1e-12);
  EXPECT_NEAR(w[1].tip_position.x, 8, 1e-12);
}

TEST(Trajectory, RejectsBadInput) {
  const WoundFrame f = build_wound_frame(flat_tissue());
  const GraspPolicy g{0.0};
  const Plan p = plan_for({0, 0, 16, NeedleShape::Half}, f, g);
  EXPECT_THROW(fcm_trajectory(p, f, g, 1), GeometryError);
  // Same needle is infeasible under a 10 degree margin.
  EXPECT_THROW(fcm_trajectory(p, f, GraspPolicy{kPi / 18}, 5), GeometryError);
}

TEST(SwitchingPose, FlatZeroMargin) {
  const WoundFrame f = build_wound_frame(flat_tissue());
  const GraspPolicy g{0.0};
  const auto s = switching_pose(plan_for({0, 0, 16, NeedleShape::Half}, f, g), f, g);
  EXPECT_NEAR(s.pose.tip_position.x, 8, 1e-12);
  EXPECT_NEAR(s.pose.tip_position.y, 0, 1e-12);
  EXPECT_NEAR(s.pose.rotation_angle, kPi, 1e-15);
  EXPECT_TRUE(s.exit_contact_only);
}

TEST(SwitchingPose, FlatFiveEighths) {
  const WoundFrame f = build_wound_frame(flat_tissue());
  const GraspPolicy g{kPi / 18};
  const auto s = switching_pose(plan_for({0, 0, 16, NeedleShape::FiveEighths}, f, g), f, g);
  EXPECT_NEAR(s.pose.rotation_angle, kPi + kPi / 8, 1e-12);
  // pi/8 past the exit point (angle 0) going counter-clockwise.
  EXPECT_NEAR(s.pose.tip_position.x, 8 * std::cos(kPi / 8), 1e-12);
  EXPECT_NEAR(s.pose.tip_position.y, 8 * std::sin(kPi / 8), 1e-12);
  EXPECT_FALSE(s.exit_contact_only);
  EXPECT_EQ(s.pose.phase, Phase::Exited);
}

TEST(Trajectory, TentPlanProperties) {
  const TissueGeometry t{4.0 * kPi / 5.0, 5.5, 16.0};
  SearchSpace s;
  s.s0 = {-6, 6, 0.5};
  s.l0 = {-12, 5, 0.5};
  s.dc_values = {30.55};
  const GraspPolicy g{};
  const auto plan = optimize(t, DesiredParameters(t), Weights{}, s, g, Normalization::MinMax);
  ASSERT_TRUE(plan);
  const WoundFrame f = build_wound_frame(t);
  const auto w = fcm_trajectory(*plan, f, g, 50);
  ASSERT_EQ(w.size(), 50u);
  const Circle c = plan->needle.circle();
  for (std::size_t i = 0; i < w.size(); ++i) {
    EXPECT_LT(std::abs(distance(w[i].tip_position, c.center) - c.radius), 1e-9);
    const Point radial = w[i].tip_position - c.center;
    const Point heading{std::cos(w[i].tip_heading), std::sin(w[i].tip_heading)};
    EXPECT_LT(std::abs(dot(radial, heading)) / c.radius, 1e-9);
    if (i) {
      EXPECT_GT(w[i].rotation_angle, w[i - 1].rotation_angle);
    }
  }
  EXPECT_EQ(w.back().rotation_angle, plan->feasibility.embedded_arc_angle + plan->feasibility.margin_each_end);
  const auto sw = switching_pose(*plan, f, g);
  EXPECT_EQ(sw.pose.tip_position, w.back().tip_position);
  EXPECT_EQ(sw.pose.rotation_angle, w.back().rotation_angle);
}

}  // namespace
}  // namespace suture
