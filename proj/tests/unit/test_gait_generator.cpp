#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "prior/gait_generator.hpp"
#include "support/synthetic.hpp"

namespace prior {
namespace {

TemplateLibrary two_speed_library() {
  TemplateLibrary lib;
  lib.templates = {testing::make_template(0.5, 0.8), testing::make_template(1.0, 0.6)};
  lib.stand_pose.fill(0.1);
  return lib;
}

TEST(NeighborSelect, EndpointsMidpointAndClip) {
  const auto lib = two_speed_library();
  auto n = neighbor_select(lib, 0.5);
  EXPECT_NEAR(n.alpha, 0.0, 1e-6);
  n = neighbor_select(lib, 0.75);
  EXPECT_EQ(n.lower, 0u);
  EXPECT_EQ(n.upper, 1u);
  EXPECT_NEAR(n.alpha, 0.5, 1e-6);
  n = neighbor_select(lib, 2.0);
  EXPECT_EQ(n.alpha, 1.0);
  EXPECT_EQ(n.lower, 1u);
  EXPECT_EQ(n.upper, 1u);
  n = neighbor_select(lib, 0.2);
  EXPECT_EQ(n.alpha, 0.0);
  EXPECT_EQ(n.upper, 0u);
  // Backwards commands use the magnitude.
  EXPECT_NEAR(neighbor_select(lib, -0.75).alpha, 0.5, 1e-6);
}

TEST(NeighborSelect, AlphaAlwaysInUnitInterval) {
  const auto lib = testing::make_test_library();
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-1e6, 1e6), small(-3.0, 3.0);
  for (int i = 0; i < 10000; ++i) {
    for (double v : {u(rng), small(rng)}) {
      const double a = neighbor_select(lib, v).alpha;
      EXPECT_GE(a, 0.0);
      EXPECT_LE(a, 1.0);
    }
  }
}

TEST(BlendPeriod, Arithmetic) {
  EXPECT_DOUBLE_EQ(blend_period(0.8, 0.6, 0.0), 0.8);
  EXPECT_DOUBLE_EQ(blend_period(0.8, 0.6, 1.0), 0.6);
  EXPECT_NEAR(blend_period(0.8, 0.6, 0.5), 0.7, 1e-15);
}

TEST(AdvancePhase, AdvancesAndWraps) {
  EXPECT_NEAR(advance_phase(0.9, 0.02, 0.8), 0.925, 1e-12);
  EXPECT_NEAR(advance_phase(0.99, 0.02, 0.8), 0.015, 1e-12);
  EXPECT_EQ(advance_phase(0.4, 0.0, 0.8), 0.4);
  EXPECT_LT(advance_phase(0.999999999999, 1e-12, 1.0), 1.0);
}

TEST(AdvancePhase, WholePeriodsReturnToStart) {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> phase(0.0, 1.0), period(0.3, 1.5);
  for (int i = 0; i < 1000; ++i) {
    const double p0 = phase(rng), t = period(rng);
    const int n = 1 + i % 7;
    double d = advance_phase(p0, t * n, t) - p0;
    d -= std::round(d);
    EXPECT_NEAR(d, 0.0, 1e-9);
  }
}

TEST(BlendPose, StandingAndConvexEndpoints) {
  const auto lib = two_speed_library();
  GeneratorState s{.phase = 0.3, .alpha = 0.0, .period = 0.8, .standing = false};
  EXPECT_EQ(blend_pose(lib, s, {0.0, 0.0, 0.0}), lib.stand_pose);
  s.standing = true;
  EXPECT_EQ(blend_pose(lib, s, {0.8, 0.0, 0.0}), lib.stand_pose);
  s.standing = false;
  EXPECT_EQ(blend_pose(lib, s, {0.5, 0.0, 0.0}), lib.templates[0].pose_at(0.3));
}

TEST(BlendPose, MidpointOfConstantTemplates) {
  TemplateLibrary lib;
  auto lo = testing::make_template(0.5, 0.8), hi = testing::make_template(1.0, 0.6);
  for (auto& row : lo.theta_grid) row.fill(0.2);
  for (auto& row : hi.theta_grid) row.fill(-0.4);
  lib.templates = {lo, hi};
  const auto pose = blend_pose(lib, {.phase = 0.37, .standing = false}, {0.75, 0.0, 0.0});
  for (double v : pose) EXPECT_NEAR(v, -0.1, 1e-7);
}

TEST(ContactIndicators, MembershipAndDenseSweep) {
  const auto lo = testing::make_template(0.5, 0.8, 100, 0.6), hi = testing::make_template(1.0, 0.6, 100, 0.6);
  auto in = contact_indicators(0.3, lo, hi, 0.4);
  EXPECT_TRUE(in[0]);
  EXPECT_FALSE(in[1]);
  const int n = 100000;
  for (double alpha : {0.0, 0.3, 1.0}) {
    int left = 0, right = 0;
    for (int i = 0; i < n; ++i) {
      const auto r = contact_indicators((i + 0.5) / n, lo, hi, alpha);
      left += r[0];
      right += r[1];
    }
    EXPECT_NEAR(static_cast<double>(left) / n, 0.6, 0.01);
    EXPECT_NEAR(static_cast<double>(right) / n, 0.6, 0.01);
  }
}

TEST(ContactIndicators, WindowEndpointsInterpolate) {
  StanceWindow a{0.9, 0.5}, b{0.1, 0.7};
  const auto mid = blend_window(a, b, 0.5);
  EXPECT_NEAR(mid.onset, 0.0, 1e-12);  // shorter arc through phase 0
  EXPECT_NEAR(mid.duration, 0.6, 1e-12);
}

TEST(Step, StandingHoldsPoseAndPhase) {
  const auto lib = two_speed_library();
  GeneratorState s = initial_state(lib);
  s.phase = 0.42;
  for (int i = 0; i < 50; ++i) {
    auto r = step(lib, s, {0.05, 0.0, 0.05}, 0.02);
    EXPECT_EQ(r.frame.theta, lib.stand_pose);
    EXPECT_TRUE(r.frame.contact[0] && r.frame.contact[1]);
    EXPECT_EQ(r.state.phase, 0.42);
    s = r.state;
  }
}

TEST(Step, FullPeriodReturnsToStartPose) {
  const auto lib = testing::make_test_library();
  for (double v : {0.5, 0.75, 1.2, 1.5, 2.0}) {
    GeneratorState s = initial_state(lib);
    auto first = step(lib, s, {v, 0.0, 0.0}, 0.02);
    const int n = 40;
    const double dt = first.state.period / n;
    s = first.state;
    auto start = step(lib, s, {v, 0.0, 0.0}, dt);
    s = start.state;
    StepResult r;
    for (int i = 0; i < n; ++i) {
      r = step(lib, s, {v, 0.0, 0.0}, dt);
      s = r.state;
    }
    for (std::size_t j = 0; j < kNumJoints; ++j) EXPECT_NEAR(r.frame.theta[j], start.frame.theta[j], 1e-6);
  }
}

TEST(Step, RampAcrossTemplateBoundaryHasNoSpike) {
  const auto lib = testing::make_test_library();
  GeneratorState s = initial_state(lib);
  const double dt = 0.005;
  const int steps = 4000;
  double max_grid_slope = 0.0;  // |d theta / d phase|
  for (const auto& t : lib.templates) {
    for (const auto& row : t.theta_delta_grid) {
      for (double d : row) max_grid_slope = std::max(max_grid_slope, std::abs(d) * t.samples());
    }
  }
  ReferenceFrame prev;
  double prev_alpha = 0.0;
  std::size_t prev_lower = 0, prev_upper = 0;
  for (int i = 0; i < steps; ++i) {
    const double v = 0.55 + 0.9 * i / steps;  // 0.55 -> 1.45 crosses 1.0
    const auto r = step(lib, s, {v, 0.0, 0.0}, dt);
    const auto nb = neighbor_select(lib, v);
    if (i > 0) {
      // Same bracket: pose moves by phase slope plus alpha sweep. At a
      // bracket change the two blends coincide at the shared template.
      double blend_span = 0.0;
      if (nb.lower == prev_lower && nb.upper == prev_upper) {
        const auto a = lib.templates[nb.lower].pose_at(r.frame.phase);
        const auto b = lib.templates[nb.upper].pose_at(r.frame.phase);
        for (std::size_t j = 0; j < kNumJoints; ++j) blend_span = std::max(blend_span, std::abs(a[j] - b[j]));
        blend_span *= std::abs(nb.alpha - prev_alpha);
      } else {
        blend_span = 1e-6;
      }
      const double bound = max_grid_slope * dt / s.period * 1.0001 + blend_span + 1e-9;
      double jump = 0.0;
      for (std::size_t j = 0; j < kNumJoints; ++j) jump = std::max(jump, std::abs(r.frame.theta[j] - prev.theta[j]));
      EXPECT_LE(jump, bound) << "step " << i << " v=" << v;
    }
    prev = r.frame;
    prev_alpha = nb.alpha;
    prev_lower = nb.lower;
    prev_upper = nb.upper;
    s = r.state;
  }
}

TEST(Step, HysteresisNeedsWiderBandToLeaveStanding) {
  const auto lib = two_speed_library();
  GeneratorState s = initial_state(lib);
  EXPECT_TRUE(step(lib, s, {0.11, 0.0, 0.0}, 0.02).state.standing);
  EXPECT_FALSE(step(lib, s, {0.13, 0.0, 0.0}, 0.02).state.standing);
  s.standing = false;
  EXPECT_FALSE(step(lib, s, {0.11, 0.0, 0.0}, 0.02).state.standing);
  EXPECT_TRUE(step(lib, s, {0.09, 0.0, 0.0}, 0.02).state.standing);
  EXPECT_FALSE(step(lib, s, {0.0, 0.0, 0.2}, 0.02).state.standing);  // turning in place walks
}

TEST(Step, DeltaMatchesPerStepPoseChange) {
  const auto lib = two_speed_library();
  GeneratorState s = initial_state(lib);
  s.standing = false;
  const double dt = 0.002;
  auto r0 = step(lib, s, {0.7, 0.0, 0.0}, dt);
  auto r1 = step(lib, r0.state, {0.7, 0.0, 0.0}, dt);
  for (std::size_t j = 0; j < kNumJoints; ++j) {
    EXPECT_NEAR(r1.frame.theta[j] - r0.frame.theta[j], r1.frame.delta[j], 2e-3);
  }
}

TEST(GaitGenerator, WrapperMatchesFreeFunction) {
  const auto lib = testing::make_test_library();
  GaitGenerator gen(lib);
  GeneratorState s = initial_state(lib);
  for (int i = 0; i < 100; ++i) {
    const GaitCommand c{0.3 + 0.01 * i, 0.0, 0.0};
    const auto a = gen.update(c, 0.02);
    const auto b = step(lib, s, c, 0.02);
    s = b.state;
    EXPECT_EQ(a.theta, b.frame.theta);
    EXPECT_EQ(a.phase, b.frame.phase);
  }
}

}  // namespace
}  // namespace prior
