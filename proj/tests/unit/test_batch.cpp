#include <gtest/gtest.h>

#include <random>
#include <vector>

#include "prior/batch.hpp"
#include "support/synthetic.hpp"

namespace prior {
namespace {

TEST(Batch, StepMatchesPerAgentLoop) {
  const auto lib = testing::make_test_library();
  const std::size_t n = 7;
  BatchSession session(lib, n);
  std::vector<GeneratorState> states(n, initial_state(lib));
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> v(-0.2, 1.8), w(-0.3, 0.3);
  for (int t = 0; t < 200; ++t) {
    std::vector<double> cmd(3 * n);
    for (std::size_t i = 0; i < n; ++i) {
      cmd[3 * i] = v(rng);
      cmd[3 * i + 1] = 0.0;
      cmd[3 * i + 2] = w(rng);
    }
    const auto out = batch_step(session, cmd, 0.02);
    for (std::size_t i = 0; i < n; ++i) {
      const auto r = step(lib, states[i], {cmd[3 * i], cmd[3 * i + 1], cmd[3 * i + 2]}, 0.02);
      states[i] = r.state;
      for (std::size_t j = 0; j < kNumJoints; ++j) {
        ASSERT_EQ(out.theta[i * kNumJoints + j], r.frame.theta[j]);
        ASSERT_EQ(out.delta[i * kNumJoints + j], r.frame.delta[j]);
      }
      ASSERT_EQ(out.left[i], r.frame.contact[0]);
      ASSERT_EQ(out.right[i], r.frame.contact[1]);
      ASSERT_EQ(out.phase[i], r.frame.phase);
    }
  }
  EXPECT_THROW(batch_step(session, std::vector<double>(5), 0.02), DimensionError);
}

TEST(Batch, GaitRewardMatchesSingleCalls) {
  const auto lib = testing::make_test_library();
  BatchSession session(lib, 3);
  std::vector<StepSnapshot> snaps(3);
  std::vector<ReferenceFrame> refs(3);
  for (std::size_t i = 0; i < 3; ++i) {
    snaps[i].command = {0.5 * static_cast<double>(i), 0.0, 0.0};
    snaps[i].joint_pos.fill(0.1 * static_cast<double>(i));
  }
  const auto out = batch_gait_reward(session, snaps, refs);
  ASSERT_EQ(out.size(), 3u);
  for (std::size_t i = 0; i < 3; ++i) {
    const auto& c = snaps[i].command;
    EXPECT_EQ(out[i].total(), gait_reward(snaps[i], refs[i], {c[0], c[1], c[2]}).total());
  }
  EXPECT_THROW(batch_gait_reward(session, std::span(snaps).first(2), refs), DimensionError);
  EXPECT_FALSE(std::string(kVersionString).empty());
}

}  // namespace
}  // namespace prior
