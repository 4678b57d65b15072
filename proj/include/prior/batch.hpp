#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "prior/gait_generator.hpp"
#include "prior/reward_kernel.hpp"
#include "prior/version.hpp"

// Batch-first surface for language bindings. Arrays are contiguous row-major
// buffers; agent i's outputs depend only on agent i's state and inputs.
namespace prior {

struct BatchSession {
  BatchSession(const TemplateLibrary& lib, std::size_t n_agents, RewardConfig rewards = {})
      : library(&lib), reward_config(std::move(rewards)), states(n_agents, initial_state(lib)) {}

  const TemplateLibrary* library;
  RewardConfig reward_config;
  std::vector<GeneratorState> states;

  std::size_t size() const { return states.size(); }
};

struct BatchStepOutput {
  std::vector<double> theta;        // N x 12
  std::vector<double> delta;        // N x 12
  std::vector<std::uint8_t> left;   // N
  std::vector<std::uint8_t> right;  // N
  std::vector<double> phase;        // N
};

// commands: N x 3 (vx, vy, wz)
inline BatchStepOutput batch_step(BatchSession& session, std::span<const double> commands, double dt) {
  const std::size_t n = session.size();
  if (commands.size() != 3 * n) {
    throw DimensionError("commands: expected " + std::to_string(3 * n) + " values, got " +
                         std::to_string(commands.size()));
  }
  BatchStepOutput out;
  out.theta.resize(n * kNumJoints);
  out.delta.resize(n * kNumJoints);
  out.left.resize(n);
  out.right.resize(n);
  out.phase.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const GaitCommand cmd{commands[3 * i], commands[3 * i + 1], commands[3 * i + 2]};
    const auto r = step(*session.library, session.states[i], cmd, dt);
    session.states[i] = r.state;
    std::copy(r.frame.theta.begin(), r.frame.theta.end(), out.theta.begin() + static_cast<std::ptrdiff_t>(i * kNumJoints));
    std::copy(r.frame.delta.begin(), r.frame.delta.end(), out.delta.begin() + static_cast<std::ptrdiff_t>(i * kNumJoints));
    out.left[i] = r.frame.contact[0];
    out.right[i] = r.frame.contact[1];
    out.phase[i] = r.frame.phase;
  }
  return out;
}

inline std::vector<RewardTerms> batch_gait_reward(const BatchSession& session,
                                                  std::span<const StepSnapshot> snapshots,
                                                  std::span<const ReferenceFrame> refs) {
  if (snapshots.size() != session.size() || refs.size() != session.size()) {
    throw DimensionError("batch gait reward: expected " + std::to_string(session.size()) + " agents");
  }
  std::vector<RewardTerms> out;
  out.reserve(snapshots.size());
  for (std::size_t i = 0; i < snapshots.size(); ++i) {
    const auto& c = snapshots[i].command;
    out.push_back(gait_reward(snapshots[i], refs[i], {c[0], c[1], c[2]}, session.reward_config.gait));
  }
  return out;
}

}  // namespace prior
