#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "prior/types.hpp"

namespace prior {

// Split of the 163-wide estimator output: velocity estimate, latent, and
// heightmap latent, in that order.
struct EstimatorOutputLayout {
  static constexpr std::size_t velocity = 3;
  static constexpr std::size_t latent = 32;
  static constexpr std::size_t height_latent = 128;
  static constexpr std::size_t total = velocity + latent + height_latent;
};
static_assert(EstimatorOutputLayout::total == 163);

struct EstimatorOutputView {
  std::span<const double> velocity;
  std::span<const double> latent;
  std::span<const double> height_latent;
};

inline EstimatorOutputView split_estimator_output(std::span<const double> e) {
  using L = EstimatorOutputLayout;
  if (e.size() != L::total) {
    throw DimensionError("estimator output: expected 163, got " + std::to_string(e.size()));
  }
  return {e.subspan(0, L::velocity), e.subspan(L::velocity, L::latent),
          e.subspan(L::velocity + L::latent, L::height_latent)};
}

inline constexpr std::size_t kProprioDim = 3 + 3 + 3 + 3 * kNumJoints;
inline constexpr std::size_t kActorObsDim = kProprioDim + EstimatorOutputLayout::total + 1;
static_assert(kProprioDim == 45);
static_assert(kActorObsDim == 209);

struct HeightmapShape {
  std::size_t rows = 11;
  std::size_t cols = 17;
  double spacing = 0.1;  // m

  std::size_t cells() const { return rows * cols; }
};

struct FootState {
  bool contact = false;
  bool first_contact = false;  // touchdown happened this step
  Vec3 force{};                // contact force, N
  Vec3 velocity{};             // m/s, world frame
  double height = 0.0;         // above local terrain, m
  double air_time = 0.0;       // s
  double edge_distance = 1e9;  // to the nearest terrain discontinuity, m
};

// Per-step physical quantities consumed by observation assembly and rewards.
struct StepSnapshot {
  Vec3 ang_vel{};
  Vec3 gravity{0.0, 0.0, -1.0};
  Vec3 command{};  // (vx, vy, wz)
  JointVector joint_pos{};
  JointVector joint_vel{};
  JointVector last_action{};
  JointVector joint_pos_delta{};  // joint_pos - previous joint_pos
  Vec3 base_lin_vel{};
  std::vector<double> heightmap;  // row-major rows x cols
  double phase = 0.0;
  bool walking = true;
  std::array<FootState, 2> feet{};
};

inline void check_gravity(const Vec3& g) {
  const double n = std::sqrt(g[0] * g[0] + g[1] * g[1] + g[2] * g[2]);
  if (std::abs(n - 1.0) > 1e-6) throw DomainError("gravity: expected unit vector");
}

// [ang_vel(3), gravity(3), command(3), joint_pos(12), joint_vel(12), last_action(12)]
inline std::array<double, kProprioDim> proprioception(const StepSnapshot& s) {
  std::array<double, kProprioDim> o{};
  auto it = o.begin();
  auto put = [&it](const auto& v) { it = std::copy(v.begin(), v.end(), it); };
  put(s.ang_vel);
  put(s.gravity);
  put(s.command);
  put(s.joint_pos);
  put(s.joint_vel);
  put(s.last_action);
  return o;
}

inline std::vector<double> assemble_actor_obs(const StepSnapshot& s, std::span<const double> estimator_out,
                                              double phase) {
  if (estimator_out.size() != EstimatorOutputLayout::total) {
    throw DimensionError("estimator output: expected 163, got " + std::to_string(estimator_out.size()));
  }
  check_gravity(s.gravity);
  std::vector<double> obs;
  obs.reserve(kActorObsDim);
  const auto o = proprioception(s);
  obs.insert(obs.end(), o.begin(), o.end());
  obs.insert(obs.end(), estimator_out.begin(), estimator_out.end());
  obs.push_back(phase);
  return obs;
}

struct ActorObsFields {
  Vec3 ang_vel{};
  Vec3 gravity{};
  Vec3 command{};
  JointVector joint_pos{};
  JointVector joint_vel{};
  JointVector last_action{};
  std::vector<double> estimator_out;
  double phase = 0.0;
};

// Inverse of assemble_actor_obs.
inline ActorObsFields slice_actor_obs(std::span<const double> obs) {
  if (obs.size() != kActorObsDim) {
    throw DimensionError("actor observation: expected 209, got " + std::to_string(obs.size()));
  }
  ActorObsFields f;
  std::size_t pos = 0;
  auto take = [&](auto& dst) {
    std::copy_n(obs.begin() + static_cast<std::ptrdiff_t>(pos), dst.size(), dst.begin());
    pos += dst.size();
  };
  take(f.ang_vel);
  take(f.gravity);
  take(f.command);
  take(f.joint_pos);
  take(f.joint_vel);
  take(f.last_action);
  f.estimator_out.assign(obs.begin() + static_cast<std::ptrdiff_t>(pos),
                         obs.begin() + static_cast<std::ptrdiff_t>(pos + EstimatorOutputLayout::total));
  pos += EstimatorOutputLayout::total;
  f.phase = obs[pos];
  return f;
}

inline std::size_t critic_obs_dim(const HeightmapShape& shape) { return 3 + kProprioDim + shape.cells() + 1; }

// [base_lin_vel(3), proprioception(45), heightmap(rows*cols), phase(1)]
inline std::vector<double> assemble_critic_obs(const StepSnapshot& s, double phase,
                                               const HeightmapShape& shape = {}) {
  if (s.heightmap.empty()) throw DimensionError("heightmap: missing");
  if (s.heightmap.size() != shape.cells()) {
    throw DimensionError("heightmap: expected " + std::to_string(shape.cells()) + ", got " +
                         std::to_string(s.heightmap.size()));
  }
  check_gravity(s.gravity);
  std::vector<double> obs;
  obs.reserve(critic_obs_dim(shape));
  obs.insert(obs.end(), s.base_lin_vel.begin(), s.base_lin_vel.end());
  const auto o = proprioception(s);
  obs.insert(obs.end(), o.begin(), o.end());
  obs.insert(obs.end(), s.heightmap.begin(), s.heightmap.end());
  obs.push_back(phase);
  return obs;
}

inline JointVector target_joints(const JointVector& action, const JointVector& default_pose) {
  JointVector out;
  for (std::size_t j = 0; j < kNumJoints; ++j) out[j] = default_pose[j] + action[j];
  return out;
}

struct PdGains {
  double kp = 60.0;
  double kd = 2.0;
};

inline JointVector pd_torque(const JointVector& target, const JointVector& pos, const JointVector& vel,
                             const PdGains& gains = {}) {
  if (gains.kp < 0.0 || gains.kd < 0.0) throw DomainError("PD gains must be non-negative");
  JointVector tau;
  for (std::size_t j = 0; j < kNumJoints; ++j) {
    tau[j] = gains.kp * (target[j] - pos[j]) - gains.kd * vel[j];
  }
  return tau;
}

inline double mean_squared_error(std::span<const double> pred, std::span<const double> target,
                                 const std::string& name) {
  if (pred.size() != target.size()) {
    throw DimensionError(name + ": prediction has " + std::to_string(pred.size()) + " entries, target has " +
                         std::to_string(target.size()));
  }
  if (pred.empty()) return 0.0;
  double acc = 0.0;
  for (std::size_t i = 0; i < pred.size(); ++i) {
    const double d = pred[i] - target[i];
    acc += d * d;
  }
  return acc / static_cast<double>(pred.size());
}

// Velocity, next-observation and heightmap reconstruction terms, equally weighted.
inline double estimator_loss(std::span<const double> velocity_pred, std::span<const double> velocity,
                             std::span<const double> next_obs_pred, std::span<const double> next_obs,
                             std::span<const double> heightmap_pred, std::span<const double> heightmap) {
  return mean_squared_error(velocity_pred, velocity, "velocity") +
         mean_squared_error(next_obs_pred, next_obs, "next observation") +
         mean_squared_error(heightmap_pred, heightmap, "heightmap");
}

}  // namespace prior
