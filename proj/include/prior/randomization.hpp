#pragma once

#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "prior/random.hpp"
#include "prior/types.hpp"

namespace prior {

struct Range {
  double lo = 0.0;
  double hi = 0.0;

  bool contains(double v) const { return v >= lo && v <= hi; }
};

// Per-episode randomization ranges (uniform draws).
struct RandomizationRanges {
  Range payload{-5.0, 5.0};                 // kg
  Range link_mass_factor{0.8, 1.2};
  Range com_shift{-0.15, 0.15};             // m, per axis
  Range friction{0.2, 1.5};
  Range kp_factor{0.9, 1.1};
  Range kd_factor{0.9, 1.1};
  Range joint_armature{2e-3, 2e-2};         // kg m^2
  Range init_base_xy{-0.5, 0.5};            // m
  Range init_base_yaw{-std::numbers::pi, std::numbers::pi};
  Range init_base_lin_vel{-0.5, 0.5};       // m/s, per axis
  Range init_base_ang_vel{-0.5, 0.5};       // rad/s, per axis
  Range init_joint_pos_scale{0.5, 1.5};
  Range depth_bias{-0.04, 0.04};            // m
};

struct RandomizationDraw {
  double payload = 0.0;
  double link_mass_factor = 1.0;
  Vec3 com_shift{};
  double friction = 1.0;
  double kp_factor = 1.0;
  double kd_factor = 1.0;
  double joint_armature = 0.0;
  Vec2 init_base_xy{};
  double init_base_yaw = 0.0;
  Vec3 init_base_lin_vel{};
  Vec3 init_base_ang_vel{};
  double init_joint_pos_scale = 1.0;
  double depth_bias = 0.0;
};

// Flattened (name, value, range) view used for CSV output and range checks.
struct DrawField {
  std::string name;
  double value;
  Range range;
};

inline std::vector<DrawField> fields(const RandomizationDraw& d, const RandomizationRanges& r = {}) {
  return {{"payload", d.payload, r.payload},
          {"link_mass_factor", d.link_mass_factor, r.link_mass_factor},
          {"com_shift_x", d.com_shift[0], r.com_shift},
          {"com_shift_y", d.com_shift[1], r.com_shift},
          {"com_shift_z", d.com_shift[2], r.com_shift},
          {"friction", d.friction, r.friction},
          {"kp_factor", d.kp_factor, r.kp_factor},
          {"kd_factor", d.kd_factor, r.kd_factor},
          {"joint_armature", d.joint_armature, r.joint_armature},
          {"init_base_x", d.init_base_xy[0], r.init_base_xy},
          {"init_base_y", d.init_base_xy[1], r.init_base_xy},
          {"init_base_yaw", d.init_base_yaw, r.init_base_yaw},
          {"init_lin_vel_x", d.init_base_lin_vel[0], r.init_base_lin_vel},
          {"init_lin_vel_y", d.init_base_lin_vel[1], r.init_base_lin_vel},
          {"init_lin_vel_z", d.init_base_lin_vel[2], r.init_base_lin_vel},
          {"init_ang_vel_x", d.init_base_ang_vel[0], r.init_base_ang_vel},
          {"init_ang_vel_y", d.init_base_ang_vel[1], r.init_base_ang_vel},
          {"init_ang_vel_z", d.init_base_ang_vel[2], r.init_base_ang_vel},
          {"init_joint_pos_scale", d.init_joint_pos_scale, r.init_joint_pos_scale},
          {"depth_bias", d.depth_bias, r.depth_bias}};
}

inline RandomizationDraw sample_randomization(Rng& rng, const RandomizationRanges& r = {}) {
  auto u = [&rng](const Range& range) {
    if (range.lo == range.hi) return range.lo;
    return std::uniform_real_distribution<double>(range.lo, range.hi)(rng);
  };
  RandomizationDraw d;
  d.payload = u(r.payload);
  d.link_mass_factor = u(r.link_mass_factor);
  for (double& x : d.com_shift) x = u(r.com_shift);
  d.friction = u(r.friction);
  d.kp_factor = u(r.kp_factor);
  d.kd_factor = u(r.kd_factor);
  d.joint_armature = u(r.joint_armature);
  for (double& x : d.init_base_xy) x = u(r.init_base_xy);
  d.init_base_yaw = u(r.init_base_yaw);
  for (double& x : d.init_base_lin_vel) x = u(r.init_base_lin_vel);
  for (double& x : d.init_base_ang_vel) x = u(r.init_base_ang_vel);
  d.init_joint_pos_scale = u(r.init_joint_pos_scale);
  d.depth_bias = u(r.depth_bias);
  return d;
}

}  // namespace prior
