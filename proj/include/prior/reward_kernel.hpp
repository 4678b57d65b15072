#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <string>
#include <unordered_set>
#include <vector>

#include "prior/gait_generator.hpp"
#include "prior/observation.hpp"

namespace prior {

struct RewardTerm {
  std::string name;
  double value = 0.0;   // raw term (r_i for exponential terms)
  double weight = 0.0;

  double contribution() const { return weight * value; }
};

struct RewardTerms {
  std::vector<RewardTerm> terms;

  double total() const {
    double acc = 0.0;
    for (const auto& t : terms) acc += t.contribution();
    return acc;
  }
  const RewardTerm* find(const std::string& name) const {
    for (const auto& t : terms) {
      if (t.name == name) return &t;
    }
    return nullptr;
  }
};

struct GaitRewardConfig {
  double w_pos = 0.10, w_vel = 0.05, w_delta = 0.05, w_ankle = 0.05;
  // Scales are not published; these are tuning placeholders.
  double lambda_pos = 5.0, lambda_vel = 4.0, lambda_delta = 10.0, lambda_ankle = 5.0;
  // Ankle pitch joints for the hip_pitch, hip_roll, hip_yaw, knee,
  // ankle_pitch, ankle_roll per-leg ordering.
  std::array<std::size_t, 2> ankle_joints{4, 10};
};

// Landing-state terms. The functional forms below are local choices; only
// the weights come from the reference design.
struct LandingRewardConfig {
  double w_air = 1.25, w_slide = -0.10, w_dbl_air = -1.00, w_swing = -20.0, w_stumble = -30.0, w_edge = -2.00;
  double air_time_min = 0.1;   // s
  double air_time_max = 0.5;   // s
  double slide_clamp = 4.0;    // raw term cap, (m/s)^2
  double swing_height = 0.08;  // m
  double stumble_ratio = 2.0;  // horizontal / vertical force
  double edge_margin = 0.03;   // m
  double edge_jump = 0.05;     // cell height difference that counts as an edge, m
};

struct RewardConfig {
  GaitRewardConfig gait;
  LandingRewardConfig landing;
};

struct GaitErrors {
  double pos = 0.0;
  double vel = 0.0;
  double delta = 0.0;
  double ankle = 0.0;
};

// Velocity error compares (v_bx, v_by, yaw rate) against the (vx, vy, wz) command.
inline GaitErrors gait_errors(const StepSnapshot& s, const ReferenceFrame& ref, const GaitCommand& cmd,
                              const GaitRewardConfig& cfg = {}) {
  GaitErrors e;
  for (std::size_t j = 0; j < kNumJoints; ++j) {
    const double d = s.joint_pos[j] - ref.theta[j];
    e.pos += d * d;
    e.delta += std::abs(s.joint_pos_delta[j] - ref.delta[j]);
  }
  const double dvx = s.base_lin_vel[0] - cmd.vx;
  const double dvy = s.base_lin_vel[1] - cmd.vy;
  const double dwz = s.ang_vel[2] - cmd.wz;
  e.vel = dvx * dvx + dvy * dvy + dwz * dwz;
  for (std::size_t j : cfg.ankle_joints) {
    const double d = s.joint_pos[j] - ref.theta[j];
    e.ankle += d * d;
  }
  return e;
}

inline RewardTerms gait_reward_from_errors(const GaitErrors& e, const GaitRewardConfig& cfg = {}) {
  return {{{"pos", std::exp(-cfg.lambda_pos * e.pos), cfg.w_pos},
           {"vel", std::exp(-cfg.lambda_vel * e.vel), cfg.w_vel},
           {"delta", std::exp(-cfg.lambda_delta * e.delta), cfg.w_delta},
           {"ankle", std::exp(-cfg.lambda_ankle * e.ankle), cfg.w_ankle}}};
}

inline RewardTerms gait_reward(const StepSnapshot& s, const ReferenceFrame& ref, const GaitCommand& cmd,
                               const GaitRewardConfig& cfg = {}) {
  return gait_reward_from_errors(gait_errors(s, ref, cmd, cfg), cfg);
}

inline RewardTerms landing_rewards(const StepSnapshot& s, const LandingRewardConfig& cfg = {}) {
  double air = 0.0, slide = 0.0, swing = 0.0;
  bool stumble = false;
  std::array<double, 2> edge{};
  for (std::size_t f = 0; f < 2; ++f) {
    const FootState& foot = s.feet[f];
    if (foot.first_contact && foot.air_time >= cfg.air_time_min) {
      air += std::min(foot.air_time, cfg.air_time_max);
    }
    if (foot.contact) {
      slide += foot.velocity[0] * foot.velocity[0] + foot.velocity[1] * foot.velocity[1];
      edge[f] = foot.edge_distance < cfg.edge_margin ? 1.0 : 0.0;
    } else {
      const double gap = std::clamp(cfg.swing_height - foot.height, 0.0, cfg.swing_height);
      swing += gap * gap;
    }
    const double horizontal = std::hypot(foot.force[0], foot.force[1]);
    if (horizontal > cfg.stumble_ratio * std::abs(foot.force[2])) stumble = true;
  }
  const bool both_air = !s.feet[0].contact && !s.feet[1].contact;
  return {{{"air", air, cfg.w_air},
           {"slide", std::min(slide, cfg.slide_clamp), cfg.w_slide},
           {"dbl_air", (both_air && s.walking) ? 1.0 : 0.0, cfg.w_dbl_air},
           {"swing", swing, cfg.w_swing},
           {"stumble", stumble ? 1.0 : 0.0, cfg.w_stumble},
           {"edge_left", edge[0], cfg.w_edge},
           {"edge_right", edge[1], cfg.w_edge}}};
}

struct RewardBreakdown {
  std::vector<RewardTerm> terms;
  double total = 0.0;
};

inline RewardBreakdown total_reward(const RewardTerms& gait, const RewardTerms& landing,
                                    const RewardTerms& extra = {}) {
  RewardBreakdown out;
  std::unordered_set<std::string> seen;
  for (const RewardTerms* group : {&gait, &landing, &extra}) {
    for (const auto& t : group->terms) {
      if (!seen.insert(t.name).second) throw Error("duplicate reward term: " + t.name);
      out.terms.push_back(t);
      out.total += t.contribution();
    }
  }
  return out;
}

// Distance from (x, y) to the nearest boundary between 4-neighbour heightmap
// cells whose heights differ by more than `jump`. The grid is centred on the
// origin with x along columns and y along rows. Returns +inf without edges.
inline double nearest_edge_distance(std::span<const double> heights, const HeightmapShape& shape, double x,
                                    double y, double jump) {
  if (heights.size() != shape.cells()) throw DimensionError("heightmap: size does not match shape");
  const double s = shape.spacing;
  const double x0 = -0.5 * static_cast<double>(shape.cols - 1) * s;
  const double y0 = -0.5 * static_cast<double>(shape.rows - 1) * s;
  auto seg_dist = [x, y](double ax, double ay, double bx, double by) {
    const double dx = bx - ax, dy = by - ay;
    const double t = std::clamp(((x - ax) * dx + (y - ay) * dy) / (dx * dx + dy * dy), 0.0, 1.0);
    return std::hypot(x - (ax + t * dx), y - (ay + t * dy));
  };
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t r = 0; r < shape.rows; ++r) {
    for (std::size_t c = 0; c < shape.cols; ++c) {
      const double h = heights[r * shape.cols + c];
      const double cx = x0 + static_cast<double>(c) * s;
      const double cy = y0 + static_cast<double>(r) * s;
      if (c + 1 < shape.cols && std::abs(heights[r * shape.cols + c + 1] - h) > jump) {
        best = std::min(best, seg_dist(cx + 0.5 * s, cy - 0.5 * s, cx + 0.5 * s, cy + 0.5 * s));
      }
      if (r + 1 < shape.rows && std::abs(heights[(r + 1) * shape.cols + c] - h) > jump) {
        best = std::min(best, seg_dist(cx - 0.5 * s, cy + 0.5 * s, cx + 0.5 * s, cy + 0.5 * s));
      }
    }
  }
  return best;
}

}  // namespace prior
