#pragma once

#include <cmath>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "prior/gait_generator.hpp"
#include "prior/motion_clips.hpp"

// Synthetic walking data for tests.
namespace prior::testing {

inline std::vector<std::string> joint_names() {
  std::vector<std::string> n;
  for (const char* side : {"left", "right"}) {
    for (const char* j : {"hip_pitch", "hip_roll", "hip_yaw", "knee", "ankle_pitch", "ankle_roll"}) {
      n.push_back(std::string(side) + "_" + j);
    }
  }
  return n;
}

struct WalkSpec {
  double speed = 0.5;
  double dt = 0.01;
  std::size_t cycle_frames = 100;
  std::size_t cycles = 4;
  std::size_t lead_in = 17;  // frames before the first left touchdown
  double stance = 0.6;
  double amplitude = 0.3;
  double noise = 0.0;
  unsigned seed = 1;
};

inline double joint_wave(std::size_t j, double phase, double amplitude) {
  return 0.1 * static_cast<double>(j % 6) - 0.2 +
         amplitude * std::sin(2.0 * std::numbers::pi * phase + 0.4 * static_cast<double>(j));
}

// Left stance over phase [0, stance), right over [0.5, 0.5 + stance).
// Phase 0 is the left touchdown at frame `lead_in`.
inline RawClip make_walk_clip(const WalkSpec& s) {
  RawClip c;
  c.name = "walk_" + std::to_string(s.speed);
  c.dt = s.dt;
  c.nominal_velocity = {s.speed, 0.0, 0.0};
  c.joint_names = joint_names();
  const std::size_t n = s.lead_in + s.cycle_frames * s.cycles + 5;
  std::mt19937 rng(s.seed);
  std::normal_distribution<double> noise(0.0, s.noise > 0.0 ? s.noise : 1.0);
  for (std::size_t f = 0; f < n; ++f) {
    const double frame = static_cast<double>(f) - static_cast<double>(s.lead_in);
    double phase = frame / static_cast<double>(s.cycle_frames);
    phase -= std::floor(phase);
    JointVector q{}, dq{};
    for (std::size_t j = 0; j < kNumJoints; ++j) {
      q[j] = joint_wave(j, phase, s.amplitude) + (s.noise > 0.0 ? s.noise * noise(rng) : 0.0);
      dq[j] = 0.0;
    }
    c.theta.push_back(q);
    c.theta_dot.push_back(dq);
    c.base_lin_vel.push_back({s.speed, 0.0, 0.0});
    c.base_ang_vel.push_back({0.0, 0.0, 0.0});
    // Quantize phase to frames so stance lengths are exact frame counts.
    const double pf = std::round(phase * static_cast<double>(s.cycle_frames)) / static_cast<double>(s.cycle_frames);
    double right = pf - 0.5;
    right -= std::floor(right);
    const bool left_on = pf < s.stance - 1e-9;
    const bool right_on = right < s.stance - 1e-9;
    c.contact[0].mu.push_back({0.0, 0.0});
    c.contact[1].mu.push_back({0.0, 0.0});
    c.contact[0].sigma.push_back(left_on ? 0.05 : 0.0);
    c.contact[1].sigma.push_back(right_on ? 0.05 : 0.0);
  }
  return c;
}

// Analytic template: pose = offset + speed-scaled sinusoid.
inline GaitTemplate make_template(double speed, double period, std::size_t k = 100, double stance = 0.6,
                                  double onset_left = 0.0) {
  GaitTemplate t;
  t.source = "synthetic";
  t.nominal_speed = speed;
  t.period = period;
  t.theta_grid.resize(k);
  t.theta_delta_grid.resize(k);
  for (std::size_t i = 0; i < k; ++i) {
    const double phase = static_cast<double>(i) / static_cast<double>(k);
    for (std::size_t j = 0; j < kNumJoints; ++j) t.theta_grid[i][j] = joint_wave(j, phase, 0.2 + 0.3 * speed);
  }
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = 0; j < kNumJoints; ++j) {
      t.theta_delta_grid[i][j] = t.theta_grid[(i + 1) % k][j] - t.theta_grid[i][j];
    }
  }
  t.stance_ratio = {stance, stance};
  t.stance_window[0] = {onset_left, stance};
  double right = onset_left + 0.5;
  t.stance_window[1] = {right - std::floor(right), stance};
  return t;
}

inline TemplateLibrary make_test_library() {
  TemplateLibrary lib;
  lib.templates = {make_template(0.5, 0.8), make_template(1.0, 0.6, 100, 0.55, 0.02),
                   make_template(1.5, 0.5, 80, 0.5, 0.05)};
  lib.stand_pose.fill(0.05);
  return lib;
}

}  // namespace prior::testing
