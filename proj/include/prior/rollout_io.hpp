#pragma once

#include <string>
#include <vector>

#include "prior/csv.hpp"
#include "prior/gait_generator.hpp"
#include "prior/observation.hpp"

// Rollout table: one row per control step.
//
//   t, phase, walking (0/1)
//   cmd_vx, cmd_vy, cmd_wz
//   base_vx, base_vy, base_vz            actual base linear velocity
//   ang_vel_x, ang_vel_y, ang_vel_z      body angular velocity
//   q_0..q_11                            joint positions
//   dq_0..dq_11                          joint position change since last step
//   ref_q_0..ref_q_11                    reference pose
//   ref_dq_0..ref_dq_11                  reference per-step delta
//   per foot f in {l, r}:
//     f_contact, f_first_contact (0/1), f_force_x/y/z, f_vel_x/y/z,
//     f_height, f_air_time, f_edge_dist
namespace prior {

struct RolloutRow {
  double t = 0.0;
  StepSnapshot snapshot;
  ReferenceFrame reference;
};

inline std::vector<std::string> rollout_columns() {
  std::vector<std::string> c = {"t",       "phase",     "walking",   "cmd_vx",    "cmd_vy",   "cmd_wz",
                                "base_vx", "base_vy",   "base_vz",   "ang_vel_x", "ang_vel_y", "ang_vel_z"};
  for (const char* prefix : {"q_", "dq_", "ref_q_", "ref_dq_"}) {
    for (std::size_t j = 0; j < kNumJoints; ++j) c.push_back(prefix + std::to_string(j));
  }
  for (const char* f : {"l_", "r_"}) {
    for (const char* field : {"contact", "first_contact", "force_x", "force_y", "force_z", "vel_x", "vel_y", "vel_z",
                              "height", "air_time", "edge_dist"}) {
      c.push_back(std::string(f) + field);
    }
  }
  return c;
}

inline std::vector<double> rollout_values(const RolloutRow& row) {
  const auto& s = row.snapshot;
  std::vector<double> v = {row.t,
                           s.phase,
                           s.walking ? 1.0 : 0.0,
                           s.command[0],
                           s.command[1],
                           s.command[2],
                           s.base_lin_vel[0],
                           s.base_lin_vel[1],
                           s.base_lin_vel[2],
                           s.ang_vel[0],
                           s.ang_vel[1],
                           s.ang_vel[2]};
  for (const JointVector* jv : {&s.joint_pos, &s.joint_pos_delta, &row.reference.theta, &row.reference.delta}) {
    v.insert(v.end(), jv->begin(), jv->end());
  }
  for (const auto& foot : s.feet) {
    v.push_back(foot.contact ? 1.0 : 0.0);
    v.push_back(foot.first_contact ? 1.0 : 0.0);
    v.insert(v.end(), foot.force.begin(), foot.force.end());
    v.insert(v.end(), foot.velocity.begin(), foot.velocity.end());
    v.push_back(foot.height);
    v.push_back(foot.air_time);
    v.push_back(foot.edge_distance);
  }
  return v;
}

inline std::string format_rollout(const std::vector<RolloutRow>& rows) {
  csv::Writer w(rollout_columns());
  for (const auto& r : rows) w.row(rollout_values(r));
  return w.str();
}

inline std::vector<RolloutRow> parse_rollout(const std::string& text) {
  const auto table = csv::Table::parse(text);
  const auto cols = rollout_columns();
  std::vector<std::size_t> idx;
  idx.reserve(cols.size());
  for (const auto& c : cols) idx.push_back(table.column(c));

  std::vector<RolloutRow> rows(table.rows());
  for (std::size_t r = 0; r < table.rows(); ++r) {
    std::size_t k = 0;
    auto next = [&]() { return table.number(r, idx[k++]); };
    auto& row = rows[r];
    auto& s = row.snapshot;
    row.t = next();
    s.phase = next();
    s.walking = next() != 0.0;
    row.reference.phase = s.phase;
    for (double& x : s.command) x = next();
    for (double& x : s.base_lin_vel) x = next();
    for (double& x : s.ang_vel) x = next();
    for (JointVector* jv : {&s.joint_pos, &s.joint_pos_delta, &row.reference.theta, &row.reference.delta}) {
      for (double& x : *jv) x = next();
    }
    for (auto& foot : s.feet) {
      foot.contact = next() != 0.0;
      foot.first_contact = next() != 0.0;
      for (double& x : foot.force) x = next();
      for (double& x : foot.velocity) x = next();
      foot.height = next();
      foot.air_time = next();
      foot.edge_distance = next();
    }
    row.reference.standing = !s.walking;
  }
  return rows;
}

}  // namespace prior
