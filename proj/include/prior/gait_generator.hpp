#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

#include "prior/motion_clips.hpp"
#include "prior/types.hpp"

namespace prior {

struct GeneratorParams {
  double standing_speed = 0.1;   // v_th, m/s
  double standing_yaw = 0.1;     // rad/s
  double hysteresis = 0.02;      // widening of both thresholds while standing
  double epsilon = 1e-8;         // interpolation stabilizer
};

struct TemplateLibrary {
  std::vector<GaitTemplate> templates;  // ascending nominal_speed
  JointVector stand_pose{};
  GeneratorParams params{};

  void validate() const {
    if (templates.empty()) throw DomainError("template library is empty");
    for (std::size_t i = 0; i < templates.size(); ++i) {
      templates[i].validate();
      if (i > 0 && !(templates[i].nominal_speed > templates[i - 1].nominal_speed)) {
        throw DomainError("template speeds must be strictly increasing");
      }
    }
    if (!all_finite(stand_pose)) throw DomainError("stand pose must be finite");
  }
};

struct GaitCommand {
  double vx = 0.0;
  double vy = 0.0;
  double wz = 0.0;
};

struct GeneratorState {
  double phase = 0.0;
  double alpha = 0.0;
  double period = 1.0;
  bool standing = true;
};

struct ReferenceFrame {
  JointVector theta{};
  JointVector delta{};
  std::array<bool, 2> contact{true, true};
  double phase = 0.0;
  double alpha = 0.0;
  bool standing = true;
};

struct Neighbors {
  std::size_t lower = 0;
  std::size_t upper = 0;
  double alpha = 0.0;
};

inline Neighbors neighbor_select(const TemplateLibrary& lib, double forward_speed) {
  const auto& t = lib.templates;
  if (t.empty()) throw DomainError("template library is empty");
  const double u = std::abs(forward_speed);
  if (!(u > t.front().nominal_speed)) return {0, 0, 0.0};
  const std::size_t last = t.size() - 1;
  if (u >= t.back().nominal_speed) return {last, last, 1.0};
  // First template strictly faster than u; its predecessor is at or below u.
  auto it = std::upper_bound(t.begin(), t.end(), u,
                             [](double v, const GaitTemplate& g) { return v < g.nominal_speed; });
  const auto hi = static_cast<std::size_t>(it - t.begin());
  const std::size_t lo = hi - 1;
  const double ul = t[lo].nominal_speed;
  const double uu = t[hi].nominal_speed;
  const double alpha = std::clamp((u - ul) / (uu - ul + lib.params.epsilon), 0.0, 1.0);
  return {lo, hi, alpha};
}

inline double blend_period(double lower_period, double upper_period, double alpha) {
  return (1.0 - alpha) * lower_period + alpha * upper_period;
}

inline double wrap_phase(double phase) {
  double p = phase - std::floor(phase);
  // floor can leave exactly 1.0 for tiny negative inputs.
  return p >= 1.0 ? 0.0 : p;
}

inline double advance_phase(double phase, double dt, double period) {
  return wrap_phase(phase + dt / period);
}

inline bool standing_command(const GaitCommand& cmd, const GeneratorParams& p, bool was_standing) {
  const double band = was_standing ? p.hysteresis : 0.0;
  return std::hypot(cmd.vx, cmd.vy) <= p.standing_speed + band &&
         std::abs(cmd.wz) <= p.standing_yaw + band;
}

inline JointVector blend_pose(const TemplateLibrary& lib, const GeneratorState& state,
                              const GaitCommand& cmd) {
  if (state.standing || standing_command(cmd, lib.params, false)) return lib.stand_pose;
  const Neighbors n = neighbor_select(lib, cmd.vx);
  const JointVector lo = lib.templates[n.lower].pose_at(state.phase);
  const JointVector hi = lib.templates[n.upper].pose_at(state.phase);
  JointVector out;
  for (std::size_t j = 0; j < kNumJoints; ++j) out[j] = (1.0 - n.alpha) * lo[j] + n.alpha * hi[j];
  return out;
}

// Stance window with endpoints interpolated between two templates; onsets
// move along the shorter arc of the phase circle.
inline StanceWindow blend_window(const StanceWindow& lo, const StanceWindow& hi, double alpha) {
  double d = hi.onset - lo.onset;
  d -= std::floor(d + 0.5);
  return {wrap_phase(lo.onset + alpha * d), (1.0 - alpha) * lo.duration + alpha * hi.duration};
}

inline std::array<bool, 2> contact_indicators(double phase, const GaitTemplate& lower,
                                              const GaitTemplate& upper, double alpha) {
  std::array<bool, 2> out{};
  for (std::size_t f = 0; f < 2; ++f) {
    out[f] = blend_window(lower.stance_window[f], upper.stance_window[f], alpha).contains(phase);
  }
  return out;
}

inline GeneratorState initial_state(const TemplateLibrary& lib) {
  GeneratorState s;
  s.period = lib.templates.front().period;
  return s;
}

struct StepResult {
  GeneratorState state;
  ReferenceFrame frame;
};

inline StepResult step(const TemplateLibrary& lib, const GeneratorState& state, const GaitCommand& cmd,
                       double dt) {
  StepResult r;
  r.state = state;
  r.state.standing = standing_command(cmd, lib.params, state.standing);
  if (r.state.standing) {
    // Phase holds while standing and resumes from here on the next walk.
    r.state.alpha = 0.0;
    r.frame.theta = lib.stand_pose;
    r.frame.delta = {};
    r.frame.contact = {true, true};
    r.frame.phase = r.state.phase;
    r.frame.alpha = 0.0;
    r.frame.standing = true;
    return r;
  }

  const Neighbors n = neighbor_select(lib, cmd.vx);
  const GaitTemplate& lo = lib.templates[n.lower];
  const GaitTemplate& hi = lib.templates[n.upper];
  r.state.alpha = n.alpha;
  r.state.period = blend_period(lo.period, hi.period, n.alpha);
  r.state.phase = advance_phase(state.phase, dt, r.state.period);

  const double phase = r.state.phase;
  const JointVector pl = lo.pose_at(phase), ph = hi.pose_at(phase);
  const JointVector dl = lo.delta_at(phase), dh = hi.delta_at(phase);
  // Grid deltas are per phase cell; convert to per control step.
  const double cells_lo = dt / r.state.period * static_cast<double>(lo.samples());
  const double cells_hi = dt / r.state.period * static_cast<double>(hi.samples());
  for (std::size_t j = 0; j < kNumJoints; ++j) {
    r.frame.theta[j] = (1.0 - n.alpha) * pl[j] + n.alpha * ph[j];
    r.frame.delta[j] = (1.0 - n.alpha) * dl[j] * cells_lo + n.alpha * dh[j] * cells_hi;
  }
  r.frame.contact = contact_indicators(phase, lo, hi, n.alpha);
  r.frame.phase = phase;
  r.frame.alpha = n.alpha;
  r.frame.standing = false;
  return r;
}

// Stateful convenience wrapper around step().
class GaitGenerator {
 public:
  explicit GaitGenerator(const TemplateLibrary& lib) : lib_(&lib), state_(initial_state(lib)) {}

  ReferenceFrame update(const GaitCommand& cmd, double dt) {
    auto r = step(*lib_, state_, cmd, dt);
    state_ = r.state;
    return r.frame;
  }

  const GeneratorState& state() const { return state_; }
  void reset(const GeneratorState& s) { state_ = s; }

 private:
  const TemplateLibrary* lib_;
  GeneratorState state_;
};

}  // namespace prior
