#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "prior/types.hpp"

namespace prior {

// Per-foot contact record of a retargeted clip: contact center (foot frame)
// and contact range, one entry per frame.
struct FootContactTrack {
  std::vector<Vec2> mu;
  std::vector<double> sigma;
};

struct RawClip {
  std::string name;
  double dt = 0.0;
  Vec3 nominal_velocity{};  // (vx m/s, vy m/s, wz rad/s)
  std::vector<std::string> joint_names;
  std::vector<JointVector> theta;
  std::vector<JointVector> theta_dot;
  std::vector<Vec3> base_lin_vel;
  std::vector<Vec3> base_ang_vel;
  std::array<FootContactTrack, 2> contact;

  std::size_t frame_count() const { return theta.size(); }

  // Throws FormatError naming the first field that breaks an invariant.
  void validate() const {
    if (!(dt > 0.0) || !std::isfinite(dt)) throw FormatError("dt", "dt must be positive");
    if (joint_names.size() != kNumJoints) {
      throw FormatError("joint_names", "expected 12 joints");
    }
    const std::size_t n = theta.size();
    if (n < 2) throw FormatError("theta", "clip needs at least 2 frames");
    auto check = [n](std::size_t got, const char* field) {
      if (got != n) throw FormatError(field, std::string("frame count mismatch: ") + field);
    };
    check(theta_dot.size(), "theta_dot");
    check(base_lin_vel.size(), "base_lin_vel");
    check(base_ang_vel.size(), "base_ang_vel");
    for (const auto& track : contact) {
      check(track.mu.size(), "contact");
      check(track.sigma.size(), "contact");
    }
  }
};

struct FootTimeline {
  std::vector<bool> in_contact;
  std::vector<std::size_t> touchdowns;
  std::vector<std::size_t> liftoffs;
};

struct ContactTimeline {
  std::array<FootTimeline, 2> feet;

  const FootTimeline& operator[](Foot f) const { return feet[index(f)]; }
  FootTimeline& operator[](Foot f) { return feet[index(f)]; }
};

// Binarizes one contact-range sequence and extracts its edges. A foot that is
// already in contact at frame 0 has no touchdown there: only observed rising
// edges count.
inline FootTimeline detect_foot_contacts(std::span<const double> sigma, double range_threshold) {
  FootTimeline out;
  out.in_contact.resize(sigma.size());
  for (std::size_t f = 0; f < sigma.size(); ++f) {
    out.in_contact[f] = sigma[f] >= range_threshold;
    if (f == 0) continue;
    if (out.in_contact[f] && !out.in_contact[f - 1]) out.touchdowns.push_back(f);
    if (!out.in_contact[f] && out.in_contact[f - 1]) out.liftoffs.push_back(f);
  }
  return out;
}

inline ContactTimeline detect_contacts(const RawClip& clip, double range_threshold = 0.01) {
  if (!(range_threshold > 0.0)) throw DomainError("range_threshold must be positive");
  ContactTimeline timeline;
  for (Foot foot : kFeet) {
    timeline[foot] = detect_foot_contacts(clip.contact[index(foot)].sigma, range_threshold);
  }
  return timeline;
}

// Half-open frame interval [begin, end).
struct FrameSpan {
  std::size_t begin = 0;
  std::size_t end = 0;

  std::size_t length() const { return end - begin; }
  friend bool operator==(const FrameSpan&, const FrameSpan&) = default;
};

class InsufficientCycles : public Error {
 public:
  using Error::Error;
};

// One span per pair of consecutive touchdowns of the reference foot.
inline std::vector<FrameSpan> segment_cycles(const ContactTimeline& timeline,
                                             Foot reference_foot = Foot::Left) {
  const auto& td = timeline[reference_foot].touchdowns;
  if (td.size() < 2) {
    throw InsufficientCycles("insufficient cycles: " + std::string(to_string(reference_foot)) +
                             " foot has " + std::to_string(td.size()) + " touchdown(s)");
  }
  std::vector<FrameSpan> spans;
  spans.reserve(td.size() - 1);
  for (std::size_t i = 0; i + 1 < td.size(); ++i) spans.push_back({td[i], td[i + 1]});
  return spans;
}

struct ClipCycle {
  std::string source;
  FrameSpan span;
  double dt = 0.0;
  double period = 0.0;
  Vec3 nominal_velocity{};
  std::vector<JointVector> theta;
  std::vector<JointVector> theta_dot;
  std::vector<Vec3> base_lin_vel;
  std::vector<Vec3> base_ang_vel;
  std::array<FootContactTrack, 2> contact;

  std::size_t frame_count() const { return theta.size(); }
};

// Selects spans[clip_range] (0-based; 1 is the second cycle).
inline ClipCycle extract_cycle(const RawClip& clip, const std::vector<FrameSpan>& spans,
                               std::size_t clip_range) {
  if (clip_range >= spans.size()) {
    throw DomainError("clip_range " + std::to_string(clip_range) + " out of range (" +
                      std::to_string(spans.size()) + " cycles)");
  }
  const FrameSpan span = spans[clip_range];
  if (span.end > clip.frame_count() || span.begin >= span.end) {
    throw DomainError("cycle span outside clip bounds");
  }
  auto slice = [&span](const auto& v) {
    using V = std::decay_t<decltype(v)>;
    return V(v.begin() + static_cast<std::ptrdiff_t>(span.begin),
             v.begin() + static_cast<std::ptrdiff_t>(span.end));
  };
  ClipCycle cycle;
  cycle.source = clip.name;
  cycle.span = span;
  cycle.dt = clip.dt;
  cycle.period = static_cast<double>(span.length()) * clip.dt;
  cycle.nominal_velocity = clip.nominal_velocity;
  cycle.theta = slice(clip.theta);
  cycle.theta_dot = slice(clip.theta_dot);
  cycle.base_lin_vel = slice(clip.base_lin_vel);
  cycle.base_ang_vel = slice(clip.base_ang_vel);
  for (std::size_t f = 0; f < 2; ++f) {
    cycle.contact[f].mu = slice(clip.contact[f].mu);
    cycle.contact[f].sigma = slice(clip.contact[f].sigma);
  }
  return cycle;
}

// Normalized discrete Gaussian with radius ceil(3 sigma); sigma == 0 gives {1}.
inline std::vector<double> gaussian_kernel(double sigma) {
  if (!(sigma > 0.0)) return {1.0};
  const auto radius = static_cast<std::ptrdiff_t>(std::ceil(3.0 * sigma));
  std::vector<double> w(static_cast<std::size_t>(2 * radius + 1));
  double sum = 0.0;
  for (std::ptrdiff_t i = -radius; i <= radius; ++i) {
    const double x = static_cast<double>(i);
    w[static_cast<std::size_t>(i + radius)] = std::exp(-(x * x) / (2.0 * sigma * sigma));
    sum += w[static_cast<std::size_t>(i + radius)];
  }
  for (double& x : w) x /= sum;
  return w;
}

// Circular convolution with gaussian_kernel(sigma).
inline std::vector<double> smooth_gaussian(std::span<const double> series, double sigma) {
  if (sigma < 0.0) throw DomainError("sigma must be non-negative");
  const std::size_t n = series.size();
  if (n == 0 || sigma == 0.0) return {series.begin(), series.end()};
  const auto kernel = gaussian_kernel(sigma);
  const auto radius = static_cast<std::ptrdiff_t>(kernel.size() / 2);
  const auto sn = static_cast<std::ptrdiff_t>(n);
  std::vector<double> out(n, 0.0);
  for (std::ptrdiff_t i = 0; i < sn; ++i) {
    double acc = 0.0;
    for (std::ptrdiff_t k = -radius; k <= radius; ++k) {
      const std::ptrdiff_t j = ((i - k) % sn + sn) % sn;
      acc += kernel[static_cast<std::size_t>(k + radius)] * series[static_cast<std::size_t>(j)];
    }
    out[static_cast<std::size_t>(i)] = acc;
  }
  return out;
}

// Sum of |x[i+1] - x[i]| including the wrap term |x[0] - x[n-1]|.
inline double circular_total_variation(std::span<const double> series) {
  const std::size_t n = series.size();
  double tv = 0.0;
  for (std::size_t i = 0; i < n; ++i) tv += std::abs(series[(i + 1) % n] - series[i]);
  return tv;
}

// Smooths every joint column of the cycle in place.
inline void smooth_cycle(ClipCycle& cycle, double sigma) {
  std::vector<double> column(cycle.frame_count());
  for (std::size_t j = 0; j < kNumJoints; ++j) {
    for (std::size_t f = 0; f < column.size(); ++f) column[f] = cycle.theta[f][j];
    const auto smoothed = smooth_gaussian(column, sigma);
    for (std::size_t f = 0; f < column.size(); ++f) cycle.theta[f][j] = smoothed[f];
  }
}

// Circular phase interval [onset, onset + duration) on the unit circle.
struct StanceWindow {
  double onset = 0.0;
  double duration = 0.0;

  double offset() const {
    const double off = onset + duration;
    return off >= 1.0 ? off - 1.0 : off;
  }
  bool contains(double phase) const {
    if (duration >= 1.0) return true;
    double rel = phase - onset;
    rel -= std::floor(rel);
    return rel < duration;
  }
};

struct GaitTemplate {
  std::string source;
  double nominal_speed = 0.0;
  double period = 0.0;
  std::vector<JointVector> theta_grid;
  std::vector<JointVector> theta_delta_grid;
  std::array<double, 2> stance_ratio{};
  std::array<StanceWindow, 2> stance_window{};
  double wrap_residual = 0.0;

  std::size_t samples() const { return theta_grid.size(); }

  // Linear interpolation on the phase grid with wraparound.
  JointVector pose_at(double phase) const { return interpolate(theta_grid, phase); }
  JointVector delta_at(double phase) const { return interpolate(theta_delta_grid, phase); }

  void validate() const {
    const std::size_t k = theta_grid.size();
    if (k < 8) throw FormatError("theta_grid", "template needs at least 8 phase samples");
    if (theta_delta_grid.size() != k) {
      throw FormatError("theta_delta_grid", "frame count mismatch: theta_delta_grid");
    }
    if (!(period > 0.0) || !std::isfinite(period)) throw FormatError("period", "period must be positive");
    if (!std::isfinite(nominal_speed)) throw FormatError("nominal_speed", "non-finite nominal speed");
    for (std::size_t i = 0; i < k; ++i) {
      if (!all_finite(theta_grid[i])) throw FormatError("theta_grid", "non-finite row");
      if (!all_finite(theta_delta_grid[i])) throw FormatError("theta_delta_grid", "non-finite row");
    }
    for (std::size_t f = 0; f < 2; ++f) {
      if (!(stance_ratio[f] >= 0.0 && stance_ratio[f] <= 1.0)) {
        throw FormatError("stance_ratio", "stance ratio outside [0, 1]");
      }
      const auto& w = stance_window[f];
      if (!(w.onset >= 0.0 && w.onset < 1.0 && w.duration >= 0.0 && w.duration <= 1.0)) {
        throw FormatError("stance_window", "stance window outside the unit phase circle");
      }
    }
  }

 private:
  static JointVector interpolate(const std::vector<JointVector>& grid, double phase) {
    const std::size_t k = grid.size();
    const double x = (phase - std::floor(phase)) * static_cast<double>(k);
    auto i0 = static_cast<std::size_t>(x);
    const double t = x - static_cast<double>(i0);
    i0 %= k;
    const std::size_t i1 = (i0 + 1) % k;
    JointVector out;
    for (std::size_t j = 0; j < kNumJoints; ++j) {
      out[j] = (1.0 - t) * grid[i0][j] + t * grid[i1][j];
    }
    return out;
  }
};

class NonPeriodicCycle : public Error {
 public:
  using Error::Error;
};

enum class NonPeriodicPolicy { Reject, Warn };

struct ResampleOptions {
  std::size_t samples = 100;
  double contact_threshold = 0.01;
  double wrap_tolerance = 0.05;
  NonPeriodicPolicy on_nonperiodic = NonPeriodicPolicy::Reject;
};

// Longest circular run of `true` in flags, as a window over [0, 1).
inline StanceWindow longest_contact_window(const std::vector<bool>& flags) {
  const std::size_t n = flags.size();
  const auto count = static_cast<std::size_t>(std::count(flags.begin(), flags.end(), true));
  if (count == 0) return {0.0, 0.0};
  if (count == n) return {0.0, 1.0};
  // Start scanning right after a non-contact frame so no run is split by the wrap.
  std::size_t start = 0;
  while (flags[start]) ++start;
  std::size_t best_len = 0, best_begin = 0, run_len = 0, run_begin = 0;
  for (std::size_t s = 1; s <= n; ++s) {
    const std::size_t f = (start + s) % n;
    if (flags[f]) {
      if (run_len == 0) run_begin = f;
      ++run_len;
      if (run_len > best_len) {
        best_len = run_len;
        best_begin = run_begin;
      }
    } else {
      run_len = 0;
    }
  }
  const double dn = static_cast<double>(n);
  return {static_cast<double>(best_begin) / dn, static_cast<double>(best_len) / dn};
}

inline GaitTemplate resample_phase(const ClipCycle& cycle, const ResampleOptions& opts = {}) {
  const std::size_t k = opts.samples;
  const std::size_t n = cycle.frame_count();
  if (k < 8) throw DomainError("phase sample count must be at least 8");
  if (n < 2) throw DomainError("cycle needs at least 2 frames");

  GaitTemplate tpl;
  tpl.source = cycle.source;
  tpl.nominal_speed = std::abs(cycle.nominal_velocity[0]);
  tpl.period = cycle.period;
  tpl.theta_grid.resize(k);
  tpl.theta_delta_grid.resize(k);

  const double dn = static_cast<double>(n);
  const double dk = static_cast<double>(k);
  for (std::size_t i = 0; i < k; ++i) {
    const double x = static_cast<double>(i) * dn / dk;
    auto f0 = static_cast<std::size_t>(x);
    const double t = x - static_cast<double>(f0);
    f0 = std::min(f0, n - 1);
    const std::size_t f1 = (f0 + 1) % n;
    for (std::size_t j = 0; j < kNumJoints; ++j) {
      tpl.theta_grid[i][j] = (1.0 - t) * cycle.theta[f0][j] + t * cycle.theta[f1][j];
    }
  }
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = 0; j < kNumJoints; ++j) {
      tpl.theta_delta_grid[i][j] = tpl.theta_grid[(i + 1) % k][j] - tpl.theta_grid[i][j];
    }
  }

  double gap = 0.0;
  for (std::size_t j = 0; j < kNumJoints; ++j) {
    gap = std::max(gap, std::abs(tpl.theta_grid[k - 1][j] - tpl.theta_grid[0][j]));
  }
  tpl.wrap_residual = gap;
  if (gap > opts.wrap_tolerance && opts.on_nonperiodic == NonPeriodicPolicy::Reject) {
    throw NonPeriodicCycle("non-periodic cycle: wrap gap " + std::to_string(gap) + " rad exceeds " +
                           std::to_string(opts.wrap_tolerance));
  }

  for (std::size_t f = 0; f < 2; ++f) {
    const auto flags = detect_foot_contacts(cycle.contact[f].sigma, opts.contact_threshold).in_contact;
    const auto count = static_cast<double>(std::count(flags.begin(), flags.end(), true));
    tpl.stance_ratio[f] = count / dn;
    tpl.stance_window[f] = longest_contact_window(flags);
  }
  return tpl;
}

// Mean joint pose over all frames; used for static-posture clips.
inline JointVector mean_pose(const RawClip& clip) {
  JointVector acc{};
  for (const auto& row : clip.theta) {
    for (std::size_t j = 0; j < kNumJoints; ++j) acc[j] += row[j];
  }
  for (double& x : acc) x /= static_cast<double>(clip.frame_count());
  return acc;
}

struct PreprocessOptions {
  double contact_threshold = 0.01;
  Foot reference_foot = Foot::Left;
  std::size_t clip_range = 1;
  double smoothing_sigma = 2.0;
  ResampleOptions resample{};
};

struct PreprocessResult {
  GaitTemplate gait;
  std::size_t cycle_count = 0;
  FrameSpan span;
};

// detect -> segment -> extract -> smooth -> resample.
inline PreprocessResult preprocess_clip(const RawClip& clip, const PreprocessOptions& opts = {}) {
  clip.validate();
  const auto timeline = detect_contacts(clip, opts.contact_threshold);
  const auto spans = segment_cycles(timeline, opts.reference_foot);
  auto cycle = extract_cycle(clip, spans, opts.clip_range);
  smooth_cycle(cycle, opts.smoothing_sigma);
  auto resample = opts.resample;
  resample.contact_threshold = opts.contact_threshold;
  PreprocessResult result{resample_phase(cycle, resample), spans.size(), cycle.span};
  return result;
}

}  // namespace prior
