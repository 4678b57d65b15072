#pragma once

#include <algorithm>
#include <cmath>
#include <chrono>
#include <cstdint>
#include <filesystem>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <type_traits>
#include <vector>

#include "prior/batch.hpp"
#include "prior/camera.hpp"
#include "prior/clip_io.hpp"
#include "prior/csv.hpp"
#include "prior/curriculum.hpp"
#include "prior/library_io.hpp"
#include "prior/obs_buffer.hpp"
#include "prior/randomization.hpp"
#include "prior/reward_kernel.hpp"
#include "prior/rollout_io.hpp"

namespace prior::cli {

namespace fs = std::filesystem;

// Writes to `out` atomically, or to `fallback` when no path is given.
inline void emit(const std::string& content, const std::string& out, std::ostream& fallback) {
  if (out.empty() || out == "-") {
    fallback << content;
  } else {
    io::write_atomic(out, content);
  }
}

// ---------------------------------------------------------------- preprocess

struct PreprocessArgs {
  std::string clips_dir;
  std::string out_dir;
  std::string report;  // defaults to <out_dir>/report.csv
  PreprocessOptions options;
  GeneratorParams params;
  std::optional<JointVector> stand_pose;
};

inline int cmd_preprocess(const PreprocessArgs& a, std::ostream& log, std::ostream& err) {
  if (!fs::is_directory(a.clips_dir)) {
    err << "preprocess: not a directory: " << a.clips_dir << "\n";
    return 2;
  }
  std::vector<fs::path> files;
  for (const auto& e : fs::directory_iterator(a.clips_dir)) {
    if (e.is_regular_file() && e.path().extension() == ".json") files.push_back(e.path());
  }
  std::sort(files.begin(), files.end());

  csv::Writer report({"clip", "status", "cycles", "span_begin", "span_end", "period", "wrap_residual", "message"});
  std::vector<GaitTemplate> templates;
  std::optional<JointVector> stand = a.stand_pose;
  bool failed = false;
  for (const auto& path : files) {
    const std::string name = path.filename().string();
    try {
      const RawClip clip = load_raw_clip(path);
      if (std::abs(clip.nominal_velocity[0]) <= a.params.standing_speed) {
        if (!a.stand_pose) stand = mean_pose(clip);
        report.row(std::vector<std::string>{name, "stand", "0", "0", "0", "0", "0", "static posture"});
        continue;
      }
      auto result = preprocess_clip(clip, a.options);
      for (const auto& t : templates) {
        if (t.nominal_speed == result.gait.nominal_speed) {
          throw Error("duplicate nominal speed " + io::format_double(t.nominal_speed));
        }
      }
      report.row(std::vector<std::string>{
          name, "ok", std::to_string(result.cycle_count), std::to_string(result.span.begin),
          std::to_string(result.span.end), io::format_double(result.gait.period),
          io::format_double(result.gait.wrap_residual), ""});
      templates.push_back(std::move(result.gait));
    } catch (const std::exception& e) {
      failed = true;
      std::string msg = e.what();
      std::replace(msg.begin(), msg.end(), ',', ';');
      report.row(std::vector<std::string>{name, "failed", "0", "0", "0", "0", "0", msg});
      err << "preprocess: " << name << ": " << e.what() << "\n";
    }
  }

  if (!templates.empty()) {
    const auto lib = make_library(std::move(templates), stand.value_or(JointVector{}), a.params);
    write_library(a.out_dir, lib);
    log << "preprocess: wrote " << lib.templates.size() << " template(s) to " << a.out_dir << "\n";
  } else {
    err << "preprocess: no templates produced\n";
    failed = true;
  }
  io::write_atomic(a.report.empty() ? (fs::path(a.out_dir) / "report.csv") : fs::path(a.report), report.str());
  return failed ? 1 : 0;
}

// ---------------------------------------------------------------------- gen

struct CommandProfile {
  std::vector<double> t;
  std::vector<GaitCommand> cmd;

  // Linear between rows, held constant outside.
  GaitCommand at(double time) const {
    if (time <= t.front()) return cmd.front();
    if (time >= t.back()) return cmd.back();
    const auto hi = static_cast<std::size_t>(std::upper_bound(t.begin(), t.end(), time) - t.begin());
    const std::size_t lo = hi - 1;
    const double s = (time - t[lo]) / (t[hi] - t[lo]);
    auto lerp = [s](double a, double b) { return a + s * (b - a); };
    return {lerp(cmd[lo].vx, cmd[hi].vx), lerp(cmd[lo].vy, cmd[hi].vy), lerp(cmd[lo].wz, cmd[hi].wz)};
  }
};

inline CommandProfile parse_profile(const std::string& text) {
  const auto table = csv::Table::parse(text);
  CommandProfile p;
  for (std::size_t r = 0; r < table.rows(); ++r) {
    const double t = table.number(r, "t");
    if (!p.t.empty() && !(t > p.t.back())) throw FormatError("t", "profile times must be strictly increasing");
    p.t.push_back(t);
    p.cmd.push_back({table.number(r, "vx"), table.has("vy") ? table.number(r, "vy") : 0.0,
                     table.has("wz") ? table.number(r, "wz") : 0.0});
  }
  if (p.t.empty()) throw FormatError("profile", "command profile has no rows");
  return p;
}

inline std::vector<std::string> trajectory_columns() {
  std::vector<std::string> c = {"t", "phase", "alpha"};
  for (std::size_t j = 0; j < kNumJoints; ++j) c.push_back("theta_d_" + std::to_string(j));
  for (std::size_t j = 0; j < kNumJoints; ++j) c.push_back("dtheta_d_" + std::to_string(j));
  c.push_back("r_l");
  c.push_back("r_r");
  return c;
}

inline std::string generate_trajectory(const TemplateLibrary& lib, const CommandProfile& profile, double dt,
                                       double duration) {
  if (!(dt > 0.0)) throw DomainError("gen: dt must be positive");
  csv::Writer w(trajectory_columns());
  GeneratorState state = initial_state(lib);
  const auto steps = static_cast<std::size_t>(std::floor(duration / dt + 1e-9));
  std::vector<double> row;
  for (std::size_t i = 0; i < steps; ++i) {
    const double t = static_cast<double>(i) * dt;
    auto r = step(lib, state, profile.at(t), dt);
    state = r.state;
    row.assign({t, r.frame.phase, r.frame.alpha});
    row.insert(row.end(), r.frame.theta.begin(), r.frame.theta.end());
    row.insert(row.end(), r.frame.delta.begin(), r.frame.delta.end());
    row.push_back(r.frame.contact[0] ? 1.0 : 0.0);
    row.push_back(r.frame.contact[1] ? 1.0 : 0.0);
    w.row(row);
  }
  return w.str();
}

struct GenArgs {
  std::string templates_dir;
  std::string profile;  // CSV t,vx[,vy,wz]; empty means constant command
  GaitCommand constant{};
  double dt = 0.02;
  double duration = 10.0;
  std::string out;
};

inline int cmd_gen(const GenArgs& a, std::ostream& out, std::ostream& err) {
  try {
    const auto lib = load_library(a.templates_dir);
    CommandProfile profile;
    if (a.profile.empty()) {
      profile.t = {0.0};
      profile.cmd = {a.constant};
    } else {
      profile = parse_profile(io::read_text(a.profile));
    }
    emit(generate_trajectory(lib, profile, a.dt, a.duration), a.out, out);
    return 0;
  } catch (const std::exception& e) {
    err << "gen: " << e.what() << "\n";
    return 1;
  }
}

// -------------------------------------------------------------- reward-eval

inline std::vector<std::string> reward_columns() {
  return {"step",    "t",       "r_pos",   "r_vel",     "r_delta",   "r_ankle",    "r_gait", "air",
          "slide",   "dbl_air", "swing",   "stumble",   "edge_left", "edge_right", "r_landing", "total"};
}

inline std::string evaluate_rollout(const std::vector<RolloutRow>& rows, const RewardConfig& cfg) {
  csv::Writer w(reward_columns());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& s = rows[i].snapshot;
    const auto gait = gait_reward(s, rows[i].reference, {s.command[0], s.command[1], s.command[2]}, cfg.gait);
    const auto landing = landing_rewards(s, cfg.landing);
    const auto total = total_reward(gait, landing);
    std::vector<double> v = {static_cast<double>(i), rows[i].t};
    for (const auto& t : gait.terms) v.push_back(t.value);
    v.push_back(gait.total());
    for (const auto& t : landing.terms) v.push_back(t.value);
    v.push_back(landing.total());
    v.push_back(total.total);
    w.row(v);
  }
  return w.str();
}

struct RewardEvalArgs {
  std::string rollout;
  std::string out;
  RewardConfig config;
};

inline int cmd_reward_eval(const RewardEvalArgs& a, std::ostream& out, std::ostream& err) {
  try {
    emit(evaluate_rollout(parse_rollout(io::read_text(a.rollout)), a.config), a.out, out);
    return 0;
  } catch (const std::exception& e) {
    err << "reward-eval: " << e.what() << "\n";
    return 1;
  }
}

// --------------------------------------------------------------- resolution

// "v", "a,b,c" or "lo:hi:step" (inclusive).
template <typename T>
std::vector<T> parse_axis(const std::string& spec, const std::string& name) {
  std::vector<T> out;
  auto num = [&name](const std::string& s) { return io::parse_double(s, name); };
  auto push = [&out, &name](double v) {
    if constexpr (std::is_integral_v<T>) {
      if (v != std::floor(v)) throw FormatError(name, name + ": expected integer, got " + io::format_double(v));
    }
    out.push_back(static_cast<T>(v));
  };
  if (spec.find(':') != std::string::npos) {
    std::vector<std::string> parts;
    std::stringstream ss(spec);
    for (std::string p; std::getline(ss, p, ':');) parts.push_back(p);
    if (parts.size() != 3) throw FormatError(name, name + ": range must be lo:hi:step");
    const double lo = num(parts[0]), hi = num(parts[1]), stepv = num(parts[2]);
    if (!(stepv > 0.0) || hi < lo) throw FormatError(name, name + ": invalid range");
    const auto n = static_cast<std::size_t>(std::floor((hi - lo) / stepv + 1e-9));
    for (std::size_t i = 0; i <= n; ++i) push(lo + static_cast<double>(i) * stepv);
  } else {
    std::stringstream ss(spec);
    for (std::string p; std::getline(ss, p, ',');) push(num(p));
  }
  if (out.empty()) throw FormatError(name, name + ": empty range");
  return out;
}

struct ResolutionArgs {
  std::string z0 = "0.8";
  std::string pitch = "45";
  std::string fov = "58";
  std::string height = "36";
  std::string width = "64";
  double feature_height = 0.05;
  std::string out;
};

inline std::string format_sweep(const SweepResult& sweep, double feature_height) {
  csv::Writer w({"z0", "pitch_deg", "vfov_deg", "height", "width", "r_v", "distance", "pixels", "pareto", "feasible"});
  for (const auto& r : sweep.rows) {
    w.row(std::vector<double>{r.mount_height, r.pitch_deg, r.vfov_deg, static_cast<double>(r.height_px),
                              static_cast<double>(r.width_px), r.meters_per_pixel, r.distance,
                              static_cast<double>(r.pixels), r.pareto ? 1.0 : 0.0,
                              r.meters_per_pixel < feature_height ? 1.0 : 0.0});
  }
  return w.str();
}

inline int cmd_resolution(const ResolutionArgs& a, std::ostream& out, std::ostream& err) {
  try {
    SweepGrid grid;
    grid.mount_height = parse_axis<double>(a.z0, "z0");
    grid.pitch_deg = parse_axis<double>(a.pitch, "pitch");
    grid.vfov_deg = parse_axis<double>(a.fov, "fov");
    grid.height_px = parse_axis<int>(a.height, "height");
    grid.width_px = parse_axis<int>(a.width, "width");
    const auto sweep = resolution_sweep(grid);
    if (sweep.skipped_invalid) err << "resolution: skipped " << sweep.skipped_invalid << " invalid config(s)\n";
    if (sweep.rows.empty()) {
      err << "resolution: no valid configuration\n";
      return 1;
    }
    emit(format_sweep(sweep, a.feature_height), a.out, out);
    return 0;
  } catch (const std::exception& e) {
    err << "resolution: " << e.what() << "\n";
    return 1;
  }
}

// ----------------------------------------------------------- curriculum-sim

struct CurriculumSimArgs {
  std::string episodes;
  std::string out;
  int num_levels = 10;
  int initial_level = 0;
  LevelRule rule;
  std::uint64_t seed = 0;
};

inline std::string simulate_curriculum(const csv::Table& episodes, const CurriculumSimArgs& a) {
  std::size_t agents = 0;
  const std::size_t agent_col = episodes.column("agent");
  for (std::size_t r = 0; r < episodes.rows(); ++r) {
    const double id = episodes.number(r, agent_col);
    if (id < 0 || id != std::floor(id)) throw FormatError("agent", "agent ids must be non-negative integers");
    agents = std::max(agents, static_cast<std::size_t>(id) + 1);
  }
  Rng terrain_rng = make_rng(a.seed, 0);
  Rng level_rng = make_rng(a.seed, 1);
  CurriculumState state(default_terrains(a.num_levels), agents, terrain_rng, a.initial_level);
  const bool has_term = episodes.has("terminated");

  csv::Writer w({"episode", "agent", "terrain", "level", "param", "mean_level"});
  for (std::size_t r = 0; r < episodes.rows(); ++r) {
    const auto agent = static_cast<std::size_t>(episodes.number(r, agent_col));
    const EpisodeOutcome e{episodes.number(r, "traveled"), episodes.number(r, "commanded"),
                           has_term && episodes.number(r, "terminated") != 0.0};
    const int level = state.update(agent, e, level_rng, a.rule);
    const auto& spec = state.specs()[state.agent(agent).terrain];
    const auto param = level_param(spec, level);
    w.row(std::vector<std::string>{std::to_string(r), std::to_string(agent), to_string(spec.kind),
                                   std::to_string(level), param ? io::format_double(*param) : "",
                                   io::format_double(state.mean_level())});
  }
  return w.str();
}

inline int cmd_curriculum_sim(const CurriculumSimArgs& a, std::ostream& out, std::ostream& err) {
  try {
    emit(simulate_curriculum(csv::Table::parse(io::read_text(a.episodes)), a), a.out, out);
    return 0;
  } catch (const std::exception& e) {
    err << "curriculum-sim: " << e.what() << "\n";
    return 1;
  }
}

// ------------------------------------------------------------- buffer-bench

struct BufferBenchArgs {
  BufferConfig buffer{64, 36, 64, 2, 2};
  std::size_t steps = 200;
  std::size_t threads = 4;
  std::vector<double> budget_gb{24.0, 48.0};
  double transient_mb = 20.0;
  double resident_mb = 20.0;
  double fixed_gb = 4.0;
  std::string out;      // planner table
  std::string metrics;  // bench metrics; stdout when empty
  std::uint64_t seed = 0;
};

struct BenchMetrics {
  std::size_t frames = 0;
  double seconds = 0.0;
  std::size_t high_water_frames = 0;
  std::size_t high_water_bytes = 0;
  std::size_t device_transient_bytes = 0;
};

// Producers own disjoint env sets; each push is followed by a fetch.
inline BenchMetrics run_buffer_bench(const BufferBenchArgs& a) {
  TieredBuffer buffer(a.buffer);
  const std::size_t threads = std::max<std::size_t>(1, std::min(a.threads, a.buffer.num_envs));
  const auto start = std::chrono::steady_clock::now();
  std::vector<std::thread> pool;
  for (std::size_t t = 0; t < threads; ++t) {
    pool.emplace_back([&, t] {
      Rng rng = make_rng(a.seed, t);
      std::uniform_real_distribution<float> depth(0.2f, 3.0f);
      std::vector<float> frame(a.buffer.frame_size());
      for (std::size_t s = 0; s < a.steps; ++s) {
        for (std::size_t env = t; env < a.buffer.num_envs; env += threads) {
          for (float& v : frame) v = depth(rng);
          buffer.push(env, static_cast<std::int64_t>(s), frame);
          (void)buffer.fetch_stack(env);
        }
      }
    });
  }
  for (auto& th : pool) th.join();
  BenchMetrics m;
  m.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  m.frames = a.steps * a.buffer.num_envs;
  m.high_water_frames = buffer.high_water_frames();
  m.high_water_bytes = m.high_water_frames * a.buffer.frame_size() * sizeof(float);
  m.device_transient_bytes = buffer.device_transient_bytes();
  return m;
}

inline std::string planner_table(const BufferBenchArgs& a) {
  constexpr double kGiB = 1024.0 * 1024.0 * 1024.0;
  constexpr double kMiB = 1024.0 * 1024.0;
  csv::Writer w({"gpu_budget_gb", "strategy", "max_n_env"});
  for (double gb : a.budget_gb) {
    for (auto strategy : {MemoryStrategy::DeviceResident, MemoryStrategy::HostOffload}) {
      CapacityPlan p;
      p.budget = static_cast<std::uint64_t>(gb * kGiB);
      p.fixed_overhead = static_cast<std::uint64_t>(a.fixed_gb * kGiB);
      p.per_env_transient = static_cast<std::uint64_t>(a.transient_mb * kMiB);
      p.per_env_resident_device = static_cast<std::uint64_t>(a.resident_mb * kMiB);
      p.per_env_resident_host = p.per_env_resident_device;
      p.strategy = strategy;
      w.row(std::vector<std::string>{io::format_double(gb), to_string(strategy), std::to_string(plan_capacity(p))});
    }
  }
  return w.str();
}

inline int cmd_buffer_bench(const BufferBenchArgs& a, std::ostream& out, std::ostream& err) {
  try {
    const auto plan = planner_table(a);
    const auto m = run_buffer_bench(a);
    csv::Writer metrics({"envs", "steps", "frames", "seconds", "frames_per_s", "high_water_frames",
                         "high_water_bytes", "device_transient_bytes"});
    metrics.row(std::vector<double>{static_cast<double>(a.buffer.num_envs), static_cast<double>(a.steps),
                                    static_cast<double>(m.frames), m.seconds,
                                    m.seconds > 0.0 ? static_cast<double>(m.frames) / m.seconds : 0.0,
                                    static_cast<double>(m.high_water_frames), static_cast<double>(m.high_water_bytes),
                                    static_cast<double>(m.device_transient_bytes)});
    emit(metrics.str(), a.metrics, out);
    emit(plan, a.out, out);
    return 0;
  } catch (const std::exception& e) {
    err << "buffer-bench: " << e.what() << "\n";
    return 1;
  }
}

// ---------------------------------------------------------------- randomize

struct RandomizeArgs {
  std::size_t n = 1;
  std::uint64_t seed = 0;
  std::string out;
};

inline std::string randomize_table(std::size_t n, std::uint64_t seed) {
  Rng rng = make_rng(seed);
  std::vector<std::string> header = {"index"};
  for (const auto& f : fields(RandomizationDraw{})) header.push_back(f.name);
  csv::Writer w(header);
  for (std::size_t i = 0; i < n; ++i) {
    const auto d = sample_randomization(rng);
    std::vector<double> row = {static_cast<double>(i)};
    for (const auto& f : fields(d)) row.push_back(f.value);
    w.row(row);
  }
  return w.str();
}

inline int cmd_randomize(const RandomizeArgs& a, std::ostream& out, std::ostream& err) {
  try {
    emit(randomize_table(a.n, a.seed), a.out, out);
    return 0;
  } catch (const std::exception& e) {
    err << "randomize: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace prior::cli
