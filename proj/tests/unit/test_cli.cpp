#include <gtest/gtest.h>

#include <filesystem>
#include <sstream>

#include <json.hpp>

#include "commands.hpp"
#include "support/synthetic.hpp"

namespace prior::cli {
namespace {

fs::path scratch(const std::string& name) {
  auto dir = fs::temp_directory_path() / ("prior_cli_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

fs::path build_library(const std::string& name) {
  const auto dir = scratch(name);
  write_library(dir / "lib", testing::make_test_library());
  return dir / "lib";
}

TEST(CliPreprocess, ThreeSpeedsStandAndOneFailure) {
  const auto dir = scratch("preprocess");
  fs::create_directories(dir / "clips");
  const std::array<std::pair<double, std::size_t>, 3> walks{{{0.5, 100}, {1.0, 80}, {1.5, 64}}};
  for (const auto& [v, frames] : walks) {
    write_raw_clip(dir / "clips" / ("walk_" + std::to_string(frames) + ".json"),
                   testing::make_walk_clip({.speed = v, .cycle_frames = frames}));
  }
  auto stand = testing::make_walk_clip({.speed = 0.0, .amplitude = 0.0});
  write_raw_clip(dir / "clips" / "stand.json", stand);
  auto doc = nlohmann::json::parse(serialize_raw_clip(testing::make_walk_clip({.speed = 2.0})));
  doc["theta"].erase(11);
  io::write_atomic(dir / "clips" / "broken.json", doc.dump());

  PreprocessArgs a;
  a.clips_dir = (dir / "clips").string();
  a.out_dir = (dir / "lib").string();
  std::ostringstream log, err;
  EXPECT_EQ(cmd_preprocess(a, log, err), 1);
  EXPECT_NE(err.str().find("broken.json"), std::string::npos);

  const auto lib = load_library(dir / "lib");
  ASSERT_EQ(lib.templates.size(), 3u);
  EXPECT_EQ(lib.templates[0].nominal_speed, 0.5);
  EXPECT_NEAR(lib.templates[0].period, 1.0, 1e-12);
  EXPECT_NEAR(lib.templates[2].period, 0.64, 1e-12);
  EXPECT_EQ(lib.stand_pose, mean_pose(stand));

  const auto report = csv::Table::parse(io::read_text(dir / "lib" / "report.csv"));
  ASSERT_EQ(report.rows(), 5u);
  std::map<std::string, std::string> status;
  for (std::size_t r = 0; r < report.rows(); ++r) {
    status[report.text(r, report.column("clip"))] = report.text(r, report.column("status"));
  }
  EXPECT_EQ(status["broken.json"], "failed");
  EXPECT_EQ(status["stand.json"], "stand");
  EXPECT_EQ(status["walk_100.json"], "ok");
}

TEST(CliGen, ZeroCommandStands) {
  const auto lib_dir = build_library("gen_zero");
  GenArgs a;
  a.templates_dir = lib_dir.string();
  a.duration = 1.0;
  std::ostringstream out, err;
  ASSERT_EQ(cmd_gen(a, out, err), 0) << err.str();
  const auto t = csv::Table::parse(out.str());
  ASSERT_EQ(t.rows(), 50u);
  ASSERT_EQ(t.header(), trajectory_columns());
  for (std::size_t r = 0; r < t.rows(); ++r) {
    EXPECT_EQ(t.number(r, "phase"), 0.0);
    EXPECT_EQ(t.number(r, "theta_d_0"), 0.05);
    EXPECT_EQ(t.number(r, "dtheta_d_5"), 0.0);
    EXPECT_EQ(t.number(r, "r_l"), 1.0);
    EXPECT_EQ(t.number(r, "r_r"), 1.0);
  }
}

TEST(CliGen, MidSpeedBlendsAndIsDeterministic) {
  const auto lib_dir = build_library("gen_mid");
  GenArgs a;
  a.templates_dir = lib_dir.string();
  a.constant = {0.75, 0.0, 0.0};
  a.duration = 2.0;
  std::ostringstream first, second, err;
  ASSERT_EQ(cmd_gen(a, first, err), 0) << err.str();
  ASSERT_EQ(cmd_gen(a, second, err), 0);
  EXPECT_EQ(first.str(), second.str());
  const auto t = csv::Table::parse(first.str());
  EXPECT_NEAR(t.number(t.rows() - 1, "alpha"), 0.5, 1e-6);
  double prev = -1.0;
  int wraps = 0;
  for (std::size_t r = 0; r < t.rows(); ++r) {
    const double p = t.number(r, "phase");
    EXPECT_GE(p, 0.0);
    EXPECT_LT(p, 1.0);
    if (p < prev) ++wraps;
    prev = p;
  }
  EXPECT_EQ(wraps, 2);  // period 0.7 s over 2 s
}

TEST(CliGen, ProfileErrors) {
  EXPECT_THROW(parse_profile("t,vx\n0,0.5\n0,0.6\n"), FormatError);
  EXPECT_THROW(parse_profile("t,vy\n0,0.5\n"), FormatError);
  const auto p = parse_profile("t,vx\n0,0\n2,1\n");
  EXPECT_NEAR(p.at(1.0).vx, 0.5, 1e-15);
  EXPECT_EQ(p.at(5.0).vx, 1.0);
  GenArgs a;
  a.templates_dir = "/nonexistent";
  std::ostringstream out, err;
  EXPECT_EQ(cmd_gen(a, out, err), 1);
}

TEST(CliRewardEval, PerfectRolloutScoresGaitWeights) {
  const auto dir = scratch("reward");
  std::vector<RolloutRow> rows(20);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    auto& r = rows[i];
    r.t = 0.02 * static_cast<double>(i);
    for (std::size_t j = 0; j < kNumJoints; ++j) {
      r.snapshot.joint_pos[j] = r.reference.theta[j] = 0.01 * static_cast<double>(i + j);
      r.snapshot.joint_pos_delta[j] = r.reference.delta[j] = 0.01;
    }
    r.snapshot.command = {0.5, 0.0, 0.0};
    r.snapshot.base_lin_vel = {0.5, 0.0, 0.0};
    r.snapshot.feet[0].contact = true;
    r.snapshot.feet[1].height = 0.1;
  }
  io::write_atomic(dir / "rollout.csv", format_rollout(rows));
  const auto back = parse_rollout(io::read_text(dir / "rollout.csv"));
  ASSERT_EQ(back.size(), rows.size());
  EXPECT_EQ(back[7].snapshot.joint_pos, rows[7].snapshot.joint_pos);

  RewardEvalArgs a;
  a.rollout = (dir / "rollout.csv").string();
  std::ostringstream out, err;
  ASSERT_EQ(cmd_reward_eval(a, out, err), 0) << err.str();
  const auto t = csv::Table::parse(out.str());
  ASSERT_EQ(t.rows(), 20u);
  for (std::size_t r = 0; r < t.rows(); ++r) {
    EXPECT_EQ(t.number(r, "r_gait"), 0.25);
    EXPECT_EQ(t.number(r, "r_landing"), 0.0);
  }
  io::write_atomic(dir / "bad.csv", "t,phase\n0,0\n");
  a.rollout = (dir / "bad.csv").string();
  EXPECT_EQ(cmd_reward_eval(a, out, err), 1);
  EXPECT_NE(err.str().find("missing column"), std::string::npos);
}

TEST(CliResolution, DefaultAndSweep) {
  ResolutionArgs a;
  std::ostringstream out, err;
  ASSERT_EQ(cmd_resolution(a, out, err), 0);
  auto t = csv::Table::parse(out.str());
  ASSERT_EQ(t.rows(), 1u);
  EXPECT_NEAR(t.number(0, "r_v"), 0.0463, 5e-4);
  EXPECT_EQ(t.number(0, "feasible"), 1.0);
  EXPECT_EQ(t.number(0, "pareto"), 1.0);

  a.z0 = "0.6:1.0:0.2";
  a.height = "24,36,48";
  std::ostringstream sweep;
  ASSERT_EQ(cmd_resolution(a, sweep, err), 0);
  t = csv::Table::parse(sweep.str());
  EXPECT_EQ(t.rows(), 9u);
  EXPECT_EQ(parse_axis<double>("0.6:1.0:0.2", "z0").size(), 3u);
  EXPECT_THROW(parse_axis<int>("36.5", "height"), FormatError);
  EXPECT_THROW(parse_axis<double>("1:0:0.1", "z0"), FormatError);
}

TEST(CliCurriculum, ReplayIsDeterministic) {
  const auto dir = scratch("curriculum");
  std::string episodes = "agent,traveled,commanded,terminated\n";
  for (int i = 0; i < 300; ++i) {
    episodes += std::to_string(i % 10) + "," + std::to_string(i % 3 == 0 ? 2 : 9) + ",10," +
                std::to_string(i % 17 == 0 ? 1 : 0) + "\n";
  }
  io::write_atomic(dir / "episodes.csv", episodes);
  CurriculumSimArgs a;
  a.episodes = (dir / "episodes.csv").string();
  a.seed = 42;
  std::ostringstream first, second, err;
  ASSERT_EQ(cmd_curriculum_sim(a, first, err), 0) << err.str();
  ASSERT_EQ(cmd_curriculum_sim(a, second, err), 0);
  EXPECT_EQ(first.str(), second.str());
  const auto t = csv::Table::parse(first.str());
  ASSERT_EQ(t.rows(), 300u);
  for (std::size_t r = 0; r < t.rows(); ++r) {
    const double level = t.number(r, "level");
    EXPECT_GE(level, 0.0);
    EXPECT_LE(level, 9.0);
  }
}

TEST(CliBufferBench, PlannerRowsAndMetrics) {
  BufferBenchArgs a;
  a.buffer.num_envs = 8;
  a.steps = 20;
  a.threads = 2;
  a.budget_gb = {24.0};
  const auto plan = csv::Table::parse(planner_table(a));
  ASSERT_EQ(plan.rows(), 2u);
  EXPECT_EQ(plan.text(0, plan.column("strategy")), "GPU");
  EXPECT_EQ(plan.number(0, "max_n_env"), 512.0);
  EXPECT_EQ(plan.number(1, "max_n_env"), 1024.0);
  const auto m = run_buffer_bench(a);
  EXPECT_EQ(m.frames, 160u);
  EXPECT_EQ(m.high_water_frames, 8u * a.buffer.capacity());
}

TEST(CliRandomize, SeededTableIsReproducible) {
  const auto a = randomize_table(50, 7), b = randomize_table(50, 7), c = randomize_table(50, 8);
  EXPECT_EQ(a, b);
  EXPECT_NE(a, c);
  const auto t = csv::Table::parse(a);
  EXPECT_EQ(t.rows(), 50u);
  EXPECT_EQ(t.header().size(), 21u);
  for (std::size_t r = 0; r < t.rows(); ++r) {
    EXPECT_GE(t.number(r, "friction"), 0.2);
    EXPECT_LE(t.number(r, "friction"), 1.5);
  }
}

}  // namespace
}  // namespace prior::cli
