#include <cstdint>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "commands.hpp"
#include "prior/version.hpp"

namespace {

prior::Foot parse_foot(const std::string& s) {
  if (s == "left") return prior::Foot::Left;
  if (s == "right") return prior::Foot::Right;
  throw CLI::ValidationError("--reference-foot", "expected left or right");
}

}  // namespace

int main(int argc, char** argv) {
  using namespace prior::cli;

  CLI::App app{"Gait templates, reference generation, rewards and perception tooling"};
  app.set_version_flag("--version", std::string(prior::kVersionString));
  app.require_subcommand(1);
  // Layering: built-in defaults < --config file (TOML/INI, one [section] per subcommand) < flags.
  app.set_config("--config", "", "Configuration file");

  std::uint64_t seed = 0;
  std::string out;
  app.add_option("--seed", seed, "Seed for every stochastic output")->capture_default_str();
  app.add_option("--out", out, "Output file or directory (stdout when omitted for tables)");
  app.fallthrough();

  int rc = 0;

  // preprocess
  PreprocessArgs pre;
  std::string foot = "left";
  std::string nonperiodic = "reject";
  std::vector<double> stand_pose;
  auto* preprocess = app.add_subcommand("preprocess", "Distill raw clips into a template library");
  preprocess->add_option("--clips", pre.clips_dir, "Directory of clip documents")->required();
  preprocess->add_option("--report", pre.report, "Report CSV (default <out>/report.csv)");
  preprocess->add_option("--contact-threshold", pre.options.contact_threshold)->capture_default_str();
  preprocess->add_option("--reference-foot", foot)->capture_default_str();
  preprocess->add_option("--clip-range", pre.options.clip_range, "0-based cycle index")->capture_default_str();
  preprocess->add_option("--sigma", pre.options.smoothing_sigma, "Gaussian sigma in frames")->capture_default_str();
  preprocess->add_option("--samples", pre.options.resample.samples, "Phase grid size")->capture_default_str();
  preprocess->add_option("--wrap-tolerance", pre.options.resample.wrap_tolerance)->capture_default_str();
  preprocess->add_option("--on-nonperiodic", nonperiodic, "reject or warn")->capture_default_str();
  preprocess->add_option("--stand-pose", stand_pose, "12 joint angles")->expected(12);
  preprocess->add_option("--standing-speed", pre.params.standing_speed)->capture_default_str();
  preprocess->callback([&] {
    if (out.empty()) throw CLI::ValidationError("--out", "preprocess needs an output directory");
    pre.out_dir = out;
    pre.options.reference_foot = parse_foot(foot);
    if (nonperiodic != "reject" && nonperiodic != "warn") {
      throw CLI::ValidationError("--on-nonperiodic", "expected reject or warn");
    }
    pre.options.resample.on_nonperiodic =
        nonperiodic == "warn" ? prior::NonPeriodicPolicy::Warn : prior::NonPeriodicPolicy::Reject;
    if (!stand_pose.empty()) {
      prior::JointVector p{};
      std::copy(stand_pose.begin(), stand_pose.end(), p.begin());
      pre.stand_pose = p;
    }
    rc = cmd_preprocess(pre, std::cerr, std::cerr);
  });

  // gen
  GenArgs gen;
  auto* gen_cmd = app.add_subcommand("gen", "Generate a reference trajectory table");
  gen_cmd->add_option("--templates", gen.templates_dir, "Template library directory")->required();
  gen_cmd->add_option("--profile", gen.profile, "Command profile CSV (t,vx[,vy,wz])");
  gen_cmd->add_option("--vx", gen.constant.vx, "Constant command when no profile")->capture_default_str();
  gen_cmd->add_option("--vy", gen.constant.vy)->capture_default_str();
  gen_cmd->add_option("--wz", gen.constant.wz)->capture_default_str();
  gen_cmd->add_option("--dt", gen.dt)->capture_default_str();
  gen_cmd->add_option("--duration", gen.duration)->capture_default_str();
  gen_cmd->callback([&] {
    gen.out = out;
    rc = cmd_gen(gen, std::cout, std::cerr);
  });

  // reward-eval
  RewardEvalArgs rew;
  auto& g = rew.config.gait;
  auto& l = rew.config.landing;
  auto* reward = app.add_subcommand("reward-eval", "Per-step reward terms for a rollout table");
  reward->add_option("--rollout", rew.rollout, "Rollout CSV")->required();
  reward->add_option("--lambda-pos", g.lambda_pos)->capture_default_str();
  reward->add_option("--lambda-vel", g.lambda_vel)->capture_default_str();
  reward->add_option("--lambda-delta", g.lambda_delta)->capture_default_str();
  reward->add_option("--lambda-ankle", g.lambda_ankle)->capture_default_str();
  reward->add_option("--swing-height", l.swing_height)->capture_default_str();
  reward->add_option("--edge-margin", l.edge_margin)->capture_default_str();
  reward->add_option("--stumble-ratio", l.stumble_ratio)->capture_default_str();
  reward->callback([&] {
    rew.out = out;
    rc = cmd_reward_eval(rew, std::cout, std::cerr);
  });

  // resolution
  ResolutionArgs res;
  auto* resolution = app.add_subcommand("resolution", "Depth-camera vertical resolution and Pareto sweep");
  resolution->add_option("--z0", res.z0, "Mount height m (value, list a,b or range lo:hi:step)")->capture_default_str();
  resolution->add_option("--pitch", res.pitch, "Pitch, degrees")->capture_default_str();
  resolution->add_option("--fov", res.fov, "Vertical FOV, degrees")->capture_default_str();
  resolution->add_option("--height", res.height, "Image height px")->capture_default_str();
  resolution->add_option("--width", res.width, "Image width px")->capture_default_str();
  resolution->add_option("--feature-height", res.feature_height, "Smallest terrain feature, m")->capture_default_str();
  resolution->callback([&] {
    res.out = out;
    rc = cmd_resolution(res, std::cout, std::cerr);
  });

  // curriculum-sim
  CurriculumSimArgs cur;
  auto* curriculum = app.add_subcommand("curriculum-sim", "Replay episode outcomes through the terrain curriculum");
  curriculum->add_option("--episodes", cur.episodes, "CSV: agent,traveled,commanded[,terminated]")->required();
  curriculum->add_option("--levels", cur.num_levels)->capture_default_str();
  curriculum->add_option("--initial-level", cur.initial_level)->capture_default_str();
  curriculum->add_option("--promote", cur.rule.promote_frac)->capture_default_str();
  curriculum->add_option("--demote", cur.rule.demote_frac)->capture_default_str();
  curriculum->add_option("--graduation", cur.rule.graduation)->capture_default_str();
  curriculum->callback([&] {
    cur.out = out;
    cur.seed = seed;
    rc = cmd_curriculum_sim(cur, std::cout, std::cerr);
  });

  // buffer-bench
  BufferBenchArgs bench;
  auto* buffer = app.add_subcommand("buffer-bench", "Synthetic tiered-buffer workload and capacity planner");
  buffer->add_option("--envs", bench.buffer.num_envs)->capture_default_str();
  buffer->add_option("--steps", bench.steps)->capture_default_str();
  buffer->add_option("--rows", bench.buffer.rows)->capture_default_str();
  buffer->add_option("--cols", bench.buffer.cols)->capture_default_str();
  buffer->add_option("--history", bench.buffer.history)->capture_default_str();
  buffer->add_option("--slack", bench.buffer.slack)->capture_default_str();
  buffer->add_option("--threads", bench.threads)->capture_default_str();
  buffer->add_option("--budget-gb", bench.budget_gb, "Device budgets to plan for")->capture_default_str();
  buffer->add_option("--transient-mb", bench.transient_mb, "Per-env render buffer")->capture_default_str();
  buffer->add_option("--resident-mb", bench.resident_mb, "Per-env history if kept on device")->capture_default_str();
  buffer->add_option("--fixed-gb", bench.fixed_gb, "Fixed device overhead")->capture_default_str();
  buffer->add_option("--metrics", bench.metrics, "Bench metrics CSV (stdout when omitted)");
  buffer->callback([&] {
    bench.out = out;
    bench.seed = seed;
    rc = cmd_buffer_bench(bench, std::cout, std::cerr);
  });

  // randomize
  RandomizeArgs rnd;
  auto* randomize = app.add_subcommand("randomize", "Sample domain-randomization draws");
  randomize->add_option("--n", rnd.n, "Number of draws")->capture_default_str();
  randomize->callback([&] {
    rnd.out = out;
    rnd.seed = seed;
    rc = cmd_randomize(rnd, std::cout, std::cerr);
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  } catch (const std::exception& e) {
    std::cerr << e.what() << "\n";
    return 1;
  }
  return rc;
}
