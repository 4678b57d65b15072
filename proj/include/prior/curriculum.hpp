#pragma once

#include <algorithm>
#include <cstddef>
#include <numeric>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "prior/random.hpp"
#include "prior/types.hpp"

namespace prior {

enum class TerrainKind { PyramidStairs, InvertedStairs, Boxes, Plane };

inline const char* to_string(TerrainKind k) {
  switch (k) {
    case TerrainKind::PyramidStairs: return "pyramid_stairs";
    case TerrainKind::InvertedStairs: return "inverted_stairs";
    case TerrainKind::Boxes: return "boxes";
    case TerrainKind::Plane: return "plane";
  }
  return "unknown";
}

struct TerrainSpec {
  TerrainKind kind = TerrainKind::Plane;
  double lo = 0.0;  // level-controlled parameter range, m
  double hi = 0.0;
  double weight = 0.0;
  int num_levels = 10;
};

// Stair step height / box obstacle height ranges and sampling weights.
// Weights are unnormalized; they sum to 0.7.
inline std::vector<TerrainSpec> default_terrains(int num_levels = 10) {
  return {{TerrainKind::PyramidStairs, 0.05, 0.23, 0.2, num_levels},
          {TerrainKind::InvertedStairs, 0.05, 0.23, 0.2, num_levels},
          {TerrainKind::Boxes, 0.05, 0.20, 0.2, num_levels},
          {TerrainKind::Plane, 0.0, 0.0, 0.1, num_levels}};
}

inline void validate(const std::vector<TerrainSpec>& specs) {
  double sum = 0.0;
  for (const auto& s : specs) {
    if (!(s.lo <= s.hi)) throw DomainError("terrain range is inverted");
    if (!(s.weight >= 0.0)) throw DomainError("terrain weight must be non-negative");
    if (s.num_levels < 1) throw DomainError("terrain needs at least one level");
    sum += s.weight;
  }
  if (!(sum > 0.0)) throw DomainError("terrain weights are all zero");
}

// Index into `specs`, drawn with probability proportional to weight.
inline std::size_t sample_terrain(Rng& rng, const std::vector<TerrainSpec>& specs) {
  validate(specs);
  std::vector<double> w;
  w.reserve(specs.size());
  for (const auto& s : specs) w.push_back(s.weight);
  return std::discrete_distribution<std::size_t>(w.begin(), w.end())(rng);
}

// Linear in level; nullopt for the flat plane.
inline std::optional<double> level_param(const TerrainSpec& spec, int level) {
  if (level < 0 || level >= spec.num_levels) {
    throw DomainError("level " + std::to_string(level) + " outside [0, " + std::to_string(spec.num_levels) + ")");
  }
  if (spec.kind == TerrainKind::Plane) return std::nullopt;
  if (spec.num_levels == 1) return spec.lo;
  return spec.lo + (spec.hi - spec.lo) * static_cast<double>(level) / static_cast<double>(spec.num_levels - 1);
}

struct EpisodeOutcome {
  double traveled = 0.0;   // m
  double commanded = 0.0;  // m
  bool terminated_early = false;
};

struct LevelRule {
  double promote_frac = 0.8;
  double demote_frac = 0.4;
  bool graduation = true;  // top-level promotion re-enters at a random level
};

enum class LevelChange { Promote, Demote, Hold };

inline LevelChange classify(const EpisodeOutcome& e, const LevelRule& rule) {
  if (e.traveled < 0.0 || e.commanded < 0.0) throw DomainError("episode distances must be non-negative");
  if (!e.terminated_early && e.traveled >= rule.promote_frac * e.commanded) return LevelChange::Promote;
  if (e.traveled < rule.demote_frac * e.commanded) return LevelChange::Demote;
  return LevelChange::Hold;
}

inline int update_level(int level, int num_levels, const EpisodeOutcome& e, Rng& rng, const LevelRule& rule = {}) {
  switch (classify(e, rule)) {
    case LevelChange::Promote:
      if (level + 1 < num_levels) return level + 1;
      if (rule.graduation) return std::uniform_int_distribution<int>(0, num_levels - 1)(rng);
      return num_levels - 1;
    case LevelChange::Demote:
      return std::max(level - 1, 0);
    case LevelChange::Hold:
      break;
  }
  return level;
}

struct AgentCurriculum {
  std::size_t terrain = 0;  // index into the spec list
  int level = 0;
};

// Per-agent terrain and level. Each agent has a single writer; aggregate
// queries read a copy taken with snapshot().
class CurriculumState {
 public:
  CurriculumState(std::vector<TerrainSpec> specs, std::size_t num_agents, Rng& rng, int initial_level = 0)
      : specs_(std::move(specs)), agents_(num_agents) {
    validate(specs_);
    for (auto& a : agents_) {
      a.terrain = sample_terrain(rng, specs_);
      a.level = std::clamp(initial_level, 0, specs_[a.terrain].num_levels - 1);
    }
  }

  const std::vector<TerrainSpec>& specs() const { return specs_; }
  std::size_t size() const { return agents_.size(); }
  const AgentCurriculum& agent(std::size_t i) const { return agents_.at(i); }

  int update(std::size_t agent, const EpisodeOutcome& e, Rng& rng, const LevelRule& rule = {}) {
    auto& a = agents_.at(agent);
    a.level = update_level(a.level, specs_[a.terrain].num_levels, e, rng, rule);
    return a.level;
  }

  std::vector<AgentCurriculum> snapshot() const { return agents_; }

  double mean_level() const {
    if (agents_.empty()) return 0.0;
    double sum = 0.0;
    for (const auto& a : agents_) sum += a.level;
    return sum / static_cast<double>(agents_.size());
  }

 private:
  std::vector<TerrainSpec> specs_;
  std::vector<AgentCurriculum> agents_;
};

}  // namespace prior
