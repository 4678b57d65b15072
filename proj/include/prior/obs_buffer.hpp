#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <mutex>
#include <shared_mutex>
#include <span>
#include <string>
#include <vector>

#include "prior/types.hpp"

namespace prior {

struct BufferConfig {
  std::size_t num_envs = 1;
  std::size_t rows = 36;
  std::size_t cols = 64;
  std::size_t history = 2;  // frames per stack
  std::size_t slack = 2;    // extra ring slots for producer/consumer skew

  std::size_t frame_size() const { return rows * cols; }
  std::size_t capacity() const { return history + slack; }
};

struct DepthStack {
  std::vector<std::vector<float>> frames;  // oldest first, exactly `history` entries
  std::vector<std::int64_t> steps;         // -1 marks a zero padding frame
  std::size_t padded = 0;

  bool is_padded() const { return padded > 0; }
};

// Host-tier history of depth frames per environment. One producer per
// environment, any number of readers; a fetch never observes a partial push.
class TieredBuffer {
 public:
  explicit TieredBuffer(const BufferConfig& cfg) : cfg_(cfg) {
    if (cfg.num_envs == 0 || cfg.history == 0 || cfg.frame_size() == 0) {
      throw DomainError("buffer: envs, history and frame dims must be positive");
    }
    envs_.reserve(cfg.num_envs);
    for (std::size_t i = 0; i < cfg.num_envs; ++i) envs_.push_back(std::make_unique<Ring>(cfg));
  }

  const BufferConfig& config() const { return cfg_; }

  void push(std::size_t env, std::int64_t step, std::span<const float> frame) {
    if (frame.size() != cfg_.frame_size()) {
      throw DimensionError("buffer: frame has " + std::to_string(frame.size()) + " values, expected " +
                           std::to_string(cfg_.frame_size()));
    }
    Ring& ring = lookup(env);
    std::unique_lock lock(ring.mutex);
    if (ring.count > 0 && step <= ring.last_step) {
      throw DomainError("buffer: non-monotonic step " + std::to_string(step) + " after " +
                        std::to_string(ring.last_step) + " for env " + std::to_string(env));
    }
    const std::size_t cap = cfg_.capacity();
    std::copy(frame.begin(), frame.end(),
              ring.storage.begin() + static_cast<std::ptrdiff_t>(ring.head * cfg_.frame_size()));
    ring.steps[ring.head] = step;
    ring.head = (ring.head + 1) % cap;
    ring.last_step = step;
    if (ring.count < cap) {
      ++ring.count;
      const std::size_t now = retained_.fetch_add(1) + 1;
      std::size_t prev = high_water_.load();
      while (now > prev && !high_water_.compare_exchange_weak(prev, now)) {
      }
    }
  }

  DepthStack fetch_stack(std::size_t env) const {
    const Ring& ring = lookup(env);
    std::shared_lock lock(ring.mutex);
    const std::size_t h = cfg_.history;
    const std::size_t cap = cfg_.capacity();
    const std::size_t avail = std::min(ring.count, h);
    DepthStack out;
    out.padded = h - avail;
    out.frames.reserve(h);
    out.steps.reserve(h);
    for (std::size_t i = 0; i < out.padded; ++i) {
      out.frames.emplace_back(cfg_.frame_size(), 0.0f);
      out.steps.push_back(-1);
    }
    for (std::size_t i = 0; i < avail; ++i) {
      const std::size_t slot = (ring.head + cap - avail + i) % cap;
      const auto begin = ring.storage.begin() + static_cast<std::ptrdiff_t>(slot * cfg_.frame_size());
      out.frames.emplace_back(begin, begin + static_cast<std::ptrdiff_t>(cfg_.frame_size()));
      out.steps.push_back(ring.steps[slot]);
    }
    return out;
  }

  std::size_t retained_frames() const { return retained_.load(); }
  std::size_t high_water_frames() const { return high_water_.load(); }
  std::size_t frames_held(std::size_t env) const {
    const Ring& ring = lookup(env);
    std::shared_lock lock(ring.mutex);
    return ring.count;
  }

  // Bytes charged to each tier: one transient render frame per env on the
  // device, retained history on the host.
  std::size_t device_transient_bytes() const { return cfg_.num_envs * cfg_.frame_size() * sizeof(float); }
  std::size_t host_resident_bytes() const { return retained_frames() * cfg_.frame_size() * sizeof(float); }

 private:
  struct Ring {
    explicit Ring(const BufferConfig& cfg)
        : storage(cfg.capacity() * cfg.frame_size(), 0.0f), steps(cfg.capacity(), -1) {}
    mutable std::shared_mutex mutex;
    std::vector<float> storage;
    std::vector<std::int64_t> steps;
    std::size_t head = 0;
    std::size_t count = 0;
    std::int64_t last_step = 0;
  };

  Ring& lookup(std::size_t env) {
    if (env >= envs_.size()) throw DomainError("buffer: unknown env " + std::to_string(env));
    return *envs_[env];
  }
  const Ring& lookup(std::size_t env) const {
    if (env >= envs_.size()) throw DomainError("buffer: unknown env " + std::to_string(env));
    return *envs_[env];
  }

  BufferConfig cfg_;
  std::vector<std::unique_ptr<Ring>> envs_;
  std::atomic<std::size_t> retained_{0};
  std::atomic<std::size_t> high_water_{0};
};

enum class MemoryStrategy { DeviceResident, HostOffload };

inline const char* to_string(MemoryStrategy s) {
  return s == MemoryStrategy::DeviceResident ? "GPU" : "CPU";
}

struct CapacityPlan {
  std::uint64_t budget = 0;                   // device bytes
  std::uint64_t per_env_transient = 0;        // render buffer, device
  std::uint64_t per_env_resident_device = 0;  // history kept on device
  std::uint64_t per_env_resident_host = 0;    // history kept on host
  std::uint64_t fixed_overhead = 0;
  MemoryStrategy strategy = MemoryStrategy::DeviceResident;
};

// Host memory is treated as unconstrained, so HostOffload charges only the
// transient render buffer against the device budget.
inline std::uint64_t plan_capacity(const CapacityPlan& p) {
  if (p.budget <= p.fixed_overhead) throw DomainError("capacity plan: budget does not exceed fixed overhead");
  const std::uint64_t per_env = p.strategy == MemoryStrategy::DeviceResident
                                    ? p.per_env_transient + p.per_env_resident_device
                                    : p.per_env_transient;
  if (per_env == 0) throw DomainError("capacity plan: per-env device cost must be positive");
  return (p.budget - p.fixed_overhead) / per_env;
}

// Device-resident history cost, as a multiple of the transient cost, implied
// by a pair of observed environment counts under the two strategies.
inline double implied_resident_ratio(double n_device_resident, double n_host_offload) {
  return n_host_offload / n_device_resident - 1.0;
}

}  // namespace prior
