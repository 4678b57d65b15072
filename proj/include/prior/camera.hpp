#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numbers>
#include <tuple>
#include <vector>

#include "prior/types.hpp"

namespace prior {

constexpr double deg_to_rad(double deg) { return deg * std::numbers::pi / 180.0; }
constexpr double rad_to_deg(double rad) { return rad * 180.0 / std::numbers::pi; }

// Downward-pitched depth camera over flat ground. Angles in radians.
struct CameraConfig {
  double mount_height = 0.8;  // z0, m
  double pitch = deg_to_rad(45.0);
  double vertical_fov = deg_to_rad(58.0);
  int height_px = 36;
  int width_px = 64;

  void validate() const {
    if (!(mount_height > 0.0)) throw DomainError("camera: mount height must be positive");
    if (!(pitch > 0.0 && pitch < std::numbers::pi / 2)) throw DomainError("camera: pitch must be in (0, pi/2)");
    if (!(vertical_fov > 0.0 && vertical_fov < std::numbers::pi)) {
      throw DomainError("camera: vertical fov must be in (0, pi)");
    }
    if (height_px < 1 || width_px < 1) throw DomainError("camera: image dims must be >= 1");
    if (!(pitch - vertical_fov / height_px > 0.0)) {
      throw DomainError("camera: pitch must exceed one pixel's angular size");
    }
  }
};

struct VerticalResolution {
  double meters_per_pixel = 0.0;
  double distance = 0.0;  // z0 / sin(pitch)
};

// Ground footprint of one pixel row along the optical axis:
//   r_v = z0 sin(beta/h) / (sin(alpha) sin(alpha - beta/h))
inline VerticalResolution vertical_resolution(const CameraConfig& cfg) {
  cfg.validate();
  const double pixel_angle = cfg.vertical_fov / cfg.height_px;
  const double r = cfg.mount_height * std::sin(pixel_angle) /
                   (std::sin(cfg.pitch) * std::sin(cfg.pitch - pixel_angle));
  return {r, cfg.mount_height / std::sin(cfg.pitch)};
}

// Same quantity written with the signed per-pixel angle delta = -beta/h.
inline double vertical_resolution_signed_form(const CameraConfig& cfg) {
  cfg.validate();
  const double delta = -cfg.vertical_fov / cfg.height_px;
  return cfg.mount_height * std::sin(-delta) / (std::sin(cfg.pitch) * std::sin(cfg.pitch + delta));
}

inline bool min_height_feasible(const CameraConfig& cfg, double feature_height) {
  return vertical_resolution(cfg).meters_per_pixel < feature_height;
}

// Sweep axes; angles in degrees at this interface.
struct SweepGrid {
  std::vector<double> mount_height{0.8};
  std::vector<double> pitch_deg{45.0};
  std::vector<double> vfov_deg{58.0};
  std::vector<int> height_px{36};
  std::vector<int> width_px{64};
};

struct SweepRow {
  double mount_height = 0.0;
  double pitch_deg = 0.0;
  double vfov_deg = 0.0;
  int height_px = 0;
  int width_px = 0;
  double meters_per_pixel = 0.0;
  double distance = 0.0;
  long long pixels = 0;
  bool pareto = false;
};

struct SweepResult {
  std::vector<SweepRow> rows;
  std::size_t skipped_invalid = 0;
};

// Marks rows not weakly dominated in (meters_per_pixel, pixels). Sorts rows
// into the canonical order: pixels, resolution, then config fields.
inline void mark_pareto(std::vector<SweepRow>& rows) {
  auto key = [](const SweepRow& r) {
    return std::tie(r.pixels, r.meters_per_pixel, r.mount_height, r.pitch_deg, r.vfov_deg, r.height_px,
                    r.width_px);
  };
  std::sort(rows.begin(), rows.end(), [&](const SweepRow& a, const SweepRow& b) { return key(a) < key(b); });
  double best_fewer = std::numeric_limits<double>::infinity();  // min r over strictly fewer pixels
  std::size_t i = 0;
  while (i < rows.size()) {
    std::size_t j = i;
    while (j < rows.size() && rows[j].pixels == rows[i].pixels) ++j;
    const double group_min = rows[i].meters_per_pixel;
    for (std::size_t k = i; k < j; ++k) {
      const double r = rows[k].meters_per_pixel;
      rows[k].pareto = r < best_fewer && r <= group_min;
    }
    best_fewer = std::min(best_fewer, group_min);
    i = j;
  }
}

inline SweepResult resolution_sweep(const SweepGrid& grid) {
  if (grid.mount_height.empty() || grid.pitch_deg.empty() || grid.vfov_deg.empty() || grid.height_px.empty() ||
      grid.width_px.empty()) {
    throw DomainError("resolution sweep: empty range");
  }
  SweepResult out;
  for (double z0 : grid.mount_height) {
    for (double pitch : grid.pitch_deg) {
      for (double fov : grid.vfov_deg) {
        for (int h : grid.height_px) {
          for (int w : grid.width_px) {
            const CameraConfig cfg{z0, deg_to_rad(pitch), deg_to_rad(fov), h, w};
            VerticalResolution res;
            try {
              res = vertical_resolution(cfg);
            } catch (const DomainError&) {
              ++out.skipped_invalid;
              continue;
            }
            out.rows.push_back({z0, pitch, fov, h, w, res.meters_per_pixel, res.distance,
                                static_cast<long long>(h) * w, false});
          }
        }
      }
    }
  }
  mark_pareto(out.rows);
  return out;
}

}  // namespace prior
