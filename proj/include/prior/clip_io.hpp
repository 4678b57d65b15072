#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "prior/io_util.hpp"
#include "prior/motion_clips.hpp"

// Clip document (UTF-8 JSON), column-oriented:
//
//   format          "prior-clip/1"
//   name            string
//   dt              seconds per frame
//   nominal_velocity [vx, vy, wz]
//   joint_names     12 strings
//   theta           12 columns x F frames (rad)
//   theta_dot       12 columns x F frames (rad/s)
//   base_lin_vel    3 columns x F frames (m/s)
//   base_ang_vel    3 columns x F frames (rad/s)
//   contact_mu      {"left": 2 x F, "right": 2 x F} (m, foot frame)
//   contact_sigma   {"left": F, "right": F} (m)
namespace prior {

inline constexpr const char* kClipFormat = "prior-clip/1";

namespace detail {

using nlohmann::json;

inline const json& require(const json& doc, const std::string& field) {
  if (!doc.is_object() || !doc.contains(field)) throw FormatError(field, "missing field: " + field);
  return doc.at(field);
}

inline std::vector<double> number_array(const json& node, const std::string& field) {
  if (!node.is_array()) throw FormatError(field, "malformed field: " + field + " (expected array)");
  std::vector<double> out;
  out.reserve(node.size());
  for (const auto& v : node) {
    if (!v.is_number()) throw FormatError(field, "malformed field: " + field + " (non-numeric entry)");
    out.push_back(v.get<double>());
  }
  return out;
}

// columns x frames; `count_error` is thrown when the column count is wrong.
inline std::vector<std::vector<double>> columns(const json& node, const std::string& field,
                                                std::size_t expected_columns,
                                                const std::string& count_error) {
  if (!node.is_array()) throw FormatError(field, "malformed field: " + field + " (expected array)");
  if (node.size() != expected_columns) throw FormatError(field, count_error);
  std::vector<std::vector<double>> cols;
  for (const auto& c : node) cols.push_back(number_array(c, field));
  return cols;
}

inline void check_frames(const std::vector<std::vector<double>>& cols, std::size_t frames,
                         const std::string& field) {
  for (const auto& c : cols) {
    if (c.size() != frames) throw FormatError(field, "frame count mismatch: " + field);
  }
}

template <std::size_t N>
std::vector<std::array<double, N>> to_rows(const std::vector<std::vector<double>>& cols,
                                           std::size_t frames) {
  std::vector<std::array<double, N>> rows(frames);
  for (std::size_t f = 0; f < frames; ++f) {
    for (std::size_t c = 0; c < N; ++c) rows[f][c] = cols[c][f];
  }
  return rows;
}

template <std::size_t N>
json to_columns(const std::vector<std::array<double, N>>& rows) {
  json cols = json::array();
  for (std::size_t c = 0; c < N; ++c) {
    json col = json::array();
    for (const auto& r : rows) col.push_back(r[c]);
    cols.push_back(std::move(col));
  }
  return cols;
}

}  // namespace detail

inline RawClip parse_raw_clip(const std::string& text) {
  using detail::json;
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw FormatError("document", std::string("malformed clip document: ") + e.what());
  }
  RawClip clip;
  const auto& name = detail::require(doc, "name");
  if (!name.is_string()) throw FormatError("name", "malformed field: name");
  clip.name = name.get<std::string>();

  const auto& dt = detail::require(doc, "dt");
  if (!dt.is_number()) throw FormatError("dt", "malformed field: dt");
  clip.dt = dt.get<double>();
  if (!(clip.dt > 0.0)) throw FormatError("dt", "malformed field: dt (must be positive)");

  const auto nv = detail::number_array(detail::require(doc, "nominal_velocity"), "nominal_velocity");
  if (nv.size() != 3) throw FormatError("nominal_velocity", "malformed field: nominal_velocity (expected 3)");
  clip.nominal_velocity = {nv[0], nv[1], nv[2]};

  const auto& names = detail::require(doc, "joint_names");
  if (!names.is_array()) throw FormatError("joint_names", "malformed field: joint_names");
  for (const auto& n : names) {
    if (!n.is_string()) throw FormatError("joint_names", "malformed field: joint_names");
    clip.joint_names.push_back(n.get<std::string>());
  }
  if (clip.joint_names.size() != kNumJoints) throw FormatError("joint_names", "expected 12 joints");

  const auto theta = detail::columns(detail::require(doc, "theta"), "theta", kNumJoints, "expected 12 joints");
  const std::size_t frames = theta.front().size();
  detail::check_frames(theta, frames, "theta");
  if (frames < 2) throw FormatError("theta", "clip needs at least 2 frames");

  const auto theta_dot =
      detail::columns(detail::require(doc, "theta_dot"), "theta_dot", kNumJoints, "expected 12 joints");
  detail::check_frames(theta_dot, frames, "theta_dot");
  const auto lin = detail::columns(detail::require(doc, "base_lin_vel"), "base_lin_vel", 3,
                                   "malformed field: base_lin_vel (expected 3 columns)");
  detail::check_frames(lin, frames, "base_lin_vel");
  const auto ang = detail::columns(detail::require(doc, "base_ang_vel"), "base_ang_vel", 3,
                                   "malformed field: base_ang_vel (expected 3 columns)");
  detail::check_frames(ang, frames, "base_ang_vel");

  clip.theta = detail::to_rows<kNumJoints>(theta, frames);
  clip.theta_dot = detail::to_rows<kNumJoints>(theta_dot, frames);
  clip.base_lin_vel = detail::to_rows<3>(lin, frames);
  clip.base_ang_vel = detail::to_rows<3>(ang, frames);

  const auto& mu = detail::require(doc, "contact_mu");
  const auto& sigma = detail::require(doc, "contact_sigma");
  for (Foot foot : kFeet) {
    const std::string key = to_string(foot);
    const auto m = detail::columns(detail::require(mu, key), "contact_mu", 2,
                                   "malformed field: contact_mu (expected 2 columns)");
    for (const auto& c : m) {
      if (c.size() != frames) throw FormatError("contact", "frame count mismatch: contact");
    }
    auto s = detail::number_array(detail::require(sigma, key), "contact_sigma");
    if (s.size() != frames) throw FormatError("contact", "frame count mismatch: contact");
    auto& track = clip.contact[index(foot)];
    track.mu = detail::to_rows<2>(m, frames);
    track.sigma = std::move(s);
  }
  clip.validate();
  return clip;
}

inline RawClip load_raw_clip(const std::filesystem::path& path) {
  if (!std::filesystem::exists(path)) throw FormatError("path", "missing file: " + path.string());
  return parse_raw_clip(io::read_text(path));
}

inline std::string serialize_raw_clip(const RawClip& clip) {
  using detail::json;
  json doc;
  doc["format"] = kClipFormat;
  doc["name"] = clip.name;
  doc["dt"] = clip.dt;
  doc["nominal_velocity"] = clip.nominal_velocity;
  doc["joint_names"] = clip.joint_names;
  doc["theta"] = detail::to_columns(clip.theta);
  doc["theta_dot"] = detail::to_columns(clip.theta_dot);
  doc["base_lin_vel"] = detail::to_columns(clip.base_lin_vel);
  doc["base_ang_vel"] = detail::to_columns(clip.base_ang_vel);
  for (Foot foot : kFeet) {
    const auto& track = clip.contact[index(foot)];
    doc["contact_mu"][to_string(foot)] = detail::to_columns(track.mu);
    doc["contact_sigma"][to_string(foot)] = track.sigma;
  }
  return doc.dump(1);
}

inline void write_raw_clip(const std::filesystem::path& path, const RawClip& clip) {
  io::write_atomic(path, serialize_raw_clip(clip));
}

}  // namespace prior
