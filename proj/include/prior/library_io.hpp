#pragma once

#include <algorithm>
#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "prior/gait_generator.hpp"
#include "prior/io_util.hpp"

// Template library on disk: a directory holding manifest.json plus one
// template document per nominal speed.
//
// manifest.json
//   format      "prior-template-library/1"
//   speeds      ascending nominal speeds (m/s)
//   files       template file names, parallel to `speeds`
//   stand_pose  12 joint angles (rad)
//   params      {standing_speed, standing_yaw, hysteresis, epsilon}
//
// template document
//   format          "prior-template/1"
//   source, nominal_speed, period, samples, wrap_residual
//   theta_grid      samples rows x 12
//   theta_delta_grid samples rows x 12
//   stance_ratio    [left, right]
//   stance_window   [[onset, offset], [onset, offset]] on the unit phase circle
//   stance_duration [left, right] (disambiguates full and empty windows)
namespace prior {

inline constexpr const char* kLibraryFormat = "prior-template-library/1";
inline constexpr const char* kTemplateFormat = "prior-template/1";

inline nlohmann::json template_to_json(const GaitTemplate& t) {
  nlohmann::json doc;
  doc["format"] = kTemplateFormat;
  doc["source"] = t.source;
  doc["nominal_speed"] = t.nominal_speed;
  doc["period"] = t.period;
  doc["samples"] = t.samples();
  doc["wrap_residual"] = t.wrap_residual;
  doc["theta_grid"] = t.theta_grid;
  doc["theta_delta_grid"] = t.theta_delta_grid;
  doc["stance_ratio"] = t.stance_ratio;
  for (std::size_t f = 0; f < 2; ++f) {
    doc["stance_window"].push_back({t.stance_window[f].onset, t.stance_window[f].offset()});
    doc["stance_duration"].push_back(t.stance_window[f].duration);
  }
  return doc;
}

inline GaitTemplate template_from_json(const nlohmann::json& doc) {
  GaitTemplate t;
  try {
    t.source = doc.value("source", std::string{});
    t.nominal_speed = doc.at("nominal_speed").get<double>();
    t.period = doc.at("period").get<double>();
    t.wrap_residual = doc.value("wrap_residual", 0.0);
    t.theta_grid = doc.at("theta_grid").get<std::vector<JointVector>>();
    t.theta_delta_grid = doc.at("theta_delta_grid").get<std::vector<JointVector>>();
    t.stance_ratio = doc.at("stance_ratio").get<std::array<double, 2>>();
    const auto windows = doc.at("stance_window").get<std::vector<std::array<double, 2>>>();
    const auto durations = doc.at("stance_duration").get<std::vector<double>>();
    if (windows.size() != 2 || durations.size() != 2) {
      throw FormatError("stance_window", "expected two stance windows");
    }
    for (std::size_t f = 0; f < 2; ++f) t.stance_window[f] = {windows[f][0], durations[f]};
  } catch (const nlohmann::json::exception& e) {
    throw FormatError("template", std::string("malformed template document: ") + e.what());
  }
  t.validate();
  return t;
}

inline void write_library(const std::filesystem::path& dir, const TemplateLibrary& lib) {
  lib.validate();
  nlohmann::json manifest;
  manifest["format"] = kLibraryFormat;
  manifest["speeds"] = nlohmann::json::array();
  manifest["files"] = nlohmann::json::array();
  for (std::size_t i = 0; i < lib.templates.size(); ++i) {
    const std::string file = "template_" + std::to_string(i) + ".json";
    io::write_atomic(dir / file, template_to_json(lib.templates[i]).dump(1));
    manifest["speeds"].push_back(lib.templates[i].nominal_speed);
    manifest["files"].push_back(file);
  }
  manifest["stand_pose"] = lib.stand_pose;
  manifest["params"] = {{"standing_speed", lib.params.standing_speed},
                        {"standing_yaw", lib.params.standing_yaw},
                        {"hysteresis", lib.params.hysteresis},
                        {"epsilon", lib.params.epsilon}};
  io::write_atomic(dir / "manifest.json", manifest.dump(1));
}

inline TemplateLibrary load_library(const std::filesystem::path& dir) {
  const auto manifest_path = dir / "manifest.json";
  if (!std::filesystem::exists(manifest_path)) {
    throw FormatError("manifest", "missing file: " + manifest_path.string());
  }
  TemplateLibrary lib;
  nlohmann::json manifest;
  try {
    manifest = nlohmann::json::parse(io::read_text(manifest_path));
    const auto files = manifest.at("files").get<std::vector<std::string>>();
    const auto speeds = manifest.at("speeds").get<std::vector<double>>();
    if (files.size() != speeds.size()) throw FormatError("files", "manifest files/speeds length mismatch");
    for (std::size_t i = 0; i < files.size(); ++i) {
      auto t = template_from_json(nlohmann::json::parse(io::read_text(dir / files[i])));
      if (t.nominal_speed != speeds[i]) {
        throw FormatError("speeds", "manifest speed disagrees with " + files[i]);
      }
      lib.templates.push_back(std::move(t));
    }
    lib.stand_pose = manifest.at("stand_pose").get<JointVector>();
    if (manifest.contains("params")) {
      const auto& p = manifest["params"];
      lib.params.standing_speed = p.value("standing_speed", lib.params.standing_speed);
      lib.params.standing_yaw = p.value("standing_yaw", lib.params.standing_yaw);
      lib.params.hysteresis = p.value("hysteresis", lib.params.hysteresis);
      lib.params.epsilon = p.value("epsilon", lib.params.epsilon);
    }
  } catch (const nlohmann::json::exception& e) {
    throw FormatError("manifest", std::string("malformed template library: ") + e.what());
  }
  lib.validate();
  return lib;
}

// Sorts by speed; duplicate speeds are an error.
inline TemplateLibrary make_library(std::vector<GaitTemplate> templates, const JointVector& stand_pose,
                                    const GeneratorParams& params = {}) {
  std::sort(templates.begin(), templates.end(),
            [](const GaitTemplate& a, const GaitTemplate& b) { return a.nominal_speed < b.nominal_speed; });
  TemplateLibrary lib{std::move(templates), stand_pose, params};
  lib.validate();
  return lib;
}

}  // namespace prior
