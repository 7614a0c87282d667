// Copyright 2026 The nerfdeg Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <filesystem>
#include <fstream>
#include <string>

#include <nlohmann/json.hpp>
#include "nerfdeg/degradation.hpp"
#include "nerfdeg/error.hpp"

namespace nerfdeg {

// nlohmann/json prints doubles with the shortest representation that parses
// back to the same value, so a serialized recipe replays bit-exactly.

inline void to_json(nlohmann::json& j, const OrientedMaskParams& p) {
  j = {{"c_i", p.center_i}, {"c_j", p.center_j}, {"sigma_i", p.sigma_i},
       {"sigma_j", p.sigma_j}, {"angle_deg", p.angle_deg}};
}

inline void from_json(const nlohmann::json& j, OrientedMaskParams& p) {
  j.at("c_i").get_to(p.center_i);
  j.at("c_j").get_to(p.center_j);
  j.at("sigma_i").get_to(p.sigma_i);
  j.at("sigma_j").get_to(p.sigma_j);
  j.at("angle_deg").get_to(p.angle_deg);
}

inline void to_json(nlohmann::json& j, const DegradationRecipe& r) {
  j = {
      {"seed", r.seed},
      {"height", r.height},
      {"width", r.width},
      {"sgn",
       {{"noise_sigma", r.sgn.noise_sigma},
        {"blur_sigma", r.sgn.blur_sigma},
        {"noise_plane_seed", r.sgn.noise_plane_seed},
        {"mask", r.sgn.mask},
        {"enabled", r.sgn.enabled}}},
      {"repos",
       {{"probability", r.repos.probability},
        {"offset_range", r.repos.offset_range},
        {"pixel_seed", r.repos.pixel_seed},
        {"mask", r.repos.mask},
        {"enabled", r.repos.enabled}}},
      {"ablur",
       {{"size", r.ablur.size},
        {"sigma_major", r.ablur.sigma_major},
        {"sigma_minor", r.ablur.sigma_minor},
        {"angle_deg", r.ablur.angle_deg},
        {"mask", r.ablur.mask},
        {"enabled", r.ablur.enabled}}},
      {"region_adaptive", r.region_adaptive},
  };
}

inline void from_json(const nlohmann::json& j, DegradationRecipe& r) {
  j.at("seed").get_to(r.seed);
  j.at("height").get_to(r.height);
  j.at("width").get_to(r.width);
  const auto& sgn = j.at("sgn");
  sgn.at("noise_sigma").get_to(r.sgn.noise_sigma);
  sgn.at("blur_sigma").get_to(r.sgn.blur_sigma);
  sgn.at("noise_plane_seed").get_to(r.sgn.noise_plane_seed);
  sgn.at("mask").get_to(r.sgn.mask);
  sgn.at("enabled").get_to(r.sgn.enabled);
  const auto& repos = j.at("repos");
  repos.at("probability").get_to(r.repos.probability);
  repos.at("offset_range").get_to(r.repos.offset_range);
  repos.at("pixel_seed").get_to(r.repos.pixel_seed);
  repos.at("mask").get_to(r.repos.mask);
  repos.at("enabled").get_to(r.repos.enabled);
  const auto& ablur = j.at("ablur");
  ablur.at("size").get_to(r.ablur.size);
  ablur.at("sigma_major").get_to(r.ablur.sigma_major);
  ablur.at("sigma_minor").get_to(r.ablur.sigma_minor);
  ablur.at("angle_deg").get_to(r.ablur.angle_deg);
  ablur.at("mask").get_to(r.ablur.mask);
  ablur.at("enabled").get_to(r.ablur.enabled);
  j.at("region_adaptive").get_to(r.region_adaptive);
}

inline std::string recipe_to_string(const DegradationRecipe& r, int indent = -1) {
  return nlohmann::json(r).dump(indent);
}

/// Parses a recipe document; malformed or incomplete input is a ParameterError.
inline DegradationRecipe recipe_from_string(const std::string& text) {
  try {
    return nlohmann::json::parse(text).get<DegradationRecipe>();
  } catch (const nlohmann::json::exception& e) {
    throw ParameterError(std::string("malformed recipe: ") + e.what());
  }
}

inline void save_recipe(const std::filesystem::path& path, const DegradationRecipe& r) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  out << recipe_to_string(r, 2) << '\n';
  if (!out) throw IoError("cannot write " + path.string());
}

inline DegradationRecipe load_recipe(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  const std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return recipe_from_string(text);
}

}  // namespace nerfdeg
