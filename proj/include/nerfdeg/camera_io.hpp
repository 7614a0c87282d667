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

#include <bit>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <regex>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>
#include "nerfdeg/error.hpp"
#include "nerfdeg/geometry.hpp"

namespace nerfdeg {

/// Camera file contents: views plus the directory image paths are relative to.
struct SceneCameras {
  std::filesystem::path base_dir;
  std::vector<CameraView> views;

  std::filesystem::path image_path(const CameraView& v) const {
    const std::filesystem::path p(v.image_path);
    return p.is_absolute() ? p : base_dir / p;
  }
};

inline nlohmann::json camera_to_json(const CameraView& v) {
  nlohmann::json R = nlohmann::json::array();
  for (int r = 0; r < 3; ++r) {
    for (int c = 0; c < 3; ++c) R.push_back(v.rotation(r, c));
  }
  return {{"id", v.id},         {"file", v.image_path}, {"width", v.width},
          {"height", v.height}, {"fx", v.fx},           {"fy", v.fy},
          {"cx", v.cx},         {"cy", v.cy},           {"R", R},
          {"t", {v.center.x(), v.center.y(), v.center.z()}},
          {"near", v.near},     {"far", v.far}};
}

inline CameraView camera_from_json(const nlohmann::json& j) {
  CameraView v;
  j.at("id").get_to(v.id);
  j.at("file").get_to(v.image_path);
  j.at("width").get_to(v.width);
  j.at("height").get_to(v.height);
  j.at("fx").get_to(v.fx);
  j.at("fy").get_to(v.fy);
  j.at("cx").get_to(v.cx);
  j.at("cy").get_to(v.cy);
  const auto R = j.at("R").get<std::vector<double>>();
  const auto t = j.at("t").get<std::vector<double>>();
  detail::require(R.size() == 9, "camera R must hold 9 values");
  detail::require(t.size() == 3, "camera t must hold 3 values");
  for (int r = 0; r < 3; ++r) {
    for (int c = 0; c < 3; ++c) v.rotation(r, c) = R[static_cast<std::size_t>(r * 3 + c)];
  }
  v.center = Vec3(t[0], t[1], t[2]);
  j.at("near").get_to(v.near);
  j.at("far").get_to(v.far);
  validate(v);
  return v;
}

inline std::string scene_to_string(const std::vector<CameraView>& views) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& v : views) arr.push_back(camera_to_json(v));
  return nlohmann::json{{"views", arr}}.dump(2);
}

inline std::vector<CameraView> scene_from_string(const std::string& text) {
  try {
    const auto doc = nlohmann::json::parse(text);
    std::vector<CameraView> views;
    for (const auto& jv : doc.at("views")) views.push_back(camera_from_json(jv));
    return views;
  } catch (const nlohmann::json::exception& e) {
    throw ParameterError(std::string("malformed camera file: ") + e.what());
  }
}

inline std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

inline void write_text_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  out << text;
  if (!out) throw IoError("cannot write " + path.string());
}

inline SceneCameras load_scene(const std::filesystem::path& path) {
  SceneCameras scene;
  scene.base_dir = path.parent_path();
  scene.views = scene_from_string(read_text_file(path));
  return scene;
}

inline void save_scene(const std::filesystem::path& path, const std::vector<CameraView>& views) {
  write_text_file(path, scene_to_string(views) + "\n");
}

// ---------------------------------------------------------------------------
// LLFF poses_bounds

/// Values per camera in poses_bounds: a row-major 3x5 [R | t | (h, w, f)] block
/// followed by near and far depth bounds.
inline constexpr std::size_t kLlffRowLength = 17;

/// Parses little-endian float64 rows, either as a .npy array of shape (N, 17)
/// or as a headerless stream whose length is a multiple of 17 * 8 bytes.
inline std::vector<std::vector<double>> parse_poses_bounds(const std::string& bytes) {
  static_assert(std::endian::native == std::endian::little, "big-endian hosts are not supported");
  std::size_t offset = 0;
  static constexpr char kMagic[] = "\x93NUMPY";
  if (bytes.size() >= 10 && bytes.compare(0, 6, kMagic, 6) == 0) {
    const auto major = static_cast<unsigned char>(bytes[6]);
    std::size_t header_len = 0;
    std::size_t prefix = 0;
    if (major == 1) {
      header_len = static_cast<unsigned char>(bytes[8]) |
                   (static_cast<std::size_t>(static_cast<unsigned char>(bytes[9])) << 8);
      prefix = 10;
    } else {
      detail::require(bytes.size() >= 12, "truncated .npy header");
      for (int b = 0; b < 4; ++b) {
        header_len |= static_cast<std::size_t>(static_cast<unsigned char>(bytes[8 + b])) << (8 * b);
      }
      prefix = 12;
    }
    detail::require(bytes.size() >= prefix + header_len, "truncated .npy header");
    const std::string header = bytes.substr(prefix, header_len);
    detail::require(header.find("'<f8'") != std::string::npos, ".npy array must be little-endian float64");
    detail::require(header.find("'fortran_order': False") != std::string::npos,
                    ".npy array must be C-ordered");
    std::smatch m;
    static const std::regex shape_re(R"('shape':\s*\((\d+),\s*(\d+)\))");
    detail::require(std::regex_search(header, m, shape_re), ".npy array must be two-dimensional");
    detail::require(std::stoul(m[2]) == kLlffRowLength, "poses_bounds rows must hold 17 values");
    offset = prefix + header_len;
    detail::require(bytes.size() - offset == std::stoul(m[1]) * kLlffRowLength * sizeof(double),
                    ".npy payload size does not match its shape");
  }
  const std::size_t payload = bytes.size() - offset;
  detail::require(payload > 0 && payload % (kLlffRowLength * sizeof(double)) == 0,
                  "poses_bounds payload must be a whole number of 17 x float64 rows");
  const std::size_t rows = payload / (kLlffRowLength * sizeof(double));
  std::vector<std::vector<double>> out(rows, std::vector<double>(kLlffRowLength));
  for (std::size_t r = 0; r < rows; ++r) {
    std::memcpy(out[r].data(), bytes.data() + offset + r * kLlffRowLength * sizeof(double),
                kLlffRowLength * sizeof(double));
  }
  return out;
}

/// Converts LLFF rows into cameras. LLFF rotation columns are the camera's
/// (down, right, backwards) axes in world space; they are reordered to
/// (right, down, forward). The principal point is the image center.
inline std::vector<CameraView> cameras_from_llff(const std::vector<std::vector<double>>& rows,
                                                 const std::vector<std::string>& image_files) {
  detail::require(image_files.empty() || image_files.size() == rows.size(),
                  "number of image files does not match number of poses");
  std::vector<CameraView> views;
  for (std::size_t n = 0; n < rows.size(); ++n) {
    const auto& row = rows[n];
    auto at = [&](int r, int c) { return row[static_cast<std::size_t>(r * 5 + c)]; };
    CameraView v;
    v.id = static_cast<int>(n);
    v.image_path = image_files.empty() ? "view_" + std::to_string(n) + ".png" : image_files[n];
    v.height = static_cast<int>(std::lround(at(0, 4)));
    v.width = static_cast<int>(std::lround(at(1, 4)));
    v.fx = v.fy = at(2, 4);
    v.cx = 0.5 * v.width;
    v.cy = 0.5 * v.height;
    for (int r = 0; r < 3; ++r) {
      v.rotation(r, 0) = at(r, 1);
      v.rotation(r, 1) = at(r, 0);
      v.rotation(r, 2) = -at(r, 2);
      v.center[r] = at(r, 3);
    }
    v.near = row[15];
    v.far = row[16];
    validate(v);
    views.push_back(v);
  }
  return views;
}

}  // namespace nerfdeg
