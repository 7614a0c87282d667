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

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "nerfdeg/error.hpp"

namespace nerfdeg {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;

/// Pinhole camera. Camera frame follows the x-right, y-down, z-forward
/// convention; `rotation` maps camera-frame directions to world directions
/// and `center` is the camera origin in world units.
struct CameraView {
  int id = 0;
  std::string image_path;
  int width = 0;
  int height = 0;
  double fx = 1.0;
  double fy = 1.0;
  double cx = 0.0;
  double cy = 0.0;
  Mat3 rotation = Mat3::Identity();
  Vec3 center = Vec3::Zero();
  double near = 0.0;
  double far = 1.0;

  /// Unit world-space direction of the ray through pixel (u, v) = (column, row).
  Vec3 ray_direction(double u, double v) const {
    return (rotation * Vec3((u - cx) / fx, (v - cy) / fy, 1.0)).normalized();
  }

  Vec3 optical_axis() const { return rotation.col(2).normalized(); }
};

inline void validate(const CameraView& view) {
  detail::require(view.width > 0 && view.height > 0, "camera image size must be positive");
  detail::require(view.fx > 0.0 && view.fy > 0.0, "camera focal lengths must be positive");
  detail::require(view.near < view.far, "camera near bound must be below far bound");
  detail::require((view.rotation * view.rotation.transpose() - Mat3::Identity()).cwiseAbs().maxCoeff() <= 1e-6,
                  "camera rotation is not orthonormal");
}

struct SceneSphere {
  Vec3 center = Vec3::Zero();
  double radius = 1.0;
};

/// Overrides applied on top of the estimated sphere.
struct SphereOverrides {
  std::optional<Vec3> center;
  std::optional<double> radius;
};

inline constexpr double kMinSphereRadius = 1e-3;
inline constexpr double kSphereRadiusFactor = 0.75;

/// Scene proxy from the cameras alone: center is the mean of the mid-depth
/// points o + axis * (near + far) / 2; radius is 0.75 times the median
/// distance from that center to the mid-depth points, at least 1e-3.
inline SceneSphere estimate_scene_sphere(const std::vector<CameraView>& views,
                                         const SphereOverrides& overrides = {}) {
  detail::require(views.size() >= 2, "need at least two views to estimate the scene sphere");
  std::vector<Vec3> mids;
  mids.reserve(views.size());
  Vec3 sum = Vec3::Zero();
  for (const auto& v : views) {
    mids.push_back(v.center + v.optical_axis() * (0.5 * (v.near + v.far)));
    sum += mids.back();
  }
  SceneSphere sphere;
  sphere.center = overrides.center.value_or(sum / static_cast<double>(views.size()));

  std::vector<double> dist;
  dist.reserve(mids.size());
  for (const auto& m : mids) dist.push_back((m - sphere.center).norm());
  std::sort(dist.begin(), dist.end());
  const std::size_t n = dist.size();
  const double median = n % 2 ? dist[n / 2] : 0.5 * (dist[n / 2 - 1] + dist[n / 2]);
  sphere.radius = std::max(kMinSphereRadius, kSphereRadiusFactor * median);
  if (overrides.radius) {
    detail::require(*overrides.radius > 0.0, "sphere radius override must be positive");
    sphere.radius = *overrides.radius;
  }
  return sphere;
}

/// Ray/sphere hit points of one camera.
struct IntersectionSet {
  int view_id = 0;
  std::vector<Vec3> points;
};

inline constexpr int kDefaultRayGrid = 16;

/// First forward hit of the ray origin + t * dir (t > 0, dir unit length).
inline std::optional<Vec3> intersect_sphere(const Vec3& origin, const Vec3& dir,
                                            const SceneSphere& sphere) {
  const Vec3 oc = origin - sphere.center;
  const double b = oc.dot(dir);
  const double c = oc.squaredNorm() - sphere.radius * sphere.radius;
  const double disc = b * b - c;
  if (disc < 0.0) return std::nullopt;
  const double root = std::sqrt(disc);
  double t = -b - root;
  if (t <= 0.0) t = -b + root;  // origin inside the sphere
  if (t <= 0.0) return std::nullopt;
  return origin + t * dir;
}

/// Casts grid x grid rays through evenly spaced pixel centers and keeps the
/// near intersection of each ray that hits the sphere.
inline IntersectionSet shoot_intersections(const CameraView& view, const SceneSphere& sphere,
                                           int grid = kDefaultRayGrid) {
  detail::require(grid >= 2, "ray grid must be at least 2");
  detail::require(sphere.radius > 0.0, "sphere radius must be positive");
  IntersectionSet set;
  set.view_id = view.id;
  set.points.reserve(static_cast<std::size_t>(grid) * grid);
  for (int r = 0; r < grid; ++r) {
    const double v = (r + 0.5) * view.height / grid;
    for (int c = 0; c < grid; ++c) {
      const double u = (c + 0.5) * view.width / grid;
      if (auto p = intersect_sphere(view.center, view.ray_direction(u, v), sphere)) {
        set.points.push_back(*p);
      }
    }
  }
  return set;
}

}  // namespace nerfdeg
