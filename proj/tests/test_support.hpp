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

// Fixtures and brute-force reference implementations shared by the test
// binaries. Nothing here calls into the library code it is used to check.

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <map>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include <unistd.h>

#include "nerfdeg/nerfdeg.hpp"

namespace nerfdeg::testing {

namespace fs = std::filesystem;

inline fs::path data_dir() { return fs::path(NERFDEG_TEST_DATA_DIR); }

inline std::vector<fs::path> natural_images() {
  return {data_dir() / "coffee_504x376.png", data_dir() / "chelsea_451x300.png",
          data_dir() / "astronaut_256.png"};
}

/// Fresh empty directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    static std::uint64_t counter = 0;
    path_ = fs::temp_directory_path() /
            ("nerfdeg_" + tag + "_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
    fs::remove_all(path_);
    fs::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const fs::path& path() const { return path_; }
  fs::path operator/(const std::string& name) const { return path_ / name; }

 private:
  fs::path path_;
};

/// Every regular file under root, keyed by relative path.
inline std::map<std::string, std::string> read_tree(const fs::path& root) {
  std::map<std::string, std::string> files;
  for (const auto& e : fs::recursive_directory_iterator(root)) {
    if (!e.is_regular_file()) continue;
    std::ifstream in(e.path(), std::ios::binary);
    files[fs::relative(e.path(), root).string()] =
        std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
  }
  return files;
}

inline ImagePlane random_image(int h, int w, std::uint64_t seed, double lo = 0.0, double hi = 1.0) {
  std::mt19937_64 gen(seed);
  std::uniform_real_distribution<double> dist(lo, hi);
  ImagePlane img(h, w);
  for (double& v : img.values()) v = dist(gen);
  return img;
}

inline ImagePlane ramp_image(int h, int w) {
  ImagePlane img(h, w);
  const double denom = static_cast<double>(h * w - 1);
  for (int i = 0; i < h; ++i) {
    for (int j = 0; j < w; ++j) {
      for (int c = 0; c < 3; ++c) img.at(i, j, c) = (i * w + j) / denom;
    }
  }
  return img;
}

inline ImagePlane constant_image(int h, int w, double v) { return ImagePlane(h, w, v); }

// ---------------------------------------------------------------------------
// Scalar oracles

/// Direct nested-loop correlation with replicate border, no clamping.
inline std::vector<double> oracle_convolve(const ImagePlane& img, const std::vector<double>& k, int size) {
  const int r = size / 2;
  std::vector<double> out(img.size());
  for (int i = 0; i < img.height(); ++i) {
    for (int j = 0; j < img.width(); ++j) {
      for (int c = 0; c < 3; ++c) {
        double s = 0.0;
        for (int u = 0; u < size; ++u) {
          for (int v = 0; v < size; ++v) {
            int si = i + u - r;
            int sj = j + v - r;
            si = si < 0 ? 0 : (si >= img.height() ? img.height() - 1 : si);
            sj = sj < 0 ? 0 : (sj >= img.width() ? img.width() - 1 : sj);
            s += k[static_cast<std::size_t>(u * size + v)] * img.at(si, sj, c);
          }
        }
        out[(static_cast<std::size_t>(i) * img.width() + j) * 3 + c] = s;
      }
    }
  }
  return out;
}

/// exp(-d^T S^-1 d / 2) with S built from the axis directions; d = (dj, -di)
/// in screen coordinates, first axis at angle_deg counter-clockwise.
inline double oracle_rotated_gaussian(double di, double dj, double s1, double s2, double angle_deg) {
  const double t = angle_deg * std::numbers::pi / 180.0;
  const double ux = std::cos(t), uy = std::sin(t);
  const double vx = -std::sin(t), vy = std::cos(t);
  const double a = s1 * s1 * ux * ux + s2 * s2 * vx * vx;
  const double b = s1 * s1 * ux * uy + s2 * s2 * vx * vy;
  const double d = s1 * s1 * uy * uy + s2 * s2 * vy * vy;
  const double det = a * d - b * b;
  const double x = dj, y = -di;
  const double q = (d * x * x - 2 * b * x * y + a * y * y) / det;
  return std::exp(-0.5 * q);
}

inline std::vector<double> oracle_kernel(int size, double s1, double s2, double angle_deg) {
  const int r = size / 2;
  std::vector<double> w;
  double sum = 0.0;
  for (int i = -r; i <= r; ++i) {
    for (int j = -r; j <= r; ++j) {
      w.push_back(oracle_rotated_gaussian(i, j, s1, s2, angle_deg));
      sum += w.back();
    }
  }
  for (double& x : w) x /= sum;
  return w;
}

inline double oracle_psnr(const ImagePlane& a, const ImagePlane& b) {
  double sum = 0.0;
  for (int i = 0; i < a.height(); ++i) {
    for (int j = 0; j < a.width(); ++j) {
      for (int c = 0; c < 3; ++c) {
        const double d = a.at(i, j, c) - b.at(i, j, c);
        sum += d * d;
      }
    }
  }
  const double m = sum / (3.0 * a.height() * a.width());
  return m == 0.0 ? 99.0 : 10.0 * std::log10(1.0 / m);
}

/// Two-pass SSIM: weighted means first, then weighted central moments.
inline double oracle_ssim(const ImagePlane& a, const ImagePlane& b) {
  const int n = 11;
  std::vector<double> g(n * n);
  double gs = 0.0;
  for (int u = 0; u < n; ++u) {
    for (int v = 0; v < n; ++v) {
      g[u * n + v] = std::exp(-((u - 5) * (u - 5) + (v - 5) * (v - 5)) / (2 * 1.5 * 1.5));
      gs += g[u * n + v];
    }
  }
  for (double& x : g) x /= gs;
  auto luma = [](const ImagePlane& im, int i, int j) {
    return 0.299 * im.at(i, j, 0) + 0.587 * im.at(i, j, 1) + 0.114 * im.at(i, j, 2);
  };
  const double c1 = 1e-4, c2 = 9e-4;
  double total = 0.0;
  int count = 0;
  for (int i = 0; i + n <= a.height(); ++i) {
    for (int j = 0; j + n <= a.width(); ++j) {
      double mx = 0, my = 0;
      for (int u = 0; u < n; ++u) {
        for (int v = 0; v < n; ++v) {
          mx += g[u * n + v] * luma(a, i + u, j + v);
          my += g[u * n + v] * luma(b, i + u, j + v);
        }
      }
      double vx = 0, vy = 0, cov = 0;
      for (int u = 0; u < n; ++u) {
        for (int v = 0; v < n; ++v) {
          const double dx = luma(a, i + u, j + v) - mx;
          const double dy = luma(b, i + u, j + v) - my;
          vx += g[u * n + v] * dx * dx;
          vy += g[u * n + v] * dy * dy;
          cov += g[u * n + v] * dx * dy;
        }
      }
      total += (2 * mx * my + c1) * (2 * cov + c2) / ((mx * mx + my * my + c1) * (vx + vy + c2));
      ++count;
    }
  }
  return total / count;
}

/// Squared distance to the nearest point by linear scan.
inline double oracle_nearest2(const Vec3& p, const std::vector<Vec3>& pts) {
  double best = INFINITY;
  for (const auto& q : pts) {
    const double dx = p.x() - q.x(), dy = p.y() - q.y(), dz = p.z() - q.z();
    const double d = dx * dx + dy * dy + dz * dz;
    if (d < best) best = d;
  }
  return best;
}

inline double oracle_directed_cost(const std::vector<Vec3>& a, const std::vector<Vec3>& b) {
  double s = 0.0;
  for (const auto& p : a) s += oracle_nearest2(p, b);
  return s;
}

inline std::vector<Vec3> random_sphere_points(std::size_t n, std::uint64_t seed, double radius = 1.0) {
  std::mt19937_64 gen(seed);
  std::normal_distribution<double> nd;
  std::vector<Vec3> pts;
  for (std::size_t k = 0; k < n; ++k) {
    Vec3 v(nd(gen), nd(gen), nd(gen));
    pts.push_back(v.normalized() * radius);
  }
  return pts;
}

// ---------------------------------------------------------------------------
// Camera rigs

/// Camera at `center` looking at `target`, x-right / y-down / z-forward.
inline CameraView look_at(int id, const Vec3& center, const Vec3& target, const Vec3& world_up,
                          double near, double far) {
  CameraView v;
  v.id = id;
  v.image_path = "view_" + std::to_string(id) + ".png";
  v.width = 64;
  v.height = 48;
  v.fx = v.fy = 60.0;
  v.cx = 32.0;
  v.cy = 24.0;
  const Vec3 z = (target - center).normalized();
  const Vec3 x = z.cross(world_up).normalized();  // right
  const Vec3 y = z.cross(x);                       // down
  v.rotation.col(0) = x;
  v.rotation.col(1) = y;
  v.rotation.col(2) = z;
  v.center = center;
  v.near = near;
  v.far = far;
  return v;
}

/// Eight cameras evenly spaced on a horizontal circle of radius 4, all
/// looking at the origin, with mid-depth exactly at the origin.
inline std::vector<CameraView> ring_rig(int n = 8, double ring_radius = 4.0) {
  std::vector<CameraView> views;
  for (int k = 0; k < n; ++k) {
    const double phi = 2.0 * std::numbers::pi * k / n;
    const Vec3 c(ring_radius * std::sin(phi), 0.0, ring_radius * std::cos(phi));
    views.push_back(look_at(k, c, Vec3::Zero(), Vec3(0, 1, 0), ring_radius - 1.0, ring_radius + 1.0));
  }
  return views;
}

inline SceneSphere ring_sphere() { return {Vec3::Zero(), 1.0}; }

/// Forward-facing grid of cameras in the z = 0 plane all looking along +z.
inline std::vector<CameraView> forward_facing_rig(int rows = 3, int cols = 4) {
  std::vector<CameraView> views;
  int id = 0;
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) {
      const Vec3 center(0.3 * c, 0.2 * r, 0.0);
      views.push_back(look_at(id++, center, center + Vec3(0, 0, 1), Vec3(0, 1, 0), 2.0, 10.0));
    }
  }
  return views;
}

inline CameraView rigid_transform(CameraView v, const Mat3& q, const Vec3& t) {
  v.rotation = q * v.rotation;
  v.center = q * v.center + t;
  return v;
}

}  // namespace nerfdeg::testing
