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

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "nerfdeg/error.hpp"

namespace nerfdeg {

/// Minimum height/width accepted by the degradation pipeline.
inline constexpr int kMinPipelineDim = 8;

/// H x W x 3 image holding intensities in [0, 1], row-major, channels interleaved.
class ImagePlane {
 public:
  static constexpr int kChannels = 3;

  ImagePlane() = default;

  ImagePlane(int height, int width, double fill = 0.0) : height_(height), width_(width) {
    detail::require(height > 0 && width > 0, "image dimensions must be positive");
    data_.assign(static_cast<std::size_t>(height) * width * kChannels, fill);
  }

  ImagePlane(int height, int width, std::vector<double> data)
      : height_(height), width_(width), data_(std::move(data)) {
    detail::require(height > 0 && width > 0, "image dimensions must be positive");
    detail::require(data_.size() == static_cast<std::size_t>(height) * width * kChannels,
                    "image data size does not match dimensions");
  }

  int height() const noexcept { return height_; }
  int width() const noexcept { return width_; }
  std::size_t size() const noexcept { return data_.size(); }
  bool empty() const noexcept { return data_.empty(); }

  double& at(int i, int j, int c) noexcept { return data_[index(i, j, c)]; }
  double at(int i, int j, int c) const noexcept { return data_[index(i, j, c)]; }

  /// Edge-replicating accessor.
  double clamped(int i, int j, int c) const noexcept {
    return at(std::clamp(i, 0, height_ - 1), std::clamp(j, 0, width_ - 1), c);
  }

  std::span<double> values() noexcept { return data_; }
  std::span<const double> values() const noexcept { return data_; }

  std::size_t index(int i, int j, int c) const noexcept {
    return (static_cast<std::size_t>(i) * width_ + j) * kChannels + c;
  }

  bool same_shape(const ImagePlane& other) const noexcept {
    return height_ == other.height_ && width_ == other.width_;
  }

  friend bool operator==(const ImagePlane&, const ImagePlane&) = default;

 private:
  int height_ = 0;
  int width_ = 0;
  std::vector<double> data_;
};

/// H x W single-channel weights in [0, 1].
class MaskPlane {
 public:
  MaskPlane() = default;

  MaskPlane(int height, int width, double fill = 0.0) : height_(height), width_(width) {
    detail::require(height > 0 && width > 0, "mask dimensions must be positive");
    detail::require(fill >= 0.0 && fill <= 1.0, "mask values must lie in [0, 1]");
    data_.assign(static_cast<std::size_t>(height) * width, fill);
  }

  int height() const noexcept { return height_; }
  int width() const noexcept { return width_; }

  double& at(int i, int j) noexcept { return data_[static_cast<std::size_t>(i) * width_ + j]; }
  double at(int i, int j) const noexcept {
    return data_[static_cast<std::size_t>(i) * width_ + j];
  }

  std::span<const double> values() const noexcept { return data_; }

 private:
  int height_ = 0;
  int width_ = 0;
  std::vector<double> data_;
};

inline void require_pipeline_dims(const ImagePlane& img) {
  detail::require(img.height() >= kMinPipelineDim && img.width() >= kMinPipelineDim,
                  "image must be at least 8x8, got " + std::to_string(img.height()) + "x" +
                      std::to_string(img.width()));
}

inline ImagePlane clamp_unit(ImagePlane img) {
  for (double& v : img.values()) v = std::clamp(v, 0.0, 1.0);
  return img;
}

}  // namespace nerfdeg
