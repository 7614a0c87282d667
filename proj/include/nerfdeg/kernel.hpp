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

#include <cmath>
#include <cstddef>
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include "nerfdeg/error.hpp"

namespace nerfdeg {

/// Square, odd-sized, normalized, non-negative filter kernel.
class Kernel2D {
 public:
  /// Normalizes `weights` to unit sum. Throws ParameterError on bad size or weights.
  Kernel2D(int size, std::vector<double> weights) : size_(size), weights_(std::move(weights)) {
    detail::require(size >= 1 && size % 2 == 1, "kernel size must be odd");
    detail::require(weights_.size() == static_cast<std::size_t>(size) * size,
                    "kernel weight count must be size*size");
    double sum = 0.0;
    for (double w : weights_) {
      detail::require(std::isfinite(w) && w >= 0.0, "kernel weights must be finite and >= 0");
      sum += w;
    }
    detail::require(sum > 0.0, "kernel weights must not all be zero");
    for (double& w : weights_) w /= sum;
  }

  /// Single-tap identity kernel of the given odd size.
  static Kernel2D delta(int size) {
    std::vector<double> w(static_cast<std::size_t>(size) * size, 0.0);
    w[w.size() / 2] = 1.0;
    return Kernel2D(size, std::move(w));
  }

  int size() const noexcept { return size_; }
  int radius() const noexcept { return size_ / 2; }
  double at(int row, int col) const noexcept {
    return weights_[static_cast<std::size_t>(row) * size_ + col];
  }
  std::span<const double> weights() const noexcept { return weights_; }

 private:
  int size_;
  std::vector<double> weights_;
};

/// Unnormalized oriented Gaussian exp(-q/2) at offset (di, dj) = (row, column).
///
/// The first axis points at `angle_deg` counter-clockwise from the row
/// direction (increasing column index), on screen with rows growing
/// downwards; `sigma_first` is the spread along it and `sigma_second` the
/// spread along the perpendicular axis. Angle 0 puts the first axis along j.
inline double oriented_gaussian(double di, double dj, double sigma_first, double sigma_second,
                                double angle_deg) noexcept {
  const double theta = angle_deg * std::numbers::pi / 180.0;
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  // Screen coordinates: x = dj, y = -di so counter-clockwise is visual.
  const double along = dj * c - di * s;
  const double across = dj * s + di * c;
  const double q = along * along / (sigma_first * sigma_first) +
                   across * across / (sigma_second * sigma_second);
  return std::exp(-0.5 * q);
}

/// Normalized isotropic Gaussian, size odd in [3, 11].
inline Kernel2D make_isotropic_gaussian(int size, double sigma) {
  detail::require(size % 2 == 1 && size >= 3 && size <= 11,
                  "isotropic kernel size must be odd in [3, 11], got " + std::to_string(size));
  detail::require(std::isfinite(sigma) && sigma > 0.0, "kernel sigma must be positive");
  const int r = size / 2;
  std::vector<double> w;
  w.reserve(static_cast<std::size_t>(size) * size);
  for (int i = -r; i <= r; ++i) {
    for (int j = -r; j <= r; ++j) {
      w.push_back(std::exp(-static_cast<double>(i * i + j * j) / (2.0 * sigma * sigma)));
    }
  }
  return Kernel2D(size, std::move(w));
}

namespace detail {

/// Oriented Gaussian kernel without range validation. Any angle is accepted.
inline Kernel2D oriented_gaussian_kernel(int size, double sigma_major, double sigma_minor,
                                         double angle_deg) {
  const int r = size / 2;
  std::vector<double> w;
  w.reserve(static_cast<std::size_t>(size) * size);
  for (int i = -r; i <= r; ++i) {
    for (int j = -r; j <= r; ++j) {
      w.push_back(oriented_gaussian(i, j, sigma_major, sigma_minor, angle_deg));
    }
  }
  return Kernel2D(size, std::move(w));
}

}  // namespace detail

inline constexpr double kBlurSigmaMin = 0.2;
inline constexpr double kBlurSigmaMax = 1.2;

/// Normalized anisotropic Gaussian blur kernel.
///
/// size in {3, 5, 7}; sigmas in [0.2, 1.2]; angle in [0, 180) degrees.
inline Kernel2D make_anisotropic_gaussian(int size, double sigma_major, double sigma_minor,
                                          double angle_deg) {
  detail::require(size == 3 || size == 5 || size == 7,
                  "anisotropic kernel size must be 3, 5 or 7, got " + std::to_string(size));
  auto in_sigma_range = [](double s) { return s >= kBlurSigmaMin && s <= kBlurSigmaMax; };
  detail::require(in_sigma_range(sigma_major) && in_sigma_range(sigma_minor),
                  "anisotropic kernel sigmas must lie in [0.2, 1.2]");
  detail::require(angle_deg >= 0.0 && angle_deg < 180.0,
                  "anisotropic kernel angle must lie in [0, 180)");
  return detail::oriented_gaussian_kernel(size, sigma_major, sigma_minor, angle_deg);
}

}  // namespace nerfdeg
