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
#include <vector>

#include "nerfdeg/error.hpp"
#include "nerfdeg/image.hpp"
#include "nerfdeg/kernel.hpp"

namespace nerfdeg {

/// PSNR returned for identical images.
inline constexpr double kPsnrCapDb = 99.0;

struct MetricReport {
  double psnr_db = 0.0;
  double ssim = 0.0;
};

/// Mean squared error over every pixel and channel.
inline double mse(const ImagePlane& a, const ImagePlane& b) {
  detail::require(a.same_shape(b), "metric inputs differ in size");
  const auto va = a.values();
  const auto vb = b.values();
  double sum = 0.0;
  for (std::size_t k = 0; k < va.size(); ++k) {
    const double d = va[k] - vb[k];
    sum += d * d;
  }
  return sum / static_cast<double>(va.size());
}

/// 10 log10(1 / MSE) on [0,1] data, capped at kPsnrCapDb.
inline double psnr(const ImagePlane& a, const ImagePlane& b) {
  const double e = mse(a, b);
  if (e == 0.0) return kPsnrCapDb;
  return std::min(kPsnrCapDb, 10.0 * std::log10(1.0 / e));
}

/// Rec.601 luma plane, row-major.
inline std::vector<double> luma601(const ImagePlane& img) {
  std::vector<double> y(static_cast<std::size_t>(img.height()) * img.width());
  for (int i = 0; i < img.height(); ++i) {
    for (int j = 0; j < img.width(); ++j) {
      y[static_cast<std::size_t>(i) * img.width() + j] =
          0.299 * img.at(i, j, 0) + 0.587 * img.at(i, j, 1) + 0.114 * img.at(i, j, 2);
    }
  }
  return y;
}

namespace ssim_constants {
inline constexpr int kWindow = 11;
inline constexpr double kSigma = 1.5;
inline constexpr double kK1 = 0.01;
inline constexpr double kK2 = 0.03;
inline constexpr double kRange = 1.0;
}  // namespace ssim_constants

/// Mean SSIM over all fully-contained 11x11 Gaussian windows (sigma 1.5) of
/// the luma planes, with K1 = 0.01, K2 = 0.03 and dynamic range 1.
inline double ssim(const ImagePlane& a, const ImagePlane& b) {
  using namespace ssim_constants;
  detail::require(a.same_shape(b), "metric inputs differ in size");
  detail::require(a.height() >= kWindow && a.width() >= kWindow,
                  "SSIM needs images of at least 11x11");
  const Kernel2D window = make_isotropic_gaussian(kWindow, kSigma);
  const std::vector<double> x = luma601(a);
  const std::vector<double> y = luma601(b);
  const int w = a.width();
  const double c1 = (kK1 * kRange) * (kK1 * kRange);
  const double c2 = (kK2 * kRange) * (kK2 * kRange);

  const int out_h = a.height() - kWindow + 1;
  const int out_w = a.width() - kWindow + 1;
  double total = 0.0;
  for (int i = 0; i < out_h; ++i) {
    for (int j = 0; j < out_w; ++j) {
      double mx = 0, my = 0, mxx = 0, myy = 0, mxy = 0;
      for (int u = 0; u < kWindow; ++u) {
        const std::size_t row = static_cast<std::size_t>(i + u) * w + j;
        for (int v = 0; v < kWindow; ++v) {
          const double g = window.at(u, v);
          const double xv = x[row + v];
          const double yv = y[row + v];
          mx += g * xv;
          my += g * yv;
          mxx += g * xv * xv;
          myy += g * yv * yv;
          mxy += g * xv * yv;
        }
      }
      const double vx = mxx - mx * mx;
      const double vy = myy - my * my;
      const double cov = mxy - mx * my;
      total += ((2 * mx * my + c1) * (2 * cov + c2)) / ((mx * mx + my * my + c1) * (vx + vy + c2));
    }
  }
  return total / (static_cast<double>(out_h) * out_w);
}

inline MetricReport compare(const ImagePlane& reference, const ImagePlane& test) {
  return {psnr(reference, test), ssim(reference, test)};
}

}  // namespace nerfdeg
