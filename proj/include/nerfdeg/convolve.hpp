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

#include "nerfdeg/error.hpp"
#include "nerfdeg/image.hpp"
#include "nerfdeg/kernel.hpp"

namespace nerfdeg {

enum class BorderMode {
  kReplicate,  ///< out-of-range taps read the nearest edge pixel
};

/// Per-channel 2D correlation with `k`, output clamped to [0, 1].
///
/// Gaussian kernels are symmetric, so correlation and convolution coincide
/// for every kernel this library builds.
inline ImagePlane convolve(const ImagePlane& img, const Kernel2D& k,
                           BorderMode border = BorderMode::kReplicate) {
  (void)border;  // replicate is the only mode
  detail::require(img.height() >= k.size() && img.width() >= k.size(),
                  "kernel is larger than the image");
  const int h = img.height();
  const int w = img.width();
  const int r = k.radius();
  ImagePlane out(h, w);
  for (int i = 0; i < h; ++i) {
    for (int j = 0; j < w; ++j) {
      double acc[ImagePlane::kChannels] = {0.0, 0.0, 0.0};
      for (int di = -r; di <= r; ++di) {
        const int si = std::clamp(i + di, 0, h - 1);
        for (int dj = -r; dj <= r; ++dj) {
          const int sj = std::clamp(j + dj, 0, w - 1);
          const double weight = k.at(di + r, dj + r);
          for (int c = 0; c < ImagePlane::kChannels; ++c) acc[c] += weight * img.at(si, sj, c);
        }
      }
      for (int c = 0; c < ImagePlane::kChannels; ++c) out.at(i, j, c) = std::clamp(acc[c], 0.0, 1.0);
    }
  }
  return out;
}

}  // namespace nerfdeg
