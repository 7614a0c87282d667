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

#include "nerfdeg/error.hpp"
#include "nerfdeg/image.hpp"
#include "nerfdeg/kernel.hpp"

namespace nerfdeg {

/// Region mask parameters: center (c_i, c_j) and spreads in pixels, angle in degrees.
///
/// `sigma_i` is the spread along the axis at `angle_deg` counter-clockwise
/// from the row direction, `sigma_j` the spread across it (see
/// oriented_gaussian).
struct OrientedMaskParams {
  double center_i = 0.0;
  double center_j = 0.0;
  double sigma_i = 1.0;
  double sigma_j = 1.0;
  double angle_deg = 0.0;

  friend bool operator==(const OrientedMaskParams&, const OrientedMaskParams&) = default;
};

inline void validate(const OrientedMaskParams& p) {
  detail::require(std::isfinite(p.center_i) && std::isfinite(p.center_j) &&
                      std::isfinite(p.angle_deg),
                  "mask parameters must be finite");
  detail::require(p.sigma_i > 0.0 && p.sigma_j > 0.0 && std::isfinite(p.sigma_i) &&
                      std::isfinite(p.sigma_j),
                  "mask sigmas must be positive");
}

/// Peak-normalized oriented Gaussian weight map (1 at the center, decaying outward).
inline MaskPlane oriented_mask(int h, int w, const OrientedMaskParams& p) {
  validate(p);
  MaskPlane m(h, w);
  for (int i = 0; i < h; ++i) {
    for (int j = 0; j < w; ++j) {
      m.at(i, j) = oriented_gaussian(i - p.center_i, j - p.center_j, p.sigma_i, p.sigma_j,
                                     p.angle_deg);
    }
  }
  return m;
}

}  // namespace nerfdeg
