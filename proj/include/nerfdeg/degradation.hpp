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
#include <cstdint>
#include <string>

#include "nerfdeg/convolve.hpp"
#include "nerfdeg/error.hpp"
#include "nerfdeg/image.hpp"
#include "nerfdeg/kernel.hpp"
#include "nerfdeg/mask.hpp"
#include "nerfdeg/random.hpp"

namespace nerfdeg {

/// Sampling ranges for the simulator. Mask centers and spreads are expressed
/// in a 128x128 reference frame and rescaled to the real image at apply time.
namespace ranges {
inline constexpr double kNoiseSigmaMin = 0.01;
inline constexpr double kNoiseSigmaMax = 0.05;
inline constexpr int kSplatKernelSize = 5;
inline constexpr double kSplatSigmaMin = 0.3;
inline constexpr double kSplatSigmaMax = 1.0;
inline constexpr double kReposProbability = 0.1;
inline constexpr int kReposOffsetRange = 2;
inline constexpr double kBlurAngleMax = 180.0;
inline constexpr double kMaskFrame = 128.0;
inline constexpr double kMaskCenterMin = -16.0;
inline constexpr double kMaskCenterMax = 144.0;
inline constexpr double kMaskSigmaIMin = 13.0;
inline constexpr double kMaskSigmaIMax = 25.0;
inline constexpr double kMaskSigmaJMax = 24.0;
inline constexpr double kMaskAngleMax = 180.0;
}  // namespace ranges

/// Which stages a sampled recipe enables.
struct DegradationToggles {
  bool sgn = true;
  bool repos = true;
  bool ablur = true;
  bool region_adaptive = true;

  static DegradationToggles none() { return {false, false, false, false}; }
};

struct SplattedNoiseParams {
  double noise_sigma = 0.0;
  double blur_sigma = 1.0;
  std::uint64_t noise_plane_seed = 0;
  OrientedMaskParams mask;
  bool enabled = false;

  friend bool operator==(const SplattedNoiseParams&, const SplattedNoiseParams&) = default;
};

struct RepositionParams {
  double probability = ranges::kReposProbability;
  int offset_range = ranges::kReposOffsetRange;
  std::uint64_t pixel_seed = 0;
  OrientedMaskParams mask;
  bool enabled = false;

  friend bool operator==(const RepositionParams&, const RepositionParams&) = default;
};

struct AnisoBlurParams {
  int size = 3;
  double sigma_major = kBlurSigmaMin;
  double sigma_minor = kBlurSigmaMin;
  double angle_deg = 0.0;
  OrientedMaskParams mask;
  bool enabled = false;

  friend bool operator==(const AnisoBlurParams&, const AnisoBlurParams&) = default;
};

/// Every stochastic choice needed to degrade one target view, so that the
/// degradation can be replayed exactly. Mask parameters live in the
/// 128-pixel reference frame.
struct DegradationRecipe {
  std::uint64_t seed = 0;
  int height = 0;  ///< dimensions of the image the recipe was sampled for
  int width = 0;
  SplattedNoiseParams sgn;
  RepositionParams repos;
  AnisoBlurParams ablur;
  bool region_adaptive = false;

  friend bool operator==(const DegradationRecipe&, const DegradationRecipe&) = default;
};

// ---------------------------------------------------------------------------
// Sampling

inline OrientedMaskParams sample_mask_params(CounterRng& rng) {
  OrientedMaskParams p;
  p.center_i = rng.uniform_open(ranges::kMaskCenterMin, ranges::kMaskCenterMax);
  p.center_j = rng.uniform_open(ranges::kMaskCenterMin, ranges::kMaskCenterMax);
  p.sigma_i = rng.uniform_open(ranges::kMaskSigmaIMin, ranges::kMaskSigmaIMax);
  p.sigma_j = rng.uniform_left_open(0.0, ranges::kMaskSigmaJMax);
  p.angle_deg = rng.uniform_open(0.0, ranges::kMaskAngleMax);
  return p;
}

/// Draws a recipe for an h x w image. Deterministic in `seed`; the same
/// values are drawn whatever the toggles, which only flip `enabled`.
inline DegradationRecipe sample_recipe(std::uint64_t seed, int height, int width,
                                       const DegradationToggles& toggles = {}) {
  detail::require(height >= kMinPipelineDim && width >= kMinPipelineDim,
                  "image must be at least 8x8 to sample a recipe");
  CounterRng rng(seed);
  DegradationRecipe r;
  r.seed = seed;
  r.height = height;
  r.width = width;

  r.sgn.noise_sigma = rng.uniform(ranges::kNoiseSigmaMin, ranges::kNoiseSigmaMax);
  r.sgn.blur_sigma = rng.uniform(ranges::kSplatSigmaMin, ranges::kSplatSigmaMax);
  r.sgn.noise_plane_seed = rng.next_u64();
  r.sgn.mask = sample_mask_params(rng);
  r.sgn.enabled = toggles.sgn;

  r.repos.probability = ranges::kReposProbability;
  r.repos.offset_range = ranges::kReposOffsetRange;
  r.repos.pixel_seed = rng.next_u64();
  r.repos.mask = sample_mask_params(rng);
  r.repos.enabled = toggles.repos;

  static constexpr int kSizes[] = {3, 5, 7};
  r.ablur.size = kSizes[rng.uniform_int(0, 2)];
  const double s1 = rng.uniform(kBlurSigmaMin, kBlurSigmaMax);
  const double s2 = rng.uniform(kBlurSigmaMin, kBlurSigmaMax);
  r.ablur.sigma_major = std::max(s1, s2);
  r.ablur.sigma_minor = std::min(s1, s2);
  r.ablur.angle_deg = rng.uniform(0.0, ranges::kBlurAngleMax);
  r.ablur.mask = sample_mask_params(rng);
  r.ablur.enabled = toggles.ablur;

  r.region_adaptive = toggles.region_adaptive;
  return r;
}

// ---------------------------------------------------------------------------
// Stages

/// Splatted Gaussian noise: (img + n) convolved with g, where n is i.i.d.
/// N(0, sigma_n^2) per pixel and channel keyed by (noise_seed, element index).
inline ImagePlane apply_splatted_noise(const ImagePlane& img, double sigma_n, const Kernel2D& g,
                                       std::uint64_t noise_seed) {
  detail::require(std::isfinite(sigma_n) && sigma_n >= 0.0, "noise sigma must be >= 0");
  if (sigma_n == 0.0) return convolve(img, g);
  // Noisy intermediate is deliberately left unclamped: the blur acts on img + n.
  ImagePlane noisy = img;
  auto values = noisy.values();
  for (std::size_t k = 0; k < values.size(); ++k) {
    values[k] += sigma_n * counter_normal(noise_seed, k);
  }
  return convolve(noisy, g);
}

/// Integer offset bounds for re-positioning, inclusive on both ends.
struct OffsetBounds {
  int lo = -ranges::kReposOffsetRange;
  int hi = ranges::kReposOffsetRange;
};

namespace detail {

/// Per-pixel decision stream: word 0 decides, words 1 and 2 pick the offsets.
inline ImagePlane reposition_with_bounds(const ImagePlane& img, double probability,
                                         OffsetBounds bounds, std::uint64_t pixel_seed) {
  require(probability >= 0.0 && probability <= 1.0, "re-positioning probability must be in [0, 1]");
  require(bounds.lo <= bounds.hi, "re-positioning offset bounds are inverted");
  ImagePlane out = img;
  if (probability == 0.0) return out;
  const int h = img.height();
  const int w = img.width();
  const auto span = static_cast<std::uint64_t>(bounds.hi - bounds.lo) + 1;
  for (int i = 0; i < h; ++i) {
    for (int j = 0; j < w; ++j) {
      const std::uint64_t key = counter_hash(pixel_seed, static_cast<std::uint64_t>(i) * w + j);
      if (!(to_unit(counter_hash(key, 0)) < probability)) continue;
      // Modulo bias is < 2^-60 for spans this small.
      const int di = bounds.lo + static_cast<int>(counter_hash(key, 1) % span);
      const int dj = bounds.lo + static_cast<int>(counter_hash(key, 2) % span);
      for (int c = 0; c < ImagePlane::kChannels; ++c) out.at(i, j, c) = img.clamped(i + di, j + dj, c);
    }
  }
  return out;
}

}  // namespace detail

/// Re-positioning: each pixel, with the given probability, fetches from an
/// integer offset drawn uniformly in [-offset_range, offset_range]^2
/// (edge-clamped); otherwise it is copied.
inline ImagePlane apply_repositioning(const ImagePlane& img, double probability, int offset_range,
                                      std::uint64_t pixel_seed) {
  detail::require(offset_range >= 0, "re-positioning offset range must be >= 0");
  return detail::reposition_with_bounds(img, probability, {-offset_range, offset_range},
                                        pixel_seed);
}

inline ImagePlane apply_aniso_blur(const ImagePlane& img, const AnisoBlurParams& p) {
  return convolve(img, make_anisotropic_gaussian(p.size, p.sigma_major, p.sigma_minor, p.angle_deg));
}

/// out = mask * degraded + (1 - mask) * input, per pixel and channel.
inline ImagePlane blend_region_adaptive(const ImagePlane& input, const ImagePlane& degraded,
                                        const MaskPlane& mask) {
  detail::require(input.same_shape(degraded), "blend inputs differ in size");
  detail::require(mask.height() == input.height() && mask.width() == input.width(),
                  "blend mask differs in size from the images");
  ImagePlane out(input.height(), input.width());
  for (int i = 0; i < input.height(); ++i) {
    for (int j = 0; j < input.width(); ++j) {
      const double m = mask.at(i, j);
      for (int c = 0; c < ImagePlane::kChannels; ++c) {
        out.at(i, j, c) = m * degraded.at(i, j, c) + (1.0 - m) * input.at(i, j, c);
      }
    }
  }
  return out;
}

/// Maps reference-frame mask parameters onto an h x w image: centers scale
/// per axis, spreads by the geometric mean of the two axis scales.
inline OrientedMaskParams scale_mask_to_image(const OrientedMaskParams& p, int height, int width) {
  const double si = height / ranges::kMaskFrame;
  const double sj = width / ranges::kMaskFrame;
  const double ss = std::sqrt(si * sj);
  return {p.center_i * si, p.center_j * sj, p.sigma_i * ss, p.sigma_j * ss, p.angle_deg};
}

inline void validate(const DegradationRecipe& r) {
  using detail::require;
  require(r.height >= kMinPipelineDim && r.width >= kMinPipelineDim, "recipe dimensions below 8x8");
  require(r.sgn.noise_sigma >= 0.0 && r.sgn.blur_sigma > 0.0, "invalid splatted-noise parameters");
  require(r.repos.probability >= 0.0 && r.repos.probability <= 1.0 && r.repos.offset_range >= 0,
          "invalid re-positioning parameters");
  validate(r.sgn.mask);
  validate(r.repos.mask);
  validate(r.ablur.mask);
}

/// Runs the enabled stages in the fixed order splatted noise, re-positioning,
/// anisotropic blur. With region_adaptive set, each stage output is blended
/// with that stage's input through the stage's own mask.
inline ImagePlane apply_recipe(const ImagePlane& img, const DegradationRecipe& r) {
  validate(r);
  require_pipeline_dims(img);
  detail::require(img.height() == r.height && img.width() == r.width,
                  "recipe was sampled for " + std::to_string(r.height) + "x" +
                      std::to_string(r.width) + ", image is " + std::to_string(img.height()) +
                      "x" + std::to_string(img.width()));
  const int h = img.height();
  const int w = img.width();
  auto blend = [&](const ImagePlane& in, ImagePlane out, const OrientedMaskParams& m) {
    if (!r.region_adaptive) return out;
    return blend_region_adaptive(in, out, oriented_mask(h, w, scale_mask_to_image(m, h, w)));
  };

  ImagePlane current = img;
  if (r.sgn.enabled) {
    const Kernel2D g = make_isotropic_gaussian(ranges::kSplatKernelSize, r.sgn.blur_sigma);
    current = blend(current, apply_splatted_noise(current, r.sgn.noise_sigma, g, r.sgn.noise_plane_seed),
                    r.sgn.mask);
  }
  if (r.repos.enabled) {
    current = blend(current,
                    apply_repositioning(current, r.repos.probability, r.repos.offset_range,
                                        r.repos.pixel_seed),
                    r.repos.mask);
  }
  if (r.ablur.enabled) {
    current = blend(current, apply_aniso_blur(current, r.ablur), r.ablur.mask);
  }
  return current;
}

}  // namespace nerfdeg
