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

#include <gtest/gtest.h>

#include <cmath>
#include <set>

#include "nerfdeg/degradation.hpp"
#include "nerfdeg/metrics.hpp"
#include "nerfdeg/png_io.hpp"
#include "nerfdeg/recipe_json.hpp"
#include "test_support.hpp"

namespace nerfdeg {
namespace {

bool in_open(double v, double lo, double hi) { return v > lo && v < hi; }

void expect_mask_in_reference_ranges(const OrientedMaskParams& m) {
  EXPECT_TRUE(in_open(m.center_i, -16, 144)) << m.center_i;
  EXPECT_TRUE(in_open(m.center_j, -16, 144)) << m.center_j;
  EXPECT_TRUE(in_open(m.sigma_i, 13, 25)) << m.sigma_i;
  EXPECT_TRUE(m.sigma_j > 0 && m.sigma_j <= 24) << m.sigma_j;
  EXPECT_TRUE(in_open(m.angle_deg, 0, 180)) << m.angle_deg;
}

TEST(SampleRecipe, IsDeterministicInSeed) {
  for (std::uint64_t seed : {0ULL, 1ULL, 42ULL, 0xFFFFFFFFFFFFFFFFULL}) {
    EXPECT_EQ(sample_recipe(seed, 64, 80), sample_recipe(seed, 64, 80));
  }
}

TEST(SampleRecipe, DistinctSeedsGiveDistinctRecipes) {
  std::set<double> noise;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const auto a = sample_recipe(seed, 64, 64);
    const auto b = sample_recipe(seed + 1, 64, 64);
    EXPECT_NE(a, b);
    noise.insert(a.sgn.noise_sigma);
  }
  EXPECT_EQ(noise.size(), 100u);
}

TEST(SampleRecipe, StaysInsideSamplingRanges) {
  for (std::uint64_t seed = 0; seed < 1000; ++seed) {
    const auto r = sample_recipe(seed, 128, 128);
    EXPECT_GE(r.sgn.noise_sigma, 0.01);
    EXPECT_LE(r.sgn.noise_sigma, 0.05);
    EXPECT_GE(r.sgn.blur_sigma, 0.3);
    EXPECT_LE(r.sgn.blur_sigma, 1.0);
    EXPECT_EQ(r.repos.probability, 0.1);
    EXPECT_EQ(r.repos.offset_range, 2);
    EXPECT_TRUE(r.ablur.size == 3 || r.ablur.size == 5 || r.ablur.size == 7);
    EXPECT_GE(r.ablur.sigma_minor, 0.2);
    EXPECT_LE(r.ablur.sigma_major, 1.2);
    EXPECT_GE(r.ablur.sigma_major, r.ablur.sigma_minor);
    EXPECT_GE(r.ablur.angle_deg, 0.0);
    EXPECT_LT(r.ablur.angle_deg, 180.0);
    expect_mask_in_reference_ranges(r.sgn.mask);
    expect_mask_in_reference_ranges(r.repos.mask);
    expect_mask_in_reference_ranges(r.ablur.mask);
  }
}

TEST(SampleRecipe, AllTogglesOffGivesIdentity) {
  const auto r = sample_recipe(9, 32, 40, DegradationToggles::none());
  EXPECT_FALSE(r.sgn.enabled);
  EXPECT_FALSE(r.repos.enabled);
  EXPECT_FALSE(r.ablur.enabled);
  EXPECT_FALSE(r.region_adaptive);
  const ImagePlane img = testing::random_image(32, 40, 1);
  EXPECT_EQ(apply_recipe(img, r), img);
}

TEST(SampleRecipe, RejectsTinyImages) { EXPECT_THROW(sample_recipe(1, 7, 64), ParameterError); }

TEST(SplattedNoise, ZeroNoiseDeltaKernelIsIdentity) {
  const ImagePlane img = testing::random_image(16, 16, 2);
  EXPECT_EQ(apply_splatted_noise(img, 0.0, Kernel2D::delta(5), 123), img);
}

TEST(SplattedNoise, MeanStaysWithinStatisticalBound) {
  const ImagePlane img = testing::constant_image(64, 64, 0.5);
  const ImagePlane out = apply_splatted_noise(img, 0.05, make_isotropic_gaussian(5, 1.0), 777);
  double mean = 0;
  for (double v : out.values()) mean += v;
  mean /= static_cast<double>(out.size());
  EXPECT_NEAR(mean, 0.5, 4 * 0.05 / std::sqrt(64.0 * 64 * 3));
}

TEST(SplattedNoise, NoisePlaneHasRequestedSpread) {
  const ImagePlane img = testing::constant_image(64, 64, 0.5);
  const ImagePlane out = apply_splatted_noise(img, 0.03, Kernel2D::delta(1), 5);
  double sum = 0, sum2 = 0;
  for (double v : out.values()) {
    sum += v - 0.5;
    sum2 += (v - 0.5) * (v - 0.5);
  }
  const double n = static_cast<double>(out.size());
  const double sd = std::sqrt(sum2 / n - (sum / n) * (sum / n));
  EXPECT_NEAR(sd, 0.03, 0.03 * 0.05);
}

TEST(SplattedNoise, AcceptsRangeBoundsAndRejectsNegative) {
  const ImagePlane img = testing::random_image(16, 16, 3);
  const Kernel2D g = make_isotropic_gaussian(5, 0.5);
  EXPECT_NO_THROW(apply_splatted_noise(img, 0.01, g, 1));
  EXPECT_NO_THROW(apply_splatted_noise(img, 0.05, g, 1));
  EXPECT_THROW(apply_splatted_noise(img, -0.01, g, 1), ParameterError);
}

TEST(SplattedNoise, DependsOnlyOnSeed) {
  const ImagePlane img = testing::random_image(16, 16, 3);
  const Kernel2D g = make_isotropic_gaussian(5, 0.5);
  EXPECT_EQ(apply_splatted_noise(img, 0.02, g, 10), apply_splatted_noise(img, 0.02, g, 10));
  EXPECT_NE(apply_splatted_noise(img, 0.02, g, 10), apply_splatted_noise(img, 0.02, g, 11));
}

TEST(Repositioning, ZeroProbabilityIsIdentity) {
  const ImagePlane img = testing::random_image(16, 16, 4);
  EXPECT_EQ(apply_repositioning(img, 0.0, 2, 99), img);
  EXPECT_EQ(apply_repositioning(img, 1.0, 0, 99), img);
}

TEST(Repositioning, ForcedOffsetShiftsWithEdgeClamp) {
  const ImagePlane img = testing::ramp_image(10, 12);
  const ImagePlane out = detail::reposition_with_bounds(img, 1.0, {1, 1}, 5);
  for (int i = 0; i < 10; ++i) {
    for (int j = 0; j < 12; ++j) {
      const int si = std::min(i + 1, 9);
      const int sj = std::min(j + 1, 11);
      for (int c = 0; c < 3; ++c) EXPECT_EQ(out.at(i, j, c), img.at(si, sj, c));
    }
  }
}

TEST(Repositioning, MovesAboutTheRequestedFractionOfPixels) {
  // Strictly increasing ramp: any non-zero offset changes the pixel unless clamped.
  const ImagePlane img = testing::ramp_image(128, 128);
  const ImagePlane out = apply_repositioning(img, 0.1, 2, 2024);
  int changed = 0;
  for (int i = 2; i < 126; ++i) {
    for (int j = 2; j < 126; ++j) changed += out.at(i, j, 0) != img.at(i, j, 0);
  }
  const double interior = 124.0 * 124.0;
  // P(change) = 0.1 * (1 - 1/25) = 0.096; 5 sigma band.
  const double p = 0.096;
  EXPECT_NEAR(changed / interior, p, 5 * std::sqrt(p * (1 - p) / interior));
}

TEST(Repositioning, DefaultsMatchReferenceSetting) {
  EXPECT_EQ(ranges::kReposProbability, 0.1);
  EXPECT_EQ(ranges::kReposOffsetRange, 2);
  EXPECT_THROW(apply_repositioning(testing::random_image(8, 8, 1), 1.5, 2, 0), ParameterError);
  EXPECT_THROW(apply_repositioning(testing::random_image(8, 8, 1), 0.5, -1, 0), ParameterError);
}

TEST(AnisoBlur, SmallestKernelIsNearIdentityOnNaturalImage) {
  const ImagePlane img = read_png(testing::natural_images()[0]);
  AnisoBlurParams p;
  p.size = 3;
  p.sigma_major = p.sigma_minor = 0.2;
  const ImagePlane out = apply_aniso_blur(img, p);
  double worst = 0;
  for (std::size_t n = 0; n < img.size(); ++n) worst = std::max(worst, std::abs(out.values()[n] - img.values()[n]));
  EXPECT_LT(worst, 0.05);
}

TEST(AnisoBlur, MatchesScalarConvolution) {
  const ImagePlane img = testing::random_image(20, 24, 8);
  AnisoBlurParams p{7, 1.1, 0.35, 123.0, {}, true};
  const auto expected = testing::oracle_convolve(img, testing::oracle_kernel(7, 1.1, 0.35, 123.0), 7);
  const ImagePlane out = apply_aniso_blur(img, p);
  for (std::size_t n = 0; n < expected.size(); ++n) EXPECT_NEAR(out.values()[n], expected[n], 1e-9);
}

TEST(AnisoBlur, ConstantImageUnchanged) {
  const ImagePlane img = testing::constant_image(16, 16, 0.37);
  const ImagePlane out = apply_aniso_blur(img, {5, 1.2, 0.2, 60.0, {}, true});
  for (double v : out.values()) EXPECT_NEAR(v, 0.37, 1e-12);
}

TEST(Blend, MaskExtremesAndMidpoint) {
  const ImagePlane a = testing::random_image(12, 12, 1);
  const ImagePlane b = testing::random_image(12, 12, 2);
  EXPECT_EQ(blend_region_adaptive(a, b, MaskPlane(12, 12, 0.0)), a);
  EXPECT_EQ(blend_region_adaptive(a, b, MaskPlane(12, 12, 1.0)), b);
  const ImagePlane mid = blend_region_adaptive(testing::constant_image(8, 8, 0.2),
                                               testing::constant_image(8, 8, 0.8), MaskPlane(8, 8, 0.5));
  for (double v : mid.values()) EXPECT_NEAR(v, 0.5, 1e-15);
}

TEST(Blend, RejectsMismatchedSizes) {
  const ImagePlane a = testing::random_image(12, 12, 1);
  EXPECT_THROW(blend_region_adaptive(a, testing::random_image(12, 13, 1), MaskPlane(12, 12)), ParameterError);
  EXPECT_THROW(blend_region_adaptive(a, a, MaskPlane(11, 12)), ParameterError);
}

TEST(ApplyRecipe, UnmaskedPipelineEqualsStageComposition) {
  const ImagePlane img = testing::random_image(40, 48, 6);
  DegradationRecipe r = sample_recipe(31, 40, 48);
  r.region_adaptive = false;
  ImagePlane expected =
      apply_splatted_noise(img, r.sgn.noise_sigma, make_isotropic_gaussian(5, r.sgn.blur_sigma), r.sgn.noise_plane_seed);
  expected = apply_repositioning(expected, r.repos.probability, r.repos.offset_range, r.repos.pixel_seed);
  expected = apply_aniso_blur(expected, r.ablur);
  EXPECT_EQ(apply_recipe(img, r), expected);
}

TEST(ApplyRecipe, StageOrderIsFixed) {
  const ImagePlane img = read_png(testing::natural_images()[2]);
  DegradationRecipe r = sample_recipe(5, img.height(), img.width());
  r.region_adaptive = false;
  r.repos.probability = 0.5;
  ImagePlane swapped = apply_aniso_blur(img, r.ablur);
  swapped = apply_repositioning(swapped, r.repos.probability, r.repos.offset_range, r.repos.pixel_seed);
  swapped = apply_splatted_noise(swapped, r.sgn.noise_sigma, make_isotropic_gaussian(5, r.sgn.blur_sigma),
                                 r.sgn.noise_plane_seed);
  EXPECT_NE(apply_recipe(img, r), swapped);
}

TEST(ApplyRecipe, RegionAdaptiveLeavesFarRegionUntouched) {
  const ImagePlane img = read_png(testing::natural_images()[2]);  // 256 x 256
  DegradationRecipe r = sample_recipe(77, 256, 256);
  // Masks in the 128 reference frame, centered in the left half.
  for (OrientedMaskParams* m : {&r.sgn.mask, &r.repos.mask, &r.ablur.mask}) *m = {64.0, 24.0, 14.0, 8.0, 30.0};
  const ImagePlane out = apply_recipe(img, r);
  double change = 0;
  int n = 0;
  for (int i = 0; i < 256; ++i) {
    for (int j = 192; j < 256; ++j) {
      for (int c = 0; c < 3; ++c, ++n) change += std::abs(out.at(i, j, c) - img.at(i, j, c));
    }
  }
  EXPECT_LE(change / n, 1e-3);
  EXPECT_LT(psnr(out, img), kPsnrCapDb);
}

TEST(ApplyRecipe, JsonRoundTripReplaysBitExactly) {
  const ImagePlane img = read_png(testing::natural_images()[1]);
  for (std::uint64_t seed : {3ULL, 1234567890123ULL, 0xDEADBEEFCAFEF00DULL}) {
    const DegradationRecipe r = sample_recipe(seed, img.height(), img.width());
    const DegradationRecipe back = recipe_from_string(recipe_to_string(r));
    EXPECT_EQ(back, r);
    EXPECT_EQ(apply_recipe(img, back), apply_recipe(img, r));
  }
}

TEST(ApplyRecipe, RejectsMismatchedDimensions) {
  const DegradationRecipe r = sample_recipe(1, 32, 32);
  EXPECT_THROW(apply_recipe(testing::random_image(32, 33, 1), r), ParameterError);
  EXPECT_THROW(recipe_from_string("{\"seed\": 1}"), ParameterError);
}

TEST(ApplyRecipe, EnabledRecipesAlwaysChangeTheImage) {
  const ImagePlane img = read_png(testing::natural_images()[2]);
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const auto r = sample_recipe(seed, img.height(), img.width());
    EXPECT_LT(psnr(apply_recipe(img, r), img), kPsnrCapDb) << "seed " << seed;
  }
}

TEST(MaskScaling, MapsReferenceFrameToImage) {
  const OrientedMaskParams m = scale_mask_to_image({64, 32, 10, 5, 20}, 256, 512);
  EXPECT_DOUBLE_EQ(m.center_i, 128);
  EXPECT_DOUBLE_EQ(m.center_j, 128);
  EXPECT_DOUBLE_EQ(m.sigma_i, 10 * std::sqrt(8.0));
  EXPECT_DOUBLE_EQ(m.sigma_j, 5 * std::sqrt(8.0));
  EXPECT_DOUBLE_EQ(m.angle_deg, 20);
}

}  // namespace
}  // namespace nerfdeg
