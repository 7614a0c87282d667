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

// Minimal library usage: sample a recipe, degrade a PNG, save both, and
// report how far the result moved from the input.
//
//   degrade_one <input.png> <output.png> [seed]

#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <string>

#include "nerfdeg/nerfdeg.hpp"

int main(int argc, char** argv) {
  if (argc < 3) {
    std::cerr << "usage: " << argv[0] << " <input.png> <output.png> [seed]\n";
    return 1;
  }
  const std::filesystem::path input = argv[1];
  const std::filesystem::path output = argv[2];
  const std::uint64_t seed = argc > 3 ? std::strtoull(argv[3], nullptr, 10) : 1234;

  try {
    const nerfdeg::ImagePlane clean = nerfdeg::read_png(input);
    const nerfdeg::DegradationRecipe recipe = nerfdeg::sample_recipe(seed, clean.height(), clean.width());
    const nerfdeg::ImagePlane degraded = nerfdeg::apply_recipe(clean, recipe);

    nerfdeg::write_png(output, degraded);
    nerfdeg::save_recipe(std::filesystem::path(output).replace_extension(".recipe.json"), recipe);

    const nerfdeg::MetricReport m = nerfdeg::compare(clean, nerfdeg::quantize_u8(degraded));
    std::cout << "seed " << seed << ": PSNR " << m.psnr_db << " dB, SSIM " << m.ssim << "\n";
  } catch (const nerfdeg::IoError& e) {
    std::cerr << e.what() << "\n";
    return 2;
  } catch (const nerfdeg::ParameterError& e) {
    std::cerr << e.what() << "\n";
    return 1;
  }
  return 0;
}
