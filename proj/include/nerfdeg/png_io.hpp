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

#include <png.h>

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <memory>
#include <string>
#include <vector>

#include "nerfdeg/error.hpp"
#include "nerfdeg/image.hpp"

namespace nerfdeg {

/// [0,1] -> 8-bit with round-half-away-from-zero.
inline std::uint8_t to_u8(double v) noexcept {
  const double scaled = std::clamp(v, 0.0, 1.0) * 255.0;
  return static_cast<std::uint8_t>(std::lround(scaled));
}

inline double from_u8(std::uint8_t v) noexcept { return v / 255.0; }

/// Snaps every intensity onto the 8-bit grid, i.e. what a PNG round trip yields.
inline ImagePlane quantize_u8(ImagePlane img) {
  for (double& v : img.values()) v = from_u8(to_u8(v));
  return img;
}

namespace detail {

struct FileCloser {
  void operator()(std::FILE* f) const noexcept {
    if (f) std::fclose(f);
  }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

}  // namespace detail

/// Reads a PNG of any bit depth / color type as 8-bit RGB.
inline ImagePlane read_png(const std::filesystem::path& path) {
  detail::FilePtr file(std::fopen(path.string().c_str(), "rb"));
  if (!file) throw IoError("cannot open " + path.string());

  png_image image{};
  image.version = PNG_IMAGE_VERSION;
  if (!png_image_begin_read_from_stdio(&image, file.get())) {
    throw IoError("cannot decode " + path.string() + ": " + image.message);
  }
  image.format = PNG_FORMAT_RGB;
  std::vector<std::uint8_t> buffer(PNG_IMAGE_SIZE(image));
  if (!png_image_finish_read(&image, nullptr, buffer.data(), 0, nullptr)) {
    png_image_free(&image);
    throw IoError("cannot decode " + path.string() + ": " + image.message);
  }
  std::vector<double> data(buffer.size());
  for (std::size_t k = 0; k < buffer.size(); ++k) data[k] = from_u8(buffer[k]);
  return ImagePlane(static_cast<int>(image.height), static_cast<int>(image.width),
                    std::move(data));
}

struct ImageDims {
  int height = 0;
  int width = 0;
};

/// Reads only the PNG header.
inline ImageDims png_dimensions(const std::filesystem::path& path) {
  detail::FilePtr file(std::fopen(path.string().c_str(), "rb"));
  if (!file) throw IoError("cannot open " + path.string());
  png_image image{};
  image.version = PNG_IMAGE_VERSION;
  if (!png_image_begin_read_from_stdio(&image, file.get())) {
    throw IoError("cannot decode " + path.string() + ": " + image.message);
  }
  const ImageDims dims{static_cast<int>(image.height), static_cast<int>(image.width)};
  png_image_free(&image);
  return dims;
}

/// Writes 8-bit RGB PNG. Output bytes depend only on the pixel values.
inline void write_png(const std::filesystem::path& path, const ImagePlane& img) {
  std::vector<std::uint8_t> buffer(img.size());
  const auto values = img.values();
  for (std::size_t k = 0; k < buffer.size(); ++k) buffer[k] = to_u8(values[k]);

  png_image image{};
  image.version = PNG_IMAGE_VERSION;
  image.width = static_cast<png_uint_32>(img.width());
  image.height = static_cast<png_uint_32>(img.height());
  image.format = PNG_FORMAT_RGB;
  if (path.has_parent_path()) {
    std::error_code ec;
    std::filesystem::create_directories(path.parent_path(), ec);
  }
  if (!png_image_write_to_file(&image, path.string().c_str(), 0, buffer.data(), 0, nullptr)) {
    throw IoError("cannot write " + path.string() + ": " + image.message);
  }
}

}  // namespace nerfdeg
