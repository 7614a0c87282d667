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

namespace nerfdeg {

/// Integer translation with edge clamping: out(i, j) = img(i + dy, j + dx).
inline ImagePlane shift_clamped(const ImagePlane& img, int dy, int dx) {
  ImagePlane out(img.height(), img.width());
  for (int i = 0; i < img.height(); ++i) {
    for (int j = 0; j < img.width(); ++j) {
      for (int c = 0; c < ImagePlane::kChannels; ++c) out.at(i, j, c) = img.clamped(i + dy, j + dx, c);
    }
  }
  return out;
}

struct CropWindow {
  int top = 0;
  int left = 0;
  int size = 128;

  friend bool operator==(const CropWindow&, const CropWindow&) = default;
};

inline ImagePlane crop(const ImagePlane& img, const CropWindow& w) {
  detail::require(w.size > 0 && w.top >= 0 && w.left >= 0 && w.top + w.size <= img.height() &&
                      w.left + w.size <= img.width(),
                  "crop window outside the image");
  ImagePlane out(w.size, w.size);
  for (int i = 0; i < w.size; ++i) {
    for (int j = 0; j < w.size; ++j) {
      for (int c = 0; c < ImagePlane::kChannels; ++c) out.at(i, j, c) = img.at(w.top + i, w.left + j, c);
    }
  }
  return out;
}

inline ImagePlane flip_horizontal(const ImagePlane& img) {
  ImagePlane out(img.height(), img.width());
  const int w = img.width();
  for (int i = 0; i < img.height(); ++i) {
    for (int j = 0; j < w; ++j) {
      for (int c = 0; c < ImagePlane::kChannels; ++c) out.at(i, j, c) = img.at(i, w - 1 - j, c);
    }
  }
  return out;
}

inline ImagePlane flip_vertical(const ImagePlane& img) {
  ImagePlane out(img.height(), img.width());
  const int h = img.height();
  for (int i = 0; i < h; ++i) {
    for (int j = 0; j < img.width(); ++j) {
      for (int c = 0; c < ImagePlane::kChannels; ++c) out.at(i, j, c) = img.at(h - 1 - i, j, c);
    }
  }
  return out;
}

/// Rotates 90 degrees counter-clockwise `quarter_turns` times.
inline ImagePlane rotate90(const ImagePlane& img, int quarter_turns) {
  quarter_turns = ((quarter_turns % 4) + 4) % 4;
  ImagePlane cur = img;
  for (int t = 0; t < quarter_turns; ++t) {
    const int h = cur.height();
    const int w = cur.width();
    ImagePlane out(w, h);
    for (int i = 0; i < w; ++i) {
      for (int j = 0; j < h; ++j) {
        for (int c = 0; c < ImagePlane::kChannels; ++c) out.at(i, j, c) = cur.at(j, w - 1 - i, c);
      }
    }
    cur = std::move(out);
  }
  return cur;
}

/// Flip/rotation record applied identically to every image of a sample.
struct Augmentation {
  bool hflip = false;
  bool vflip = false;
  int rot90 = 0;  ///< counter-clockwise quarter turns, 0-3

  friend bool operator==(const Augmentation&, const Augmentation&) = default;
};

/// Horizontal flip, then vertical flip, then rotation.
inline ImagePlane apply_augmentation(const ImagePlane& img, const Augmentation& a) {
  ImagePlane out = a.hflip ? flip_horizontal(img) : img;
  if (a.vflip) out = flip_vertical(out);
  return rotate90(out, a.rot90);
}

inline ImagePlane invert_augmentation(const ImagePlane& img, const Augmentation& a) {
  ImagePlane out = rotate90(img, 4 - a.rot90);
  if (a.vflip) out = flip_vertical(out);
  if (a.hflip) out = flip_horizontal(out);
  return out;
}

}  // namespace nerfdeg
