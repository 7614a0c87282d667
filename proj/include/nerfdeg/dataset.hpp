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
#include <array>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>
#include "nerfdeg/augment.hpp"
#include "nerfdeg/camera_io.hpp"
#include "nerfdeg/degradation.hpp"
#include "nerfdeg/error.hpp"
#include "nerfdeg/geometry.hpp"
#include "nerfdeg/parallel.hpp"
#include "nerfdeg/png_io.hpp"
#include "nerfdeg/random.hpp"
#include "nerfdeg/recipe_json.hpp"
#include "nerfdeg/view_selection.hpp"

namespace nerfdeg {

namespace fs = std::filesystem;

enum class SourceKind { kMultiViewScene, kVideoTriplet };

inline std::string to_string(SourceKind k) {
  return k == SourceKind::kMultiViewScene ? "multi-view-scene" : "video-triplet";
}

inline SourceKind source_kind_from_string(const std::string& s) {
  if (s == "multi-view-scene") return SourceKind::kMultiViewScene;
  if (s == "video-triplet") return SourceKind::kVideoTriplet;
  throw ParameterError("unknown source kind '" + s + "'");
}

/// One target view and its two reference views.
struct RawSequence {
  std::string target_path;
  std::string ref1_path;
  std::string ref2_path;
  SourceKind source_kind = SourceKind::kVideoTriplet;

  friend bool operator==(const RawSequence&, const RawSequence&) = default;
};

struct IngestResult {
  std::vector<RawSequence> sequences;
  std::size_t skipped = 0;
  std::vector<std::string> warnings;
};

// Seed-derivation tags, so that the streams for different purposes never overlap.
namespace seed_tags {
inline constexpr std::uint64_t kClipSubset = 0x636c69707375ULL;
inline constexpr std::uint64_t kClipFrames = 0x6672616d6573ULL;
inline constexpr std::uint64_t kSample = 0x73616d706c65ULL;
}  // namespace seed_tags

inline bool is_png(const fs::path& p) {
  auto ext = p.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
  return ext == ".png";
}

inline std::vector<fs::path> sorted_pngs(const fs::path& dir) {
  std::vector<fs::path> files;
  for (const auto& e : fs::directory_iterator(dir)) {
    if (e.is_regular_file() && is_png(e.path())) files.push_back(e.path());
  }
  std::sort(files.begin(), files.end());
  return files;
}

/// Deterministic subset of round(fraction * n) indices (at least one when n > 0),
/// returned in increasing order.
inline std::vector<std::size_t> fraction_subset(std::size_t n, double fraction, std::uint64_t seed) {
  detail::require(fraction > 0.0 && fraction <= 1.0, "fraction must lie in (0, 1]");
  if (n == 0) return {};
  const auto keep = std::clamp<std::size_t>(
      static_cast<std::size_t>(std::llround(fraction * static_cast<double>(n))), 1, n);
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  CounterRng rng(derive_seed(seed, seed_tags::kClipSubset));
  for (std::size_t i = 0; i < keep; ++i) {
    const auto j = static_cast<std::size_t>(rng.uniform_int(static_cast<std::int64_t>(i),
                                                            static_cast<std::int64_t>(n - 1)));
    std::swap(idx[i], idx[j]);
  }
  idx.resize(keep);
  std::sort(idx.begin(), idx.end());
  return idx;
}

/// Three distinct frame indices in random order: target, ref1, ref2.
inline std::array<std::size_t, 3> pick_triplet(std::size_t frame_count, std::uint64_t seed,
                                               std::size_t clip_index) {
  detail::require(frame_count >= 3, "a triplet needs at least three frames");
  std::vector<std::size_t> idx(frame_count);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  CounterRng rng(derive_seed(seed, seed_tags::kClipFrames, clip_index));
  for (std::size_t i = 0; i < 3; ++i) {
    const auto j = static_cast<std::size_t>(rng.uniform_int(static_cast<std::int64_t>(i),
                                                            static_cast<std::int64_t>(frame_count - 1)));
    std::swap(idx[i], idx[j]);
  }
  return {idx[0], idx[1], idx[2]};
}

/// Collects clips (directories directly holding PNG frames, anywhere under
/// `dir`, in path order), keeps a deterministic `fraction` of them, and
/// draws one frame triplet per kept clip. Clips with fewer than three frames
/// are skipped and counted.
inline IngestResult ingest_video_triplets(const fs::path& dir, double fraction, std::uint64_t seed) {
  detail::require(fraction > 0.0 && fraction <= 1.0, "fraction must lie in (0, 1]");
  if (!fs::is_directory(dir)) throw IoError("not a directory: " + dir.string());
  std::vector<fs::path> clip_dirs;
  if (!sorted_pngs(dir).empty()) clip_dirs.push_back(dir);
  for (const auto& e : fs::recursive_directory_iterator(dir)) {
    if (e.is_directory() && !sorted_pngs(e.path()).empty()) clip_dirs.push_back(e.path());
  }
  std::sort(clip_dirs.begin(), clip_dirs.end());

  IngestResult result;
  for (std::size_t idx : fraction_subset(clip_dirs.size(), fraction, seed)) {
    const auto frames = sorted_pngs(clip_dirs[idx]);
    if (frames.size() < 3) {
      ++result.skipped;
      result.warnings.push_back(clip_dirs[idx].string() + ": fewer than three frames");
      continue;
    }
    const auto t = pick_triplet(frames.size(), seed, idx);
    result.sequences.push_back({frames[t[0]].string(), frames[t[1]].string(), frames[t[2]].string(),
                                SourceKind::kVideoTriplet});
  }
  return result;
}

/// Evaluation views excluded from training: the view at position p (0-based,
/// file order) is held out when every > 0 and p % every == every - 1.
struct HoldoutRule {
  int every = 8;

  bool held_out(std::size_t position) const noexcept {
    return every > 0 && position % static_cast<std::size_t>(every) == static_cast<std::size_t>(every - 1);
  }
};

struct SceneIngestOptions {
  HoldoutRule holdout;
  int grid = kDefaultRayGrid;
  SphereOverrides sphere;
  unsigned jobs = 1;
};

/// One sequence per retained view: the view is the target and its two
/// lowest-mutual-cost retained views are the references.
inline IngestResult ingest_scene_views(const SceneCameras& scene, const SceneIngestOptions& opt = {}) {
  const auto& views = scene.views;
  detail::require(views.size() >= 3, "a scene needs at least three views");
  const SceneSphere sphere = estimate_scene_sphere(views, opt.sphere);
  const ViewMatchTable table = build_match_table(views, sphere, opt.grid, opt.jobs);

  std::vector<int> retained;
  for (std::size_t p = 0; p < views.size(); ++p) {
    if (!opt.holdout.held_out(p)) retained.push_back(views[p].id);
  }
  detail::require(retained.size() >= 3, "fewer than three views remain after the holdout");

  IngestResult result;
  for (std::size_t p = 0; p < views.size(); ++p) {
    if (opt.holdout.held_out(p)) continue;
    const Selection sel = select_references(table, views[p].id, kDefaultReferenceCount, retained);
    const auto& r1 = views[table.position_of(sel.references[0])];
    const auto& r2 = views[table.position_of(sel.references[1])];
    result.sequences.push_back({scene.image_path(views[p]).string(), scene.image_path(r1).string(),
                                scene.image_path(r2).string(), SourceKind::kMultiViewScene});
  }
  return result;
}

inline IngestResult ingest_scene_views(const fs::path& camera_file, const SceneIngestOptions& opt = {}) {
  return ingest_scene_views(load_scene(camera_file), opt);
}

// ---------------------------------------------------------------------------
// Manifest

inline constexpr int kMaxRefOffset = 5;
inline constexpr int kDefaultCrop = 128;

struct RefOffset {
  int dy = 0;
  int dx = 0;

  friend bool operator==(const RefOffset&, const RefOffset&) = default;
};

/// One training quadruplet {degraded, ref1, ref2 | gt} and how it was made.
struct SampleManifestEntry {
  std::string sample_id;
  std::string gt_path;  ///< relative to the manifest directory
  std::string degraded_path;
  std::string ref1_path;
  std::string ref2_path;
  DegradationRecipe recipe;
  std::array<RefOffset, 2> ref_offsets{};
  CropWindow crop;
  Augmentation aug;
  RawSequence source;  ///< full-resolution inputs the sample was cut from

  friend bool operator==(const SampleManifestEntry&, const SampleManifestEntry&) = default;
};

inline nlohmann::json to_manifest_json(const SampleManifestEntry& e) {
  return {
      {"sample_id", e.sample_id},
      {"gt_path", e.gt_path},
      {"degraded_path", e.degraded_path},
      {"ref1_path", e.ref1_path},
      {"ref2_path", e.ref2_path},
      {"recipe", e.recipe},
      {"ref_offsets", {{e.ref_offsets[0].dy, e.ref_offsets[0].dx}, {e.ref_offsets[1].dy, e.ref_offsets[1].dx}}},
      {"crop", {{"top", e.crop.top}, {"left", e.crop.left}, {"size", e.crop.size}}},
      {"aug", {{"hflip", e.aug.hflip}, {"vflip", e.aug.vflip}, {"rot90", e.aug.rot90}}},
      {"source",
       {{"target_path", e.source.target_path},
        {"ref1_path", e.source.ref1_path},
        {"ref2_path", e.source.ref2_path},
        {"source_kind", to_string(e.source.source_kind)}}},
  };
}

inline SampleManifestEntry manifest_entry_from_json(const nlohmann::json& j) {
  SampleManifestEntry e;
  try {
    j.at("sample_id").get_to(e.sample_id);
    j.at("gt_path").get_to(e.gt_path);
    j.at("degraded_path").get_to(e.degraded_path);
    j.at("ref1_path").get_to(e.ref1_path);
    j.at("ref2_path").get_to(e.ref2_path);
    j.at("recipe").get_to(e.recipe);
    const auto& offs = j.at("ref_offsets");
    for (std::size_t k = 0; k < 2; ++k) e.ref_offsets[k] = {offs.at(k).at(0).get<int>(), offs.at(k).at(1).get<int>()};
    const auto& c = j.at("crop");
    e.crop = {c.at("top").get<int>(), c.at("left").get<int>(), c.at("size").get<int>()};
    const auto& a = j.at("aug");
    e.aug = {a.at("hflip").get<bool>(), a.at("vflip").get<bool>(), a.at("rot90").get<int>()};
    const auto& s = j.at("source");
    e.source = {s.at("target_path").get<std::string>(), s.at("ref1_path").get<std::string>(),
                s.at("ref2_path").get<std::string>(),
                source_kind_from_string(s.at("source_kind").get<std::string>())};
  } catch (const nlohmann::json::exception& ex) {
    throw ParameterError(std::string("malformed manifest entry: ") + ex.what());
  }
  for (const auto& o : e.ref_offsets) {
    detail::require(std::abs(o.dy) <= kMaxRefOffset && std::abs(o.dx) <= kMaxRefOffset,
                    "manifest reference offset exceeds 5 pixels");
  }
  return e;
}

inline constexpr const char* kManifestFile = "manifest.jsonl";

inline std::vector<SampleManifestEntry> read_manifest(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::vector<SampleManifestEntry> entries;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    try {
      entries.push_back(manifest_entry_from_json(nlohmann::json::parse(line)));
    } catch (const nlohmann::json::parse_error& ex) {
      throw ParameterError(std::string("malformed manifest line: ") + ex.what());
    }
  }
  return entries;
}

// ---------------------------------------------------------------------------
// Sample construction

struct BuildOptions {
  fs::path out_dir;
  std::uint64_t seed = 0;
  int crop = kDefaultCrop;
  std::size_t count = 1;
  DegradationToggles toggles;
  unsigned jobs = 1;
};

struct Manifest {
  fs::path path;
  std::vector<SampleManifestEntry> entries;
  std::size_t skipped_sequences = 0;
  std::vector<std::string> warnings;
};

/// Images of one finished sample, all crop x crop.
struct SampleImages {
  ImagePlane degraded;
  ImagePlane gt;
  ImagePlane ref1;
  ImagePlane ref2;
};

/// Everything random about sample `index`, drawn before any pixel work.
struct SamplePlan {
  std::size_t sequence = 0;
  std::uint64_t recipe_seed = 0;
  std::array<RefOffset, 2> ref_offsets{};
  CropWindow crop;
  Augmentation aug;
};

/// `dims` holds the size of each usable sequence; `sequence` indexes it.
inline SamplePlan plan_sample(std::uint64_t seed, std::size_t index, std::span<const ImageDims> dims,
                              int crop_size) {
  detail::require(!dims.empty(), "no usable sequences");
  SamplePlan plan;
  CounterRng rng(derive_seed(seed, seed_tags::kSample, index));
  plan.sequence = static_cast<std::size_t>(rng.uniform_int(0, static_cast<std::int64_t>(dims.size()) - 1));
  const ImageDims d = dims[plan.sequence];
  plan.recipe_seed = rng.next_u64();
  for (auto& o : plan.ref_offsets) {
    o.dy = static_cast<int>(rng.uniform_int(-kMaxRefOffset, kMaxRefOffset));
    o.dx = static_cast<int>(rng.uniform_int(-kMaxRefOffset, kMaxRefOffset));
  }
  plan.crop.size = crop_size;
  plan.crop.top = static_cast<int>(rng.uniform_int(0, d.height - crop_size));
  plan.crop.left = static_cast<int>(rng.uniform_int(0, d.width - crop_size));
  plan.aug.hflip = rng.bernoulli(0.5);
  plan.aug.vflip = rng.bernoulli(0.5);
  plan.aug.rot90 = static_cast<int>(rng.uniform_int(0, 3));
  return plan;
}

/// Degrades the full-resolution target, shifts the references, then applies
/// the shared crop and flip/rotation to all four images.
inline SampleImages make_sample(const ImagePlane& target, const ImagePlane& ref1, const ImagePlane& ref2,
                                const DegradationRecipe& recipe, const std::array<RefOffset, 2>& offsets,
                                const CropWindow& window, const Augmentation& aug) {
  auto finish = [&](const ImagePlane& img) { return apply_augmentation(crop(img, window), aug); };
  SampleImages s;
  s.degraded = finish(apply_recipe(target, recipe));
  s.gt = finish(target);
  s.ref1 = finish(shift_clamped(ref1, offsets[0].dy, offsets[0].dx));
  s.ref2 = finish(shift_clamped(ref2, offsets[1].dy, offsets[1].dx));
  return s;
}

namespace detail {

/// Returns the shared dimensions of a usable sequence, or a reason it is not.
inline std::optional<ImageDims> usable_dims(const RawSequence& s, int crop, std::string& why) {
  try {
    const ImageDims t = png_dimensions(s.target_path);
    const ImageDims a = png_dimensions(s.ref1_path);
    const ImageDims b = png_dimensions(s.ref2_path);
    if (t.height != a.height || t.width != a.width || t.height != b.height || t.width != b.width) {
      why = s.target_path + ": sequence images differ in size";
      return std::nullopt;
    }
    if (t.height < crop || t.width < crop) {
      why = s.target_path + ": smaller than the crop size";
      return std::nullopt;
    }
    if (t.height < kMinPipelineDim || t.width < kMinPipelineDim) {
      why = s.target_path + ": smaller than 8x8";
      return std::nullopt;
    }
    return t;
  } catch (const IoError& e) {
    why = e.what();
    return std::nullopt;
  }
}

}  // namespace detail

/// Builds `count` samples from `sequences` into out_dir/images and writes
/// out_dir/manifest.jsonl. Every random choice derives from (seed, sample
/// index), so the output does not depend on `jobs`.
inline Manifest build_dataset(const std::vector<RawSequence>& sequences, const BuildOptions& opt) {
  detail::require(!sequences.empty(), "no sequences to build from");
  detail::require(opt.crop >= kMinPipelineDim, "crop size must be at least 8");
  detail::require(opt.count > 0, "sample count must be positive");

  Manifest manifest;
  std::vector<std::size_t> usable;
  std::vector<ImageDims> dims;
  for (std::size_t k = 0; k < sequences.size(); ++k) {
    std::string why;
    if (auto d = detail::usable_dims(sequences[k], opt.crop, why)) {
      usable.push_back(k);
      dims.push_back(*d);
    } else {
      ++manifest.skipped_sequences;
      manifest.warnings.push_back(why);
    }
  }
  detail::require(!usable.empty(), "every sequence was skipped; nothing to build");

  const fs::path image_dir = opt.out_dir / "images";
  fs::create_directories(image_dir);
  manifest.path = opt.out_dir / kManifestFile;
  manifest.entries.resize(opt.count);

  parallel_for(opt.count, opt.jobs, [&](std::size_t s) {
    const SamplePlan plan = plan_sample(opt.seed, s, dims, opt.crop);
    const RawSequence& seq = sequences[usable[plan.sequence]];

    const ImagePlane target = read_png(seq.target_path);
    const ImagePlane ref1 = read_png(seq.ref1_path);
    const ImagePlane ref2 = read_png(seq.ref2_path);
    SampleManifestEntry e;
    char id[32];
    std::snprintf(id, sizeof id, "%06zu", s);
    e.sample_id = id;
    e.recipe = sample_recipe(plan.recipe_seed, target.height(), target.width(), opt.toggles);
    e.ref_offsets = plan.ref_offsets;
    e.crop = plan.crop;
    e.aug = plan.aug;
    e.source = seq;
    const SampleImages imgs = make_sample(target, ref1, ref2, e.recipe, e.ref_offsets, e.crop, e.aug);

    e.gt_path = "images/" + e.sample_id + "_gt.png";
    e.degraded_path = "images/" + e.sample_id + "_degraded.png";
    e.ref1_path = "images/" + e.sample_id + "_ref1.png";
    e.ref2_path = "images/" + e.sample_id + "_ref2.png";
    write_png(opt.out_dir / e.gt_path, imgs.gt);
    write_png(opt.out_dir / e.degraded_path, imgs.degraded);
    write_png(opt.out_dir / e.ref1_path, imgs.ref1);
    write_png(opt.out_dir / e.ref2_path, imgs.ref2);
    manifest.entries[s] = std::move(e);
  });

  std::ofstream out(manifest.path, std::ios::binary);
  if (!out) throw IoError("cannot write " + manifest.path.string());
  for (const auto& e : manifest.entries) out << to_manifest_json(e).dump() << '\n';
  if (!out) throw IoError("cannot write " + manifest.path.string());
  return manifest;
}

/// Recomputes an entry's degraded patch from its source target, recipe and
/// augmentation record, quantized as it would be stored.
inline ImagePlane replay_degraded(const SampleManifestEntry& e) {
  const ImagePlane target = read_png(e.source.target_path);
  return quantize_u8(apply_augmentation(crop(apply_recipe(target, e.recipe), e.crop), e.aug));
}

/// True when the stored degraded patch equals its replay bit for bit.
inline bool replays_exactly(const SampleManifestEntry& e, const fs::path& manifest_dir) {
  return read_png(manifest_dir / e.degraded_path) == replay_degraded(e);
}

}  // namespace nerfdeg
