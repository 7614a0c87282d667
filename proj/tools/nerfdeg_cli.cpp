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


// nerfdeg command-line tool: degrade, select-views, build-dataset, metrics,
// convert-poses. Exit codes: 0 success, 1 parameter error, 2 I/O failure.

#include <CLI11.hpp>

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "nerfdeg/nerfdeg.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

/// Seed used by every randomized command when --seed is not given.
constexpr std::uint64_t kDefaultSeed = 1234;
/// Tag mixing the per-image seed in directory mode.
constexpr std::uint64_t kBatchTag = 0x6261746368ULL;

constexpr int kExitOk = 0;
constexpr int kExitParameter = 1;
constexpr int kExitIo = 2;

enum class LogLevel { kError, kWarn, kInfo, kDebug };
LogLevel g_log_level = LogLevel::kInfo;

void log(LogLevel level, const std::string& msg) {
  static const char* kNames[] = {"error", "warn", "info", "debug"};
  if (level <= g_log_level) std::cerr << "[" << kNames[static_cast<int>(level)] << "] " << msg << "\n";
}

/// Reads --config JSON. Top-level scalars and the object named after the
/// active subcommand feed that subcommand; sections for other subcommands are
/// ignored. Explicit flags always win because CLI11 only fills empty options.
class JsonConfig : public CLI::Config {
 public:
  explicit JsonConfig(std::string active) : active_(std::move(active)) {}

  std::string to_config(const CLI::App*, bool, bool, std::string) const override { return "{}"; }

  std::vector<CLI::ConfigItem> from_config(std::istream& in) const override {
    json root;
    try {
      root = json::parse(in);
    } catch (const json::parse_error& e) {
      throw CLI::ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    if (!root.is_object()) throw CLI::ConfigError("config must be a JSON object");
    std::vector<CLI::ConfigItem> items;
    for (const auto& [key, value] : root.items()) {
      if (value.is_object()) {
        if (key != active_) continue;
        for (const auto& [k, v] : value.items()) items.push_back(item(k, v));
      } else {
        items.push_back(item(key, value));
      }
    }
    return items;
  }

 private:
  CLI::ConfigItem item(const std::string& key, const json& value) const {
    CLI::ConfigItem it;
    if (!active_.empty()) it.parents = {active_};
    it.name = key;
    auto text = [&](const json& v) {
      if (v.is_string()) return v.get<std::string>();
      if (v.is_object()) throw CLI::ConfigError("nested object for key '" + key + "'");
      return v.dump();
    };
    if (value.is_array()) {
      for (const auto& v : value) it.inputs.push_back(text(v));
    } else {
      it.inputs.push_back(text(value));
    }
    return it;
  }

  std::string active_;
};

struct ToggleFlags {
  bool no_sgn = false;
  bool no_repos = false;
  bool no_ablur = false;
  bool no_ra = false;

  void add_to(CLI::App* app) {
    app->add_flag("--no-sgn", no_sgn, "Disable splatted Gaussian noise");
    app->add_flag("--no-repos", no_repos, "Disable pixel re-positioning");
    app->add_flag("--no-ablur", no_ablur, "Disable anisotropic blur");
    app->add_flag("--no-ra", no_ra, "Apply stages to the whole image instead of masked regions");
  }

  nerfdeg::DegradationToggles toggles() const { return {!no_sgn, !no_repos, !no_ablur, !no_ra}; }

  json to_json() const {
    return {{"no_sgn", no_sgn}, {"no_repos", no_repos}, {"no_ablur", no_ablur}, {"no_ra", no_ra}};
  }
};

unsigned resolve_jobs(unsigned jobs) {
  return jobs > 0 ? jobs : std::max(1u, std::thread::hardware_concurrency());
}

/// The effective configuration goes to stderr so stdout stays machine-readable.
void print_effective(const std::string& command, json cfg) {
  std::cerr << json{{"command", command}, {"effective_config", std::move(cfg)}}.dump() << "\n";
}

// ---------------------------------------------------------------------------
// degrade

struct DegradeArgs {
  std::string input;
  std::string output;
  std::uint64_t seed = kDefaultSeed;
  std::string recipe;
  bool preview = false;
  unsigned jobs = 0;
  ToggleFlags flags;
};

fs::path recipe_path_for(const fs::path& output) {
  fs::path p = output;
  return p.replace_extension(".recipe.json");
}

fs::path preview_path_for(const fs::path& output) {
  fs::path p = output;
  return p.replace_extension(".preview.png");
}

nerfdeg::ImagePlane side_by_side(const nerfdeg::ImagePlane& a, const nerfdeg::ImagePlane& b) {
  nerfdeg::ImagePlane out(a.height(), a.width() + b.width());
  for (int i = 0; i < a.height(); ++i) {
    for (int j = 0; j < a.width(); ++j) {
      for (int c = 0; c < 3; ++c) out.at(i, j, c) = a.at(i, j, c);
    }
    for (int j = 0; j < b.width(); ++j) {
      for (int c = 0; c < 3; ++c) out.at(i, a.width() + j, c) = b.at(i, j, c);
    }
  }
  return out;
}

int run_degrade(const DegradeArgs& a) {
  const unsigned jobs = resolve_jobs(a.jobs);
  json cfg = {{"input", a.input}, {"output", a.output}, {"seed", a.seed},
              {"recipe", a.recipe}, {"preview", a.preview}, {"jobs", jobs}};
  cfg.update(a.flags.to_json());
  print_effective("degrade", cfg);

  struct Job {
    fs::path in;
    fs::path out;
    std::uint64_t seed;
  };
  std::vector<Job> work;
  const fs::path input(a.input);
  const bool batch = fs::is_directory(input);
  if (batch) {
    if (!a.recipe.empty()) throw nerfdeg::ParameterError("--recipe needs a single input image");
    const auto files = nerfdeg::sorted_pngs(input);
    if (files.empty()) throw nerfdeg::IoError("no PNG files in " + input.string());
    for (std::size_t k = 0; k < files.size(); ++k) {
      work.push_back({files[k], fs::path(a.output) / files[k].filename(),
                      nerfdeg::derive_seed(a.seed, kBatchTag, k)});
    }
  } else {
    work.push_back({input, fs::path(a.output), a.seed});
  }

  // Check every input before writing anything.
  std::vector<nerfdeg::ImageDims> dims;
  for (const auto& w : work) dims.push_back(nerfdeg::png_dimensions(w.in));
  std::optional<nerfdeg::DegradationRecipe> fixed;
  if (!a.recipe.empty()) {
    fixed = nerfdeg::load_recipe(a.recipe);
    if (fixed->height != dims[0].height || fixed->width != dims[0].width) {
      throw nerfdeg::ParameterError("recipe was sampled for a different image size");
    }
  }

  std::vector<json> lines(work.size());
  nerfdeg::parallel_for(work.size(), jobs, [&](std::size_t k) {
    const auto& w = work[k];
    const nerfdeg::ImagePlane img = nerfdeg::read_png(w.in);
    const nerfdeg::DegradationRecipe recipe =
        fixed ? *fixed : nerfdeg::sample_recipe(w.seed, img.height(), img.width(), a.flags.toggles());
    const nerfdeg::ImagePlane out = nerfdeg::apply_recipe(img, recipe);
    nerfdeg::write_png(w.out, out);
    nerfdeg::save_recipe(recipe_path_for(w.out), recipe);
    json line = {{"input", w.in.string()}, {"output", w.out.string()},
                 {"recipe", recipe_path_for(w.out).string()}, {"seed", recipe.seed}};
    if (a.preview) {
      nerfdeg::write_png(preview_path_for(w.out), side_by_side(img, out));
      line["preview"] = preview_path_for(w.out).string();
    }
    lines[k] = std::move(line);
  });
  for (const auto& l : lines) std::cout << l.dump() << "\n";
  return kExitOk;
}

// ---------------------------------------------------------------------------
// select-views

struct SelectArgs {
  std::string cameras;
  std::string target = "all";
  int k = nerfdeg::kDefaultReferenceCount;
  int grid = nerfdeg::kDefaultRayGrid;
  std::string sphere_center;
  double sphere_radius = 0.0;
  unsigned jobs = 0;
};

nerfdeg::Vec3 parse_vec3(const std::string& text) {
  std::vector<double> v;
  std::stringstream ss(text);
  std::string part;
  while (std::getline(ss, part, ',')) {
    try {
      std::size_t used = 0;
      v.push_back(std::stod(part, &used));
      if (used != part.size()) throw std::invalid_argument(part);
    } catch (const std::exception&) {
      throw nerfdeg::ParameterError("expected x,y,z but got '" + text + "'");
    }
  }
  if (v.size() != 3) throw nerfdeg::ParameterError("expected x,y,z but got '" + text + "'");
  return {v[0], v[1], v[2]};
}

int parse_view_id(const std::string& text) {
  try {
    std::size_t used = 0;
    const int id = std::stoi(text, &used);
    if (used == text.size()) return id;
  } catch (const std::exception&) {
  }
  throw nerfdeg::ParameterError("--target must be a view id or 'all', got '" + text + "'");
}

nerfdeg::SphereOverrides sphere_overrides(const std::string& center, bool radius_given, double radius) {
  nerfdeg::SphereOverrides o;
  if (!center.empty()) o.center = parse_vec3(center);
  if (radius_given) {
    nerfdeg::detail::require(radius > 0.0, "--sphere-radius must be positive");
    o.radius = radius;
  }
  return o;
}

int run_select_views(const SelectArgs& a, bool radius_given) {
  const unsigned jobs = resolve_jobs(a.jobs);
  nerfdeg::detail::require(a.grid >= 1, "--grid must be positive");
  const auto overrides = sphere_overrides(a.sphere_center, radius_given, a.sphere_radius);
  print_effective("select-views", {{"cameras", a.cameras}, {"target", a.target}, {"k", a.k},
                                   {"grid", a.grid}, {"sphere_center", a.sphere_center},
                                   {"sphere_radius", radius_given ? json(a.sphere_radius) : json()},
                                   {"jobs", jobs}});

  const nerfdeg::SceneCameras scene = nerfdeg::load_scene(a.cameras);
  const nerfdeg::SceneSphere sphere = nerfdeg::estimate_scene_sphere(scene.views, overrides);
  log(LogLevel::kDebug, "scene sphere radius " + std::to_string(sphere.radius));
  const nerfdeg::ViewMatchTable table = nerfdeg::build_match_table(scene.views, sphere, a.grid, jobs);

  std::vector<int> targets;
  if (a.target == "all") {
    targets = table.view_ids;
  } else {
    targets.push_back(parse_view_id(a.target));
  }
  for (int t : targets) {
    const nerfdeg::Selection sel = nerfdeg::select_references(table, t, a.k);
    std::cout << json{{"target", sel.target}, {"references", sel.references}, {"costs", sel.costs}}.dump()
              << "\n";
  }
  return kExitOk;
}

// ---------------------------------------------------------------------------
// build-dataset

struct BuildArgs {
  std::string scenes;
  std::string video;
  std::string out;
  std::uint64_t seed = kDefaultSeed;
  std::size_t count = 100;
  double fraction = 1.0;
  int crop = nerfdeg::kDefaultCrop;
  int holdout_every = nerfdeg::HoldoutRule{}.every;
  int grid = nerfdeg::kDefaultRayGrid;
  std::string sphere_center;
  double sphere_radius = 0.0;
  unsigned jobs = 0;
  ToggleFlags flags;
};

std::vector<fs::path> scene_files(const fs::path& dir) {
  if (!fs::is_directory(dir)) throw nerfdeg::IoError("not a directory: " + dir.string());
  std::vector<fs::path> files;
  for (const auto& e : fs::recursive_directory_iterator(dir)) {
    if (e.is_regular_file() && e.path().extension() == ".json") files.push_back(e.path());
  }
  std::sort(files.begin(), files.end());
  return files;
}

int run_build_dataset(const BuildArgs& a, bool radius_given) {
  const unsigned jobs = resolve_jobs(a.jobs);
  if (a.scenes.empty() && a.video.empty()) {
    throw nerfdeg::ParameterError("give --scenes and/or --video");
  }
  nerfdeg::detail::require(a.holdout_every >= 0, "--holdout-every must be >= 0");
  json cfg = {{"scenes", a.scenes}, {"video", a.video}, {"out", a.out}, {"seed", a.seed},
              {"count", a.count}, {"fraction", a.fraction}, {"crop", a.crop},
              {"holdout_every", a.holdout_every}, {"grid", a.grid}, {"sphere_center", a.sphere_center},
              {"sphere_radius", radius_given ? json(a.sphere_radius) : json()}, {"jobs", jobs}};
  cfg.update(a.flags.to_json());
  print_effective("build-dataset", cfg);

  std::vector<nerfdeg::RawSequence> sequences;
  std::size_t skipped = 0;
  std::vector<std::string> warnings;
  if (!a.scenes.empty()) {
    nerfdeg::SceneIngestOptions opt;
    opt.holdout.every = a.holdout_every;
    opt.grid = a.grid;
    opt.sphere = sphere_overrides(a.sphere_center, radius_given, a.sphere_radius);
    opt.jobs = jobs;
    for (const auto& file : scene_files(a.scenes)) {
      try {
        auto r = nerfdeg::ingest_scene_views(file, opt);
        sequences.insert(sequences.end(), r.sequences.begin(), r.sequences.end());
      } catch (const nerfdeg::ParameterError& e) {
        ++skipped;
        warnings.push_back(file.string() + ": " + e.what());
      }
    }
  }
  if (!a.video.empty()) {
    auto r = nerfdeg::ingest_video_triplets(a.video, a.fraction, a.seed);
    sequences.insert(sequences.end(), r.sequences.begin(), r.sequences.end());
    skipped += r.skipped;
    warnings.insert(warnings.end(), r.warnings.begin(), r.warnings.end());
  }

  nerfdeg::BuildOptions opt;
  opt.out_dir = a.out;
  opt.seed = a.seed;
  opt.crop = a.crop;
  opt.count = a.count;
  opt.toggles = a.flags.toggles();
  opt.jobs = jobs;
  const nerfdeg::Manifest m = nerfdeg::build_dataset(sequences, opt);
  warnings.insert(warnings.end(), m.warnings.begin(), m.warnings.end());
  for (const auto& w : warnings) log(LogLevel::kWarn, "skipped " + w);

  std::cout << json{{"manifest", m.path.string()},
                    {"samples", m.entries.size()},
                    {"sequences", sequences.size()},
                    {"skipped", skipped + m.skipped_sequences},
                    {"seed", a.seed}}
                   .dump()
            << "\n";
  return kExitOk;
}

// ---------------------------------------------------------------------------
// metrics

int run_metrics(const std::string& ref, const std::string& test) {
  print_effective("metrics", {{"ref", ref}, {"test", test}});
  const nerfdeg::MetricReport r = nerfdeg::compare(nerfdeg::read_png(ref), nerfdeg::read_png(test));
  std::cout << json{{"psnr_db", r.psnr_db}, {"ssim", r.ssim}}.dump() << "\n";
  return kExitOk;
}

// ---------------------------------------------------------------------------
// convert-poses

bool is_image(const fs::path& p) {
  auto ext = p.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
  return ext == ".png" || ext == ".jpg" || ext == ".jpeg";
}

int run_convert_poses(const std::string& input, const std::string& output, const std::string& images) {
  print_effective("convert-poses", {{"input", input}, {"output", output}, {"images", images}});
  const auto rows = nerfdeg::parse_poses_bounds(nerfdeg::read_text_file(input));
  std::vector<std::string> names;
  if (!images.empty()) {
    if (!fs::is_directory(images)) throw nerfdeg::IoError("not a directory: " + images);
    std::vector<fs::path> files;
    for (const auto& e : fs::directory_iterator(images)) {
      if (e.is_regular_file() && is_image(e.path())) files.push_back(e.path());
    }
    std::sort(files.begin(), files.end());
    const fs::path base = fs::absolute(fs::path(output)).parent_path();
    for (const auto& f : files) names.push_back(fs::absolute(f).lexically_relative(base).generic_string());
  }
  const auto views = nerfdeg::cameras_from_llff(rows, names);
  const fs::path out(output);
  if (out.has_parent_path()) fs::create_directories(out.parent_path());
  nerfdeg::save_scene(out, views);
  std::cout << json{{"output", output}, {"views", views.size()}}.dump() << "\n";
  return kExitOk;
}

/// First argv token naming a subcommand, used to route config sections.
std::string active_subcommand(int argc, char** argv, const std::vector<std::string>& names) {
  for (int i = 1; i < argc; ++i) {
    const std::string arg = argv[i];
    if (std::find(names.begin(), names.end(), arg) != names.end()) return arg;
  }
  return {};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"NeRF-style degradation simulator and training-set builder"};
  app.require_subcommand(1);
  app.fallthrough();
  app.allow_config_extras(CLI::config_extras_mode::error);

  const std::vector<std::string> names = {"degrade", "select-views", "build-dataset", "metrics",
                                          "convert-poses"};
  app.config_formatter(std::make_shared<JsonConfig>(active_subcommand(argc, argv, names)));
  app.set_config("--config", "", "JSON file of option defaults; explicit flags override it");

  std::string log_level = "info";
  app.add_option("--log-level", log_level, "error, warn, info or debug")
      ->check(CLI::IsMember({"error", "warn", "info", "debug"}));

  DegradeArgs deg;
  auto* degrade = app.add_subcommand("degrade", "Degrade one image or a directory of PNGs");
  degrade->add_option("--input", deg.input, "Input PNG or directory")->required();
  degrade->add_option("--output", deg.output, "Output PNG or directory")->required();
  degrade->add_option("--seed", deg.seed, "Recipe seed")->capture_default_str();
  degrade->add_option("--recipe", deg.recipe, "Replay a saved recipe instead of sampling");
  degrade->add_flag("--preview", deg.preview, "Also write a side-by-side before/after PNG");
  degrade->add_option("--jobs", deg.jobs, "Worker threads, 0 = all cores")->capture_default_str();
  deg.flags.add_to(degrade);

  SelectArgs sel;
  auto* select = app.add_subcommand("select-views", "Pick reference views by mutual cost");
  select->add_option("--cameras", sel.cameras, "Scene camera JSON")->required();
  select->add_option("--target", sel.target, "View id or 'all'")->capture_default_str();
  select->add_option("--k", sel.k, "References per target")->capture_default_str();
  select->add_option("--grid", sel.grid, "Rays per image side")->capture_default_str();
  select->add_option("--sphere-center", sel.sphere_center, "Override sphere center as x,y,z");
  auto* radius_opt = select->add_option("--sphere-radius", sel.sphere_radius, "Override sphere radius");
  select->add_option("--jobs", sel.jobs, "Worker threads, 0 = all cores")->capture_default_str();

  BuildArgs bld;
  auto* build = app.add_subcommand("build-dataset", "Build a training set and manifest");
  build->add_option("--scenes", bld.scenes, "Directory of scene camera JSON files");
  build->add_option("--video", bld.video, "Directory of video clips (PNG frame folders)");
  build->add_option("--out", bld.out, "Output directory")->required();
  build->add_option("--seed", bld.seed, "Dataset seed")->capture_default_str();
  build->add_option("--count", bld.count, "Number of samples")->capture_default_str();
  build->add_option("--fraction", bld.fraction, "Fraction of video clips to use")->capture_default_str();
  build->add_option("--crop", bld.crop, "Crop size")->capture_default_str();
  build->add_option("--holdout-every", bld.holdout_every, "Hold out every n-th view, 0 = none")
      ->capture_default_str();
  build->add_option("--grid", bld.grid, "Rays per image side for view selection")->capture_default_str();
  build->add_option("--sphere-center", bld.sphere_center, "Override every scene's sphere center as x,y,z");
  auto* build_radius = build->add_option("--sphere-radius", bld.sphere_radius, "Override every scene's sphere radius");
  build->add_option("--jobs", bld.jobs, "Worker threads, 0 = all cores")->capture_default_str();
  bld.flags.add_to(build);

  std::string ref, test;
  auto* metrics = app.add_subcommand("metrics", "PSNR and SSIM between two PNGs");
  metrics->add_option("--ref", ref, "Reference PNG")->required();
  metrics->add_option("--test", test, "Test PNG")->required();

  std::string llff_in, llff_out, llff_images;
  auto* convert = app.add_subcommand("convert-poses", "Convert LLFF poses_bounds to scene JSON");
  convert->add_option("--input", llff_in, "poses_bounds.npy")->required();
  convert->add_option("--output", llff_out, "Scene JSON to write")->required();
  convert->add_option("--images", llff_images, "Image directory, sorted to match the poses");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::FileError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIo;
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitParameter;
  }

  static const std::map<std::string, LogLevel> kLevels = {
      {"error", LogLevel::kError}, {"warn", LogLevel::kWarn}, {"info", LogLevel::kInfo}, {"debug", LogLevel::kDebug}};
  g_log_level = kLevels.at(log_level);

  try {
    if (degrade->parsed()) return run_degrade(deg);
    if (select->parsed()) return run_select_views(sel, radius_opt->count() > 0);
    if (build->parsed()) return run_build_dataset(bld, build_radius->count() > 0);
    if (metrics->parsed()) return run_metrics(ref, test);
    if (convert->parsed()) return run_convert_poses(llff_in, llff_out, llff_images);
  } catch (const nerfdeg::IoError& e) {
    log(LogLevel::kError, e.what());
    return kExitIo;
  } catch (const std::filesystem::filesystem_error& e) {
    log(LogLevel::kError, e.what());
    return kExitIo;
  } catch (const nerfdeg::ParameterError& e) {
    log(LogLevel::kError, e.what());
    return kExitParameter;
  } catch (const nlohmann::json::exception& e) {
    log(LogLevel::kError, e.what());
    return kExitParameter;
  }
  return kExitParameter;
}
