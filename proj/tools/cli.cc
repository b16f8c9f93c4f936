/* Copyright 2026 The SBAM Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#include "cli.h"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "sbam/config.h"
#include "sbam/errors.h"
#include "sbam/image.h"
#include "sbam/masking.h"
#include "sbam/metrics.h"
#include "sbam/salience.h"
#include "sbam/synthetic.h"
#include "sbam/tensor_io.h"
#include "sbam/tokenize.h"
#include "sbam/trainer.h"

namespace sbam::cli {

namespace {

namespace fs = std::filesystem;

// Masked patches keep this fraction of their brightness in overlays.
constexpr float kMaskedShade = 0.3f;

// Streams for the built-in synthetic dataset.
constexpr std::uint64_t kTrainImagesStream = 100;
constexpr std::uint64_t kHoldoutImagesStream = 101;

struct RunConfig {
  std::string config_path;
  std::vector<std::string> images;
  fs::path out;
  std::uint64_t seed = 0;
  std::size_t patch = TrainConfig{}.patch_side;

  std::string strategy{to_string(MaskingConfig{}.strategy)};
  double ratio = MaskingConfig{}.base_ratio;
  double delta_r = MaskingConfig{}.delta_r;
  double delta = MaskingConfig{}.delta;
  float noise = MaskingConfig{}.noise_amplitude;
  bool invert_selection = false;

  std::size_t epochs = TrainConfig{}.epochs;
  double lr = TrainConfig{}.lr;
  std::size_t batch = TrainConfig{}.batch;
  std::size_t hidden = TrainConfig{}.hidden;
  float eps = TrainConfig{}.eps;
  double clip_norm = TrainConfig{}.clip_norm;
  std::size_t count = 64;
  std::optional<std::size_t> holdout;

  std::vector<std::string> strategies{"random", "sbam"};
  std::vector<double> ratios{0.3, 0.5, 0.75, 0.9};
  std::string pimr_baseline = "min";

  std::size_t size = PlantedObjectSpec{}.size;
  double coverage = PlantedObjectSpec{}.coverage;
  std::size_t channels = PlantedObjectSpec{}.channels;
  float texture = PlantedObjectSpec{}.texture;
  float background_texture = PlantedObjectSpec{}.background_texture;
};

void add_common(CLI::App* sub, RunConfig& c) {
  sub->add_option("--config", c.config_path,
                  "key=value file; flags on the command line take precedence");
  sub->add_option("--out", c.out, "Output location");
}

void add_seed(CLI::App* sub, RunConfig& c) {
  sub->add_option("--seed", c.seed, "Seed for every random draw");
}

void add_images(CLI::App* sub, RunConfig& c, const std::string& what) {
  sub->add_option("--images", c.images, what)->delimiter(',');
}

void add_patch(CLI::App* sub, RunConfig& c) {
  sub->add_option("--patch", c.patch, "Patch side in pixels")
      ->check(CLI::PositiveNumber);
}

void add_masking(CLI::App* sub, RunConfig& c) {
  sub->add_option("--strategy", c.strategy,
                  "random, sbam, sbam-amr or salience-only");
  sub->add_option("--ratio", c.ratio, "Base masking ratio r");
  sub->add_option("--delta-r", c.delta_r, "Half-width of the adaptive ratio range");
  sub->add_option("--delta", c.delta, "Salience threshold for the adaptive ratio");
  sub->add_option("--noise", c.noise, "Amplitude of the uniform salience noise");
  sub->add_flag("--invert-selection", c.invert_selection,
                "Mask the least salient tokens instead of the most salient");
}

void add_training(CLI::App* sub, RunConfig& c) {
  sub->add_option("--epochs", c.epochs, "Training epochs");
  sub->add_option("--lr", c.lr, "SGD learning rate");
  sub->add_option("--batch", c.batch, "Minibatch size, 0 for full batch");
  sub->add_option("--hidden", c.hidden, "Hidden width of the model")
      ->check(CLI::PositiveNumber);
  sub->add_option("--eps", c.eps, "Epsilon of the target normalisation");
  sub->add_option("--clip-norm", c.clip_norm,
                  "Rescale gradients to at most this global norm, 0 to disable");
  sub->add_option("--count", c.count,
                  "Synthetic training images when --images is absent")
      ->check(CLI::PositiveNumber);
}

void add_synthetic(CLI::App* sub, RunConfig& c) {
  sub->add_option("--size", c.size, "Image side in pixels");
  sub->add_option("--coverage", c.coverage, "Fraction of patches the object covers");
  sub->add_option("--channels", c.channels, "1 (PGM) or 3 (PPM)");
  sub->add_option("--texture", c.texture, "Stripe amplitude inside the object");
  sub->add_option("--background-texture", c.background_texture,
                  "Stripe amplitude on the background");
}

// Fills every option not given on the command line from the config file.
void apply_config_file(CLI::App* sub, const RunConfig& c) {
  if (c.config_path.empty()) return;
  const KeyValueConfig kv = KeyValueConfig::load(c.config_path);
  for (const auto& [key, value] : kv.entries()) {
    CLI::Option* opt = key == "config" || key == "help"
                           ? nullptr
                           : sub->get_option_no_throw("--" + key);
    if (opt == nullptr) {
      throw ConfigError(kv.source() + ": unknown key '" + key + "' for command '" +
                        sub->get_name() + "'");
    }
    if (opt->count() > 0) continue;
    try {
      opt->add_result(value);
      opt->run_callback();
    } catch (const CLI::Error& e) {
      throw ConfigError(kv.source() + ": key '" + key + "': " + e.what());
    }
  }
}

void log_config(const CLI::App* sub, std::ostream& err) {
  err << "[config] command=" << sub->get_name() << '\n';
  for (const CLI::Option* opt : sub->get_options()) {
    const std::string name = opt->get_single_name();
    if (name == "help") continue;
    std::string value;
    if (opt->count() > 0) {
      for (const std::string& r : opt->results()) {
        if (!value.empty()) value += ',';
        value += r;
      }
    } else {
      value = opt->get_default_str();
    }
    err << "[config] " << name << '=' << value << '\n';
  }
  if (const char* threads = std::getenv("SBAM_THREADS")) {
    err << "[config] SBAM_THREADS=" << threads << '\n';
  }
}

void require(bool ok, const std::string& flag, const std::string& command) {
  if (!ok) throw ConfigError(command + ": " + flag + " is required");
}

std::size_t threads_from_env() {
  const char* raw = std::getenv("SBAM_THREADS");
  if (raw == nullptr || *raw == '\0') return 0;
  const std::string_view s(raw);
  std::size_t v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw ConfigError("SBAM_THREADS must be a non-negative integer, got '" +
                      std::string(s) + "'");
  }
  return v;
}

bool is_pnm(const fs::path& p) {
  std::string ext = p.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(),
                 [](unsigned char ch) { return static_cast<char>(std::tolower(ch)); });
  return ext == ".pgm" || ext == ".ppm" || ext == ".pnm";
}

// Expands directories into their PGM/PPM files, sorted by name.
std::vector<fs::path> collect_images(const std::vector<std::string>& args) {
  std::vector<fs::path> out;
  for (const std::string& arg : args) {
    const fs::path p(arg);
    std::error_code ec;
    if (!fs::is_directory(p, ec)) {
      out.push_back(p);
      continue;
    }
    std::vector<fs::path> found;
    for (const auto& entry : fs::directory_iterator(p, ec)) {
      if (entry.is_regular_file() && is_pnm(entry.path())) found.push_back(entry.path());
    }
    if (ec) throw IoError("cannot list directory " + p.string());
    if (found.empty()) {
      throw IoError("directory " + p.string() + " holds no .pgm/.ppm files");
    }
    std::sort(found.begin(), found.end());
    out.insert(out.end(), found.begin(), found.end());
  }
  return out;
}

std::vector<Image> read_images(const std::vector<fs::path>& paths) {
  std::vector<Image> images;
  images.reserve(paths.size());
  for (const fs::path& p : paths) images.push_back(read_pnm(p));
  return images;
}

// Output file names are derived from input stems, so stems must be unique.
std::vector<std::string> unique_stems(const std::vector<fs::path>& paths) {
  std::vector<std::string> stems;
  for (const fs::path& p : paths) {
    const std::string stem = p.stem().string();
    const auto clash = std::find(stems.begin(), stems.end(), stem);
    if (clash != stems.end()) {
      throw ConfigError("--images: " + p.string() + " and " +
                        paths[static_cast<std::size_t>(clash - stems.begin())].string() +
                        " share the name '" + stem + "'");
    }
    stems.push_back(stem);
  }
  return stems;
}

TokenBatch patchify_one(const Image& img, std::size_t patch, const fs::path& path) {
  try {
    return patchify(std::span(&img, 1), patch);
  } catch (const ShapeError& e) {
    throw ShapeError(path.string() + ": " + e.what());
  }
}

void make_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create directory " + dir.string() + ": " + ec.message());
}

std::ofstream open_text(const fs::path& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path.string());
  return out;
}

void close_text(std::ofstream& out, const fs::path& path) {
  out.close();
  if (!out) throw IoError("short write to " + path.string());
}

// Sets every pixel of patch l to f(pixel).
template <typename F>
void paint_patch(Image& img, const GridShape& grid, std::size_t patch,
                 std::size_t l, F f) {
  const std::size_t x0 = (l % grid.cols) * patch;
  const std::size_t y0 = (l / grid.cols) * patch;
  for (std::size_t y = y0; y < y0 + patch; ++y)
    for (std::size_t x = x0; x < x0 + patch; ++x)
      for (std::size_t ch = 0; ch < img.channels; ++ch) img.at(x, y, ch) = f(img.at(x, y, ch));
}

MaskingConfig masking_from(const RunConfig& c) {
  MaskingConfig m;
  m.strategy = parse_strategy(c.strategy);
  m.base_ratio = c.ratio;
  m.delta_r = c.delta_r;
  m.delta = c.delta;
  m.noise_amplitude = c.noise;
  m.seed = c.seed;
  m.invert_selection = c.invert_selection;
  m.validate();
  return m;
}

TrainConfig training_from(const RunConfig& c) {
  TrainConfig t;
  t.lr = c.lr;
  t.epochs = c.epochs;
  t.batch = c.batch;
  t.masking = masking_from(c);
  t.eps = c.eps;
  t.seed = c.seed;
  t.patch_side = c.patch;
  t.hidden = c.hidden;
  t.clip_norm = c.clip_norm;
  t.validate();
  return t;
}

PlantedObjectSpec synthetic_from(const RunConfig& c) {
  PlantedObjectSpec spec;
  spec.size = c.size;
  spec.patch_side = c.patch;
  spec.coverage = c.coverage;
  spec.channels = c.channels;
  spec.texture = c.texture;
  spec.background_texture = c.background_texture;
  return spec;
}

struct Dataset {
  std::vector<Image> train;
  std::vector<Image> holdout;
};

// Input images, or the built-in planted-object set when none are given.
// With images the last `holdout` of them are held out.
Dataset load_dataset(const RunConfig& c, bool want_holdout) {
  Dataset d;
  if (c.images.empty()) {
    PlantedObjectSpec spec;
    spec.patch_side = c.patch;
    Rng train_rng(derive_seed(c.seed, kTrainImagesStream));
    d.train = planted_object_images(c.count, spec, train_rng);
    if (want_holdout) {
      Rng hold_rng(derive_seed(c.seed, kHoldoutImagesStream));
      d.holdout = planted_object_images(c.holdout.value_or(16), spec, hold_rng);
    }
    return d;
  }
  std::vector<Image> all = read_images(collect_images(c.images));
  if (!want_holdout) {
    d.train = std::move(all);
    return d;
  }
  const std::size_t hold = c.holdout.value_or(std::max<std::size_t>(1, all.size() / 4));
  if (hold == 0 || hold >= all.size()) {
    throw ConfigError("--holdout: need between 1 and " +
                      std::to_string(all.size() - 1) + " held-out images of " +
                      std::to_string(all.size()) + ", got " + std::to_string(hold));
  }
  const auto split = all.end() - static_cast<std::ptrdiff_t>(hold);
  d.train.assign(std::make_move_iterator(all.begin()), std::make_move_iterator(split));
  d.holdout.assign(std::make_move_iterator(split), std::make_move_iterator(all.end()));
  return d;
}

void cmd_salience(const RunConfig& c, std::ostream& out) {
  require(!c.images.empty(), "--images", "salience");
  require(!c.out.empty(), "--out", "salience");
  const auto paths = collect_images(c.images);
  const auto stems = unique_stems(paths);
  make_dir(c.out);
  const fs::path csv_path = c.out / "salience.csv";
  std::ofstream csv = open_text(csv_path);
  csv << "sample,token,score\n";
  for (std::size_t i = 0; i < paths.size(); ++i) {
    const Image img = read_pnm(paths[i]);
    const TokenBatch tb = patchify_one(img, c.patch, paths[i]);
    const Mat2 scores = token_salience(tb).scores;
    Image heat(img.width, img.height, 1);
    for (std::size_t l = 0; l < tb.length(); ++l) {
      csv << i << ',' << l << ',' << format_double(scores(0, l)) << '\n';
      paint_patch(heat, tb.grid, c.patch, l, [&](float) { return scores(0, l); });
    }
    const fs::path heat_path = c.out / (stems[i] + "_salience.pgm");
    write_pnm(heat_path, heat);
    out << "wrote " << heat_path.string() << '\n';
  }
  close_text(csv, csv_path);
  out << "wrote " << csv_path.string() << '\n';
}

void cmd_mask(const RunConfig& c, std::ostream& out) {
  require(!c.images.empty(), "--images", "mask");
  require(!c.out.empty(), "--out", "mask");
  const MaskingConfig cfg = masking_from(c);
  const auto paths = collect_images(c.images);
  const auto stems = unique_stems(paths);
  make_dir(c.out);
  const fs::path csv_path = c.out / "mask.csv";
  std::ofstream csv = open_text(csv_path);
  csv << "sample,token,masked,salience,ratio\n";
  Rng rng(c.seed);
  for (std::size_t i = 0; i < paths.size(); ++i) {
    const Image img = read_pnm(paths[i]);
    const TokenBatch tb = patchify_one(img, c.patch, paths[i]);
    const MaskPlan plan = make_mask(token_salience(tb), cfg, rng);
    Image overlay = img;
    for (std::size_t l = 0; l < tb.length(); ++l) {
      const bool masked = plan.mask.masked(0, l);
      csv << i << ',' << l << ',' << (masked ? 1 : 0) << ','
          << format_double(plan.salience.scores(0, l)) << ','
          << format_double(plan.ratios[0]) << '\n';
      if (masked) {
        paint_patch(overlay, tb.grid, c.patch, l,
                    [](float v) { return v * kMaskedShade; });
      }
    }
    const fs::path overlay_path =
        c.out / (stems[i] + "_mask" + (img.channels == 3 ? ".ppm" : ".pgm"));
    write_pnm(overlay_path, overlay);
    out << overlay_path.string() << ": masked " << plan.mask.masked_count(0) << '/'
        << tb.length() << " (ratio " << format_double(plan.ratios[0]) << ")\n";
  }
  close_text(csv, csv_path);
  out << "wrote " << csv_path.string() << '\n';
}

void cmd_train(const RunConfig& c, std::ostream& out) {
  require(!c.out.empty(), "--out", "train");
  const TrainConfig cfg = training_from(c);
  const Dataset data = load_dataset(c, false);
  const TrainResult result = train(data.train, cfg);
  make_dir(c.out);
  const fs::path loss_path = c.out / "loss.csv";
  std::ofstream csv = open_text(loss_path);
  csv << "epoch,loss\n";
  for (std::size_t e = 0; e < result.loss_curve.size(); ++e) {
    csv << e + 1 << ',' << format_double(result.loss_curve[e]) << '\n';
  }
  close_text(csv, loss_path);
  const fs::path params_path = c.out / "params.sbtn";
  save_params(params_path, result.params);
  if (!result.loss_curve.empty()) {
    out << "loss " << format_double(result.loss_curve.front()) << " -> "
        << format_double(result.loss_curve.back()) << " over "
        << result.loss_curve.size() << " epochs\n";
  }
  out << "wrote " << loss_path.string() << '\n'
      << "wrote " << params_path.string() << '\n';
}

void cmd_sweep(const RunConfig& c, std::ostream& out) {
  require(!c.out.empty(), "--out", "sweep");
  if (c.ratios.size() < 2) {
    throw ConfigError("--ratios: a sweep needs at least 2 ratios, got " +
                      std::to_string(c.ratios.size()));
  }
  if (c.strategies.empty()) throw ConfigError("--strategies: no strategies given");
  PimrBaseline baseline;
  if (c.pimr_baseline == "min") {
    baseline = PimrBaseline::kObservedMin;
  } else if (c.pimr_baseline == "lowest-ratio") {
    baseline = PimrBaseline::kLowestRatio;
  } else {
    throw ConfigError("--pimr-baseline: expected min or lowest-ratio, got '" +
                      c.pimr_baseline + "'");
  }

  SweepPlan plan;
  plan.train = training_from(c);
  plan.ratios = c.ratios;
  plan.threads = threads_from_env();
  for (const std::string& name : c.strategies) {
    MaskingConfig m = plan.train.masking;
    m.strategy = parse_strategy(name);
    m.invert_selection = c.invert_selection && m.strategy != Strategy::kRandom;
    plan.strategies.push_back(m);
  }
  const Dataset data = load_dataset(c, true);
  const auto records = sweep(plan, data.train, data.holdout);
  const auto rows = sweep_rows(records, baseline);

  if (c.out.has_parent_path()) make_dir(c.out.parent_path());
  std::ofstream csv = open_text(c.out);
  write_sweep_csv(csv, rows);
  close_text(csv, c.out);
  for (const SweepRow& r : rows) {
    out << r.model << " ratio=" << format_double(r.ratio)
        << " performance=" << format_double(r.performance) << '\n';
  }
  out << "wrote " << c.out.string() << '\n';
}

void cmd_gen_synthetic(const RunConfig& c, std::ostream& out) {
  require(!c.out.empty(), "--out", "gen-synthetic");
  const PlantedObjectSpec spec = synthetic_from(c);
  Rng rng(c.seed);
  const auto samples = generate_planted_objects(c.count, spec, rng);
  make_dir(c.out);
  const fs::path csv_path = c.out / "objects.csv";
  std::ofstream csv = open_text(csv_path);
  csv << "file,token,object\n";
  const int width = std::max(4, static_cast<int>(std::to_string(c.count).size()));
  for (std::size_t i = 0; i < samples.size(); ++i) {
    char index[32];
    std::snprintf(index, sizeof index, "%0*zu", width, i);
    const std::string name =
        "synth_" + std::string(index) + (spec.channels == 3 ? ".ppm" : ".pgm");
    write_pnm(c.out / name, samples[i].image);
    for (std::size_t l = 0; l < samples[i].object_tokens.size(); ++l) {
      csv << name << ',' << l << ',' << int{samples[i].object_tokens[l]} << '\n';
    }
  }
  close_text(csv, csv_path);
  out << "wrote " << samples.size() << " images and " << csv_path.string() << '\n';
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Salience-based adaptive masking for masked image modeling", "sbam"};
  app.require_subcommand(1, 1);
  app.option_defaults()->always_capture_default();
  RunConfig c;

  CLI::App* salience = app.add_subcommand(
      "salience", "Write per-token salience as CSV and a PGM heatmap per image");
  add_common(salience, c);
  add_images(salience, c, "PGM/PPM files or directories");
  add_patch(salience, c);

  CLI::App* mask = app.add_subcommand(
      "mask", "Draw masks and write overlays plus a per-token mask CSV");
  add_common(mask, c);
  add_seed(mask, c);
  add_images(mask, c, "PGM/PPM files or directories");
  add_patch(mask, c);
  add_masking(mask, c);

  CLI::App* train_cmd = app.add_subcommand(
      "train", "Train the reconstruction model; writes loss.csv and params.sbtn");
  add_common(train_cmd, c);
  add_seed(train_cmd, c);
  add_images(train_cmd, c, "Training images (default: synthetic planted objects)");
  add_patch(train_cmd, c);
  add_masking(train_cmd, c);
  add_training(train_cmd, c);

  CLI::App* sweep_cmd = app.add_subcommand(
      "sweep", "Train across strategies and ratios; writes a PIMR CSV");
  add_common(sweep_cmd, c);
  add_seed(sweep_cmd, c);
  add_images(sweep_cmd, c, "Images; the last --holdout are held out");
  add_patch(sweep_cmd, c);
  add_masking(sweep_cmd, c);
  add_training(sweep_cmd, c);
  sweep_cmd->add_option("--holdout", c.holdout,
                        "Held-out images (default 16 synthetic, or a quarter of --images)");
  sweep_cmd->add_option("--strategies", c.strategies, "Comma-separated strategies")
      ->delimiter(',');
  sweep_cmd->add_option("--ratios", c.ratios, "Comma-separated masking ratios")
      ->delimiter(',');
  sweep_cmd->add_option("--pimr-baseline", c.pimr_baseline,
                        "min (lowest observed performance) or lowest-ratio");

  CLI::App* gen = app.add_subcommand(
      "gen-synthetic", "Write planted-object images and their object masks");
  add_common(gen, c);
  add_seed(gen, c);
  add_patch(gen, c);
  add_synthetic(gen, c);
  gen->add_option("--count", c.count, "Number of images");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? kOk : kUsageError;
  }

  CLI::App* sub = app.get_subcommands().front();
  try {
    apply_config_file(sub, c);
    log_config(sub, err);
    if (sub == salience) {
      cmd_salience(c, out);
    } else if (sub == mask) {
      cmd_mask(c, out);
    } else if (sub == train_cmd) {
      cmd_train(c, out);
    } else if (sub == sweep_cmd) {
      cmd_sweep(c, out);
    } else {
      cmd_gen_synthetic(c, out);
    }
  } catch (const ConfigError& e) {
    err << "sbam " << sub->get_name() << ": error: " << e.what() << '\n';
    return kUsageError;
  } catch (const std::exception& e) {
    err << "sbam " << sub->get_name() << ": error: " << e.what() << '\n';
    return kRuntimeError;
  }
  return kOk;
}

}  // namespace sbam::cli
