// Copyright 2026 The frc-kit Authors. All Rights Reserved.
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

#include "frckit/cli/commands.hpp"

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <type_traits>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "frckit/cli/csv.hpp"
#include "frckit/error.hpp"
#include "frckit/experiments.hpp"
#include "frckit/gradcheck.hpp"
#include "frckit/metrics.hpp"
#include "frckit/random.hpp"
#include "frckit/spectral.hpp"

namespace frckit::cli {

namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

constexpr const char* kManifestName = "run.json-lines";

// seed streams for synthetic data and noise drawn by commands
constexpr std::uint64_t kTrainImages = 10;
constexpr std::uint64_t kHeldOutImages = 11;
constexpr std::uint64_t kHeldOutNoise = 12;
constexpr std::uint64_t kAverageImage = 20;
constexpr std::uint64_t kAverageNoise = 21;
constexpr std::uint64_t kSweepImages = 30;

std::string text(const std::string& v) { return v; }
std::string text(bool v) { return v ? "true" : "false"; }
std::string text(double v) { return format_number(v); }
template <class T>
  requires std::is_integral_v<T>
std::string text(T v) {
  return std::to_string(v);
}

struct Param {
  std::string key;
  std::function<std::string()> value;
  bool is_flag = false;
};

/// One subcommand's options, config-file handling and manifest record.
class Command {
public:
  Command(std::string name, const std::string& description, std::ostream& out)
      : name_(std::move(name)), app_(description, "frc-kit " + name_), out_(out) {
    app_.set_config("--config", "", "key=value config file, '#' starts a comment");
    app_.allow_config_extras(false);
  }

  template <class T>
  CLI::Option* option(const std::string& key, T& var, const std::string& help,
                      const std::string& short_name = "") {
    params_.push_back({key, [&var] { return text(var); }});
    const std::string names = short_name.empty() ? "--" + key : short_name + ",--" + key;
    return app_.add_option(names, var, help)->capture_default_str();
  }

  CLI::Option* input(const std::string& key, std::string& var, const std::string& help,
                     bool positional = false) {
    paths_.push_back(&var);
    params_.push_back({key, [&var] { return var; }});
    const std::string names = positional ? key + ",--" + key : "--" + key;
    return app_.add_option(names, var, help)->check(CLI::ExistingPath);
  }

  void flag(const std::string& key, bool& var, const std::string& help) {
    params_.push_back({key, [&var] { return text(var); }, true});
    app_.add_flag("--" + key, var, help);
  }

  void seed(std::uint64_t& var) {
    seed_ = &var;
    option("seed", var, "random seed (default: $FRCKIT_SEED, else 0)")->envname("FRCKIT_SEED");
  }

  void outputs(const std::string& default_name) {
    output_ = default_name;
    option("out-dir", out_dir_, "output directory");
    option("output", output_, "primary output file name", "-o");
  }

  /// False when help was requested and printed.
  bool parse(const std::vector<std::string>& args) {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
      app_.parse(reversed);
    } catch (const CLI::CallForHelp&) {
      out_ << app_.help();
      return false;
    }
    return true;
  }

  bool given(const std::string& key) const { return app_.count("--" + key) > 0; }

  void set_output(const std::string& name) { output_ = name; }

  /// Makes input paths absolute and creates the output directory.
  void resolve() {
    for (std::string* p : paths_) {
      if (!p->empty()) {
        *p = fs::absolute(*p).lexically_normal().string();
      }
    }
    if (output_.empty()) {
      return;
    }
    const fs::path target = fs::path(output_).is_absolute() ? fs::path(output_)
                                                            : fs::path(out_dir_) / output_;
    fs::path dir = fs::absolute(target).lexically_normal().parent_path();
    if (target.filename().empty()) {
      throw InputError("--output must name a file");
    }
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec || !fs::is_directory(dir)) {
      throw InputError("cannot create output directory '" + dir.string() + "'");
    }
    out_dir_ = dir.string();
    output_ = target.filename().string();
  }

  fs::path out(const std::string& name) const { return fs::path(out_dir_) / name; }
  fs::path primary() const { return out(output_); }
  const std::string& primary_name() const { return output_; }

  std::vector<std::string> resolved_args() const {
    std::vector<std::string> args;
    for (const auto& p : params_) {
      const std::string v = p.value();
      if (p.is_flag) {
        if (v == "true") {
          args.push_back("--" + p.key);
        }
      } else if (!v.empty()) {
        args.push_back("--" + p.key + "=" + v);
      }
    }
    return args;
  }

  void write_manifest(const std::vector<std::string>& outputs) const {
    json entry;
    entry["command"] = name_;
    entry["args"] = resolved_args();
    json config = json::object();
    for (const auto& p : params_) {
      config[p.key] = p.value();
    }
    entry["config"] = config;
    if (seed_ != nullptr) {
      entry["seed"] = *seed_;
    }
    const auto* cfg = app_.get_config_ptr();
    entry["config_file"] = cfg != nullptr && cfg->count() > 0 ? cfg->as<std::string>() : "";
    entry["outputs"] = outputs;
    std::ofstream manifest(out(kManifestName), std::ios::app);
    if (!manifest) {
      throw InputError("cannot write manifest in '" + out_dir_ + "'");
    }
    manifest << entry.dump() << "\n";
  }

private:
  std::string name_;
  CLI::App app_;
  std::ostream& out_;
  std::vector<Param> params_;
  std::vector<std::string*> paths_;
  std::uint64_t* seed_ = nullptr;
  std::string out_dir_ = ".";
  std::string output_;
};

bool is_image_file(const fs::path& p) {
  const std::string ext = p.extension().string();
  return ext == ".pgm" || ext == ".ppm" || ext == ".pnm" || ext == ".fimg";
}

std::vector<fs::path> list_images(const fs::path& dir) {
  std::vector<fs::path> files;
  for (const auto& e : fs::directory_iterator(dir)) {
    if (e.is_regular_file() && is_image_file(e.path())) {
      files.push_back(e.path());
    }
  }
  std::sort(files.begin(), files.end());
  if (files.empty()) {
    throw InputError("no images (.pgm/.ppm/.fimg) in '" + dir.string() + "'");
  }
  return files;
}

std::vector<Image> load_images(const fs::path& dir) {
  std::vector<Image> images;
  for (const auto& f : list_images(dir)) {
    images.push_back(load_image(f));
  }
  return images;
}

std::vector<std::pair<fs::path, fs::path>> resolve_pairs(const fs::path& a, const fs::path& b) {
  const bool a_dir = fs::is_directory(a);
  const bool b_dir = fs::is_directory(b);
  if (a_dir != b_dir) {
    throw InputError("cannot pair a file with a directory: '" + a.string() + "', '" +
                     b.string() + "'");
  }
  if (!a_dir) {
    return {{a, b}};
  }
  const auto first = list_images(a);
  const auto second = list_images(b);
  if (first.size() != second.size()) {
    throw InputError("'" + a.string() + "' has " + std::to_string(first.size()) +
                     " images but '" + b.string() + "' has " + std::to_string(second.size()));
  }
  std::vector<std::pair<fs::path, fs::path>> pairs;
  for (const auto& f : first) {
    const fs::path partner = b / f.filename();
    if (!fs::exists(partner)) {
      throw InputError("no counterpart for '" + f.string() + "' in '" + b.string() + "'");
    }
    pairs.emplace_back(f, partner);
  }
  return pairs;
}

std::string dims(const Image& img) {
  return std::to_string(img.rows()) + "x" + std::to_string(img.cols());
}

std::pair<Image, Image> load_pair(const fs::path& a, const fs::path& b) {
  Image x = load_image(a);
  Image y = load_image(b);
  if (!x.same_shape(y)) {
    throw InputError("size mismatch: '" + a.string() + "' is " + dims(x) + " but '" +
                     b.string() + "' is " + dims(y));
  }
  return {std::move(x), std::move(y)};
}

std::vector<Image> synthetic_set(int n, int size, double exponent, std::uint64_t seed,
                                 std::uint64_t stream) {
  if (n < 1) {
    throw InputError("synthetic image count must be positive");
  }
  const std::uint64_t base = derive_seed(seed, stream);
  std::vector<Image> images;
  for (int i = 0; i < n; ++i) {
    images.push_back(generate_synthetic({size, exponent, derive_seed(base, static_cast<std::uint64_t>(i))}));
  }
  return images;
}

void save_raster(const Image& img, const fs::path& path, int bits) {
  if (bits != 8 && bits != 16) {
    throw InputError("--bits must be 8 or 16");
  }
  const ImageFormat format = path.extension() == ".fimg" ? ImageFormat::fimg : ImageFormat::pgm;
  save_image(img, path, format, bits);
}

int cmd_frc(const std::vector<std::string>& args, std::ostream& out) {
  Command cmd("frc", "FRC curve of an image pair, or the mean curve over paired directories",
              out);
  std::string first, second;
  bool no_window = false;
  int thickness = 1;
  cmd.input("first", first, "image or directory", true)->required();
  cmd.input("second", second, "image or directory of same-named images", true)->required();
  cmd.flag("no-window", no_window, "skip the Hann window");
  cmd.option("thickness", thickness, "ring thickness in frequency units");
  cmd.outputs("frc.csv");
  if (!cmd.parse(args)) {
    return kExitOk;
  }
  cmd.resolve();

  const WindowSpec window{no_window ? WindowKind::none : WindowKind::hann};
  std::vector<FrcCurve> curves;
  std::optional<RingPartition> rings;
  std::optional<std::pair<int, int>> shape;
  std::string shape_source;
  for (const auto& [a, b] : resolve_pairs(first, second)) {
    const auto [x, y] = load_pair(a, b);
    if (!shape) {
      shape = {x.rows(), x.cols()};
      shape_source = a.string();
      rings.emplace(x.rows(), x.cols(), thickness);
    } else if (shape->first != x.rows() || shape->second != x.cols()) {
      throw InputError("size mismatch: '" + a.string() + "' is " + dims(x) + " but '" +
                       shape_source + "' is " + std::to_string(shape->first) + "x" +
                       std::to_string(shape->second));
    }
    curves.push_back(frc(apply_window(x, window), apply_window(y, window), *rings));
  }
  const FrcCurve mean = average_curves(curves);
  write_frc_csv(mean, cmd.primary(), rings->nyquist_ring());
  cmd.write_manifest({cmd.primary_name()});
  out << "frc_scalar " << format_number(frc_scalar(mean)) << "\n";
  return kExitOk;
}

int cmd_metrics(const std::vector<std::string>& args, std::ostream& out) {
  Command cmd("metrics", "MSE, PSNR, SSIM and FRC scalar per image pair, or Pearson correlation",
              out);
  std::string first, second, pearson_csv;
  std::string x_column = "metric_value";
  std::string y_column = "score";
  double peak = 1.0;
  int ssim_window = 7;
  bool no_window = false;
  cmd.input("first", first, "image or directory", true);
  cmd.input("second", second, "image or directory of same-named images", true);
  cmd.input("pearson", pearson_csv, "CSV with a metric and a score column");
  cmd.option("x", x_column, "first Pearson column");
  cmd.option("y", y_column, "second Pearson column");
  cmd.option("peak", peak, "PSNR peak value");
  cmd.option("ssim-window", ssim_window, "SSIM window size (odd)");
  cmd.flag("no-window", no_window, "skip the Hann window for the FRC scalar");
  cmd.outputs("metrics.csv");
  if (!cmd.parse(args)) {
    return kExitOk;
  }
  if (!pearson_csv.empty() && !cmd.given("output")) {
    cmd.set_output("pearson.csv");
  }
  if (pearson_csv.empty() && (first.empty() || second.empty())) {
    throw InputError("metrics needs two images or directories, or --pearson CSV");
  }
  cmd.resolve();

  if (!pearson_csv.empty()) {
    const CsvTable table = read_csv(pearson_csv);
    const auto a = numeric_column(table, x_column, pearson_csv);
    const auto b = numeric_column(table, y_column, pearson_csv);
    const double r = pearson(a, b);
    std::ofstream csv(cmd.primary());
    csv << "x,y,n,pearson\n"
        << x_column << "," << y_column << "," << a.size() << "," << format_number(r) << "\n";
    cmd.write_manifest({cmd.primary_name()});
    out << "pearson " << format_number(r) << "\n";
    return kExitOk;
  }

  SsimParams ssim_params;
  ssim_params.window_size = ssim_window;
  std::ofstream csv(cmd.primary());
  if (!csv) {
    throw InputError("cannot write '" + cmd.primary().string() + "'");
  }
  csv << "image,mse,psnr,ssim,frc_scalar\n";
  for (const auto& [a, b] : resolve_pairs(first, second)) {
    const auto [x, y] = load_pair(a, b);
    const MetricReport m = metric_report(x, y, peak, ssim_params, !no_window);
    csv << a.filename().string() << "," << format_number(m.mse)
        << "," << format_number(m.psnr) << "," << format_number(m.ssim) << ","
        << format_number(m.frc_scalar) << "\n";
  }
  csv.close();
  cmd.write_manifest({cmd.primary_name()});
  out << "wrote " << cmd.primary().string() << "\n";
  return kExitOk;
}

int cmd_corrupt(const std::vector<std::string>& args, std::ostream& out) {
  Command cmd("corrupt", "apply one seeded corruption to an image", out);
  std::string input, kind = "gaussian";
  double level = 0.1;
  std::uint64_t seed = 0;
  int bits = 16;
  cmd.input("input", input, "clean image", true)->required();
  cmd.option("kind", kind, "gaussian, lognormal, impulse, jitter or motion_blur");
  cmd.option("level", level, "corruption level");
  cmd.seed(seed);
  cmd.option("bits", bits, "PGM bit depth (8 or 16)");
  cmd.outputs("corrupted.fimg");
  if (!cmd.parse(args)) {
    return kExitOk;
  }
  const CorruptionSpec spec{parse_corruption_kind(kind), level, seed};
  validate(spec);
  cmd.resolve();
  const Image img = load_image(input);
  save_raster(corrupt(img, spec), cmd.primary(), bits);
  cmd.write_manifest({cmd.primary_name()});
  out << "wrote " << cmd.primary().string() << " (" << to_config_line(spec) << ")\n";
  return kExitOk;
}

int cmd_synth(const std::vector<std::string>& args, std::ostream& out) {
  Command cmd("synth", "random-phase image with power-law amplitude, plus its power spectrum",
              out);
  int size = 128;
  double exponent = 1.0;
  std::uint64_t seed = 0;
  int bits = 16;
  cmd.option("size", size, "side length");
  cmd.option("exponent", exponent, "amplitude falls off as 1/r^exponent");
  cmd.seed(seed);
  cmd.option("bits", bits, "PGM bit depth (8 or 16)");
  cmd.outputs("synthetic.pgm");
  if (!cmd.parse(args)) {
    return kExitOk;
  }
  cmd.resolve();
  const Image img = generate_synthetic({size, exponent, seed});
  save_raster(img, cmd.primary(), bits);
  const RingPartition rings(size, size, 1);
  write_power_csv(ring_mean_power(dft2(img), rings), cmd.out("power.csv"));
  cmd.write_manifest({cmd.primary_name(), "power.csv"});
  out << "wrote " << cmd.primary().string() << "\n";
  return kExitOk;
}

int cmd_train(const std::vector<std::string>& args, std::ostream& out) {
  Command cmd("train", "Noise2Noise training of the conv denoiser", out);
  std::string data_dir, held_out_dir, loss = "l2", noise_kind = "gaussian";
  int synthetic = 16, held_out = 4, size = 64;
  double exponent = 1.0;
  bool normalize = false;
  TrainConfig cfg;
  cfg.noise.level = 0.4;
  cmd.input("data", data_dir, "directory of clean training images");
  cmd.input("held-out-dir", held_out_dir, "directory of clean held-out images");
  cmd.option("synthetic", synthetic, "synthetic training images when --data is absent");
  cmd.option("held-out", held_out, "synthetic held-out images when --held-out-dir is absent");
  cmd.option("size", size, "synthetic image side length");
  cmd.option("exponent", exponent, "synthetic amplitude exponent");
  cmd.flag("power-normalize", normalize, "flatten per-ring power of every image first");
  cmd.option("loss", loss, "l1, l2 or frc");
  cmd.option("steps", cfg.steps, "optimizer steps");
  cmd.option("batch-size", cfg.batch_size, "crops per step");
  cmd.option("learning-rate", cfg.learning_rate, "Adam learning rate");
  cmd.option("crop-size", cfg.crop_size, "training crop side length");
  cmd.option("hidden", cfg.hidden_channels, "hidden channels");
  cmd.option("thickness", cfg.ring_thickness, "ring thickness for the FRC loss");
  cmd.option("noise-kind", noise_kind, "corruption kind");
  cmd.option("noise-level", cfg.noise.level, "corruption level");
  cmd.seed(cfg.seed);
  cmd.outputs("trace.csv");
  if (!cmd.parse(args)) {
    return kExitOk;
  }
  cfg.loss = parse_loss_kind(loss);
  cfg.noise.kind = parse_corruption_kind(noise_kind);
  cfg.noise.seed = derive_seed(cfg.seed, kHeldOutNoise);
  validate(cfg);
  cmd.resolve();

  std::vector<Image> data = data_dir.empty()
                                ? synthetic_set(synthetic, size, exponent, cfg.seed, kTrainImages)
                                : load_images(data_dir);
  std::vector<Image> clean =
      held_out_dir.empty() ? synthetic_set(held_out, size, exponent, cfg.seed, kHeldOutImages)
                           : load_images(held_out_dir);
  if (normalize) {
    for (auto& img : data) {
      img = power_normalize(img);
    }
    for (auto& img : clean) {
      img = power_normalize(img);
    }
  }
  const HeldOutSet held = make_held_out(std::move(clean), cfg.noise);
  const TrainResult result = train(data, held, cfg);
  save_model(result.model, cmd.out("model.fdnm"));
  write_trace_csv(result.trace, cmd.primary());
  cmd.write_manifest({cmd.primary_name(), "model.fdnm"});
  if (!result.trace.entries.empty()) {
    const auto& last = result.trace.entries.back();
    out << "step " << last.step << " loss " << format_number(last.loss) << " ssim "
        << format_number(last.ssim) << " frc_scalar " << format_number(last.frc_scalar) << "\n";
  }
  return kExitOk;
}

int cmd_sweep(const std::vector<std::string>& args, std::ostream& out) {
  Command cmd("sweep", "normalized L1, L2 and FRC loss against low-pass cutoff", out);
  std::string data_dir;
  int synthetic = 50, size = 128, thickness = 1;
  double exponent = 1.0;
  std::uint64_t seed = 0;
  cmd.input("data", data_dir, "directory of square images of equal size");
  cmd.option("synthetic", synthetic, "synthetic images when --data is absent");
  cmd.option("size", size, "synthetic image side length");
  cmd.option("exponent", exponent, "synthetic amplitude exponent");
  cmd.option("thickness", thickness, "ring thickness");
  cmd.seed(seed);
  cmd.outputs("sweep.csv");
  if (!cmd.parse(args)) {
    return kExitOk;
  }
  cmd.resolve();
  const std::vector<Image> images = data_dir.empty()
                                        ? synthetic_set(synthetic, size, exponent, seed, kSweepImages)
                                        : load_images(data_dir);
  write_sweep_csv(lowpass_sensitivity_sweep(images, thickness), cmd.primary());
  cmd.write_manifest({cmd.primary_name()});
  out << "wrote " << cmd.primary().string() << "\n";
  return kExitOk;
}

int cmd_average(const std::vector<std::string>& args, std::ostream& out) {
  Command cmd("average", "FRC of single vs averaged noisy and denoised realizations", out);
  std::string model_path, image_path, noise_kind = "gaussian";
  double noise_level = 0.4, exponent = 1.0;
  int n = 200, size = 64, thickness = 1;
  bool no_window = false;
  std::uint64_t seed = 0;
  cmd.input("model", model_path, "FDNM checkpoint (default: identity model)");
  cmd.input("image", image_path, "clean image (default: synthetic)");
  cmd.option("size", size, "synthetic image side length");
  cmd.option("exponent", exponent, "synthetic amplitude exponent");
  cmd.option("noise-kind", noise_kind, "corruption kind");
  cmd.option("noise-level", noise_level, "corruption level");
  cmd.option("n", n, "noise realizations");
  cmd.option("thickness", thickness, "ring thickness");
  cmd.flag("no-window", no_window, "skip the Hann window");
  cmd.seed(seed);
  cmd.outputs("averaging.csv");
  if (!cmd.parse(args)) {
    return kExitOk;
  }
  const CorruptionSpec noise{parse_corruption_kind(noise_kind), noise_level,
                             derive_seed(seed, kAverageNoise)};
  validate(noise);
  cmd.resolve();
  const DenoiserModel model = model_path.empty() ? DenoiserModel::identity() : load_model(model_path);
  const Image clean = image_path.empty()
                          ? generate_synthetic({size, exponent, derive_seed(seed, kAverageImage)})
                          : load_image(image_path);
  AveragingOptions options;
  options.window = {no_window ? WindowKind::none : WindowKind::hann};
  options.ring_thickness = thickness;
  const AveragingResult result = denoise_average_experiment(model, clean, noise, n, options);
  const RingPartition rings(clean.rows(), clean.cols(), thickness);
  write_averaging_csv(result, cmd.primary(), rings.nyquist_ring());
  save_image(result.bias, cmd.out("bias.fimg"), ImageFormat::fimg, 16);
  cmd.write_manifest({cmd.primary_name(), "bias.fimg"});
  out << "wrote " << cmd.primary().string() << "\n";
  return kExitOk;
}

int cmd_gradcheck(const std::vector<std::string>& args, std::ostream& out) {
  Command cmd("gradcheck", "analytic FRC-loss gradient vs central differences", out);
  int size = 16, thickness = 1;
  double h = 1e-4, tolerance = 1e-4;
  std::uint64_t seed = 0;
  cmd.option("size", size, "side length of the random pair");
  cmd.option("step", h, "finite-difference step");
  cmd.option("tolerance", tolerance, "maximum accepted relative error");
  cmd.option("thickness", thickness, "ring thickness");
  cmd.seed(seed);
  cmd.outputs("gradcheck.csv");
  if (!cmd.parse(args)) {
    return kExitOk;
  }
  cmd.resolve();
  const auto [x, y] = random_pair(size, seed);
  const RingPartition rings(size, size, thickness);
  const GradientCheck check = check_frc_gradient(x, y, rings, h);
  std::ofstream csv(cmd.primary());
  if (!csv) {
    throw InputError("cannot write '" + cmd.primary().string() + "'");
  }
  csv << "pixel,analytic,numeric,relative_error\n";
  for (std::size_t k = 0; k < check.analytic.size(); ++k) {
    csv << k << "," << format_number(check.analytic[k]) << "," << format_number(check.numeric[k])
        << "," << format_number(check.relative_error[k]) << "\n";
  }
  csv.close();
  cmd.write_manifest({cmd.primary_name()});
  out << "max relative error " << format_number(check.max_relative_error) << "\n";
  return check.max_relative_error < tolerance ? kExitOk : kExitInternal;
}

int dispatch(const std::string& name, const std::vector<std::string>& args, std::ostream& out,
             std::ostream& err);

int cmd_replay(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app("re-run commands recorded in a run.json-lines manifest", "frc-kit replay");
  std::string manifest, out_dir;
  int line = 0;
  app.add_option("manifest", manifest, "manifest file")->required()->check(CLI::ExistingFile);
  app.add_option("--line", line, "1-based entry to replay (default: all)");
  app.add_option("--out-dir", out_dir, "write outputs here instead of the recorded directory");
  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  }
  std::ifstream in(manifest);
  std::vector<json> entries;
  std::string text_line;
  while (std::getline(in, text_line)) {
    if (text_line.empty()) {
      continue;
    }
    try {
      entries.push_back(json::parse(text_line));
    } catch (const json::exception& e) {
      throw InputError(manifest + ": entry " + std::to_string(entries.size() + 1) +
                       " is not valid JSON");
    }
  }
  if (entries.empty()) {
    throw InputError(manifest + ": no entries");
  }
  if (line < 0 || line > static_cast<int>(entries.size())) {
    throw InputError("--line " + std::to_string(line) + " outside 1.." +
                     std::to_string(entries.size()));
  }
  for (std::size_t i = 0; i < entries.size(); ++i) {
    if (line != 0 && static_cast<int>(i) + 1 != line) {
      continue;
    }
    const json& e = entries[i];
    if (!e.contains("command") || !e.contains("args")) {
      throw InputError(manifest + ": entry " + std::to_string(i + 1) + " lacks command or args");
    }
    const std::string command = e["command"].get<std::string>();
    if (command == "replay") {
      throw InputError("manifest entries cannot be replays");
    }
    auto replay_args = e["args"].get<std::vector<std::string>>();
    if (!out_dir.empty()) {
      for (auto& a : replay_args) {
        if (a.rfind("--out-dir=", 0) == 0) {
          a = "--out-dir=" + out_dir;
        }
      }
    }
    const int code = dispatch(command, replay_args, out, err);
    if (code != kExitOk) {
      return code;
    }
  }
  return kExitOk;
}

constexpr const char* kUsage =
    "usage: frc-kit <command> [options]\n"
    "\n"
    "commands:\n"
    "  frc        FRC curve of an image pair or paired directories\n"
    "  metrics    MSE, PSNR, SSIM, FRC scalar per pair; --pearson for correlation\n"
    "  corrupt    apply a seeded corruption\n"
    "  synth      generate a synthetic power-law image\n"
    "  train      Noise2Noise training of the denoiser\n"
    "  sweep      low-pass sensitivity of L1, L2 and FRC losses\n"
    "  average    denoise-and-average experiment\n"
    "  gradcheck  FRC-loss gradient vs finite differences\n"
    "  replay     re-run commands from a run.json-lines manifest\n"
    "\n"
    "Run 'frc-kit <command> --help' for options. Every option can also be set\n"
    "in a key=value file passed with --config; flags win over the file.\n";

int dispatch(const std::string& name, const std::vector<std::string>& args, std::ostream& out,
             std::ostream& err) {
  using Handler = int (*)(const std::vector<std::string>&, std::ostream&);
  static const std::map<std::string, Handler> handlers = {
      {"frc", cmd_frc},         {"metrics", cmd_metrics}, {"corrupt", cmd_corrupt},
      {"synth", cmd_synth},     {"train", cmd_train},     {"sweep", cmd_sweep},
      {"average", cmd_average}, {"gradcheck", cmd_gradcheck},
  };
  if (name == "replay") {
    return cmd_replay(args, out, err);
  }
  const auto it = handlers.find(name);
  if (it == handlers.end()) {
    throw InputError("unknown command '" + name + "'");
  }
  return it->second(args, out);
}

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  if (args.empty()) {
    err << kUsage;
    return kExitUsage;
  }
  if (args[0] == "-h" || args[0] == "--help" || args[0] == "help") {
    out << kUsage;
    return kExitOk;
  }
  const std::vector<std::string> rest(args.begin() + 1, args.end());
  try {
    return dispatch(args[0], rest, out, err);
  } catch (const CLI::ParseError& e) {
    err << "frc-kit " << args[0] << ": " << e.what() << "\n";
    return kExitUsage;
  } catch (const InputError& e) {
    err << "frc-kit " << args[0] << ": " << e.what() << "\n";
    return kExitUsage;
  } catch (const fs::filesystem_error& e) {
    err << "frc-kit " << args[0] << ": " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "frc-kit " << args[0] << ": internal error: " << e.what() << "\n";
    return kExitInternal;
  }
}

} // namespace frckit::cli
