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

#include "frckit/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <string>

#include "frckit/error.hpp"
#include "frckit/metrics.hpp"
#include "frckit/random.hpp"
#include "frckit/spectral.hpp"

namespace frckit {

namespace {

FrcCurve windowed_frc(const Image& x, const Image& clean, const RingPartition& rings,
                      const WindowSpec& window) {
  return frc(apply_window(x, window), apply_window(clean, window), rings,
             FrcOptions{1, EmptyRingPolicy::zero});
}

void min_max_normalize(std::vector<double>& v) {
  const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
  const double low = *lo;
  const double range = *hi - low;
  for (double& x : v) {
    x = range > 0.0 ? (x - low) / range : 0.0;
  }
}

std::ofstream open_csv(const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) {
    throw InputError("cannot write '" + path.string() + "'");
  }
  out.precision(17);
  return out;
}

} // namespace

AveragingResult denoise_average_experiment(const DenoiserModel& model, const Image& clean,
                                           const CorruptionSpec& noise, int n,
                                           const AveragingOptions& options) {
  if (n < 2) {
    throw InputError("averaging needs at least 2 realizations");
  }
  const RingPartition rings(clean.rows(), clean.cols(), options.ring_thickness);
  Image sum_noisy(clean.rows(), clean.cols());
  Image sum_denoised(clean.rows(), clean.cols());
  AveragingResult result;
  for (int i = 0; i < n; ++i) {
    CorruptionSpec spec = noise;
    spec.seed = derive_seed(noise.seed, static_cast<std::uint64_t>(i));
    const Image noisy = corrupt(clean, spec);
    const Image denoised = forward(model, noisy);
    if (i == 0) {
      result.single_noisy = windowed_frc(noisy, clean, rings, options.window);
      result.single_denoised = windowed_frc(denoised, clean, rings, options.window);
    }
    sum_noisy = sum_noisy + noisy;
    sum_denoised = sum_denoised + denoised;
  }
  const double inv = 1.0 / n;
  const Image mean_noisy = inv * sum_noisy;
  const Image mean_denoised = inv * sum_denoised;
  result.averaged_noisy = windowed_frc(mean_noisy, clean, rings, options.window);
  result.averaged_denoised = windowed_frc(mean_denoised, clean, rings, options.window);
  result.bias = mean_denoised - clean;
  return result;
}

void write_averaging_csv(const AveragingResult& result, const std::filesystem::path& path,
                         int nyquist_ring) {
  auto out = open_csv(path);
  out << "ring,f/N,single_noisy,single_denoised,averaged_noisy,averaged_denoised,n_r\n";
  for (std::size_t k = 0; k < result.single_noisy.size(); ++k) {
    const int r = result.single_noisy.radii[k];
    out << r << "," << static_cast<double>(r) / nyquist_ring << ","
        << result.single_noisy.values[k] << "," << result.single_denoised.values[k] << ","
        << result.averaged_noisy.values[k] << "," << result.averaged_denoised.values[k] << ","
        << result.single_noisy.ring_counts[k] << "\n";
  }
}

SweepTable lowpass_sensitivity_sweep(std::span<const Image> images, int ring_thickness) {
  if (images.empty()) {
    throw InputError("sweep needs at least one image");
  }
  const int rows = images.front().rows();
  const int cols = images.front().cols();
  for (const auto& img : images) {
    if (img.rows() != img.cols() || img.rows() != rows) {
      throw InputError("sweep images must be square and equal in size");
    }
  }
  const RingPartition rings(rows, cols, ring_thickness);
  const int max_ring = rings.max_ring();
  if (max_ring < 2) {
    throw InputError("image too small for a cutoff sweep");
  }
  FrcLossOptions loss_options;
  loss_options.empty_ring = EmptyRingPolicy::zero;

  SweepTable table;
  const auto steps = static_cast<std::size_t>(max_ring);
  table.l1.assign(steps, 0.0);
  table.l2.assign(steps, 0.0);
  table.frc.assign(steps, 0.0);
  for (int c = 1; c <= max_ring; ++c) {
    table.cutoffs.push_back(c);
    table.f_over_nyquist.push_back(static_cast<double>(c) / max_ring);
  }

  std::vector<double> l1(steps), l2(steps), fr(steps);
  for (const auto& img : images) {
    for (int c = 1; c <= max_ring; ++c) {
      const Image low = lowpass(img, c, rings);
      const auto k = static_cast<std::size_t>(c - 1);
      l1[k] = mae(low, img);
      l2[k] = mse(low, img);
      fr[k] = frc_loss(low, img, rings, loss_options).loss;
    }
    min_max_normalize(l1);
    min_max_normalize(l2);
    min_max_normalize(fr);
    for (std::size_t k = 0; k < steps; ++k) {
      table.l1[k] += l1[k];
      table.l2[k] += l2[k];
      table.frc[k] += fr[k];
    }
  }
  const double inv = 1.0 / static_cast<double>(images.size());
  for (std::size_t k = 0; k < steps; ++k) {
    table.l1[k] *= inv;
    table.l2[k] *= inv;
    table.frc[k] *= inv;
  }
  return table;
}

void write_sweep_csv(const SweepTable& table, const std::filesystem::path& path) {
  auto out = open_csv(path);
  out << "cutoff,f/N,l1,l2,frc\n";
  for (std::size_t k = 0; k < table.cutoffs.size(); ++k) {
    out << table.cutoffs[k] << "," << table.f_over_nyquist[k] << "," << table.l1[k] << ","
        << table.l2[k] << "," << table.frc[k] << "\n";
  }
}

FrcCurve held_out_frc_curve(const DenoiserModel& model, const HeldOutSet& held_out,
                            int ring_thickness) {
  if (held_out.clean.empty()) {
    throw InputError("held-out set is empty");
  }
  std::vector<FrcCurve> curves;
  const WindowSpec hann{WindowKind::hann};
  for (std::size_t i = 0; i < held_out.clean.size(); ++i) {
    const Image& clean = held_out.clean[i];
    const RingPartition rings(clean.rows(), clean.cols(), ring_thickness);
    curves.push_back(windowed_frc(forward(model, held_out.noisy[i]), clean, rings, hann));
  }
  return average_curves(curves);
}

FrcCurve noisy_frc_curve(const HeldOutSet& held_out, int ring_thickness) {
  if (held_out.clean.empty()) {
    throw InputError("held-out set is empty");
  }
  std::vector<FrcCurve> curves;
  const WindowSpec hann{WindowKind::hann};
  for (std::size_t i = 0; i < held_out.clean.size(); ++i) {
    const Image& clean = held_out.clean[i];
    const RingPartition rings(clean.rows(), clean.cols(), ring_thickness);
    curves.push_back(windowed_frc(held_out.noisy[i], clean, rings, hann));
  }
  return average_curves(curves);
}

SpectralBiasResult spectral_bias_experiment(std::span<const Image> train_images,
                                            std::span<const Image> held_out_images,
                                            const SpectralBiasConfig& cfg) {
  if (held_out_images.empty()) {
    throw InputError("spectral bias experiment needs held-out images");
  }
  std::vector<Image> natural_train(train_images.begin(), train_images.end());
  std::vector<Image> normalized_train;
  for (const auto& img : train_images) {
    normalized_train.push_back(power_normalize(img));
  }
  std::vector<Image> natural_clean(held_out_images.begin(), held_out_images.end());
  std::vector<Image> normalized_clean;
  for (const auto& img : held_out_images) {
    normalized_clean.push_back(power_normalize(img));
  }

  const HeldOutSet natural_held = make_held_out(std::move(natural_clean), cfg.natural.noise);
  const HeldOutSet normalized_held =
      make_held_out(std::move(normalized_clean), cfg.normalized.noise);

  const auto natural = train(natural_train, natural_held, cfg.natural);
  const auto normalized = train(normalized_train, normalized_held, cfg.normalized);

  SpectralBiasResult result;
  result.natural_denoised =
      held_out_frc_curve(natural.model, natural_held, cfg.natural.ring_thickness);
  result.normalized_denoised =
      held_out_frc_curve(normalized.model, normalized_held, cfg.normalized.ring_thickness);
  result.natural_noisy = noisy_frc_curve(natural_held, cfg.natural.ring_thickness);
  result.normalized_noisy = noisy_frc_curve(normalized_held, cfg.normalized.ring_thickness);
  return result;
}

double ring_spread(const FrcCurve& curve, int first_ring) {
  double sum = 0.0;
  double sum_sq = 0.0;
  int n = 0;
  for (std::size_t k = 0; k < curve.size(); ++k) {
    if (curve.radii[k] >= first_ring) {
      sum += curve.values[k];
      sum_sq += curve.values[k] * curve.values[k];
      ++n;
    }
  }
  if (n == 0) {
    throw InputError("no rings at or above " + std::to_string(first_ring));
  }
  const double mean = sum / n;
  return std::sqrt(std::max(0.0, sum_sq / n - mean * mean));
}

Image gaussian_baseline(const Image& img, double sigma) { return gaussian_filter_wrap(img, sigma); }

} // namespace frckit
