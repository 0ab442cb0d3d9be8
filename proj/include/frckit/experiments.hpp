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

#pragma once

#include <filesystem>
#include <span>
#include <vector>

#include "frckit/corrupt.hpp"
#include "frckit/frc.hpp"
#include "frckit/model.hpp"
#include "frckit/train.hpp"

namespace frckit {

/// FRC-vs-clean curves for single and averaged noisy/denoised realizations.
struct AveragingResult {
  FrcCurve single_noisy;
  FrcCurve single_denoised;
  FrcCurve averaged_noisy;
  FrcCurve averaged_denoised;
  /// mean(denoised) - clean
  Image bias;
};

struct AveragingOptions {
  WindowSpec window{WindowKind::hann};
  int ring_thickness = 1;
};

/// Realization i uses a seed derived from (noise.seed, i); realization 0 is
/// the one reported as "single".
AveragingResult denoise_average_experiment(const DenoiserModel& model, const Image& clean,
                                           const CorruptionSpec& noise, int n,
                                           const AveragingOptions& options = {});

void write_averaging_csv(const AveragingResult& result, const std::filesystem::path& path,
                         int nyquist_ring);

/// Loss between low-passed and original images as a function of cutoff,
/// each image's curve min-max normalized before averaging.
struct SweepTable {
  std::vector<int> cutoffs;
  std::vector<double> f_over_nyquist;
  std::vector<double> l1;
  std::vector<double> l2;
  std::vector<double> frc;
};

SweepTable lowpass_sensitivity_sweep(std::span<const Image> images, int ring_thickness = 1);

void write_sweep_csv(const SweepTable& table, const std::filesystem::path& path);

struct SpectralBiasConfig {
  TrainConfig natural;
  TrainConfig normalized;
};

struct SpectralBiasResult {
  /// Held-out FRC of denoised vs clean, averaged over held-out images.
  FrcCurve natural_denoised;
  FrcCurve normalized_denoised;
  /// Same for the noisy inputs, for reference.
  FrcCurve natural_noisy;
  FrcCurve normalized_noisy;
};

/// Trains one model on the images as given and one on their power-normalized
/// versions (held-out images are normalized the same way), evaluating
/// Hann-windowed FRC curves over rings 1..max.
SpectralBiasResult spectral_bias_experiment(std::span<const Image> train_images,
                                            std::span<const Image> held_out_images,
                                            const SpectralBiasConfig& cfg);

/// Population standard deviation of the curve values at rings >= first_ring.
double ring_spread(const FrcCurve& curve, int first_ring);

/// Averaged Hann-windowed FRC of denoised held-out inputs against their
/// clean images, over rings 1..max.
FrcCurve held_out_frc_curve(const DenoiserModel& model, const HeldOutSet& held_out,
                            int ring_thickness = 1);
FrcCurve noisy_frc_curve(const HeldOutSet& held_out, int ring_thickness = 1);

/// Experiment-facing name for the periodic Gaussian filter.
Image gaussian_baseline(const Image& img, double sigma);

} // namespace frckit
