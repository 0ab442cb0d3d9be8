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

#include <cstdint>
#include <filesystem>
#include <functional>
#include <span>
#include <string_view>
#include <vector>

#include "frckit/corrupt.hpp"
#include "frckit/frc.hpp"
#include "frckit/model.hpp"

namespace frckit {

enum class LossKind { l1, l2, frc };

std::string_view to_string(LossKind kind);
LossKind parse_loss_kind(std::string_view name);

struct TrainConfig {
  LossKind loss = LossKind::l2;
  int steps = 1000;
  int batch_size = 10;
  double learning_rate = 3e-4;
  double adam_beta1 = 0.9;
  double adam_beta2 = 0.999;
  double adam_epsilon = 1e-8;
  std::uint64_t seed = 0;
  int crop_size = 32;
  int hidden_channels = 16;
  int ring_thickness = 1;
  CorruptionSpec noise{CorruptionKind::gaussian, 0.4, 0};
};

/// Throws InputError on a non-positive step count, batch, rate or crop.
void validate(const TrainConfig& cfg);

/// Loss between a prediction and a target, plus dL/d(prediction).
struct LossEvaluation {
  double loss = 0.0;
  Image gradient;
};

LossEvaluation evaluate_loss(LossKind kind, const Image& prediction, const Image& target,
                             const RingPartition& rings);

/// Fixed noisy inputs paired with their clean images, for monitoring.
struct HeldOutSet {
  std::vector<Image> clean;
  std::vector<Image> noisy;
};

/// Noisy copies use seeds derived from noise.seed, independent of training.
HeldOutSet make_held_out(std::vector<Image> clean, const CorruptionSpec& noise);

struct HeldOutMetrics {
  double frc_scalar = 0.0;
  double mse = 0.0;
  double ssim = 0.0;
};

/// Denoises every held-out input and averages metrics against the clean
/// images. FRC uses Hann-windowed images and skips DC.
HeldOutMetrics evaluate_held_out(const DenoiserModel& model, const HeldOutSet& held_out,
                                 int ring_thickness = 1);

struct TraceEntry {
  int step = 0;
  double loss = 0.0;
  double frc_scalar = 0.0;
  double mse = 0.0;
  double ssim = 0.0;
};

struct TrainingTrace {
  std::vector<TraceEntry> entries;
};

void write_trace_csv(const TrainingTrace& trace, const std::filesystem::path& path);

struct TrainResult {
  DenoiserModel model;
  TrainingTrace trace;
};

struct TrainHooks {
  /// Returning true after a logged entry stops training early.
  std::function<bool(const TraceEntry&)> stop_after;
};

/// Noise2Noise training with Adam. Each step draws batch_size random crops,
/// corrupts each twice with fresh seeds, and regresses one copy onto the
/// other. The trace is logged at steps 1, 2, 4, ... and at the final step.
/// Deterministic for a given configuration.
TrainResult train(std::span<const Image> data, const HeldOutSet& held_out,
                  const TrainConfig& cfg, const TrainHooks& hooks = {});

/// First logged step whose held-out SSIM reaches threshold, or -1.
int steps_to_ssim(const TrainingTrace& trace, double threshold);

} // namespace frckit
