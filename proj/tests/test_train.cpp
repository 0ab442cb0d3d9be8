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

#include <gtest/gtest.h>

#include <cmath>

#include "frckit/error.hpp"
#include "frckit/experiments.hpp"
#include "frckit/metrics.hpp"
#include "frckit/random.hpp"
#include "frckit/train.hpp"
#include "test_util.hpp"

using namespace frckit;

namespace {

std::vector<Image> synthetic_set(int count, int size, std::uint64_t base) {
  std::vector<Image> out;
  for (int i = 0; i < count; ++i) {
    out.push_back(generate_synthetic({size, 1.0, derive_seed(base, static_cast<std::uint64_t>(i))}));
  }
  return out;
}

TrainConfig small_config() {
  TrainConfig cfg;
  cfg.steps = 20;
  cfg.batch_size = 2;
  cfg.crop_size = 16;
  cfg.hidden_channels = 4;
  cfg.seed = 5;
  return cfg;
}

} // namespace

TEST(Loss, NamesAndValidation) {
  for (auto k : {LossKind::l1, LossKind::l2, LossKind::frc}) {
    EXPECT_EQ(parse_loss_kind(to_string(k)), k);
  }
  EXPECT_THROW(parse_loss_kind("ssim"), InputError);
  TrainConfig cfg;
  cfg.learning_rate = 0.0;
  EXPECT_THROW(validate(cfg), InputError);
  cfg = {};
  cfg.batch_size = 0;
  EXPECT_THROW(validate(cfg), InputError);
  cfg = {};
  cfg.steps = -1;
  EXPECT_THROW(validate(cfg), InputError);
  cfg = {};
  cfg.noise.level = -0.1;
  EXPECT_THROW(validate(cfg), InputError);
}

TEST(Loss, GradientsMatchFiniteDifferences) {
  const Image p = test::gaussian_image(8, 8, 1);
  const Image t = test::gaussian_image(8, 8, 2);
  const RingPartition rings(8, 8, 1);
  for (auto kind : {LossKind::l1, LossKind::l2, LossKind::frc}) {
    const LossEvaluation e = evaluate_loss(kind, p, t, rings);
    const double h = 1e-6;
    for (std::size_t k = 0; k < p.pixels().size(); ++k) {
      Image up = p, down = p;
      up.pixels()[k] += h;
      down.pixels()[k] -= h;
      const double fd =
          (evaluate_loss(kind, up, t, rings).loss - evaluate_loss(kind, down, t, rings).loss) / (2 * h);
      EXPECT_NEAR(e.gradient.pixels()[k], fd, 1e-6 * std::max(1.0, std::abs(fd))) << to_string(kind);
    }
  }
  EXPECT_NEAR(evaluate_loss(LossKind::l2, t, t, rings).loss, 0.0, 1e-15);
  EXPECT_THROW(evaluate_loss(LossKind::l2, p, Image(8, 9), rings), InputError);
}

TEST(Train, ZeroStepsReturnsInitialization) {
  const auto data = synthetic_set(2, 32, 1);
  TrainConfig cfg = small_config();
  cfg.steps = 0;
  const auto r = train(data, {}, cfg);
  EXPECT_EQ(r.model, DenoiserModel::make_default(derive_seed(cfg.seed, 0), cfg.hidden_channels));
  EXPECT_TRUE(r.trace.entries.empty());
}

TEST(Train, DeterministicWithLogSpacedTrace) {
  const auto data = synthetic_set(3, 32, 2);
  const HeldOutSet held = make_held_out(synthetic_set(1, 32, 3), {CorruptionKind::gaussian, 0.4, 8});
  for (auto kind : {LossKind::l1, LossKind::l2, LossKind::frc}) {
    TrainConfig cfg = small_config();
    cfg.loss = kind;
    const auto a = train(data, held, cfg);
    const auto b = train(data, held, cfg);
    EXPECT_EQ(a.model, b.model);
    EXPECT_NE(a.model, DenoiserModel::make_default(derive_seed(cfg.seed, 0), cfg.hidden_channels));
    std::vector<int> steps;
    for (std::size_t i = 0; i < a.trace.entries.size(); ++i) {
      steps.push_back(a.trace.entries[i].step);
      EXPECT_EQ(a.trace.entries[i].loss, b.trace.entries[i].loss);
      EXPECT_EQ(a.trace.entries[i].ssim, b.trace.entries[i].ssim);
    }
    EXPECT_EQ(steps, (std::vector<int>{1, 2, 4, 8, 16, 20}));
    cfg.seed = 6;
    EXPECT_NE(train(data, held, cfg).model, a.model);
  }
}

TEST(Train, StopHookAndErrors) {
  const auto data = synthetic_set(2, 32, 4);
  TrainConfig cfg = small_config();
  TrainHooks hooks;
  hooks.stop_after = [](const TraceEntry& e) { return e.step >= 4; };
  const auto r = train(data, {}, cfg, hooks);
  EXPECT_EQ(r.trace.entries.back().step, 4);
  EXPECT_THROW(train({}, {}, cfg), InputError);
  cfg.crop_size = 40;
  EXPECT_THROW(train(data, {}, cfg), InputError);
}

TEST(Train, StepsToSsim) {
  TrainingTrace t;
  t.entries = {{1, 0, 0, 0, 0.2}, {2, 0, 0, 0, 0.5}, {4, 0, 0, 0, 0.7}};
  EXPECT_EQ(steps_to_ssim(t, 0.5), 2);
  EXPECT_EQ(steps_to_ssim(t, 0.1), 1);
  EXPECT_EQ(steps_to_ssim(t, 0.9), -1);
}

TEST(Train, DenoisesForEveryLoss) {
  const auto data = synthetic_set(16, 64, 0x7a11);
  const CorruptionSpec noise{CorruptionKind::gaussian, 0.4, 0x401d};
  const HeldOutSet held = make_held_out(synthetic_set(4, 64, 0x4e1d), noise);
  const double noisy = frc_scalar(noisy_frc_curve(held));
  for (auto kind : {LossKind::l1, LossKind::l2, LossKind::frc}) {
    TrainConfig cfg;
    cfg.loss = kind;
    cfg.steps = 2048;
    cfg.seed = 1;
    const auto r = train(data, held, cfg);
    const double denoised = frc_scalar(held_out_frc_curve(r.model, held));
    EXPECT_GE(denoised - noisy, 0.05) << to_string(kind) << " noisy " << noisy;
    const HeldOutMetrics m = evaluate_held_out(r.model, held);
    double noisy_mse = 0.0;
    for (std::size_t i = 0; i < held.clean.size(); ++i) {
      noisy_mse += mse(held.noisy[i], held.clean[i]) / static_cast<double>(held.clean.size());
    }
    EXPECT_LT(m.mse, noisy_mse) << to_string(kind);
  }
}

TEST(Train, LinearNoise2NoiseAttenuates) {
  // one linear 3x3 layer trained with L2 on pairs of noisy copies
  const auto data = synthetic_set(4, 32, 9);
  const CorruptionSpec noise{CorruptionKind::gaussian, 0.4, 0};
  DenoiserModel m = DenoiserModel::make_default(3, 1);
  m = DenoiserModel({m.layers()[0]});
  m.layers()[0].activation = Activation::identity;
  const RingPartition rings(32, 32, 1);
  ForwardCache cache;
  std::uint64_t seed = 100;
  const double lr = 0.2;
  for (int step = 0; step < 3000; ++step) {
    const Image& clean = data[static_cast<std::size_t>(step) % data.size()];
    const auto [input, target] = noise_pair(clean, noise, seed, seed + 1);
    seed += 2;
    const Image out = forward(m, input, cache);
    const auto g = backward(m, cache, evaluate_loss(LossKind::l2, out, target, rings).gradient);
    auto& layer = m.layers()[0];
    for (std::size_t k = 0; k < layer.weights.size(); ++k) {
      layer.weights[k] -= lr * g[0].weights[k];
    }
    layer.biases[0] -= lr * g[0].biases[0];
  }
  for (double v : kernel_transfer_magnitude(m.layers()[0], 32, 32)) {
    EXPECT_LE(v, 1.05);
  }
}
