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

#include "frckit/train.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <random>
#include <string>

#include "frckit/error.hpp"
#include "frckit/metrics.hpp"
#include "frckit/random.hpp"

namespace frckit {

namespace {

constexpr std::pair<LossKind, std::string_view> kLossNames[] = {
    {LossKind::l1, "l1"},
    {LossKind::l2, "l2"},
    {LossKind::frc, "frc"},
};

bool is_power_of_two(int v) { return v > 0 && (v & (v - 1)) == 0; }

/// Adam moments for every parameter, laid out like the model.
class Adam {
public:
  Adam(const DenoiserModel& model, const TrainConfig& cfg)
      : m_(zero_gradient(model)), v_(zero_gradient(model)), cfg_(cfg) {}

  void step(DenoiserModel& model, const ModelGradient& grad) {
    ++t_;
    const double c1 = 1.0 - std::pow(cfg_.adam_beta1, t_);
    const double c2 = 1.0 - std::pow(cfg_.adam_beta2, t_);
    auto& layers = model.layers();
    for (std::size_t l = 0; l < layers.size(); ++l) {
      update(layers[l].weights, grad[l].weights, m_[l].weights, v_[l].weights, c1, c2);
      update(layers[l].biases, grad[l].biases, m_[l].biases, v_[l].biases, c1, c2);
    }
  }

private:
  void update(std::vector<double>& theta, const std::vector<double>& g, std::vector<double>& m,
              std::vector<double>& v, double c1, double c2) const {
    const double b1 = cfg_.adam_beta1;
    const double b2 = cfg_.adam_beta2;
    for (std::size_t k = 0; k < theta.size(); ++k) {
      m[k] = b1 * m[k] + (1.0 - b1) * g[k];
      v[k] = b2 * v[k] + (1.0 - b2) * g[k] * g[k];
      theta[k] -= cfg_.learning_rate * (m[k] / c1) / (std::sqrt(v[k] / c2) + cfg_.adam_epsilon);
    }
  }

  ModelGradient m_;
  ModelGradient v_;
  const TrainConfig& cfg_;
  int t_ = 0;
};

} // namespace

std::string_view to_string(LossKind kind) {
  for (const auto& [k, name] : kLossNames) {
    if (k == kind) {
      return name;
    }
  }
  return "unknown";
}

LossKind parse_loss_kind(std::string_view name) {
  for (const auto& [k, n] : kLossNames) {
    if (n == name) {
      return k;
    }
  }
  throw InputError("unknown loss '" + std::string(name) + "' (expected l1, l2 or frc)");
}

void validate(const TrainConfig& cfg) {
  if (cfg.steps < 0) {
    throw InputError("steps must be non-negative");
  }
  if (cfg.batch_size < 1) {
    throw InputError("batch_size must be positive");
  }
  if (!(cfg.learning_rate > 0.0) || !std::isfinite(cfg.learning_rate)) {
    throw InputError("learning_rate must be positive");
  }
  if (!(cfg.adam_beta1 >= 0.0 && cfg.adam_beta1 < 1.0 && cfg.adam_beta2 >= 0.0 &&
        cfg.adam_beta2 < 1.0)) {
    throw InputError("adam betas must lie in [0,1)");
  }
  if (cfg.crop_size < 8) {
    throw InputError("crop_size must be at least 8");
  }
  if (cfg.hidden_channels < 1) {
    throw InputError("hidden_channels must be positive");
  }
  if (cfg.ring_thickness < 1) {
    throw InputError("ring_thickness must be positive");
  }
  validate(cfg.noise);
}

LossEvaluation evaluate_loss(LossKind kind, const Image& prediction, const Image& target,
                             const RingPartition& rings) {
  if (!prediction.same_shape(target)) {
    throw InputError("prediction and target differ in size");
  }
  const auto p = prediction.pixels();
  const auto t = target.pixels();
  const double inv = 1.0 / static_cast<double>(p.size());
  LossEvaluation out;
  switch (kind) {
  case LossKind::l2: {
    out.gradient = Image(prediction.rows(), prediction.cols());
    auto g = out.gradient.pixels();
    for (std::size_t k = 0; k < p.size(); ++k) {
      const double d = p[k] - t[k];
      out.loss += d * d * inv;
      g[k] = 2.0 * d * inv;
    }
    return out;
  }
  case LossKind::l1: {
    out.gradient = Image(prediction.rows(), prediction.cols());
    auto g = out.gradient.pixels();
    for (std::size_t k = 0; k < p.size(); ++k) {
      const double d = p[k] - t[k];
      out.loss += std::abs(d) * inv;
      g[k] = (d > 0.0 ? 1.0 : (d < 0.0 ? -1.0 : 0.0)) * inv;
    }
    return out;
  }
  case LossKind::frc: {
    FrcLossOptions options;
    options.empty_ring = EmptyRingPolicy::zero;
    auto r = frc_loss_and_grad(prediction, target, rings, options);
    out.loss = r.value.loss;
    out.gradient = std::move(r.gradient);
    return out;
  }
  }
  throw InternalError("unhandled loss kind");
}

HeldOutSet make_held_out(std::vector<Image> clean, const CorruptionSpec& noise) {
  HeldOutSet set;
  for (std::size_t i = 0; i < clean.size(); ++i) {
    CorruptionSpec spec = noise;
    spec.seed = derive_seed(noise.seed, 0x4e0000 + i);
    set.noisy.push_back(corrupt(clean[i], spec));
  }
  set.clean = std::move(clean);
  return set;
}

HeldOutMetrics evaluate_held_out(const DenoiserModel& model, const HeldOutSet& held_out,
                                 int ring_thickness) {
  HeldOutMetrics m;
  if (held_out.clean.empty()) {
    const double nan = std::numeric_limits<double>::quiet_NaN();
    return {nan, nan, nan};
  }
  const WindowSpec hann{WindowKind::hann};
  for (std::size_t i = 0; i < held_out.clean.size(); ++i) {
    const Image& clean = held_out.clean[i];
    const Image denoised = forward(model, held_out.noisy[i]);
    const RingPartition rings(clean.rows(), clean.cols(), ring_thickness);
    const auto curve = frc(apply_window(denoised, hann), apply_window(clean, hann), rings,
                           FrcOptions{1, EmptyRingPolicy::zero});
    m.frc_scalar += frc_scalar(curve);
    m.mse += mse(denoised, clean);
    m.ssim += ssim(denoised, clean);
  }
  const double n = static_cast<double>(held_out.clean.size());
  m.frc_scalar /= n;
  m.mse /= n;
  m.ssim /= n;
  return m;
}

void write_trace_csv(const TrainingTrace& trace, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) {
    throw InputError("cannot write '" + path.string() + "'");
  }
  out.precision(17);
  out << "step,loss,frc_scalar,mse,ssim\n";
  for (const auto& e : trace.entries) {
    out << e.step << "," << e.loss << "," << e.frc_scalar << "," << e.mse << "," << e.ssim << "\n";
  }
}

TrainResult train(std::span<const Image> data, const HeldOutSet& held_out,
                  const TrainConfig& cfg, const TrainHooks& hooks) {
  validate(cfg);
  if (data.empty()) {
    throw InputError("training needs at least one image");
  }
  for (const auto& img : data) {
    if (img.rows() < cfg.crop_size || img.cols() < cfg.crop_size) {
      throw InputError("crop_size " + std::to_string(cfg.crop_size) + " exceeds a " +
                       std::to_string(img.rows()) + "x" + std::to_string(img.cols()) +
                       " training image");
    }
  }

  TrainResult result{DenoiserModel::make_default(derive_seed(cfg.seed, 0), cfg.hidden_channels), {}};
  DenoiserModel& model = result.model;
  Adam adam(model, cfg);
  std::mt19937_64 rng(derive_seed(cfg.seed, 1));
  std::uniform_int_distribution<std::size_t> pick(0, data.size() - 1);
  const RingPartition rings(cfg.crop_size, cfg.crop_size, cfg.ring_thickness);
  const double inv_batch = 1.0 / cfg.batch_size;
  ForwardCache cache;

  for (int step = 1; step <= cfg.steps; ++step) {
    ModelGradient grad = zero_gradient(model);
    double loss = 0.0;
    for (int b = 0; b < cfg.batch_size; ++b) {
      const Image& img = data[pick(rng)];
      const int row = std::uniform_int_distribution<int>(0, img.rows() - cfg.crop_size)(rng);
      const int col = std::uniform_int_distribution<int>(0, img.cols() - cfg.crop_size)(rng);
      const Image crop = crop_at(img, row, col, cfg.crop_size);
      const std::uint64_t seed_a = rng();
      std::uint64_t seed_b = rng();
      if (seed_b == seed_a) {
        seed_b ^= 1;
      }
      const auto [input, target] = noise_pair(crop, cfg.noise, seed_a, seed_b);
      const Image output = forward(model, input, cache);
      const LossEvaluation eval = evaluate_loss(cfg.loss, output, target, rings);
      accumulate(grad, backward(model, cache, eval.gradient), inv_batch);
      loss += eval.loss * inv_batch;
    }
    adam.step(model, grad);

    if (is_power_of_two(step) || step == cfg.steps) {
      const HeldOutMetrics m = evaluate_held_out(model, held_out, cfg.ring_thickness);
      result.trace.entries.push_back({step, loss, m.frc_scalar, m.mse, m.ssim});
      if (hooks.stop_after && hooks.stop_after(result.trace.entries.back())) {
        break;
      }
    }
  }
  return result;
}

int steps_to_ssim(const TrainingTrace& trace, double threshold) {
  for (const auto& e : trace.entries) {
    if (e.ssim >= threshold) {
      return e.step;
    }
  }
  return -1;
}

} // namespace frckit
