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
#include <span>
#include <vector>

#include "frckit/imagekit.hpp"

namespace frckit {

enum class Activation : std::uint32_t { identity = 0, relu = 1 };

/// 3x3 convolution with periodic padding, stride 1.
/// weights are laid out [out][in][ky][kx].
struct ConvLayer {
  int in_channels = 1;
  int out_channels = 1;
  Activation activation = Activation::identity;
  std::vector<double> weights;
  std::vector<double> biases;

  static constexpr int kKernel = 3;
  static constexpr int kTaps = kKernel * kKernel;

  ConvLayer() = default;
  ConvLayer(int in, int out, Activation act);

  double& weight(int o, int i, int ky, int kx) {
    return weights[static_cast<std::size_t>(((o * in_channels + i) * kKernel + ky) * kKernel + kx)];
  }
  double weight(int o, int i, int ky, int kx) const {
    return weights[static_cast<std::size_t>(((o * in_channels + i) * kKernel + ky) * kKernel + kx)];
  }

  friend bool operator==(const ConvLayer&, const ConvLayer&) = default;
};

class DenoiserModel {
public:
  DenoiserModel() = default;
  /// Throws InputError if channel counts do not chain from 1 to 1.
  explicit DenoiserModel(std::vector<ConvLayer> layers);

  /// 1 -> hidden (relu) -> hidden (relu) -> 1 (identity). Weights uniform
  /// in [-1/sqrt(fan_in), 1/sqrt(fan_in)], biases zero.
  static DenoiserModel make_default(std::uint64_t seed, int hidden = 16);
  /// Single 1 -> 1 layer with a centered delta kernel.
  static DenoiserModel identity();

  const std::vector<ConvLayer>& layers() const { return layers_; }
  std::vector<ConvLayer>& layers() { return layers_; }
  std::size_t parameter_count() const;

  friend bool operator==(const DenoiserModel&, const DenoiserModel&) = default;

private:
  std::vector<ConvLayer> layers_;
};

/// Gradients with the same layout as the model's weights and biases.
struct LayerGradient {
  std::vector<double> weights;
  std::vector<double> biases;
};
using ModelGradient = std::vector<LayerGradient>;

ModelGradient zero_gradient(const DenoiserModel& model);
/// acc += scale * g
void accumulate(ModelGradient& acc, const ModelGradient& g, double scale = 1.0);

/// Intermediate results of one forward pass needed by backward().
struct ForwardCache {
  int rows = 0;
  int cols = 0;
  /// padded[l] is the input of layer l, channel-major, with a one-pixel
  /// periodic border: each plane is (rows + 2) x (cols + 2).
  std::vector<std::vector<double>> padded;
  /// pre[l] is layer l's output before its activation.
  std::vector<std::vector<double>> pre;
};

Image forward(const DenoiserModel& model, const Image& img);
Image forward(const DenoiserModel& model, const Image& img, ForwardCache& cache);

/// Parameter gradients for the upstream gradient dL/d(output).
ModelGradient backward(const DenoiserModel& model, const ForwardCache& cache,
                       const Image& upstream);

/// Magnitude of the 3x3 kernel's transfer function at every frequency, for
/// single-layer 1 -> 1 models.
std::vector<double> kernel_transfer_magnitude(const ConvLayer& layer, int rows, int cols);

/// "FDNM" checkpoint: magic, version, layer count, then per layer in/out
/// channels, activation code, float32 weights and biases (little-endian).
void save_model(const DenoiserModel& model, const std::filesystem::path& path);
DenoiserModel load_model(const std::filesystem::path& path);

} // namespace frckit
