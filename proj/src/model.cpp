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

#include "frckit/model.hpp"

#include <array>
#include <bit>
#include <cmath>
#include <complex>
#include <cstring>
#include <fstream>
#include <iterator>
#include <numbers>
#include <random>
#include <string>

#include "frckit/error.hpp"

namespace frckit {

namespace {

constexpr std::array<char, 4> kModelMagic{'F', 'D', 'N', 'M'};
constexpr std::uint32_t kModelVersion = 1;

/// Copies channel planes into a buffer with a one-pixel periodic border.
void pad_planes(const double* src, int channels, int rows, int cols, std::vector<double>& dst) {
  const int pr = rows + 2;
  const int pc = cols + 2;
  dst.resize(static_cast<std::size_t>(channels) * pr * pc);
  for (int ch = 0; ch < channels; ++ch) {
    const double* plane = src + static_cast<std::size_t>(ch) * rows * cols;
    double* out = dst.data() + static_cast<std::size_t>(ch) * pr * pc;
    for (int y = 0; y < pr; ++y) {
      const int sy = (y - 1 + rows) % rows;
      const double* row = plane + static_cast<std::size_t>(sy) * cols;
      double* orow = out + static_cast<std::size_t>(y) * pc;
      orow[0] = row[cols - 1];
      std::memcpy(orow + 1, row, sizeof(double) * static_cast<std::size_t>(cols));
      orow[pc - 1] = row[0];
    }
  }
}

/// pre[o] = b[o] + sum_i sum_taps w[o][i][ky][kx] * in_i[y + ky - 1][x + kx - 1]
void conv_forward(const ConvLayer& layer, const std::vector<double>& padded, int rows, int cols,
                  std::vector<double>& pre) {
  const int pc = cols + 2;
  const std::size_t plane = static_cast<std::size_t>(rows) * cols;
  const std::size_t pplane = static_cast<std::size_t>(rows + 2) * pc;
  pre.assign(static_cast<std::size_t>(layer.out_channels) * plane, 0.0);
  for (int o = 0; o < layer.out_channels; ++o) {
    double* out = pre.data() + static_cast<std::size_t>(o) * plane;
    const double bias = layer.biases[static_cast<std::size_t>(o)];
    for (std::size_t k = 0; k < plane; ++k) {
      out[k] = bias;
    }
    for (int i = 0; i < layer.in_channels; ++i) {
      const double* w = &layer.weights[static_cast<std::size_t>((o * layer.in_channels + i) * ConvLayer::kTaps)];
      const double* in = padded.data() + static_cast<std::size_t>(i) * pplane;
      for (int y = 0; y < rows; ++y) {
        const double* r0 = in + static_cast<std::size_t>(y) * pc;
        const double* r1 = r0 + pc;
        const double* r2 = r1 + pc;
        double* dst = out + static_cast<std::size_t>(y) * cols;
        for (int x = 0; x < cols; ++x) {
          dst[x] += w[0] * r0[x] + w[1] * r0[x + 1] + w[2] * r0[x + 2] +
                    w[3] * r1[x] + w[4] * r1[x + 1] + w[5] * r1[x + 2] +
                    w[6] * r2[x] + w[7] * r2[x + 1] + w[8] * r2[x + 2];
        }
      }
    }
  }
}

void activate(Activation act, const std::vector<double>& pre, std::vector<double>& out) {
  out.resize(pre.size());
  if (act == Activation::relu) {
    for (std::size_t k = 0; k < pre.size(); ++k) {
      out[k] = pre[k] > 0.0 ? pre[k] : 0.0;
    }
  } else {
    out = pre;
  }
}

} // namespace

ConvLayer::ConvLayer(int in, int out, Activation act)
    : in_channels(in), out_channels(out), activation(act),
      weights(static_cast<std::size_t>(in) * static_cast<std::size_t>(out) * kTaps, 0.0),
      biases(static_cast<std::size_t>(out), 0.0) {}

DenoiserModel::DenoiserModel(std::vector<ConvLayer> layers) : layers_(std::move(layers)) {
  if (layers_.empty()) {
    throw InputError("model needs at least one layer");
  }
  int channels = 1;
  for (std::size_t l = 0; l < layers_.size(); ++l) {
    const auto& layer = layers_[l];
    if (layer.in_channels != channels || layer.out_channels < 1) {
      throw InputError("layer " + std::to_string(l) + " expects " +
                       std::to_string(layer.in_channels) + " input channels, previous layer gives " +
                       std::to_string(channels));
    }
    if (layer.weights.size() != static_cast<std::size_t>(layer.in_channels) * layer.out_channels * ConvLayer::kTaps ||
        layer.biases.size() != static_cast<std::size_t>(layer.out_channels)) {
      throw InputError("layer " + std::to_string(l) + " has wrongly sized parameters");
    }
    for (double v : layer.weights) {
      if (!std::isfinite(v)) {
        throw InputError("non-finite weight in layer " + std::to_string(l));
      }
    }
    for (double v : layer.biases) {
      if (!std::isfinite(v)) {
        throw InputError("non-finite bias in layer " + std::to_string(l));
      }
    }
    channels = layer.out_channels;
  }
  if (channels != 1) {
    throw InputError("model must end in a single output channel");
  }
}

DenoiserModel DenoiserModel::make_default(std::uint64_t seed, int hidden) {
  if (hidden < 1) {
    throw InputError("hidden channel count must be positive");
  }
  std::vector<ConvLayer> layers{ConvLayer(1, hidden, Activation::relu),
                                ConvLayer(hidden, hidden, Activation::relu),
                                ConvLayer(hidden, 1, Activation::identity)};
  std::mt19937_64 rng(seed);
  for (auto& layer : layers) {
    const double bound = 1.0 / std::sqrt(static_cast<double>(layer.in_channels * ConvLayer::kTaps));
    std::uniform_real_distribution<double> init(-bound, bound);
    for (double& w : layer.weights) {
      w = init(rng);
    }
  }
  return DenoiserModel(std::move(layers));
}

DenoiserModel DenoiserModel::identity() {
  ConvLayer layer(1, 1, Activation::identity);
  layer.weight(0, 0, 1, 1) = 1.0;
  return DenoiserModel({layer});
}

std::size_t DenoiserModel::parameter_count() const {
  std::size_t n = 0;
  for (const auto& layer : layers_) {
    n += layer.weights.size() + layer.biases.size();
  }
  return n;
}

ModelGradient zero_gradient(const DenoiserModel& model) {
  ModelGradient g;
  for (const auto& layer : model.layers()) {
    g.push_back({std::vector<double>(layer.weights.size(), 0.0),
                 std::vector<double>(layer.biases.size(), 0.0)});
  }
  return g;
}

void accumulate(ModelGradient& acc, const ModelGradient& g, double scale) {
  for (std::size_t l = 0; l < acc.size(); ++l) {
    for (std::size_t k = 0; k < acc[l].weights.size(); ++k) {
      acc[l].weights[k] += scale * g[l].weights[k];
    }
    for (std::size_t k = 0; k < acc[l].biases.size(); ++k) {
      acc[l].biases[k] += scale * g[l].biases[k];
    }
  }
}

Image forward(const DenoiserModel& model, const Image& img, ForwardCache& cache) {
  const int rows = img.rows();
  const int cols = img.cols();
  const auto& layers = model.layers();
  cache.rows = rows;
  cache.cols = cols;
  cache.padded.resize(layers.size());
  cache.pre.resize(layers.size());

  std::vector<double> current(img.pixels().begin(), img.pixels().end());
  for (std::size_t l = 0; l < layers.size(); ++l) {
    pad_planes(current.data(), layers[l].in_channels, rows, cols, cache.padded[l]);
    conv_forward(layers[l], cache.padded[l], rows, cols, cache.pre[l]);
    activate(layers[l].activation, cache.pre[l], current);
  }
  return Image(rows, cols, std::move(current));
}

Image forward(const DenoiserModel& model, const Image& img) {
  ForwardCache cache;
  return forward(model, img, cache);
}

ModelGradient backward(const DenoiserModel& model, const ForwardCache& cache,
                       const Image& upstream) {
  const int rows = cache.rows;
  const int cols = cache.cols;
  if (upstream.rows() != rows || upstream.cols() != cols) {
    throw InputError("upstream gradient size does not match the forward pass");
  }
  const auto& layers = model.layers();
  const int pc = cols + 2;
  const std::size_t plane = static_cast<std::size_t>(rows) * cols;
  const std::size_t pplane = static_cast<std::size_t>(rows + 2) * pc;

  ModelGradient grad = zero_gradient(model);
  std::vector<double> g(upstream.pixels().begin(), upstream.pixels().end());
  std::vector<double> g_padded;
  std::vector<double> g_in;

  for (std::size_t l = layers.size(); l-- > 0;) {
    const ConvLayer& layer = layers[l];
    const auto& pre = cache.pre[l];
    if (layer.activation == Activation::relu) {
      for (std::size_t k = 0; k < g.size(); ++k) {
        if (!(pre[k] > 0.0)) {
          g[k] = 0.0;
        }
      }
    }
    const auto& in = cache.padded[l];
    auto& gw = grad[l].weights;
    auto& gb = grad[l].biases;
    for (int o = 0; o < layer.out_channels; ++o) {
      const double* go = g.data() + static_cast<std::size_t>(o) * plane;
      double bias_sum = 0.0;
      for (std::size_t k = 0; k < plane; ++k) {
        bias_sum += go[k];
      }
      gb[static_cast<std::size_t>(o)] = bias_sum;
      for (int i = 0; i < layer.in_channels; ++i) {
        const double* src = in.data() + static_cast<std::size_t>(i) * pplane;
        double acc[ConvLayer::kTaps] = {};
        for (int y = 0; y < rows; ++y) {
          const double* gr = go + static_cast<std::size_t>(y) * cols;
          for (int ky = 0; ky < 3; ++ky) {
            const double* sr = src + static_cast<std::size_t>(y + ky) * pc;
            double a0 = 0.0, a1 = 0.0, a2 = 0.0;
            for (int x = 0; x < cols; ++x) {
              a0 += gr[x] * sr[x];
              a1 += gr[x] * sr[x + 1];
              a2 += gr[x] * sr[x + 2];
            }
            acc[ky * 3] += a0;
            acc[ky * 3 + 1] += a1;
            acc[ky * 3 + 2] += a2;
          }
        }
        double* w = &gw[static_cast<std::size_t>((o * layer.in_channels + i) * ConvLayer::kTaps)];
        for (int t = 0; t < ConvLayer::kTaps; ++t) {
          w[t] = acc[t];
        }
      }
    }
    if (l == 0) {
      break;
    }
    // d in_i[a][b] = sum_o sum_taps w[o][i][ky][kx] * g_o[a - ky + 1][b - kx + 1]
    pad_planes(g.data(), layer.out_channels, rows, cols, g_padded);
    g_in.assign(static_cast<std::size_t>(layer.in_channels) * plane, 0.0);
    for (int i = 0; i < layer.in_channels; ++i) {
      double* dst_plane = g_in.data() + static_cast<std::size_t>(i) * plane;
      for (int o = 0; o < layer.out_channels; ++o) {
        const double* w = &layer.weights[static_cast<std::size_t>((o * layer.in_channels + i) * ConvLayer::kTaps)];
        const double* gp = g_padded.data() + static_cast<std::size_t>(o) * pplane;
        for (int y = 0; y < rows; ++y) {
          // padded row y + 2 - ky holds g row y + 1 - ky
          const double* r0 = gp + static_cast<std::size_t>(y + 2) * pc;
          const double* r1 = gp + static_cast<std::size_t>(y + 1) * pc;
          const double* r2 = gp + static_cast<std::size_t>(y) * pc;
          double* dst = dst_plane + static_cast<std::size_t>(y) * cols;
          for (int x = 0; x < cols; ++x) {
            dst[x] += w[0] * r0[x + 2] + w[1] * r0[x + 1] + w[2] * r0[x] +
                      w[3] * r1[x + 2] + w[4] * r1[x + 1] + w[5] * r1[x] +
                      w[6] * r2[x + 2] + w[7] * r2[x + 1] + w[8] * r2[x];
          }
        }
      }
    }
    g.swap(g_in);
  }
  return grad;
}

std::vector<double> kernel_transfer_magnitude(const ConvLayer& layer, int rows, int cols) {
  if (layer.in_channels != 1 || layer.out_channels != 1) {
    throw InputError("transfer magnitude is defined for 1 -> 1 layers only");
  }
  std::vector<double> mag(static_cast<std::size_t>(rows) * cols);
  for (int p = 0; p < rows; ++p) {
    for (int q = 0; q < cols; ++q) {
      std::complex<double> h = 0.0;
      for (int ky = 0; ky < 3; ++ky) {
        for (int kx = 0; kx < 3; ++kx) {
          const double phase = 2.0 * std::numbers::pi *
                               (static_cast<double>(p * (ky - 1)) / rows +
                                static_cast<double>(q * (kx - 1)) / cols);
          h += layer.weight(0, 0, ky, kx) * std::polar(1.0, phase);
        }
      }
      mag[static_cast<std::size_t>(p) * cols + q] = std::abs(h);
    }
  }
  return mag;
}

void save_model(const DenoiserModel& model, const std::filesystem::path& path) {
  static_assert(std::endian::native == std::endian::little);
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw InputError("cannot write '" + path.string() + "'");
  }
  auto put_u32 = [&](std::uint32_t v) { out.write(reinterpret_cast<const char*>(&v), 4); };
  auto put_f32 = [&](double v) {
    const float f = static_cast<float>(v);
    out.write(reinterpret_cast<const char*>(&f), 4);
  };
  out.write(kModelMagic.data(), 4);
  put_u32(kModelVersion);
  put_u32(static_cast<std::uint32_t>(model.layers().size()));
  for (const auto& layer : model.layers()) {
    put_u32(static_cast<std::uint32_t>(layer.in_channels));
    put_u32(static_cast<std::uint32_t>(layer.out_channels));
    put_u32(static_cast<std::uint32_t>(layer.activation));
    for (double w : layer.weights) {
      put_f32(w);
    }
    for (double b : layer.biases) {
      put_f32(b);
    }
  }
  if (!out) {
    throw InputError("failed writing '" + path.string() + "'");
  }
}

DenoiserModel load_model(const std::filesystem::path& path) {
  if (!std::filesystem::exists(path)) {
    throw InputError("file not found: '" + path.string() + "'");
  }
  std::ifstream in(path, std::ios::binary);
  const std::vector<char> bytes{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
  std::size_t pos = 0;
  auto need = [&](std::size_t n) {
    if (pos + n > bytes.size()) {
      throw InputError("truncated model checkpoint '" + path.string() + "'");
    }
  };
  auto get_u32 = [&]() {
    need(4);
    std::uint32_t v;
    std::memcpy(&v, bytes.data() + pos, 4);
    pos += 4;
    return v;
  };
  auto get_f32 = [&]() {
    need(4);
    float v;
    std::memcpy(&v, bytes.data() + pos, 4);
    pos += 4;
    return static_cast<double>(v);
  };
  need(4);
  if (!std::equal(kModelMagic.begin(), kModelMagic.end(), bytes.begin())) {
    throw InputError("'" + path.string() + "' is not a model checkpoint");
  }
  pos = 4;
  if (const auto version = get_u32(); version != kModelVersion) {
    throw InputError("unsupported checkpoint version " + std::to_string(version));
  }
  const std::uint32_t count = get_u32();
  if (count == 0 || count > 64) {
    throw InputError("implausible layer count in checkpoint");
  }
  std::vector<ConvLayer> layers;
  for (std::uint32_t l = 0; l < count; ++l) {
    const auto in_ch = get_u32();
    const auto out_ch = get_u32();
    const auto act = get_u32();
    if (in_ch == 0 || out_ch == 0 || in_ch > 4096 || out_ch > 4096 || act > 1) {
      throw InputError("malformed layer header in checkpoint");
    }
    ConvLayer layer(static_cast<int>(in_ch), static_cast<int>(out_ch), static_cast<Activation>(act));
    for (double& w : layer.weights) {
      w = get_f32();
    }
    for (double& b : layer.biases) {
      b = get_f32();
    }
    layers.push_back(std::move(layer));
  }
  if (pos != bytes.size()) {
    throw InputError("trailing bytes in checkpoint '" + path.string() + "'");
  }
  return DenoiserModel(std::move(layers));
}

} // namespace frckit
