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
#include <fstream>

#include "frckit/error.hpp"
#include "frckit/model.hpp"
#include "frckit/spectral.hpp"
#include "test_util.hpp"

using namespace frckit;

namespace {

int wrap(int i, int n) { return ((i % n) + n) % n; }

/// Direct periodic 3x3 correlation of a single-channel image.
Image direct_conv(const ConvLayer& layer, const Image& in) {
  Image out(in.rows(), in.cols());
  for (int y = 0; y < in.rows(); ++y) {
    for (int x = 0; x < in.cols(); ++x) {
      double acc = layer.biases[0];
      for (int ky = 0; ky < 3; ++ky) {
        for (int kx = 0; kx < 3; ++kx) {
          acc += layer.weight(0, 0, ky, kx) *
                 in(wrap(y + ky - 1, in.rows()), wrap(x + kx - 1, in.cols()));
        }
      }
      out(y, x) = layer.activation == Activation::relu ? std::max(0.0, acc) : acc;
    }
  }
  return out;
}

double half_sq_loss(const DenoiserModel& m, const Image& in, const Image& target) {
  const Image out = forward(m, in);
  double s = 0.0;
  for (std::size_t k = 0; k < out.pixels().size(); ++k) {
    const double d = out.pixels()[k] - target.pixels()[k];
    s += 0.5 * d * d;
  }
  return s;
}

Image half_sq_upstream(const Image& out, const Image& target) {
  Image g(out.rows(), out.cols());
  for (std::size_t k = 0; k < out.pixels().size(); ++k) {
    g.pixels()[k] = out.pixels()[k] - target.pixels()[k];
  }
  return g;
}

DenoiserModel linear_two_layer(std::uint64_t seed) {
  DenoiserModel m = DenoiserModel::make_default(seed, 3);
  for (auto& l : m.layers()) {
    l.activation = Activation::identity;
  }
  return m;
}

} // namespace

TEST(Model, IdentityIsExact) {
  const Image x = test::gaussian_image(9, 13, 1);
  EXPECT_EQ(forward(DenoiserModel::identity(), x), x);
  EXPECT_EQ(DenoiserModel::identity().parameter_count(), 10u);
}

TEST(Model, DefaultArchitecture) {
  const DenoiserModel m = DenoiserModel::make_default(3, 16);
  ASSERT_EQ(m.layers().size(), 3u);
  EXPECT_EQ(m.layers()[0].out_channels, 16);
  EXPECT_EQ(m.layers()[1].activation, Activation::relu);
  EXPECT_EQ(m.layers()[2].activation, Activation::identity);
  EXPECT_EQ(m.parameter_count(), 9u * 16 + 16 + 9u * 256 + 16 + 9u * 16 + 1);
  for (const auto& l : m.layers()) {
    const double bound = 1.0 / std::sqrt(9.0 * l.in_channels);
    for (double w : l.weights) {
      EXPECT_LE(std::abs(w), bound);
    }
    for (double b : l.biases) {
      EXPECT_EQ(b, 0.0);
    }
  }
  EXPECT_EQ(DenoiserModel::make_default(3, 16), m);
  EXPECT_NE(DenoiserModel::make_default(4, 16), m);
  EXPECT_THROW(DenoiserModel::make_default(3, 0), InputError);
}

TEST(Model, ZeroWeightsGiveZero) {
  DenoiserModel m = DenoiserModel::make_default(1, 4);
  for (auto& l : m.layers()) {
    std::fill(l.weights.begin(), l.weights.end(), 0.0);
  }
  for (double v : forward(m, test::gaussian_image(8, 8, 2)).pixels()) {
    EXPECT_EQ(v, 0.0);
  }
}

TEST(Model, SingleLayerMatchesDirectConvolution) {
  ConvLayer layer(1, 1, Activation::identity);
  const Image w = test::gaussian_image(3, 3, 5);
  for (int ky = 0; ky < 3; ++ky) {
    for (int kx = 0; kx < 3; ++kx) {
      layer.weight(0, 0, ky, kx) = w(ky, kx);
    }
  }
  layer.biases[0] = 0.25;
  const Image x = test::gaussian_image(7, 10, 6);
  const Image got = forward(DenoiserModel({layer}), x);
  const Image want = direct_conv(layer, x);
  for (std::size_t k = 0; k < got.pixels().size(); ++k) {
    EXPECT_NEAR(got.pixels()[k], want.pixels()[k], 1e-13);
  }
  layer.activation = Activation::relu;
  const Image got_relu = forward(DenoiserModel({layer}), x);
  const Image want_relu = direct_conv(layer, x);
  for (std::size_t k = 0; k < got.pixels().size(); ++k) {
    EXPECT_NEAR(got_relu.pixels()[k], want_relu.pixels()[k], 1e-13);
  }
}

TEST(Model, LinearWithoutActivationsAndBiases) {
  const DenoiserModel m = linear_two_layer(8);
  const Image x = test::gaussian_image(8, 8, 1);
  const Image y = test::gaussian_image(8, 8, 2);
  const Image lhs = forward(m, 2.0 * x + (-3.0) * y);
  const Image rhs = 2.0 * forward(m, x) + (-3.0) * forward(m, y);
  for (std::size_t k = 0; k < lhs.pixels().size(); ++k) {
    EXPECT_NEAR(lhs.pixels()[k], rhs.pixels()[k], 1e-12);
  }
}

TEST(Model, TransferMagnitudeMatchesDft) {
  ConvLayer layer(1, 1, Activation::identity);
  const Image w = test::gaussian_image(3, 3, 7);
  for (int ky = 0; ky < 3; ++ky) {
    for (int kx = 0; kx < 3; ++kx) {
      layer.weight(0, 0, ky, kx) = w(ky, kx);
    }
  }
  Image delta(6, 8);
  delta(0, 0) = 1.0;
  const Spectrum h = dft2(forward(DenoiserModel({layer}), delta));
  const auto mag = kernel_transfer_magnitude(layer, 6, 8);
  ASSERT_EQ(mag.size(), 48u);
  for (std::size_t k = 0; k < mag.size(); ++k) {
    EXPECT_NEAR(mag[k], std::abs(h.coeffs()[k]), 1e-12);
  }
  EXPECT_THROW(kernel_transfer_magnitude(ConvLayer(1, 2, Activation::identity), 6, 8), InputError);
}

TEST(Model, BackpropMatchesFiniteDifferences) {
  const Image x = test::gaussian_image(6, 7, 3);
  const Image t = test::gaussian_image(6, 7, 4);
  for (const bool relu : {false, true}) {
    DenoiserModel m = relu ? DenoiserModel::make_default(5, 3) : linear_two_layer(5);
    for (auto& l : m.layers()) {
      for (std::size_t k = 0; k < l.biases.size(); ++k) {
        l.biases[k] = 0.05 * static_cast<double>(k + 1);
      }
    }
    ForwardCache cache;
    const Image out = forward(m, x, cache);
    const ModelGradient g = backward(m, cache, half_sq_upstream(out, t));
    const double h = 1e-6;
    int checked = 0;
    int bad = 0;
    for (std::size_t l = 0; l < m.layers().size(); ++l) {
      for (int which = 0; which < 2; ++which) {
        auto& params = which == 0 ? m.layers()[l].weights : m.layers()[l].biases;
        const auto& grads = which == 0 ? g[l].weights : g[l].biases;
        for (std::size_t k = 0; k < params.size(); ++k) {
          const double keep = params[k];
          params[k] = keep + h;
          const double up = half_sq_loss(m, x, t);
          params[k] = keep - h;
          const double down = half_sq_loss(m, x, t);
          params[k] = keep;
          const double fd = (up - down) / (2 * h);
          const double rel = std::abs(fd - grads[k]) / std::max({std::abs(fd), std::abs(grads[k]), 1e-6});
          ++checked;
          bad += rel > 1e-5;
        }
      }
    }
    EXPECT_EQ(bad, 0) << "relu=" << relu << " of " << checked;
  }
}

TEST(Model, ZeroUpstreamGivesZeroGradient) {
  const DenoiserModel m = DenoiserModel::make_default(2, 4);
  ForwardCache cache;
  forward(m, test::gaussian_image(8, 8, 1), cache);
  const ModelGradient g = backward(m, cache, Image(8, 8));
  for (const auto& l : g) {
    for (double v : l.weights) {
      EXPECT_EQ(v, 0.0);
    }
    for (double v : l.biases) {
      EXPECT_EQ(v, 0.0);
    }
  }
  EXPECT_THROW(backward(m, cache, Image(8, 9)), InputError);
}

TEST(Model, AccumulateScales) {
  const DenoiserModel m = DenoiserModel::identity();
  ModelGradient a = zero_gradient(m);
  ModelGradient b = zero_gradient(m);
  b[0].weights[4] = 2.0;
  b[0].biases[0] = -1.0;
  accumulate(a, b, 0.5);
  accumulate(a, b, 0.5);
  EXPECT_EQ(a[0].weights[4], 2.0);
  EXPECT_EQ(a[0].biases[0], -1.0);
}

TEST(Model, BadChainsRejected) {
  EXPECT_THROW(DenoiserModel(std::vector<ConvLayer>{}), InputError);
  EXPECT_THROW(DenoiserModel({ConvLayer(1, 2, Activation::relu)}), InputError);
  EXPECT_THROW(DenoiserModel({ConvLayer(1, 2, Activation::relu), ConvLayer(3, 1, Activation::identity)}),
               InputError);
}

TEST(Checkpoint, RoundTripFloatValues) {
  const auto dir = test::scratch_dir("model");
  DenoiserModel m = DenoiserModel::make_default(9, 4);
  for (auto& l : m.layers()) {
    for (double& w : l.weights) {
      w = static_cast<float>(w);
    }
  }
  m.layers()[1].biases[2] = 0.125;
  save_model(m, dir / "m.fdnm");
  EXPECT_EQ(load_model(dir / "m.fdnm"), m);

  std::ifstream in(dir / "m.fdnm", std::ios::binary);
  char magic[4];
  in.read(magic, 4);
  EXPECT_EQ(std::string(magic, 4), "FDNM");
}

TEST(Checkpoint, CorruptFilesRejected) {
  const auto dir = test::scratch_dir("model-bad");
  EXPECT_THROW(load_model(dir / "missing.fdnm"), InputError);
  {
    std::ofstream(dir / "junk.fdnm") << "not a model";
  }
  EXPECT_THROW(load_model(dir / "junk.fdnm"), InputError);
  save_model(DenoiserModel::identity(), dir / "ok.fdnm");
  std::filesystem::resize_file(dir / "ok.fdnm", std::filesystem::file_size(dir / "ok.fdnm") - 2);
  EXPECT_THROW(load_model(dir / "ok.fdnm"), InputError);
  save_model(DenoiserModel::identity(), dir / "long.fdnm");
  {
    std::ofstream(dir / "long.fdnm", std::ios::app | std::ios::binary) << "xx";
  }
  EXPECT_THROW(load_model(dir / "long.fdnm"), InputError);
}
