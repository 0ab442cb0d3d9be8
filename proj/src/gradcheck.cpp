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

#include "frckit/gradcheck.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "frckit/error.hpp"

namespace frckit {

namespace {
constexpr double kAbsoluteFloor = 1e-8;
}

GradientCheck compare_gradients(std::vector<double> analytic, std::vector<double> numeric) {
  if (analytic.size() != numeric.size() || analytic.empty()) {
    throw InputError("gradient check needs two equal, non-empty gradients");
  }
  GradientCheck out;
  out.relative_error.resize(analytic.size());
  for (std::size_t k = 0; k < analytic.size(); ++k) {
    const double denom = std::max({std::abs(analytic[k]), std::abs(numeric[k]), kAbsoluteFloor});
    out.relative_error[k] = std::abs(analytic[k] - numeric[k]) / denom;
    if (out.relative_error[k] > out.max_relative_error) {
      out.max_relative_error = out.relative_error[k];
      out.worst = k;
    }
  }
  out.analytic = std::move(analytic);
  out.numeric = std::move(numeric);
  return out;
}

GradientCheck check_frc_gradient(const Image& x, const Image& y, const RingPartition& rings,
                                 double h, const FrcLossOptions& options) {
  if (!(h > 0.0)) {
    throw InputError("finite-difference step must be positive");
  }
  const Image grad = frc_loss_grad(x, y, rings, options);
  std::vector<double> numeric(x.pixels().size());
  Image probe = x;
  auto p = probe.pixels();
  for (std::size_t k = 0; k < p.size(); ++k) {
    const double saved = p[k];
    p[k] = saved + h;
    const double up = frc_loss(probe, y, rings, options).loss;
    p[k] = saved - h;
    const double down = frc_loss(probe, y, rings, options).loss;
    p[k] = saved;
    numeric[k] = (up - down) / (2.0 * h);
  }
  const auto g = grad.pixels();
  return compare_gradients(std::vector<double>(g.begin(), g.end()), std::move(numeric));
}

std::pair<Image, Image> random_pair(int size, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Image x(size, size);
  Image y(size, size);
  for (double& v : x.pixels()) {
    v = u(rng);
  }
  for (double& v : y.pixels()) {
    v = u(rng);
  }
  return {x, y};
}

} // namespace frckit
