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
#include <span>
#include <vector>

#include "frckit/frc.hpp"

namespace frckit {

/// Element-wise comparison of an analytic gradient against a numeric one.
struct GradientCheck {
  std::vector<double> analytic;
  std::vector<double> numeric;
  /// |a - n| / max(|a|, |n|, 1e-8)
  std::vector<double> relative_error;
  double max_relative_error = 0.0;
  std::size_t worst = 0;
};

GradientCheck compare_gradients(std::vector<double> analytic, std::vector<double> numeric);

/// Central differences of frc_loss in every pixel of x.
GradientCheck check_frc_gradient(const Image& x, const Image& y, const RingPartition& rings,
                                 double h, const FrcLossOptions& options = {});

/// Uniform [0,1) pair of size x size images drawn from the seed.
std::pair<Image, Image> random_pair(int size, std::uint64_t seed);

} // namespace frckit
