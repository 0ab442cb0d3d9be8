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
#include <string>
#include <string_view>
#include <utility>

#include "frckit/imagekit.hpp"

namespace frckit {

enum class CorruptionKind { gaussian, lognormal, impulse, jitter, motion_blur };

std::string_view to_string(CorruptionKind kind);
CorruptionKind parse_corruption_kind(std::string_view name);

/// Meaning of level per kind:
///   gaussian, lognormal  standard deviation of the additive noise
///   impulse              probability in (0,1] that a pixel is replaced
///   jitter               maximum displacement in pixels (integer >= 1)
///   motion_blur          horizontal kernel length in pixels (integer >= 2)
struct CorruptionSpec {
  CorruptionKind kind = CorruptionKind::gaussian;
  double level = 0.4;
  std::uint64_t seed = 0;

  friend bool operator==(const CorruptionSpec&, const CorruptionSpec&) = default;
};

/// "kind=gaussian level=0.4 seed=7"
std::string to_config_line(const CorruptionSpec& spec);
CorruptionSpec parse_corruption_spec(std::string_view line);

/// Throws InputError when level is not valid for the kind.
void validate(const CorruptionSpec& spec);

/// Shape parameter s for which exp(s Z) - 1 has the given standard deviation.
double lognormal_shape_for_std(double sigma);

Image corrupt(const Image& img, const CorruptionSpec& spec);

/// Two independent corruptions of img, using seed_a and seed_b in place of
/// spec.seed.
std::pair<Image, Image> noise_pair(const Image& img, const CorruptionSpec& spec,
                                   std::uint64_t seed_a, std::uint64_t seed_b);

} // namespace frckit
