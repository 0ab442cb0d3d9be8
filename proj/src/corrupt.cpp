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

#include "frckit/corrupt.hpp"

#include <charconv>
#include <cmath>
#include <random>
#include <sstream>
#include <string>

#include "frckit/error.hpp"

namespace frckit {

namespace {

constexpr std::pair<CorruptionKind, std::string_view> kKindNames[] = {
    {CorruptionKind::gaussian, "gaussian"},
    {CorruptionKind::lognormal, "lognormal"},
    {CorruptionKind::impulse, "impulse"},
    {CorruptionKind::jitter, "jitter"},
    {CorruptionKind::motion_blur, "motion_blur"},
};

bool is_integral(double v) { return std::abs(v - std::round(v)) < 1e-9; }

int wrap(int i, int n) { return ((i % n) + n) % n; }

Image add_gaussian(const Image& img, double sigma, std::mt19937_64& rng) {
  std::normal_distribution<double> noise(0.0, sigma);
  Image out = img;
  for (double& v : out.pixels()) {
    v += noise(rng);
  }
  return out;
}

Image add_lognormal(const Image& img, double sigma, std::mt19937_64& rng) {
  const double s = lognormal_shape_for_std(sigma);
  std::normal_distribution<double> z(0.0, 1.0);
  Image out = img;
  for (double& v : out.pixels()) {
    // exp(sZ) has median 1, so exp(sZ) - 1 is zero-median
    v += std::expm1(s * z(rng));
  }
  return out;
}

Image add_impulse(const Image& img, double probability, std::mt19937_64& rng) {
  std::bernoulli_distribution hit(probability);
  std::bernoulli_distribution high(0.5);
  Image out = img;
  for (double& v : out.pixels()) {
    if (hit(rng)) {
      v = high(rng) ? 0.5 : -0.5;
    }
  }
  return out;
}

/// Local shuffle: visiting pixels in raster order, each is swapped with a
/// partner at a uniform offset in [-reach, reach]^2 (periodic). The result is
/// a permutation of the input pixels.
Image jitter(const Image& img, int reach, std::mt19937_64& rng) {
  std::uniform_int_distribution<int> offset(-reach, reach);
  Image out = img;
  for (int r = 0; r < img.rows(); ++r) {
    for (int c = 0; c < img.cols(); ++c) {
      const int dr = offset(rng);
      const int dc = offset(rng);
      std::swap(out(r, c), out(wrap(r + dr, img.rows()), wrap(c + dc, img.cols())));
    }
  }
  return out;
}

Image motion_blur(const Image& img, int length) {
  const int start = -(length - 1) / 2;
  const double weight = 1.0 / length;
  Image out(img.rows(), img.cols());
  for (int r = 0; r < img.rows(); ++r) {
    for (int c = 0; c < img.cols(); ++c) {
      double sum = 0.0;
      for (int k = 0; k < length; ++k) {
        sum += img(r, wrap(c + start + k, img.cols()));
      }
      out(r, c) = sum * weight;
    }
  }
  return out;
}

} // namespace

std::string_view to_string(CorruptionKind kind) {
  for (const auto& [k, name] : kKindNames) {
    if (k == kind) {
      return name;
    }
  }
  return "unknown";
}

CorruptionKind parse_corruption_kind(std::string_view name) {
  for (const auto& [k, n] : kKindNames) {
    if (n == name) {
      return k;
    }
  }
  throw InputError("unknown corruption kind '" + std::string(name) + "'");
}

std::string to_config_line(const CorruptionSpec& spec) {
  std::ostringstream out;
  out.precision(17);
  out << "kind=" << to_string(spec.kind) << " level=" << spec.level << " seed=" << spec.seed;
  return out.str();
}

CorruptionSpec parse_corruption_spec(std::string_view line) {
  CorruptionSpec spec;
  bool have_kind = false;
  bool have_level = false;
  std::istringstream in{std::string(line)};
  std::string token;
  while (in >> token) {
    const auto eq = token.find('=');
    if (eq == std::string::npos || eq == 0) {
      throw InputError("expected key=value, got '" + token + "'");
    }
    const std::string key = token.substr(0, eq);
    const std::string value = token.substr(eq + 1);
    if (key == "kind") {
      spec.kind = parse_corruption_kind(value);
      have_kind = true;
    } else if (key == "level") {
      try {
        std::size_t used = 0;
        spec.level = std::stod(value, &used);
        if (used != value.size()) {
          throw std::invalid_argument(value);
        }
      } catch (const std::exception&) {
        throw InputError("invalid level '" + value + "'");
      }
      have_level = true;
    } else if (key == "seed") {
      const auto* end = value.data() + value.size();
      const auto [ptr, ec] = std::from_chars(value.data(), end, spec.seed);
      if (ec != std::errc() || ptr != end) {
        throw InputError("invalid seed '" + value + "'");
      }
    } else {
      throw InputError("unknown corruption key '" + key + "'");
    }
  }
  if (!have_kind || !have_level) {
    throw InputError("corruption spec needs both kind= and level=");
  }
  validate(spec);
  return spec;
}

void validate(const CorruptionSpec& spec) {
  const double level = spec.level;
  const auto fail = [&](const std::string& why) {
    throw InputError("invalid level " + std::to_string(level) + " for " +
                     std::string(to_string(spec.kind)) + ": " + why);
  };
  if (!std::isfinite(level) || !(level > 0.0)) {
    fail("must be positive");
  }
  switch (spec.kind) {
  case CorruptionKind::gaussian:
  case CorruptionKind::lognormal:
    break;
  case CorruptionKind::impulse:
    if (level > 1.0) {
      fail("probability must be in (0,1]");
    }
    break;
  case CorruptionKind::jitter:
    if (!is_integral(level) || level < 1.0) {
      fail("displacement must be an integer >= 1");
    }
    break;
  case CorruptionKind::motion_blur:
    if (!is_integral(level) || level < 2.0) {
      fail("kernel length must be an integer >= 2");
    }
    break;
  }
}

double lognormal_shape_for_std(double sigma) {
  // Var(exp(sZ)) = (e^{s^2} - 1) e^{s^2}; solve the quadratic in e^{s^2}.
  const double u = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * sigma * sigma));
  return std::sqrt(std::log(u));
}

Image corrupt(const Image& img, const CorruptionSpec& spec) {
  validate(spec);
  std::mt19937_64 rng(spec.seed);
  switch (spec.kind) {
  case CorruptionKind::gaussian:
    return add_gaussian(img, spec.level, rng);
  case CorruptionKind::lognormal:
    return add_lognormal(img, spec.level, rng);
  case CorruptionKind::impulse:
    return add_impulse(img, spec.level, rng);
  case CorruptionKind::jitter:
    return jitter(img, static_cast<int>(std::lround(spec.level)), rng);
  case CorruptionKind::motion_blur:
    return motion_blur(img, static_cast<int>(std::lround(spec.level)));
  }
  throw InternalError("unhandled corruption kind");
}

std::pair<Image, Image> noise_pair(const Image& img, const CorruptionSpec& spec,
                                   std::uint64_t seed_a, std::uint64_t seed_b) {
  if (seed_a == seed_b) {
    throw InputError("noise_pair needs two different seeds");
  }
  CorruptionSpec a = spec;
  CorruptionSpec b = spec;
  a.seed = seed_a;
  b.seed = seed_b;
  return {corrupt(img, a), corrupt(img, b)};
}

} // namespace frckit
