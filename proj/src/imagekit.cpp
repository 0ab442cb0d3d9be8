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

#include "frckit/imagekit.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <random>
#include <string>

#include "frckit/error.hpp"
#include "frckit/spectral.hpp"

namespace frckit {

namespace {

void check_dims(int rows, int cols) {
  if (rows <= 0 || cols <= 0) {
    throw InputError("image dimensions must be positive, got " + std::to_string(rows) + "x" +
                     std::to_string(cols));
  }
}

template <typename Op>
Image zip(const Image& a, const Image& b, Op op) {
  if (!a.same_shape(b)) {
    throw InputError("image size mismatch");
  }
  Image out(a.rows(), a.cols());
  auto pa = a.pixels();
  auto pb = b.pixels();
  auto po = out.pixels();
  for (std::size_t i = 0; i < po.size(); ++i) {
    po[i] = op(pa[i], pb[i]);
  }
  return out;
}

template <typename Op>
Image map(const Image& a, Op op) {
  Image out(a.rows(), a.cols());
  auto pa = a.pixels();
  auto po = out.pixels();
  for (std::size_t i = 0; i < po.size(); ++i) {
    po[i] = op(pa[i]);
  }
  return out;
}

} // namespace

Image::Image(int rows, int cols) : Image(rows, cols, 0.0) {}

Image::Image(int rows, int cols, double fill) : rows_(rows), cols_(cols) {
  check_dims(rows, cols);
  pixels_.assign(static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols), fill);
}

Image::Image(int rows, int cols, std::vector<double> pixels)
    : rows_(rows), cols_(cols), pixels_(std::move(pixels)) {
  check_dims(rows, cols);
  if (pixels_.size() != static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols)) {
    throw InputError("pixel count does not match " + std::to_string(rows) + "x" +
                     std::to_string(cols));
  }
  for (double v : pixels_) {
    if (!std::isfinite(v)) {
      throw InputError("image contains a non-finite pixel value");
    }
  }
}

double Image::min() const { return *std::min_element(pixels_.begin(), pixels_.end()); }
double Image::max() const { return *std::max_element(pixels_.begin(), pixels_.end()); }
double Image::mean() const {
  return std::accumulate(pixels_.begin(), pixels_.end(), 0.0) /
         static_cast<double>(pixels_.size());
}

Image operator+(const Image& a, const Image& b) {
  return zip(a, b, [](double x, double y) { return x + y; });
}
Image operator-(const Image& a, const Image& b) {
  return zip(a, b, [](double x, double y) { return x - y; });
}
Image operator*(double s, const Image& a) {
  return map(a, [s](double x) { return s * x; });
}
Image operator+(const Image& a, double offset) {
  return map(a, [offset](double x) { return x + offset; });
}
Image operator-(const Image& a) {
  return map(a, [](double x) { return -x; });
}

Image normalize_range(const Image& img) {
  const double lo = img.min();
  const double hi = img.max();
  if (!(hi > lo)) {
    throw InputError("degenerate dynamic range");
  }
  const double range = hi - lo;
  return map(img, [lo, range](double v) { return (v - lo) / range - 0.5; });
}

std::vector<double> hann_1d(int length) {
  std::vector<double> w(static_cast<std::size_t>(length), 1.0);
  if (length < 2) {
    return w;
  }
  const double denom = static_cast<double>(length - 1);
  for (int n = 0; n < length; ++n) {
    w[static_cast<std::size_t>(n)] =
        0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * static_cast<double>(n) / denom);
  }
  // exact zeros at the ends and 1 at the odd-length peak
  w.front() = 0.0;
  w.back() = 0.0;
  if (length % 2 == 1) {
    w[static_cast<std::size_t>(length / 2)] = 1.0;
  }
  return w;
}

Image apply_window(const Image& img, const WindowSpec& window) {
  if (window.kind == WindowKind::none) {
    return img;
  }
  const auto wr = hann_1d(img.rows());
  const auto wc = hann_1d(img.cols());
  Image out(img.rows(), img.cols());
  for (int r = 0; r < img.rows(); ++r) {
    for (int c = 0; c < img.cols(); ++c) {
      out(r, c) = img(r, c) * wr[static_cast<std::size_t>(r)] * wc[static_cast<std::size_t>(c)];
    }
  }
  return out;
}

Image crop_at(const Image& img, int row, int col, int size) {
  if (size <= 0 || row < 0 || col < 0 || row + size > img.rows() || col + size > img.cols()) {
    throw InputError("crop of size " + std::to_string(size) + " exceeds image dimensions " +
                     std::to_string(img.rows()) + "x" + std::to_string(img.cols()));
  }
  Image out(size, size);
  for (int r = 0; r < size; ++r) {
    for (int c = 0; c < size; ++c) {
      out(r, c) = img(row + r, col + c);
    }
  }
  return out;
}

Image center_crop(const Image& img, int size) {
  if (size <= 0 || size > std::min(img.rows(), img.cols())) {
    throw InputError("crop of size " + std::to_string(size) + " exceeds image dimensions " +
                     std::to_string(img.rows()) + "x" + std::to_string(img.cols()));
  }
  return crop_at(img, (img.rows() - size) / 2, (img.cols() - size) / 2, size);
}

Image random_crop(const Image& img, int size, std::uint64_t seed) {
  if (size <= 0 || size > std::min(img.rows(), img.cols())) {
    throw InputError("crop of size " + std::to_string(size) + " exceeds image dimensions " +
                     std::to_string(img.rows()) + "x" + std::to_string(img.cols()));
  }
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> rows(0, img.rows() - size);
  std::uniform_int_distribution<int> cols(0, img.cols() - size);
  const int r = rows(rng);
  const int c = cols(rng);
  return crop_at(img, r, c, size);
}

Image generate_synthetic(const SyntheticImageSpec& spec) {
  if (spec.size < 8) {
    throw InputError("synthetic image size must be at least 8");
  }
  if (!(spec.spectral_exponent >= 0.0)) {
    throw InputError("spectral exponent must be non-negative");
  }
  const int n = spec.size;
  Spectrum f(n, n);
  std::mt19937_64 rng(spec.seed);
  std::uniform_real_distribution<double> phase(0.0, 2.0 * std::numbers::pi);

  // Draw a phase for one coefficient of each conjugate pair and mirror it;
  // self-conjugate coefficients get a random sign.
  for (int p = 0; p < n; ++p) {
    for (int q = 0; q < n; ++q) {
      const int pc = (n - p) % n;
      const int qc = (n - q) % n;
      const bool self_conjugate = (pc == p && qc == q);
      if (!self_conjugate && (p > pc || (p == pc && q > qc))) {
        continue;
      }
      const double fp = centered_frequency(p, n);
      const double fq = centered_frequency(q, n);
      const double radius = std::hypot(fp, fq);
      if (radius == 0.0) {
        continue;
      }
      const double amplitude = std::pow(radius, -spec.spectral_exponent);
      const double theta = phase(rng);
      if (self_conjugate) {
        f(p, q) = Complex(std::cos(theta) >= 0.0 ? amplitude : -amplitude, 0.0);
      } else {
        f(p, q) = std::polar(amplitude, theta);
        f(pc, qc) = std::conj(f(p, q));
      }
    }
  }
  return normalize_range(idft2_real(f));
}

} // namespace frckit
