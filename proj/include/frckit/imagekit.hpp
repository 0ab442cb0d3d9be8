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

namespace frckit {

/// Real-valued grayscale raster stored row-major. Every pixel is finite.
class Image {
public:
  Image() = default;
  /// Zero-filled rows x cols image.
  Image(int rows, int cols);
  Image(int rows, int cols, double fill);
  /// Takes ownership of row-major pixel data; throws InputError on a size
  /// mismatch or a non-finite value.
  Image(int rows, int cols, std::vector<double> pixels);

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  std::size_t size() const { return pixels_.size(); }
  bool empty() const { return pixels_.empty(); }

  double operator()(int r, int c) const { return pixels_[index(r, c)]; }
  double& operator()(int r, int c) { return pixels_[index(r, c)]; }

  std::span<const double> pixels() const { return pixels_; }
  std::span<double> pixels() { return pixels_; }

  bool same_shape(const Image& other) const {
    return rows_ == other.rows_ && cols_ == other.cols_;
  }

  double min() const;
  double max() const;
  double mean() const;

  friend bool operator==(const Image&, const Image&) = default;

private:
  std::size_t index(int r, int c) const {
    return static_cast<std::size_t>(r) * static_cast<std::size_t>(cols_) +
           static_cast<std::size_t>(c);
  }

  int rows_ = 0;
  int cols_ = 0;
  std::vector<double> pixels_;
};

// Elementwise helpers used across the experiments.
Image operator+(const Image& a, const Image& b);
Image operator-(const Image& a, const Image& b);
Image operator*(double s, const Image& a);
Image operator+(const Image& a, double offset);
Image operator-(const Image& a);

enum class WindowKind { none, hann };

struct WindowSpec {
  WindowKind kind = WindowKind::none;
};

struct SyntheticImageSpec {
  int size = 128;
  double spectral_exponent = 1.0;
  std::uint64_t seed = 0;
};

enum class ImageFormat { pgm, fimg };

/// Reads PGM (P2/P5, 8 or 16 bit), PPM (P3/P6, channels averaged) or FIMG.
/// Integer formats are scaled to [0,1] by their maxval.
Image load_image(const std::filesystem::path& path);

/// Format follows the extension: ".pgm" writes 8-bit P5 (values clamped to
/// [0,1]), anything else writes FIMG.
void save_image(const Image& img, const std::filesystem::path& path);
void save_image(const Image& img, const std::filesystem::path& path,
                ImageFormat format, int pgm_bits = 8);

/// Affine map sending min to -0.5 and max to +0.5.
Image normalize_range(const Image& img);

Image apply_window(const Image& img, const WindowSpec& window);

/// Symmetric Hann weights of the given length; both end points are zero.
std::vector<double> hann_1d(int length);

Image center_crop(const Image& img, int size);

/// size x size crop at a uniformly drawn offset.
Image random_crop(const Image& img, int size, std::uint64_t seed);

/// Crop whose top-left corner is (row, col).
Image crop_at(const Image& img, int row, int col, int size);

/// Random-phase image whose amplitude spectrum decays as radius^-exponent,
/// with zero DC, normalized to [-0.5, 0.5].
Image generate_synthetic(const SyntheticImageSpec& spec);

} // namespace frckit
