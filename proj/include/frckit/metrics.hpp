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

#include <limits>
#include <span>

#include "frckit/imagekit.hpp"

namespace frckit {

enum class SsimWindow { uniform, gaussian };

struct SsimParams {
  /// Odd side length of the sliding window.
  int window_size = 7;
  double k1 = 0.01;
  double k2 = 0.03;
  double dynamic_range = 1.0;
  SsimWindow window = SsimWindow::uniform;
  /// Only used by the gaussian window.
  double gaussian_sigma = 1.5;

  /// 11x11 Gaussian-weighted variant.
  static SsimParams gaussian_11() {
    SsimParams p;
    p.window_size = 11;
    p.window = SsimWindow::gaussian;
    return p;
  }
};

struct MetricReport {
  double mse = 0.0;
  double psnr = 0.0; ///< +infinity when mse == 0
  double ssim = 0.0;
  double frc_scalar = 0.0;
};

inline constexpr double kPsnrInfinity = std::numeric_limits<double>::infinity();

double mse(const Image& x, const Image& y);

/// Mean absolute difference.
double mae(const Image& x, const Image& y);

/// 10 log10(peak^2 / mse); kPsnrInfinity for identical images.
double psnr(const Image& x, const Image& y, double peak);

/// Mean local SSIM over every window position that fits inside the image.
double ssim(const Image& x, const Image& y, const SsimParams& params = {});

/// Sample Pearson correlation coefficient.
double pearson(std::span<const double> a, std::span<const double> b);

/// All four metrics for one pair. frc_scalar averages rings 1..max of the
/// (optionally Hann-windowed) FRC curve.
MetricReport metric_report(const Image& x, const Image& y, double peak = 1.0,
                           const SsimParams& params = {}, bool window = true);

} // namespace frckit
