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

#include "frckit/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "frckit/error.hpp"
#include "frckit/frc.hpp"

namespace frckit {

namespace {

void require_same_shape(const Image& x, const Image& y) {
  if (!x.same_shape(y)) {
    throw InputError("image size mismatch: " + std::to_string(x.rows()) + "x" +
                     std::to_string(x.cols()) + " vs " + std::to_string(y.rows()) + "x" +
                     std::to_string(y.cols()));
  }
}

std::vector<double> window_weights(const SsimParams& params) {
  const int w = params.window_size;
  std::vector<double> weights(static_cast<std::size_t>(w * w), 1.0);
  if (params.window == SsimWindow::gaussian) {
    const double c = (w - 1) / 2.0;
    for (int i = 0; i < w; ++i) {
      for (int j = 0; j < w; ++j) {
        const double d2 = (i - c) * (i - c) + (j - c) * (j - c);
        weights[static_cast<std::size_t>(i * w + j)] =
            std::exp(-d2 / (2.0 * params.gaussian_sigma * params.gaussian_sigma));
      }
    }
  }
  double sum = 0.0;
  for (double v : weights) {
    sum += v;
  }
  for (double& v : weights) {
    v /= sum;
  }
  return weights;
}

} // namespace

double mse(const Image& x, const Image& y) {
  require_same_shape(x, y);
  const auto a = x.pixels();
  const auto b = y.pixels();
  double sum = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    sum += d * d;
  }
  return sum / static_cast<double>(a.size());
}

double mae(const Image& x, const Image& y) {
  require_same_shape(x, y);
  const auto a = x.pixels();
  const auto b = y.pixels();
  double sum = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    sum += std::abs(a[i] - b[i]);
  }
  return sum / static_cast<double>(a.size());
}

double psnr(const Image& x, const Image& y, double peak) {
  if (!(peak > 0.0)) {
    throw InputError("PSNR peak must be positive");
  }
  const double err = mse(x, y);
  if (err == 0.0) {
    return kPsnrInfinity;
  }
  return 10.0 * std::log10(peak * peak / err);
}

double ssim(const Image& x, const Image& y, const SsimParams& params) {
  require_same_shape(x, y);
  const int w = params.window_size;
  if (w <= 0 || w % 2 == 0) {
    throw InputError("SSIM window size must be odd and positive");
  }
  if (w > x.rows() || w > x.cols()) {
    throw InputError("SSIM window " + std::to_string(w) + " too large for " +
                     std::to_string(x.rows()) + "x" + std::to_string(x.cols()) + " image");
  }
  if (!(params.dynamic_range > 0.0)) {
    throw InputError("SSIM dynamic range must be positive");
  }
  const double c1 = (params.k1 * params.dynamic_range) * (params.k1 * params.dynamic_range);
  const double c2 = (params.k2 * params.dynamic_range) * (params.k2 * params.dynamic_range);
  const auto weights = window_weights(params);

  double total = 0.0;
  long windows = 0;
  for (int r0 = 0; r0 + w <= x.rows(); ++r0) {
    for (int c0 = 0; c0 + w <= x.cols(); ++c0) {
      double mx = 0.0, my = 0.0, sxx = 0.0, syy = 0.0, sxy = 0.0;
      for (int i = 0; i < w; ++i) {
        for (int j = 0; j < w; ++j) {
          const double k = weights[static_cast<std::size_t>(i * w + j)];
          const double a = x(r0 + i, c0 + j);
          const double b = y(r0 + i, c0 + j);
          mx += k * a;
          my += k * b;
          sxx += k * a * a;
          syy += k * b * b;
          sxy += k * a * b;
        }
      }
      const double vx = sxx - mx * mx;
      const double vy = syy - my * my;
      const double cov = sxy - mx * my;
      total += ((2.0 * mx * my + c1) * (2.0 * cov + c2)) /
               ((mx * mx + my * my + c1) * (vx + vy + c2));
      ++windows;
    }
  }
  return total / static_cast<double>(windows);
}

double pearson(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) {
    throw InputError("pearson: length mismatch (" + std::to_string(a.size()) + " vs " +
                     std::to_string(b.size()) + ")");
  }
  if (a.size() < 3) {
    throw InputError("pearson: need at least 3 samples");
  }
  const double n = static_cast<double>(a.size());
  double ma = 0.0, mb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    ma += a[i];
    mb += b[i];
  }
  ma /= n;
  mb /= n;
  double saa = 0.0, sbb = 0.0, sab = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    saa += (a[i] - ma) * (a[i] - ma);
    sbb += (b[i] - mb) * (b[i] - mb);
    sab += (a[i] - ma) * (b[i] - mb);
  }
  if (saa == 0.0 || sbb == 0.0) {
    throw InputError("pearson: constant input");
  }
  return std::clamp(sab / std::sqrt(saa * sbb), -1.0, 1.0);
}

MetricReport metric_report(const Image& x, const Image& y, double peak,
                           const SsimParams& params, bool window) {
  MetricReport report;
  report.mse = mse(x, y);
  report.psnr = psnr(x, y, peak);
  report.ssim = ssim(x, y, params);
  const WindowSpec spec{window ? WindowKind::hann : WindowKind::none};
  const RingPartition rings(x.rows(), x.cols(), 1);
  report.frc_scalar =
      frc_scalar(frc(apply_window(x, spec), apply_window(y, spec), rings, FrcOptions{1}));
  return report;
}

} // namespace frckit
