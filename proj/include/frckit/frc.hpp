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

#include <filesystem>
#include <vector>

#include "frckit/imagekit.hpp"
#include "frckit/spectral.hpp"

namespace frckit {

struct FrcCurve {
  std::vector<int> radii;
  std::vector<double> values;
  std::vector<int> ring_counts;

  std::size_t size() const { return values.size(); }
  bool empty() const { return values.empty(); }
};

/// What to do with a ring where either spectrum carries no power.
enum class EmptyRingPolicy {
  error, ///< throw InputError naming the ring
  zero,  ///< report the ring as uncorrelated (value 0)
};

struct FrcOptions {
  /// First ring evaluated; 1 skips the DC term.
  int first_ring = 0;
  EmptyRingPolicy empty_ring = EmptyRingPolicy::error;
};

/// Per-ring Re(sum U V*) / sqrt(sum |U|^2 sum |V|^2) over rings
/// first_ring..max_ring.
FrcCurve frc(const Image& x, const Image& y, const RingPartition& rings,
             const FrcOptions& options = {});
FrcCurve frc(const Spectrum& u, const Spectrum& v, const RingPartition& rings,
             const FrcOptions& options = {});

/// Normalized area under the curve: the mean of its values.
double frc_scalar(const FrcCurve& curve);

/// Ring-wise mean of several curves over the same rings.
FrcCurve average_curves(const std::vector<FrcCurve>& curves);

struct FrcLossOptions {
  /// Divide the ring sum by the number of rings.
  bool normalized = true;
  bool include_dc = false;
  EmptyRingPolicy empty_ring = EmptyRingPolicy::error;
};

struct FrcLossValue {
  double loss = 0.0;
  FrcCurve per_ring;
  bool normalized = true;
};

/// 1 - sum_r FRC(x, y; r), or 1 - mean_r FRC when normalized.
FrcLossValue frc_loss(const Image& x, const Image& y, const RingPartition& rings,
                      const FrcLossOptions& options = {});

/// Loss value together with its gradient with respect to the pixels of x.
struct FrcLossAndGradient {
  FrcLossValue value;
  Image gradient;
};

/// dL/dx for fixed y. All rings are combined into a single inverse
/// transform, so the cost is two forward and one inverse FFT.
FrcLossAndGradient frc_loss_and_grad(const Image& x, const Image& y,
                                     const RingPartition& rings,
                                     const FrcLossOptions& options = {});
Image frc_loss_grad(const Image& x, const Image& y, const RingPartition& rings,
                    const FrcLossOptions& options = {});

/// Predicted FRC between an image and a copy with white noise of standard
/// deviation sigma: 1/sqrt(1 + NM sigma^2 / <|F|^2>), or its first-order
/// expansion 1 - NM sigma^2 / (2 <|F|^2>) when taylor is set.
FrcCurve predict_frc_noisy(const PowerCurve& power, double sigma, int rows, int cols,
                           bool taylor = false);

enum class HighNoiseForm {
  /// sqrt(sum_S |F|^2 / (n_r NM sigma^2)): leading term of the noisy-copy
  /// prediction as NM sigma^2 / <|F|^2> grows.
  asymptotic,
  /// sum_S |F|^2 / (n_r NM sigma^2), without the square root.
  unrooted,
};

struct HighNoisePrediction {
  FrcCurve curve;
  /// Set when NM sigma^2 < 10 * max ring power, i.e. outside the regime
  /// where the approximation is meant to hold.
  bool outside_regime = false;
};

HighNoisePrediction predict_frc_high_noise(const PowerCurve& power, double sigma,
                                           const RingPartition& rings, int rows, int cols,
                                           HighNoiseForm form = HighNoiseForm::asymptotic);

enum class LimitKind {
  smooth_decay,     ///< 1 / sqrt(1 + a r^2)
  high_noise_decay, ///< min(1, 1 / (r sqrt(a)))
};

struct LimitModel {
  LimitKind kind = LimitKind::smooth_decay;
  double a = 0.0;
  double residual_rms = 0.0;

  double predict(double r) const;
};

/// Least-squares fit of a over the curve's rings with r >= 1.
LimitModel fit_limit_model(const FrcCurve& curve, LimitKind kind);

/// Writes "ring,frc,n_r", with an extra "f/N" column (ring / nyquist_ring)
/// after "ring" when nyquist_ring > 0.
void write_frc_csv(const FrcCurve& curve, const std::filesystem::path& path,
                   int nyquist_ring = 0);

} // namespace frckit
