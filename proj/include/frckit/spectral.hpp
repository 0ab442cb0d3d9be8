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

#include <complex>
#include <filesystem>
#include <span>
#include <vector>

#include "frckit/imagekit.hpp"

namespace frckit {

using Complex = std::complex<double>;

/// Unnormalized forward DFT coefficients, row-major, unshifted (index 0 is DC).
class Spectrum {
public:
  Spectrum() = default;
  Spectrum(int rows, int cols);
  Spectrum(int rows, int cols, std::vector<Complex> coeffs);

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  std::size_t size() const { return coeffs_.size(); }

  Complex operator()(int p, int q) const { return coeffs_[index(p, q)]; }
  Complex& operator()(int p, int q) { return coeffs_[index(p, q)]; }

  std::span<const Complex> coeffs() const { return coeffs_; }
  std::span<Complex> coeffs() { return coeffs_; }

private:
  std::size_t index(int p, int q) const {
    return static_cast<std::size_t>(p) * static_cast<std::size_t>(cols_) +
           static_cast<std::size_t>(q);
  }

  int rows_ = 0;
  int cols_ = 0;
  std::vector<Complex> coeffs_;
};

/// Signed frequency of DFT index p along an axis of the given length,
/// in [-length/2, length/2).
inline int centered_frequency(int p, int length) {
  return 2 * p < length ? p : p - length;
}

/// F[p,q] = sum_{m,n} x[m,n] exp(-2 pi i (pm/M + qn/N)). Backed by FFTW.
Spectrum dft2(const Image& img);
Spectrum dft2(std::span<const Complex> data, int rows, int cols);

/// Inverse with the 1/(MN) factor; returns the complex result.
std::vector<Complex> idft2(const Spectrum& spec);

/// Inverse transform of a Hermitian spectrum. Throws InternalError if the
/// imaginary residue exceeds 1e-10 relative to the largest magnitude.
Image idft2_real(const Spectrum& spec);

/// Assignment of DFT coefficients to concentric annuli of integer index.
///
/// A coefficient with centered radius rho belongs to ring round(rho / thickness).
/// Rings beyond max_ring are excluded (label -1). By default max_ring is
/// floor(min(M,N) / 2 / thickness), the last complete ring; with
/// include_partial the corner rings up to the diagonal are kept as well.
/// Immutable once built and safe to share between threads.
class RingPartition {
public:
  RingPartition() = default;
  RingPartition(int rows, int cols, int thickness, bool include_partial = false);

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  int thickness() const { return thickness_; }
  int max_ring() const { return max_ring_; }
  int ring_count() const { return max_ring_ + 1; }
  /// Nominal radius of the last complete ring; used to scale f/N axes.
  int nyquist_ring() const { return nyquist_ring_; }

  /// Ring label for every coefficient, -1 when excluded.
  std::span<const int> labels() const { return labels_; }
  int ring_of(int p, int q) const {
    return labels_[static_cast<std::size_t>(p) * static_cast<std::size_t>(cols_) +
                   static_cast<std::size_t>(q)];
  }
  int count(int ring) const { return counts_[static_cast<std::size_t>(ring)]; }
  std::span<const int> counts() const { return counts_; }
  /// Flat coefficient indices belonging to ring r.
  std::span<const std::size_t> members(int ring) const;

  bool matches(int rows, int cols) const { return rows_ == rows && cols_ == cols; }

private:
  int rows_ = 0;
  int cols_ = 0;
  int thickness_ = 1;
  int max_ring_ = 0;
  int nyquist_ring_ = 0;
  std::vector<int> labels_;
  std::vector<int> counts_;
  std::vector<std::size_t> offsets_;
  std::vector<std::size_t> members_;
};

RingPartition build_rings(int rows, int cols, int thickness, bool include_partial = false);

struct PowerCurve {
  std::vector<int> radii;
  std::vector<double> mean_power;
};

/// mean_power[r] = sum_S |F|^2 / n_r.
PowerCurve ring_mean_power(const Spectrum& spec, const RingPartition& rings);

/// Writes "ring,mean_power".
void write_power_csv(const PowerCurve& curve, const std::filesystem::path& path);

/// Zeroes every coefficient whose ring index exceeds cutoff. Frequencies in
/// the corners beyond the last complete ring count as part of that ring, so
/// cutoff == max_ring is the identity.
Image lowpass(const Image& img, int cutoff, const RingPartition& rings);
Image lowpass(const Image& img, int cutoff);

/// Gaussian transfer function exp(-2 pi^2 sigma^2 (r / L)^2) with r the
/// nominal radius of each coefficient's ring and L = min(M, N). Constant on
/// every ring of the given thickness, real and in (0, 1].
std::vector<double> gaussian_transfer(int rows, int cols, double sigma, int thickness = 1);

/// Periodic Gaussian smoothing applied as a frequency-domain product.
/// sigma below 1e-6 is treated as the identity.
Image gaussian_filter_wrap(const Image& img, double sigma, int thickness = 1);

/// Flattens the ring-mean power of all non-DC rings (corner rings included)
/// to a common level that preserves the total non-DC power. DC and phases
/// are untouched.
Image power_normalize(const Image& img);

} // namespace frckit
