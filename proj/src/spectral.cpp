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

#include "frckit/spectral.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <mutex>
#include <numbers>
#include <string>
#include <tuple>

#include "frckit/error.hpp"

namespace frckit {

namespace {

/// FFTW plans keyed by shape and direction. Planning is not thread-safe in
/// FFTW, execution with new arrays is; plans are made unaligned so any
/// std::vector storage can be used.
class PlanCache {
public:
  static PlanCache& instance() {
    static PlanCache cache;
    return cache;
  }

  fftw_plan get(int rows, int cols, int sign) {
    std::lock_guard lock(mutex_);
    const auto key = std::make_tuple(rows, cols, sign);
    if (auto it = plans_.find(key); it != plans_.end()) {
      return it->second;
    }
    std::vector<Complex> scratch(static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols));
    auto* buf = reinterpret_cast<fftw_complex*>(scratch.data());
    fftw_plan plan =
        fftw_plan_dft_2d(rows, cols, buf, buf, sign, FFTW_ESTIMATE | FFTW_UNALIGNED);
    if (plan == nullptr) {
      throw InternalError("FFTW failed to create a plan");
    }
    plans_.emplace(key, plan);
    return plan;
  }

  PlanCache(const PlanCache&) = delete;
  PlanCache& operator=(const PlanCache&) = delete;

private:
  PlanCache() = default;
  ~PlanCache() {
    for (auto& [key, plan] : plans_) {
      fftw_destroy_plan(plan);
    }
  }

  std::mutex mutex_;
  std::map<std::tuple<int, int, int>, fftw_plan> plans_;
};

void transform(std::vector<Complex>& data, int rows, int cols, int sign) {
  fftw_plan plan = PlanCache::instance().get(rows, cols, sign);
  auto* buf = reinterpret_cast<fftw_complex*>(data.data());
  fftw_execute_dft(plan, buf, buf);
}

void require_match(const RingPartition& rings, int rows, int cols) {
  if (!rings.matches(rows, cols)) {
    throw InputError("ring partition is " + std::to_string(rings.rows()) + "x" +
                     std::to_string(rings.cols()) + " but data is " + std::to_string(rows) +
                     "x" + std::to_string(cols));
  }
}

} // namespace

Spectrum::Spectrum(int rows, int cols)
    : rows_(rows), cols_(cols),
      coeffs_(static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols)) {}

Spectrum::Spectrum(int rows, int cols, std::vector<Complex> coeffs)
    : rows_(rows), cols_(cols), coeffs_(std::move(coeffs)) {
  if (coeffs_.size() != static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols)) {
    throw InputError("coefficient count does not match spectrum shape");
  }
}

Spectrum dft2(const Image& img) {
  std::vector<Complex> data(img.pixels().begin(), img.pixels().end());
  transform(data, img.rows(), img.cols(), FFTW_FORWARD);
  return Spectrum(img.rows(), img.cols(), std::move(data));
}

Spectrum dft2(std::span<const Complex> input, int rows, int cols) {
  std::vector<Complex> data(input.begin(), input.end());
  if (data.size() != static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols)) {
    throw InputError("data size does not match requested transform shape");
  }
  transform(data, rows, cols, FFTW_FORWARD);
  return Spectrum(rows, cols, std::move(data));
}

std::vector<Complex> idft2(const Spectrum& spec) {
  std::vector<Complex> data(spec.coeffs().begin(), spec.coeffs().end());
  transform(data, spec.rows(), spec.cols(), FFTW_BACKWARD);
  const double scale = 1.0 / static_cast<double>(data.size());
  for (auto& v : data) {
    v *= scale;
  }
  return data;
}

Image idft2_real(const Spectrum& spec) {
  const auto data = idft2(spec);
  double peak = 0.0;
  double residue = 0.0;
  for (const auto& v : data) {
    peak = std::max(peak, std::abs(v));
    residue = std::max(residue, std::abs(v.imag()));
  }
  if (residue > 1e-10 * std::max(peak, 1e-300)) {
    throw InternalError("inverse transform is not real (imaginary residue " +
                        std::to_string(residue) + ")");
  }
  std::vector<double> pixels(data.size());
  std::transform(data.begin(), data.end(), pixels.begin(), [](Complex c) { return c.real(); });
  return Image(spec.rows(), spec.cols(), std::move(pixels));
}

RingPartition::RingPartition(int rows, int cols, int thickness, bool include_partial)
    : rows_(rows), cols_(cols), thickness_(thickness) {
  if (thickness < 1) {
    throw InputError("ring thickness must be at least 1");
  }
  if (rows < 2 || cols < 2) {
    throw InputError("ring partition needs at least 2x2 coefficients");
  }
  const std::size_t total = static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols);
  std::vector<int> raw(total);
  int largest = 0;
  for (int p = 0; p < rows; ++p) {
    const double fp = centered_frequency(p, rows);
    for (int q = 0; q < cols; ++q) {
      const double fq = centered_frequency(q, cols);
      const int r = static_cast<int>(std::lround(std::hypot(fp, fq) / thickness));
      raw[static_cast<std::size_t>(p) * static_cast<std::size_t>(cols) + static_cast<std::size_t>(q)] = r;
      largest = std::max(largest, r);
    }
  }
  nyquist_ring_ = std::min(rows, cols) / 2 / thickness;
  max_ring_ = include_partial ? largest : nyquist_ring_;

  labels_.assign(total, -1);
  counts_.assign(static_cast<std::size_t>(max_ring_ + 1), 0);
  for (std::size_t i = 0; i < total; ++i) {
    if (raw[i] <= max_ring_) {
      labels_[i] = raw[i];
      ++counts_[static_cast<std::size_t>(raw[i])];
    }
  }
  offsets_.assign(counts_.size() + 1, 0);
  for (std::size_t r = 0; r < counts_.size(); ++r) {
    offsets_[r + 1] = offsets_[r] + static_cast<std::size_t>(counts_[r]);
  }
  members_.resize(offsets_.back());
  auto cursor = offsets_;
  for (std::size_t i = 0; i < total; ++i) {
    if (labels_[i] >= 0) {
      members_[cursor[static_cast<std::size_t>(labels_[i])]++] = i;
    }
  }
}

std::span<const std::size_t> RingPartition::members(int ring) const {
  const auto r = static_cast<std::size_t>(ring);
  return std::span<const std::size_t>(members_).subspan(offsets_[r], offsets_[r + 1] - offsets_[r]);
}

RingPartition build_rings(int rows, int cols, int thickness, bool include_partial) {
  return RingPartition(rows, cols, thickness, include_partial);
}

PowerCurve ring_mean_power(const Spectrum& spec, const RingPartition& rings) {
  require_match(rings, spec.rows(), spec.cols());
  PowerCurve curve;
  curve.radii.resize(static_cast<std::size_t>(rings.ring_count()));
  curve.mean_power.assign(curve.radii.size(), 0.0);
  const auto coeffs = spec.coeffs();
  const auto labels = rings.labels();
  for (std::size_t i = 0; i < coeffs.size(); ++i) {
    if (labels[i] >= 0) {
      curve.mean_power[static_cast<std::size_t>(labels[i])] += std::norm(coeffs[i]);
    }
  }
  for (int r = 0; r < rings.ring_count(); ++r) {
    curve.radii[static_cast<std::size_t>(r)] = r;
    curve.mean_power[static_cast<std::size_t>(r)] /= static_cast<double>(rings.count(r));
  }
  return curve;
}

void write_power_csv(const PowerCurve& curve, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) {
    throw InputError("cannot write '" + path.string() + "'");
  }
  out.precision(17);
  out << "ring,mean_power\n";
  for (std::size_t i = 0; i < curve.radii.size(); ++i) {
    out << curve.radii[i] << "," << curve.mean_power[i] << "\n";
  }
}

Image lowpass(const Image& img, int cutoff, const RingPartition& rings) {
  require_match(rings, img.rows(), img.cols());
  if (cutoff < 0 || cutoff > rings.max_ring()) {
    throw InputError("cutoff " + std::to_string(cutoff) + " outside 0.." +
                     std::to_string(rings.max_ring()));
  }
  if (cutoff == rings.max_ring()) {
    return img;
  }
  Spectrum f = dft2(img);
  auto coeffs = f.coeffs();
  const auto labels = rings.labels();
  for (std::size_t i = 0; i < coeffs.size(); ++i) {
    // label -1 marks the corners beyond the last ring, which lie above any cutoff
    if (labels[i] < 0 || labels[i] > cutoff) {
      coeffs[i] = 0.0;
    }
  }
  return idft2_real(f);
}

Image lowpass(const Image& img, int cutoff) {
  return lowpass(img, cutoff, build_rings(img.rows(), img.cols(), 1));
}

std::vector<double> gaussian_transfer(int rows, int cols, double sigma, int thickness) {
  if (!(sigma > 0.0)) {
    throw InputError("gaussian sigma must be positive");
  }
  if (thickness < 1) {
    throw InputError("ring thickness must be at least 1");
  }
  const std::size_t total = static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols);
  std::vector<double> h(total, 1.0);
  if (sigma < 1e-6) {
    return h;
  }
  const double length = static_cast<double>(std::min(rows, cols));
  const double k = 2.0 * std::numbers::pi * std::numbers::pi * sigma * sigma;
  for (int p = 0; p < rows; ++p) {
    const double fp = centered_frequency(p, rows);
    for (int q = 0; q < cols; ++q) {
      const double fq = centered_frequency(q, cols);
      const long ring = std::lround(std::hypot(fp, fq) / thickness);
      const double f = static_cast<double>(ring * thickness) / length;
      h[static_cast<std::size_t>(p) * static_cast<std::size_t>(cols) + static_cast<std::size_t>(q)] =
          std::exp(-k * f * f);
    }
  }
  return h;
}

Image gaussian_filter_wrap(const Image& img, double sigma, int thickness) {
  const auto h = gaussian_transfer(img.rows(), img.cols(), sigma, thickness);
  if (sigma < 1e-6) {
    return img;
  }
  Spectrum f = dft2(img);
  auto coeffs = f.coeffs();
  for (std::size_t i = 0; i < coeffs.size(); ++i) {
    coeffs[i] *= h[i];
  }
  return idft2_real(f);
}

Image power_normalize(const Image& img) {
  const RingPartition rings(img.rows(), img.cols(), 1, /*include_partial=*/true);
  Spectrum f = dft2(img);
  const PowerCurve power = ring_mean_power(f, rings);

  double total = 0.0;
  std::size_t count = 0;
  for (int r = 1; r < rings.ring_count(); ++r) {
    const double ring_total = power.mean_power[static_cast<std::size_t>(r)] * rings.count(r);
    if (!(ring_total > 0.0)) {
      throw InputError("empty ring, cannot normalize (ring " + std::to_string(r) + ")");
    }
    total += ring_total;
    count += static_cast<std::size_t>(rings.count(r));
  }
  const double target = total / static_cast<double>(count);

  auto coeffs = f.coeffs();
  const auto labels = rings.labels();
  for (std::size_t i = 0; i < coeffs.size(); ++i) {
    const int r = labels[i];
    if (r > 0) {
      coeffs[i] *= std::sqrt(target / power.mean_power[static_cast<std::size_t>(r)]);
    }
  }
  return idft2_real(f);
}

} // namespace frckit
