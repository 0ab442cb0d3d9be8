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

#include "frckit/frc.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <string>

#include "frckit/error.hpp"

namespace frckit {

namespace {

/// A ring whose power is below this fraction of the image's total spectral
/// power holds only transform round-off and counts as empty.
constexpr double kEmptyRingFraction = 1e-24;

/// Per-ring sums of U V*, |U|^2 and |V|^2.
struct RingSums {
  std::vector<Complex> cross;
  std::vector<double> power_u;
  std::vector<double> power_v;
  double total_u = 0.0;
  double total_v = 0.0;

  bool empty_u(std::size_t r) const { return !(power_u[r] > kEmptyRingFraction * total_u); }
  bool empty_v(std::size_t r) const { return !(power_v[r] > kEmptyRingFraction * total_v); }
  bool empty(std::size_t r) const { return empty_u(r) || empty_v(r); }
};

RingSums ring_sums(const Spectrum& u, const Spectrum& v, const RingPartition& rings) {
  if (u.rows() != v.rows() || u.cols() != v.cols()) {
    throw InputError("image size mismatch: " + std::to_string(u.rows()) + "x" +
                     std::to_string(u.cols()) + " vs " + std::to_string(v.rows()) + "x" +
                     std::to_string(v.cols()));
  }
  if (!rings.matches(u.rows(), u.cols())) {
    throw InputError("ring partition does not match image size");
  }
  const auto n = static_cast<std::size_t>(rings.ring_count());
  RingSums s{std::vector<Complex>(n), std::vector<double>(n, 0.0), std::vector<double>(n, 0.0)};
  const auto cu = u.coeffs();
  const auto cv = v.coeffs();
  const auto labels = rings.labels();
  for (std::size_t i = 0; i < cu.size(); ++i) {
    s.total_u += std::norm(cu[i]);
    s.total_v += std::norm(cv[i]);
    const int r = labels[i];
    if (r < 0) {
      continue;
    }
    const auto k = static_cast<std::size_t>(r);
    s.cross[k] += cu[i] * std::conj(cv[i]);
    s.power_u[k] += std::norm(cu[i]);
    s.power_v[k] += std::norm(cv[i]);
  }
  return s;
}

int first_ring_for(const FrcOptions& options, const RingPartition& rings) {
  if (options.first_ring < 0 || options.first_ring > rings.max_ring()) {
    throw InputError("first ring " + std::to_string(options.first_ring) + " outside 0.." +
                     std::to_string(rings.max_ring()));
  }
  return options.first_ring;
}

/// Correlation of ring r.
double ring_value(const RingSums& s, std::size_t r, EmptyRingPolicy policy) {
  if (s.empty(r)) {
    if (policy == EmptyRingPolicy::zero) {
      return 0.0;
    }
    throw InputError("empty ring " + std::to_string(r) + ": no spectral power in " +
                     (s.empty_u(r) ? "first" : "second") + " image");
  }
  const double denom = std::sqrt(s.power_u[r] * s.power_v[r]);
  if (std::abs(s.cross[r].imag()) > 1e-8 * denom) {
    throw InternalError("FRC numerator of ring " + std::to_string(r) +
                        " is not real; inputs are not real images or rings are not "
                        "conjugate-symmetric");
  }
  return s.cross[r].real() / denom;
}

FrcCurve curve_from_sums(const RingSums& s, const RingPartition& rings, int first,
                         EmptyRingPolicy policy) {
  FrcCurve curve;
  for (int r = first; r <= rings.max_ring(); ++r) {
    curve.radii.push_back(r);
    curve.values.push_back(ring_value(s, static_cast<std::size_t>(r), policy));
    curve.ring_counts.push_back(rings.count(r));
  }
  return curve;
}

double loss_from_curve(const FrcCurve& curve, bool normalized) {
  const double sum = std::accumulate(curve.values.begin(), curve.values.end(), 0.0);
  return normalized ? 1.0 - sum / static_cast<double>(curve.size()) : 1.0 - sum;
}

} // namespace

FrcCurve frc(const Spectrum& u, const Spectrum& v, const RingPartition& rings,
             const FrcOptions& options) {
  const RingSums s = ring_sums(u, v, rings);
  return curve_from_sums(s, rings, first_ring_for(options, rings), options.empty_ring);
}

FrcCurve frc(const Image& x, const Image& y, const RingPartition& rings,
             const FrcOptions& options) {
  if (!x.same_shape(y)) {
    throw InputError("image size mismatch: " + std::to_string(x.rows()) + "x" +
                     std::to_string(x.cols()) + " vs " + std::to_string(y.rows()) + "x" +
                     std::to_string(y.cols()));
  }
  return frc(dft2(x), dft2(y), rings, options);
}

double frc_scalar(const FrcCurve& curve) {
  if (curve.empty()) {
    throw InputError("empty FRC curve");
  }
  return std::accumulate(curve.values.begin(), curve.values.end(), 0.0) /
         static_cast<double>(curve.size());
}

FrcCurve average_curves(const std::vector<FrcCurve>& curves) {
  if (curves.empty()) {
    throw InputError("no curves to average");
  }
  FrcCurve mean = curves.front();
  for (std::size_t k = 1; k < curves.size(); ++k) {
    if (curves[k].radii != mean.radii) {
      throw InputError("cannot average FRC curves over different rings");
    }
    for (std::size_t i = 0; i < mean.size(); ++i) {
      mean.values[i] += curves[k].values[i];
    }
  }
  for (double& v : mean.values) {
    v /= static_cast<double>(curves.size());
  }
  return mean;
}

FrcLossValue frc_loss(const Image& x, const Image& y, const RingPartition& rings,
                      const FrcLossOptions& options) {
  FrcLossValue out;
  out.normalized = options.normalized;
  out.per_ring = frc(x, y, rings, FrcOptions{options.include_dc ? 0 : 1, options.empty_ring});
  out.loss = loss_from_curve(out.per_ring, options.normalized);
  return out;
}

FrcLossAndGradient frc_loss_and_grad(const Image& x, const Image& y, const RingPartition& rings,
                                     const FrcLossOptions& options) {
  if (!x.same_shape(y)) {
    throw InputError("image size mismatch");
  }
  const Spectrum u = dft2(x);
  const Spectrum v = dft2(y);
  const RingSums s = ring_sums(u, v, rings);
  const int first = options.include_dc ? 0 : 1;

  FrcLossAndGradient out;
  out.value.normalized = options.normalized;
  out.value.per_ring = curve_from_sums(s, rings, first, options.empty_ring);
  out.value.loss = loss_from_curve(out.value.per_ring, options.normalized);

  // dFRC_r/dx = MN / sqrt(P_r Q_r) * Re idft(mask_r * (V - (A_r / P_r) U)),
  // where A_r = Re sum U V*, P_r = sum |U|^2, Q_r = sum |V|^2. Every ring is
  // folded into one spectrum so a single inverse transform suffices.
  const double weight = options.normalized ? 1.0 / static_cast<double>(out.value.per_ring.size()) : 1.0;
  const double mn = static_cast<double>(x.size());
  const auto n = static_cast<std::size_t>(rings.ring_count());
  std::vector<double> coef_v(n, 0.0);
  std::vector<double> coef_u(n, 0.0);
  for (int r = first; r <= rings.max_ring(); ++r) {
    const auto k = static_cast<std::size_t>(r);
    if (s.empty(k)) {
      continue; // only reachable under EmptyRingPolicy::zero
    }
    const double denom = std::sqrt(s.power_u[k] * s.power_v[k]);
    const double scale = -weight * mn / denom;
    coef_v[k] = scale;
    coef_u[k] = -scale * s.cross[k].real() / s.power_u[k];
  }

  Spectrum g(x.rows(), x.cols());
  const auto cu = u.coeffs();
  const auto cv = v.coeffs();
  auto cg = g.coeffs();
  const auto labels = rings.labels();
  for (std::size_t i = 0; i < cg.size(); ++i) {
    const int r = labels[i];
    if (r >= first) {
      const auto k = static_cast<std::size_t>(r);
      cg[i] = coef_v[k] * cv[i] + coef_u[k] * cu[i];
    }
  }
  const auto spatial = idft2(g);
  std::vector<double> grad(spatial.size());
  std::transform(spatial.begin(), spatial.end(), grad.begin(), [](Complex c) { return c.real(); });
  out.gradient = Image(x.rows(), x.cols(), std::move(grad));
  return out;
}

Image frc_loss_grad(const Image& x, const Image& y, const RingPartition& rings,
                    const FrcLossOptions& options) {
  return frc_loss_and_grad(x, y, rings, options).gradient;
}

FrcCurve predict_frc_noisy(const PowerCurve& power, double sigma, int rows, int cols,
                           bool taylor) {
  if (!(sigma >= 0.0)) {
    throw InputError("noise sigma must be non-negative");
  }
  const double noise_power = static_cast<double>(rows) * cols * sigma * sigma;
  FrcCurve curve;
  for (std::size_t i = 0; i < power.radii.size(); ++i) {
    const double p = power.mean_power[i];
    if (!(p > 0.0)) {
      throw InputError("non-positive power in ring " + std::to_string(power.radii[i]));
    }
    const double ratio = noise_power / p;
    curve.radii.push_back(power.radii[i]);
    curve.values.push_back(taylor ? 1.0 - 0.5 * ratio : 1.0 / std::sqrt(1.0 + ratio));
    curve.ring_counts.push_back(0);
  }
  return curve;
}

HighNoisePrediction predict_frc_high_noise(const PowerCurve& power, double sigma,
                                           const RingPartition& rings, int rows, int cols,
                                           HighNoiseForm form) {
  if (!(sigma > 0.0)) {
    throw InputError("high-noise prediction needs sigma > 0");
  }
  const double noise_power = static_cast<double>(rows) * cols * sigma * sigma;
  HighNoisePrediction out;
  double max_power = 0.0;
  for (std::size_t i = 0; i < power.radii.size(); ++i) {
    const int r = power.radii[i];
    if (r < 0 || r > rings.max_ring()) {
      throw InputError("power curve ring " + std::to_string(r) + " not in partition");
    }
    const double ring_total = power.mean_power[i] * rings.count(r);
    const double ratio = ring_total / (rings.count(r) * noise_power);
    max_power = std::max(max_power, power.mean_power[i]);
    out.curve.radii.push_back(r);
    out.curve.values.push_back(form == HighNoiseForm::asymptotic ? std::sqrt(ratio) : ratio);
    out.curve.ring_counts.push_back(rings.count(r));
  }
  out.outside_regime = noise_power < 10.0 * max_power;
  return out;
}

double LimitModel::predict(double r) const {
  if (kind == LimitKind::smooth_decay) {
    return 1.0 / std::sqrt(1.0 + a * r * r);
  }
  return std::min(1.0, 1.0 / (r * std::sqrt(a)));
}

LimitModel fit_limit_model(const FrcCurve& curve, LimitKind kind) {
  std::vector<double> rs;
  std::vector<double> vs;
  for (std::size_t i = 0; i < curve.size(); ++i) {
    if (curve.radii[i] >= 1) {
      rs.push_back(curve.radii[i]);
      vs.push_back(curve.values[i]);
    }
  }
  const auto [lo, hi] = std::minmax_element(vs.begin(), vs.end());
  if (vs.empty() || *hi - *lo < 1e-12) {
    throw InputError("degenerate curve");
  }

  // Per-point closed-form estimates of a seed the iteration.
  std::vector<double> seeds;
  for (std::size_t i = 0; i < rs.size(); ++i) {
    const double v = vs[i];
    if (v > 0.0 && v < 1.0) {
      const double r2 = rs[i] * rs[i];
      seeds.push_back(kind == LimitKind::smooth_decay ? (1.0 / (v * v) - 1.0) / r2
                                                      : 1.0 / (v * v * r2));
    }
  }
  if (seeds.size() < 5) {
    throw InputError("need at least 5 rings with values in (0,1) to fit, got " +
                     std::to_string(seeds.size()));
  }
  std::nth_element(seeds.begin(), seeds.begin() + static_cast<long>(seeds.size() / 2), seeds.end());

  LimitModel model{kind, seeds[seeds.size() / 2], 0.0};
  auto cost = [&](double a) {
    LimitModel m{kind, a, 0.0};
    double c = 0.0;
    for (std::size_t i = 0; i < rs.size(); ++i) {
      const double d = m.predict(rs[i]) - vs[i];
      c += d * d;
    }
    return c;
  };

  // Gauss-Newton in log(a) with step halving.
  double t = std::log(model.a);
  double current = cost(model.a);
  for (int iter = 0; iter < 200; ++iter) {
    const double a = std::exp(t);
    double jtj = 0.0;
    double jtr = 0.0;
    for (std::size_t i = 0; i < rs.size(); ++i) {
      const double r2 = rs[i] * rs[i];
      double f = 0.0;
      double dfdt = 0.0;
      if (kind == LimitKind::smooth_decay) {
        const double base = 1.0 + a * r2;
        f = 1.0 / std::sqrt(base);
        dfdt = -0.5 * a * r2 / (base * std::sqrt(base));
      } else {
        const double raw = 1.0 / (rs[i] * std::sqrt(a));
        f = std::min(1.0, raw);
        dfdt = raw < 1.0 ? -0.5 * raw : 0.0;
      }
      jtj += dfdt * dfdt;
      jtr += dfdt * (f - vs[i]);
    }
    if (jtj <= 0.0) {
      break;
    }
    double step = -jtr / jtj;
    bool improved = false;
    for (int half = 0; half < 40; ++half) {
      const double candidate = cost(std::exp(t + step));
      if (candidate <= current) {
        improved = candidate < current;
        t += step;
        current = candidate;
        break;
      }
      step *= 0.5;
    }
    if (!improved || std::abs(step) < 1e-15) {
      break;
    }
  }
  model.a = std::exp(t);
  model.residual_rms = std::sqrt(current / static_cast<double>(rs.size()));
  return model;
}

void write_frc_csv(const FrcCurve& curve, const std::filesystem::path& path, int nyquist_ring) {
  std::ofstream out(path);
  if (!out) {
    throw InputError("cannot write '" + path.string() + "'");
  }
  out.precision(17);
  out << (nyquist_ring > 0 ? "ring,f/N,frc,n_r\n" : "ring,frc,n_r\n");
  for (std::size_t i = 0; i < curve.size(); ++i) {
    out << curve.radii[i] << ",";
    if (nyquist_ring > 0) {
      out << static_cast<double>(curve.radii[i]) / nyquist_ring << ",";
    }
    out << curve.values[i] << "," << curve.ring_counts[i] << "\n";
  }
}

} // namespace frckit
