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

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "frckit/error.hpp"
#include "frckit/metrics.hpp"
#include "test_util.hpp"

using namespace frckit;

TEST(Mse, Examples) {
  const Image x = test::gaussian_image(5, 6, 1);
  const Image y = test::gaussian_image(5, 6, 2);
  EXPECT_EQ(mse(x, x), 0.0);
  EXPECT_DOUBLE_EQ(mse(Image(1, 2, std::vector<double>{0, 0}), Image(1, 2, std::vector<double>{1, 1})), 1.0);
  EXPECT_DOUBLE_EQ(mse(Image(1, 2, std::vector<double>{0, 1}), Image(1, 2, std::vector<double>{1, 1})), 0.5);
  EXPECT_DOUBLE_EQ(mse(x, y), mse(y, x));
  EXPECT_THROW(mse(x, Image(6, 5)), InputError);
  EXPECT_DOUBLE_EQ(mae(Image(1, 2, std::vector<double>{0, -2}), Image(1, 2, std::vector<double>{1, 1})), 2.0);
}

TEST(Psnr, Examples) {
  const Image z(2, 2);
  EXPECT_NEAR(psnr(z, Image(2, 2, 1.0), 1.0), 0.0, 1e-12);
  EXPECT_NEAR(psnr(z, Image(2, 2, 0.1), 1.0), 20.0, 1e-10);
  EXPECT_EQ(psnr(z, z, 1.0), kPsnrInfinity);
  EXPECT_THROW(psnr(z, z, 0.0), InputError);
  double last = kPsnrInfinity;
  for (double e : {0.01, 0.1, 0.2, 0.5}) {
    const double v = psnr(z, Image(2, 2, e), 1.0);
    EXPECT_LT(v, last);
    last = v;
  }
}

TEST(Ssim, Identity) {
  for (int s = 0; s < 5; ++s) {
    const Image x = test::gaussian_image(20, 17, s);
    EXPECT_NEAR(ssim(x, x), 1.0, 1e-12);
    EXPECT_NEAR(ssim(x, x, SsimParams::gaussian_11()), 1.0, 1e-12);
  }
  EXPECT_NEAR(ssim(Image(9, 9, 0.3), Image(9, 9, 0.3)), 1.0, 1e-12);
}

TEST(Ssim, InvertedSinusoid) {
  // period equals the window width, so every window is zero-mean
  Image x(28, 28);
  for (int r = 0; r < 28; ++r) {
    for (int c = 0; c < 28; ++c) {
      x(r, c) = 0.5 * std::sin(2.0 * std::numbers::pi * c / 7.0);
    }
  }
  EXPECT_LT(ssim(x, -x), -0.9);
}

TEST(Ssim, MatchesDirectWindowEvaluation) {
  // hand-rolled single 3x3 window oracle, population statistics
  const Image x(3, 3, std::vector<double>{0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.95});
  const Image y(3, 3, std::vector<double>{0.0, 0.25, 0.3, 0.5, 0.45, 0.6, 0.9, 0.7, 1.0});
  double mx = 0, my = 0;
  for (int k = 0; k < 9; ++k) {
    mx += x.pixels()[k] / 9;
    my += y.pixels()[k] / 9;
  }
  double vx = 0, vy = 0, cxy = 0;
  for (int k = 0; k < 9; ++k) {
    vx += (x.pixels()[k] - mx) * (x.pixels()[k] - mx) / 9;
    vy += (y.pixels()[k] - my) * (y.pixels()[k] - my) / 9;
    cxy += (x.pixels()[k] - mx) * (y.pixels()[k] - my) / 9;
  }
  const double c1 = 1e-4, c2 = 9e-4;
  const double expected = (2 * mx * my + c1) * (2 * cxy + c2) / ((mx * mx + my * my + c1) * (vx + vy + c2));
  SsimParams p;
  p.window_size = 3;
  EXPECT_NEAR(ssim(x, y, p), expected, 1e-12);
}

TEST(Ssim, Errors) {
  const Image x(5, 5);
  EXPECT_THROW(ssim(x, x), InputError); // 7x7 window on 5x5
  SsimParams even;
  even.window_size = 4;
  EXPECT_THROW(ssim(x, x, even), InputError);
}

TEST(Pearson, Examples) {
  const std::vector<double> a{1, 2, 3};
  EXPECT_NEAR(pearson(a, a), 1.0, 1e-15);
  EXPECT_NEAR(pearson(a, std::vector<double>{3, 2, 1}), -1.0, 1e-15);
  EXPECT_NEAR(pearson(a, std::vector<double>{1, 3, 2}), 0.5, 1e-15);
  EXPECT_THROW(pearson(a, std::vector<double>{1, 1, 1}), InputError);
  EXPECT_THROW(pearson(a, std::vector<double>{1, 2}), InputError);
  EXPECT_THROW(pearson(std::vector<double>{1, 2}, std::vector<double>{2, 1}), InputError);
}

TEST(Pearson, AffineInvariance) {
  const Image u = test::gaussian_image(1, 40, 1);
  const Image v = test::gaussian_image(1, 40, 2);
  std::vector<double> a(u.pixels().begin(), u.pixels().end());
  std::vector<double> b(v.pixels().begin(), v.pixels().end());
  for (std::size_t k = 0; k < b.size(); ++k) {
    b[k] += 0.5 * a[k];
  }
  const double r = pearson(a, b);
  std::vector<double> a2 = a, b2 = b;
  for (auto& t : a2) {
    t = 3.0 * t - 7.0;
  }
  for (auto& t : b2) {
    t = 0.01 * t + 100.0;
  }
  EXPECT_NEAR(pearson(a2, b2), r, 1e-12);
}

TEST(Report, IdenticalPair) {
  const Image x = test::gaussian_image(16, 16, 5);
  const MetricReport m = metric_report(x, x);
  EXPECT_EQ(m.mse, 0.0);
  EXPECT_EQ(m.psnr, kPsnrInfinity);
  EXPECT_NEAR(m.ssim, 1.0, 1e-12);
  EXPECT_NEAR(m.frc_scalar, 1.0, 1e-12);
}
