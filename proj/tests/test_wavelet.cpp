// Copyright 2026 The ctdecomp Authors
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

#include "ctdecomp/contourlet.hpp"
#include "ctdecomp/wavelet.hpp"
#include "test_util.hpp"

namespace ctdecomp {
namespace {

using testing::random_image;

double energy(const WaveletCoeffs& c) {
  double e = c.approximation.square().sum();
  for (const auto& d : c.details) e += d.horizontal.square().sum() + d.vertical.square().sum() + d.diagonal.square().sum();
  return e;
}

TEST(Wavelet, FiltersAreOrthonormal) {
  for (const WaveletFilter f : {WaveletFilter::Daubechies4, WaveletFilter::Haar}) {
    const auto h = wavelet_lowpass(f);
    double sum = 0.0, sq = 0.0, shift2 = 0.0;
    for (std::size_t k = 0; k < h.size(); ++k) {
      sum += h[k];
      sq += h[k] * h[k];
      if (k + 2 < h.size()) shift2 += h[k] * h[k + 2];
    }
    EXPECT_NEAR(sum, std::sqrt(2.0), 1e-15) << to_string(f);
    EXPECT_NEAR(sq, 1.0, 1e-15);
    EXPECT_NEAR(shift2, 0.0, 1e-15);
  }
}

TEST(Wavelet, RoundTripAndParseval) {
  for (const WaveletFilter f : {WaveletFilter::Daubechies4, WaveletFilter::Haar}) {
    const ImageGrid img = random_image(64, 64, 1);
    const WaveletCoeffs c = dwt_analyze(img, 3, f);
    EXPECT_EQ(c.size(), img.size());
    EXPECT_LE((dwt_synthesize(c) - img).abs().maxCoeff(), 1e-10);
    EXPECT_NEAR(energy(c) / img.square().sum(), 1.0, 1e-10);
  }
  // Depth large enough that the filter wraps around the coarsest grid.
  const ImageGrid small = random_image(8, 16, 2);
  EXPECT_LE((dwt_synthesize(dwt_analyze(small, 3)) - small).abs().maxCoeff(), 1e-10);
}

TEST(Wavelet, HaarByHand) {
  ImageGrid img(2, 2);
  img << 1, 2, 3, 4;
  const WaveletCoeffs c = dwt_analyze(img, 1, WaveletFilter::Haar);
  EXPECT_NEAR(c.approximation(0, 0), 5.0, 1e-15);
  EXPECT_NEAR(c.details[0].horizontal(0, 0), -2.0, 1e-15);  // sign follows g = (h1, -h0)
  EXPECT_NEAR(c.details[0].vertical(0, 0), -1.0, 1e-15);
  EXPECT_NEAR(c.details[0].diagonal(0, 0), 0.0, 1e-15);
}

TEST(Wavelet, ConstantHasNoDetail) {
  const WaveletCoeffs c = dwt_analyze(ImageGrid::Constant(32, 32, 9.0), 3);
  EXPECT_LE(c.max_abs_detail(), 1e-12);
}

TEST(Wst, MirrorsCst) {
  const ImageGrid img = random_image(64, 64, 3);
  EXPECT_LE((wst(img, 0.0, 3).result - img).abs().maxCoeff(), 1e-10);
  WaveletCoeffs low = dwt_analyze(img, 3);
  const double t = low.max_abs_detail();
  for (auto& d : low.details) {
    d.horizontal.setZero();
    d.vertical.setZero();
    d.diagonal.setZero();
  }
  EXPECT_LE((wst(img, t, 3).result - dwt_synthesize(low)).abs().maxCoeff(), 1e-10);
  const WaveletCoeffs full = dwt_analyze(img, 3);
  const WaveletThresholdResult r = wst(img, 12.0, 3);
  EXPECT_TRUE((r.kept.approximation == full.approximation).all());
  for (std::size_t j = 0; j < full.details.size(); ++j) {
    EXPECT_LE((full.details[j].diagonal - r.kept.details[j].diagonal).abs().maxCoeff(), 12.0);
    EXPECT_TRUE((r.kept.details[j].vertical.abs() <= full.details[j].vertical.abs()).all());
  }
}

TEST(Wavelet, Errors) {
  EXPECT_THROW(dwt_analyze(ImageGrid::Zero(24, 24), 4), std::invalid_argument);
  EXPECT_THROW(dwt_analyze(ImageGrid::Zero(24, 24), 0), std::invalid_argument);
  EXPECT_THROW(wst(ImageGrid::Zero(16, 16), -1.0, 2), std::invalid_argument);
}

}  // namespace
}  // namespace ctdecomp
