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

#include <numbers>
#include <numeric>

#include "ctdecomp/dfb.hpp"
#include "ctdecomp/parallel.hpp"
#include "test_util.hpp"

namespace ctdecomp {
namespace {

using testing::random_image;

double band_energy(const DirectionalSubbands& s) {
  double e = 0.0;
  for (const auto& b : s.bands) e += b.square().sum();
  return e;
}

TEST(Dfb, ZeroLevelsIsIdentity) {
  const ImageGrid img = random_image(16, 16, 1);
  const DirectionalSubbands s = dfb_analyze(img, 0);
  ASSERT_EQ(s.bands.size(), 1u);
  EXPECT_TRUE((s.bands[0] == img).all());
  EXPECT_TRUE((dfb_synthesize(s, 16, 16) == img).all());
}

TEST(Dfb, PerfectReconstructionAndCriticalSampling) {
  for (int l = 0; l <= kMaxDfbLevels; ++l) {
    const ImageGrid img = random_image(64, 64, 20 + l);
    const DirectionalSubbands s = dfb_analyze(img, l);
    ASSERT_EQ(s.bands.size(), std::size_t{1} << l);
    EXPECT_EQ(s.total_samples(), 4096);
    EXPECT_LE((dfb_synthesize(s, 64, 64) - img).abs().maxCoeff(), 1e-10) << "levels " << l;
  }
}

TEST(Dfb, AllPrototypes) {
  const ImageGrid img = random_image(32, 32, 3);
  for (const DfbFilter f : {DfbFilter::Pkva12, DfbFilter::Pkva8, DfbFilter::Pkva6}) {
    const DirectionalSubbands s = dfb_analyze(img, 3, f);
    EXPECT_LE((dfb_synthesize(s, 32, 32) - img).abs().maxCoeff(), 1e-10) << to_string(f);
  }
}

TEST(Dfb, RectangularInputs) {
  const ImageGrid img = random_image(32, 64, 4);
  EXPECT_LE((dfb_synthesize(dfb_analyze(img, 4), 32, 64) - img).abs().maxCoeff(), 1e-10);
}

TEST(Dfb, ZeroAndLinearity) {
  const DirectionalSubbands z = dfb_analyze(ImageGrid::Zero(32, 32), 3);
  EXPECT_EQ(dfb_synthesize(z, 32, 32).abs().maxCoeff(), 0.0);
  DirectionalSubbands a = dfb_analyze(random_image(32, 32, 5), 3);
  const DirectionalSubbands b = dfb_analyze(random_image(32, 32, 6), 3);
  DirectionalSubbands mix = a;
  for (std::size_t k = 0; k < a.bands.size(); ++k) mix.bands[k] = 3.0 * a.bands[k] + b.bands[k];
  const ImageGrid lhs = dfb_synthesize(mix, 32, 32);
  const ImageGrid rhs = 3.0 * dfb_synthesize(a, 32, 32) + dfb_synthesize(b, 32, 32);
  EXPECT_LE((lhs - rhs).abs().maxCoeff(), 1e-10);
}

TEST(Dfb, EnergyRatio) {
  for (int l = 1; l <= kMaxDfbLevels; ++l) {
    const ImageGrid img = random_image(64, 64, 30 + l, -1, 1);
    const double ratio = band_energy(dfb_analyze(img, l)) / img.square().sum();
    RecordProperty("energy_ratio_l" + std::to_string(l), std::to_string(ratio));
    EXPECT_GE(ratio, 0.95);
    EXPECT_LE(ratio, 1.05);
  }
}

TEST(Dfb, BandGainsAreNormalisedRowNorms) {
  // With unit-norm equivalent filters, white noise keeps its variance in
  // every band.
  const ImageGrid img = random_image(128, 128, 9, -1, 1);
  const double var = img.square().mean();
  const DirectionalSubbands s = dfb_analyze(img, 3);
  for (const auto& b : s.bands) {
    EXPECT_NEAR(b.square().mean() / var, 1.0, 0.1);
  }
}

// Frequency (w_row, w_col) at the angular centre of band k, following the band
// order documented in dfb.hpp.
std::pair<double, double> wedge_centre(int levels, int k) {
  const int half = 1 << (levels - 1);
  const double width = 2.0 / half;
  const double r = 0.35 * std::numbers::pi;
  if (k < half) {
    const double slope = -1.0 + (k + 0.5) * width;  // w_col / w_row
    return {r, r * slope};
  }
  const double slope = 1.0 - (k - half + 0.5) * width;  // w_row / w_col
  return {r * slope, r};
}

TEST(Dfb, OrientedSinusoidConcentrates) {
  const int l = 3;
  const Eigen::Index n = 128;
  for (int k0 = 0; k0 < (1 << l); ++k0) {
    const auto [wr, wc] = wedge_centre(l, k0);
    // Snap to the DFT grid so the sinusoid is exactly periodic.
    const double sr = std::round(wr * n / (2 * std::numbers::pi)) * 2 * std::numbers::pi / n;
    const double sc = std::round(wc * n / (2 * std::numbers::pi)) * 2 * std::numbers::pi / n;
    ImageGrid img(n, n);
    for (Eigen::Index r = 0; r < n; ++r)
      for (Eigen::Index c = 0; c < n; ++c) img(r, c) = std::cos(sr * r + sc * c);
    const DirectionalSubbands s = dfb_analyze(img, l);
    std::vector<double> e;
    for (const auto& b : s.bands) e.push_back(b.square().sum());
    const double total = std::accumulate(e.begin(), e.end(), 0.0);
    const std::size_t nb = e.size();
    const auto k = static_cast<std::size_t>(k0);
    const double best = e[k] + std::max(e[(k + 1) % nb], e[(k + nb - 1) % nb]);
    EXPECT_GE(best / total, 0.6) << "band " << k0;
  }
}

TEST(Dfb, LatticesTileTheGrid) {
  const auto lats = dfb_lattices(32, 32, 4);
  ASSERT_EQ(lats.size(), 16u);
  for (const auto& L : lats) {
    EXPECT_EQ(std::abs(L.basis[0][0] * L.basis[1][1] - L.basis[0][1] * L.basis[1][0]), 16);
  }
}

TEST(Dfb, Errors) {
  EXPECT_THROW(dfb_analyze(ImageGrid::Zero(32, 32), 6), std::invalid_argument);
  EXPECT_THROW(dfb_analyze(ImageGrid::Zero(32, 32), -1), std::invalid_argument);
  EXPECT_THROW(dfb_analyze(ImageGrid::Zero(24, 24), 4), std::invalid_argument);
  EXPECT_FALSE(dfb_compatible(6, 8, 1));
  EXPECT_TRUE(dfb_compatible(4, 8, 1));
  EXPECT_TRUE(dfb_compatible(3, 5, 0));
  DirectionalSubbands s = dfb_analyze(ImageGrid::Zero(32, 32), 2);
  s.bands.pop_back();
  EXPECT_THROW(dfb_synthesize(s, 32, 32), std::invalid_argument);
}

TEST(Dfb, IndependentOfThreadCount) {
  const ImageGrid img = random_image(64, 64, 11);
  set_num_threads(1);
  const DirectionalSubbands a = dfb_analyze(img, 4);
  set_num_threads(3);
  const DirectionalSubbands b = dfb_analyze(img, 4);
  set_num_threads(1);
  for (std::size_t k = 0; k < a.bands.size(); ++k) EXPECT_TRUE((a.bands[k] == b.bands[k]).all());
}

}  // namespace
}  // namespace ctdecomp
