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

#ifndef CTDECOMP_PYRAMID_HPP
#define CTDECOMP_PYRAMID_HPP

#include <string_view>
#include <vector>

#include "ctdecomp/image.hpp"

namespace ctdecomp {

enum class LpFilter {
  Cdf97,  // CDF 9/7 biorthogonal pair, 9-tap analysis / 7-tap synthesis
};

std::string_view to_string(LpFilter f);

/// Symmetric odd-length 1-D lowpass taps, centred: taps[k + half] is the
/// coefficient at offset k. Normalised so that each filter sums to sqrt(2).
struct LowpassPair {
  std::vector<double> analysis;
  std::vector<double> synthesis;
};

const LowpassPair& lowpass_pair(LpFilter f);

/// Laplacian pyramid. bandpass[0] is the finest level and has the input's
/// size; bandpass[t] has the size of the lowpass image after t reductions.
struct PyramidLevels {
  ImageGrid lowpass;
  std::vector<ImageGrid> bandpass;
  LpFilter filter = LpFilter::Cdf97;

  int depth() const { return static_cast<int>(bandpass.size()); }
};

/// Filters with the analysis lowpass and keeps even samples in both directions
/// (periodic extension).
ImageGrid reduce(const ImageGrid& x, LpFilter f = LpFilter::Cdf97);

/// Zero-insertion upsampling by 2 followed by the synthesis lowpass.
ImageGrid expand(const ImageGrid& c, LpFilter f = LpFilter::Cdf97);

/// Throws std::invalid_argument unless both sides are divisible by 2^depth.
PyramidLevels lp_analyze(const ImageGrid& img, int depth, LpFilter f = LpFilter::Cdf97);

/// Dual-frame reconstruction x = expand(c - reduce(d)) + d at every level.
/// Exact because reduce(expand(c)) == c for biorthogonal pairs.
ImageGrid lp_synthesize(const PyramidLevels& levels);

}  // namespace ctdecomp

#endif  // CTDECOMP_PYRAMID_HPP
