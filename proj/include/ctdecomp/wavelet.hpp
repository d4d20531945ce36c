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

#ifndef CTDECOMP_WAVELET_HPP
#define CTDECOMP_WAVELET_HPP

#include <span>
#include <string_view>
#include <vector>

#include "ctdecomp/image.hpp"

namespace ctdecomp {

enum class WaveletFilter { Daubechies4, Haar };

std::string_view to_string(WaveletFilter f);

/// Orthonormal lowpass taps (sum sqrt(2), unit energy).
std::span<const double> wavelet_lowpass(WaveletFilter f);

struct WaveletDetail {
  ImageGrid horizontal;  // lowpass across columns, highpass across rows
  ImageGrid vertical;    // highpass across columns, lowpass across rows
  ImageGrid diagonal;
};

struct WaveletCoeffs {
  ImageGrid approximation;
  std::vector<WaveletDetail> details;  // finest first
  WaveletFilter filter = WaveletFilter::Daubechies4;

  int depth() const { return static_cast<int>(details.size()); }
  Eigen::Index size() const;
  double max_abs_detail() const;
};

/// Separable periodic orthogonal DWT. Throws std::invalid_argument unless
/// depth >= 1 and both sides are divisible by 2^depth.
WaveletCoeffs dwt_analyze(const ImageGrid& img, int depth, WaveletFilter filter = WaveletFilter::Daubechies4);

ImageGrid dwt_synthesize(const WaveletCoeffs& coeffs);

struct WaveletThresholdResult {
  ImageGrid result;
  WaveletCoeffs kept;
};

/// Soft-thresholds all detail coefficients; the approximation is untouched.
WaveletThresholdResult wst(const ImageGrid& img, double threshold, int depth,
                           WaveletFilter filter = WaveletFilter::Daubechies4);

}  // namespace ctdecomp

#endif  // CTDECOMP_WAVELET_HPP
