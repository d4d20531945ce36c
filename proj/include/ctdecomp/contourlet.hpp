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

#ifndef CTDECOMP_CONTOURLET_HPP
#define CTDECOMP_CONTOURLET_HPP

#include <algorithm>
#include <cmath>
#include <iosfwd>
#include <limits>
#include <span>
#include <vector>

#include "ctdecomp/dfb.hpp"
#include "ctdecomp/image.hpp"
#include "ctdecomp/pyramid.hpp"

namespace ctdecomp {

struct ContourletFilters {
  LpFilter pyramid = LpFilter::Cdf97;
  DfbFilter directional = DfbFilter::Pkva12;
};

/// Contourlet coefficients: a Laplacian pyramid whose bandpass levels are
/// each split by a directional filter bank.
///
/// `level_spec` lists the directional levels from the coarsest scale to the
/// finest, so {2, 3, 4} gives 4 directions at the coarsest bandpass scale and
/// 16 at the finest. `scales` is stored finest first, so scales[t] has
/// level_spec[level_spec.size() - 1 - t] tree levels.
struct ContourletCoeffs {
  ImageGrid lowpass;
  std::vector<DirectionalSubbands> scales;
  std::vector<int> level_spec;
  Eigen::Index rows = 0;
  Eigen::Index cols = 0;
  ContourletFilters filters;

  /// Total number of coefficients, lowpass included.
  Eigen::Index size() const;

  /// Largest |beta| over all directional bands (0 when there are none).
  double max_abs_directional() const;

  /// Applies f to every directional coefficient in place.
  template <typename F>
  void transform_directional(F&& f) {
    for (auto& scale : scales) {
      for (auto& band : scale.bands) {
        band = band.unaryExpr(f);
      }
    }
  }
};

/// Checks a level spec against an image size: one entry per pyramid scale,
/// each in [0, 5], and every bandpass scale compatible with its filter bank.
/// Returns an empty string when valid, otherwise the reason.
std::string validate_level_spec(Eigen::Index rows, Eigen::Index cols, std::span<const int> level_spec);

/// Smallest m such that any image whose sides are multiples of m is
/// compatible with `level_spec`.
Eigen::Index required_multiple(std::span<const int> level_spec);

ContourletCoeffs ct_analyze(const ImageGrid& img, std::span<const int> level_spec, const ContourletFilters& filters = {});

ImageGrid ct_synthesize(const ContourletCoeffs& coeffs);

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// sign(c) max(|c| - t, 0). The magnitude is nudged by whole ulps of |c| when
/// needed so that |c - soft_threshold(c, t)| <= t also holds in floating point.
inline double soft_threshold(double c, double t) {
  const double a = std::abs(c);
  double m = a - t;
  if (!(m > 0.0)) {
    return 0.0;
  }
  const double step = std::nextafter(a, kInfinity) - a;
  while (a - m > t) {
    m = std::min(a, m + step);
  }
  return std::copysign(m, c);
}

struct ThresholdResult {
  ImageGrid result;
  ContourletCoeffs kept;
};

/// Soft-thresholds every directional coefficient by `threshold` and
/// synthesizes; the lowpass band is left untouched.
ThresholdResult cst(const ImageGrid& img, double threshold, std::span<const int> level_spec,
                    const ContourletFilters& filters = {});


/// Parameters of the contourlet smoothness norms. p and q may be kInfinity,
/// evaluated as suprema. Scale indices run finest_scale, finest_scale - 1, ...
/// from the finest bandpass level towards the coarsest.
struct CoNormSpec {
  double s = 0.0;
  double p = 1.0;
  double q = 1.0;
  bool homogeneous = true;
  int finest_scale = -1;
  static constexpr int d = 2;
};

/// Weighted sequence norm of the coefficients:
///   [sum_n |alpha_n|^p]^(1/p)   (inhomogeneous only)
///   + { sum_j 2^(j (d/2 - 1/p + s) q) [ sum_{k,n} 2^(j p / 2) |beta_{j,k,n}|^p ]^(q/p) }^(1/q)
double co_norm(const ContourletCoeffs& coeffs, const CoNormSpec& spec);

/// Binary coefficient dump: "CTC1", then little-endian u32 width, height,
/// scale count and the tree levels of each scale (finest first), then for each
/// band in order u32 width, u32 height and float64 samples (row-major), with
/// the lowpass band last. Filters are not recorded; readers assume defaults.
void write_coeffs(const ContourletCoeffs& coeffs, std::ostream& out);
ContourletCoeffs read_coeffs(std::istream& in);

}  // namespace ctdecomp

#endif  // CTDECOMP_CONTOURLET_HPP
