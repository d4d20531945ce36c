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

#include "ctdecomp/wavelet.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>
#include <string>

#include "ctdecomp/contourlet.hpp"
#include "ctdecomp/parallel.hpp"

namespace ctdecomp {
namespace {

const std::array<double, 4> kD4 = [] {
  const double s3 = std::sqrt(3.0);
  const double n = 4.0 * std::sqrt(2.0);
  return std::array<double, 4>{(1 + s3) / n, (3 + s3) / n, (3 - s3) / n, (1 - s3) / n};
}();

const std::array<double, 2> kHaar = {1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0)};

// Quadrature mirror: g[k] = (-1)^k h[L-1-k].
std::vector<double> highpass_of(std::span<const double> h) {
  const std::size_t L = h.size();
  std::vector<double> g(L);
  for (std::size_t k = 0; k < L; ++k) {
    g[k] = (k % 2 == 0 ? 1.0 : -1.0) * h[L - 1 - k];
  }
  return g;
}

// One level along one axis. lo[n] = sum_k h[k] x[2n + k], hi likewise with g.
void split_axis(const ImageGrid& x, std::span<const double> h, const std::vector<double>& g, bool along_rows,
                ImageGrid& lo, ImageGrid& hi) {
  const Eigen::Index N = along_rows ? x.rows() : x.cols();
  const Eigen::Index half = N / 2;
  const Eigen::Index R = along_rows ? half : x.rows();
  const Eigen::Index C = along_rows ? x.cols() : half;
  lo.resize(R, C);
  hi.resize(R, C);
  const auto L = static_cast<Eigen::Index>(h.size());
  parallel_for(0, R, [&](std::ptrdiff_t r0, std::ptrdiff_t r1) {
    for (Eigen::Index r = r0; r < r1; ++r) {
      for (Eigen::Index c = 0; c < C; ++c) {
        const Eigen::Index n = along_rows ? r : c;
        double a = 0.0;
        double d = 0.0;
        for (Eigen::Index k = 0; k < L; ++k) {
          const Eigen::Index m = (2 * n + k) % N;
          const double v = along_rows ? x(m, c) : x(r, m);
          a += h[static_cast<std::size_t>(k)] * v;
          d += g[static_cast<std::size_t>(k)] * v;
        }
        lo(r, c) = a;
        hi(r, c) = d;
      }
    }
  });
}

// Transpose of split_axis: x[m] = sum_n h[m - 2n] lo[n] + g[m - 2n] hi[n].
ImageGrid merge_axis(const ImageGrid& lo, const ImageGrid& hi, std::span<const double> h,
                     const std::vector<double>& g, bool along_rows) {
  const Eigen::Index half = along_rows ? lo.rows() : lo.cols();
  const Eigen::Index N = 2 * half;
  const Eigen::Index R = along_rows ? N : lo.rows();
  const Eigen::Index C = along_rows ? lo.cols() : N;
  ImageGrid x(R, C);
  const auto L = static_cast<Eigen::Index>(h.size());
  parallel_for(0, R, [&](std::ptrdiff_t r0, std::ptrdiff_t r1) {
    for (Eigen::Index r = r0; r < r1; ++r) {
      for (Eigen::Index c = 0; c < C; ++c) {
        const Eigen::Index m = along_rows ? r : c;
        double acc = 0.0;
        // k = m - 2n (mod N) must be an even-offset tap index in [0, L).
        for (Eigen::Index k = m % 2; k < L; k += 2) {
          const Eigen::Index n = (((m - k) / 2) % half + half) % half;
          const double a = along_rows ? lo(n, c) : lo(r, n);
          const double d = along_rows ? hi(n, c) : hi(r, n);
          acc += h[static_cast<std::size_t>(k)] * a + g[static_cast<std::size_t>(k)] * d;
        }
        x(r, c) = acc;
      }
    }
  });
  return x;
}

}  // namespace

std::string_view to_string(WaveletFilter f) {
  switch (f) {
    case WaveletFilter::Daubechies4:
      return "db4";
    case WaveletFilter::Haar:
      return "haar";
  }
  return "unknown";
}

std::span<const double> wavelet_lowpass(WaveletFilter f) {
  switch (f) {
    case WaveletFilter::Daubechies4:
      return kD4;
    case WaveletFilter::Haar:
      return kHaar;
  }
  throw std::invalid_argument("unknown wavelet filter");
}

Eigen::Index WaveletCoeffs::size() const {
  Eigen::Index n = approximation.size();
  for (const auto& d : details) {
    n += d.horizontal.size() + d.vertical.size() + d.diagonal.size();
  }
  return n;
}

double WaveletCoeffs::max_abs_detail() const {
  double m = 0.0;
  for (const auto& d : details) {
    for (const ImageGrid* b : {&d.horizontal, &d.vertical, &d.diagonal}) {
      if (b->size() > 0) {
        m = std::max(m, b->abs().maxCoeff());
      }
    }
  }
  return m;
}

WaveletCoeffs dwt_analyze(const ImageGrid& img, int depth, WaveletFilter filter) {
  if (depth < 1 || depth > 20) {
    throw std::invalid_argument("wavelet depth must be in [1, 20]");
  }
  const Eigen::Index m = Eigen::Index{1} << depth;
  if (img.rows() < m || img.cols() < m || img.rows() % m != 0 || img.cols() % m != 0) {
    throw std::invalid_argument("image " + std::to_string(img.cols()) + "x" + std::to_string(img.rows()) +
                                " not divisible by 2^" + std::to_string(depth));
  }
  const auto h = wavelet_lowpass(filter);
  const auto g = highpass_of(h);
  WaveletCoeffs out;
  out.filter = filter;
  ImageGrid x = img;
  for (int t = 0; t < depth; ++t) {
    ImageGrid lo_c, hi_c;
    split_axis(x, h, g, false, lo_c, hi_c);
    WaveletDetail det;
    ImageGrid ll;
    split_axis(lo_c, h, g, true, ll, det.horizontal);
    split_axis(hi_c, h, g, true, det.vertical, det.diagonal);
    out.details.push_back(std::move(det));
    x = std::move(ll);
  }
  out.approximation = std::move(x);
  return out;
}

ImageGrid dwt_synthesize(const WaveletCoeffs& coeffs) {
  if (coeffs.details.empty()) {
    throw std::invalid_argument("wavelet coefficients have no detail levels");
  }
  const auto h = wavelet_lowpass(coeffs.filter);
  const auto g = highpass_of(h);
  ImageGrid x = coeffs.approximation;
  for (int t = coeffs.depth() - 1; t >= 0; --t) {
    const auto& d = coeffs.details[static_cast<std::size_t>(t)];
    for (const ImageGrid* b : {&d.horizontal, &d.vertical, &d.diagonal}) {
      if (b->rows() != x.rows() || b->cols() != x.cols()) {
        throw std::invalid_argument("inconsistent wavelet band sizes at level " + std::to_string(t));
      }
    }
    const ImageGrid lo_c = merge_axis(x, d.horizontal, h, g, true);
    const ImageGrid hi_c = merge_axis(d.vertical, d.diagonal, h, g, true);
    x = merge_axis(lo_c, hi_c, h, g, false);
  }
  return x;
}

WaveletThresholdResult wst(const ImageGrid& img, double threshold, int depth, WaveletFilter filter) {
  if (!(threshold >= 0.0)) {
    throw std::invalid_argument("threshold must be nonnegative");
  }
  WaveletThresholdResult out;
  out.kept = dwt_analyze(img, depth, filter);
  const auto shrink = [threshold](double c) { return soft_threshold(c, threshold); };
  for (auto& d : out.kept.details) {
    d.horizontal = d.horizontal.unaryExpr(shrink);
    d.vertical = d.vertical.unaryExpr(shrink);
    d.diagonal = d.diagonal.unaryExpr(shrink);
  }
  out.result = dwt_synthesize(out.kept);
  return out;
}

}  // namespace ctdecomp
