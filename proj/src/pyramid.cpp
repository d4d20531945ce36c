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

#include "ctdecomp/pyramid.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "ctdecomp/parallel.hpp"

namespace ctdecomp {
namespace {

using Poly = std::vector<long double>;

Poly convolve(const Poly& a, const Poly& b) {
  Poly out(a.size() + b.size() - 1, 0.0L);
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < b.size(); ++j) {
      out[i + j] += a[i] * b[j];
    }
  }
  return out;
}

// Taps of sum_k coeffs[k] * y^k with y = sin^2(w/2) = (2 - z - 1/z) / 4.
Poly taps_from_y_poly(const Poly& coeffs) {
  const Poly y = {-0.25L, 0.5L, -0.25L};
  Poly power = {1.0L};
  Poly out = {0.0L};
  for (const long double c : coeffs) {
    // Centre-align the accumulated result with the current power.
    Poly grown(power.size(), 0.0L);
    const std::size_t shift = (power.size() - out.size()) / 2;
    for (std::size_t i = 0; i < out.size(); ++i) {
      grown[i + shift] = out[i];
    }
    for (std::size_t i = 0; i < power.size(); ++i) {
      grown[i] += c * power[i];
    }
    out = grown;
    power = convolve(power, y);
  }
  return out;
}

// The 9/7 pair splits the degree-7 Daubechies halfband
// (1-y)^4 (1 + 4y + 10y^2 + 20y^3) so that each side keeps (1-y)^2 and the
// cubic is divided at its real root.
LowpassPair make_cdf97() {
  long double r = -0.3L;
  for (int it = 0; it < 100; ++it) {
    const long double f = 1.0L + r * (4.0L + r * (10.0L + 20.0L * r));
    const long double df = 4.0L + r * (20.0L + 60.0L * r);
    r -= f / df;
  }
  const long double b = 4.0L + 1.0L / r;
  const long double a = 10.0L + b / r;
  const Poly one_minus_y_sq = {1.0L, -2.0L, 1.0L};
  const Poly linear = {1.0L, -1.0L / r};
  const Poly quadratic = {1.0L, b, a};

  const auto finish = [](const Poly& y_poly) {
    const Poly t = taps_from_y_poly(y_poly);
    std::vector<double> out(t.size());
    const long double s = std::sqrt(2.0L);
    for (std::size_t i = 0; i < t.size(); ++i) {
      out[i] = static_cast<double>(s * t[i]);
    }
    return out;
  };
  return {finish(convolve(one_minus_y_sq, quadratic)), finish(convolve(one_minus_y_sq, linear))};
}

Eigen::Index wrap(Eigen::Index i, Eigen::Index n) {
  i %= n;
  return i < 0 ? i + n : i;
}

// out[a] = sum_k h[k] x[2a - k] along one axis (periodic).
ImageGrid filter_down(const ImageGrid& x, const std::vector<double>& h, bool along_rows) {
  const Eigen::Index half = static_cast<Eigen::Index>(h.size() / 2);
  const Eigen::Index rows = along_rows ? x.rows() / 2 : x.rows();
  const Eigen::Index cols = along_rows ? x.cols() : x.cols() / 2;
  ImageGrid out(rows, cols);
  parallel_for(0, rows, [&](std::ptrdiff_t r0, std::ptrdiff_t r1) {
    for (Eigen::Index r = r0; r < r1; ++r) {
      for (Eigen::Index c = 0; c < cols; ++c) {
        double acc = 0.0;
        for (Eigen::Index k = -half; k <= half; ++k) {
          const double tap = h[static_cast<std::size_t>(k + half)];
          acc += along_rows ? tap * x(wrap(2 * r - k, x.rows()), c) : tap * x(r, wrap(2 * c - k, x.cols()));
        }
        out(r, c) = acc;
      }
    }
  });
  return out;
}

// out[i] = sum_a g[i - 2a] c[a] along one axis (periodic).
ImageGrid up_filter(const ImageGrid& c, const std::vector<double>& g, bool along_rows) {
  const Eigen::Index half = static_cast<Eigen::Index>(g.size() / 2);
  const Eigen::Index rows = along_rows ? c.rows() * 2 : c.rows();
  const Eigen::Index cols = along_rows ? c.cols() : c.cols() * 2;
  ImageGrid out(rows, cols);
  parallel_for(0, rows, [&](std::ptrdiff_t r0, std::ptrdiff_t r1) {
    for (Eigen::Index r = r0; r < r1; ++r) {
      for (Eigen::Index col = 0; col < cols; ++col) {
        const Eigen::Index i = along_rows ? r : col;
        double acc = 0.0;
        for (Eigen::Index k = -half; k <= half; ++k) {
          const Eigen::Index m = i - k;
          if ((m & 1) != 0) {
            continue;
          }
          const double tap = g[static_cast<std::size_t>(k + half)];
          acc += along_rows ? tap * c(wrap(m / 2, c.rows()), col) : tap * c(r, wrap(m / 2, c.cols()));
        }
        out(r, col) = acc;
      }
    }
  });
  return out;
}

}  // namespace

std::string_view to_string(LpFilter f) {
  switch (f) {
    case LpFilter::Cdf97:
      return "9-7";
  }
  return "unknown";
}

const LowpassPair& lowpass_pair(LpFilter f) {
  switch (f) {
    case LpFilter::Cdf97: {
      static const LowpassPair pair = make_cdf97();
      return pair;
    }
  }
  throw std::invalid_argument("unknown pyramid filter");
}

ImageGrid reduce(const ImageGrid& x, LpFilter f) {
  const auto& h = lowpass_pair(f).analysis;
  return filter_down(filter_down(x, h, false), h, true);
}

ImageGrid expand(const ImageGrid& c, LpFilter f) {
  const auto& g = lowpass_pair(f).synthesis;
  return up_filter(up_filter(c, g, true), g, false);
}

PyramidLevels lp_analyze(const ImageGrid& img, int depth, LpFilter f) {
  if (depth < 1) {
    throw std::invalid_argument("pyramid depth must be at least 1");
  }
  const Eigen::Index m = Eigen::Index{1} << depth;
  if (img.rows() % m != 0 || img.cols() % m != 0) {
    throw std::invalid_argument("image dimensions " + std::to_string(img.cols()) + "x" +
                                std::to_string(img.rows()) + " not divisible by 2^" + std::to_string(depth));
  }
  PyramidLevels out;
  out.filter = f;
  ImageGrid x = img;
  for (int t = 0; t < depth; ++t) {
    ImageGrid c = reduce(x, f);
    out.bandpass.push_back(x - expand(c, f));
    x = std::move(c);
  }
  out.lowpass = std::move(x);
  return out;
}

ImageGrid lp_synthesize(const PyramidLevels& levels) {
  if (levels.bandpass.empty()) {
    throw std::invalid_argument("pyramid has no bandpass levels");
  }
  ImageGrid x = levels.lowpass;
  for (int t = levels.depth() - 1; t >= 0; --t) {
    const ImageGrid& d = levels.bandpass[static_cast<std::size_t>(t)];
    if (d.rows() != 2 * x.rows() || d.cols() != 2 * x.cols()) {
      throw std::invalid_argument("inconsistent pyramid level dimensions at level " + std::to_string(t));
    }
    x = expand(x - reduce(d, levels.filter), levels.filter) + d;
  }
  return x;
}

}  // namespace ctdecomp
