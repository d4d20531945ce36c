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

#include "ctdecomp/contourlet.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cstring>
#include <istream>
#include <numeric>
#include <ostream>
#include <stdexcept>
#include <string>

namespace ctdecomp {
namespace {

int levels_at(std::span<const int> level_spec, std::size_t scale) {
  return level_spec[level_spec.size() - 1 - scale];
}

// ||x||_p computed as m * (sum (|x|/m)^p)^(1/p) so large p does not overflow.
// Fixed summation order keeps results reproducible.
struct PowerSum {
  double p;
  double max = 0.0;
  std::vector<const ImageGrid*> parts;

  double norm() const {
    if (max == 0.0) {
      return 0.0;
    }
    if (std::isinf(p)) {
      return max;
    }
    double acc = 0.0;
    for (const ImageGrid* a : parts) {
      for (Eigen::Index i = 0; i < a->size(); ++i) {
        acc += std::pow(std::abs(a->data()[i]) / max, p);
      }
    }
    return max * std::pow(acc, 1.0 / p);
  }

  void add(const ImageGrid& a) {
    parts.push_back(&a);
    if (a.size() > 0) {
      max = std::max(max, a.abs().maxCoeff());
    }
  }
};

void put_u32(std::ostream& out, std::uint32_t v) {
  std::array<unsigned char, 4> b{};
  for (int i = 0; i < 4; ++i) {
    b[static_cast<std::size_t>(i)] = static_cast<unsigned char>(v >> (8 * i));
  }
  out.write(reinterpret_cast<const char*>(b.data()), 4);
}

std::uint32_t get_u32(std::istream& in) {
  std::array<unsigned char, 4> b{};
  if (!in.read(reinterpret_cast<char*>(b.data()), 4)) {
    throw IoError("coefficient dump: unexpected end of data");
  }
  std::uint32_t v = 0;
  for (int i = 3; i >= 0; --i) {
    v = (v << 8) | b[static_cast<std::size_t>(i)];
  }
  return v;
}

void put_band(std::ostream& out, const ImageGrid& band) {
  put_u32(out, static_cast<std::uint32_t>(band.cols()));
  put_u32(out, static_cast<std::uint32_t>(band.rows()));
  for (Eigen::Index i = 0; i < band.size(); ++i) {
    std::uint64_t bits = std::bit_cast<std::uint64_t>(band.data()[i]);
    std::array<unsigned char, 8> b{};
    for (int k = 0; k < 8; ++k) {
      b[static_cast<std::size_t>(k)] = static_cast<unsigned char>(bits >> (8 * k));
    }
    out.write(reinterpret_cast<const char*>(b.data()), 8);
  }
}

ImageGrid get_band(std::istream& in, Eigen::Index rows, Eigen::Index cols) {
  const std::uint32_t w = get_u32(in);
  const std::uint32_t h = get_u32(in);
  if (w != cols || h != rows) {
    throw IoError("coefficient dump: band is " + std::to_string(w) + "x" + std::to_string(h) + ", expected " +
                  std::to_string(cols) + "x" + std::to_string(rows));
  }
  ImageGrid band(rows, cols);
  for (Eigen::Index i = 0; i < band.size(); ++i) {
    std::array<unsigned char, 8> b{};
    if (!in.read(reinterpret_cast<char*>(b.data()), 8)) {
      throw IoError("coefficient dump: unexpected end of data");
    }
    std::uint64_t bits = 0;
    for (int k = 7; k >= 0; --k) {
      bits = (bits << 8) | b[static_cast<std::size_t>(k)];
    }
    band.data()[i] = std::bit_cast<double>(bits);
  }
  return band;
}

}  // namespace

Eigen::Index ContourletCoeffs::size() const {
  Eigen::Index n = lowpass.size();
  for (const auto& s : scales) {
    n += s.total_samples();
  }
  return n;
}

double ContourletCoeffs::max_abs_directional() const {
  double m = 0.0;
  for (const auto& s : scales) {
    for (const auto& b : s.bands) {
      if (b.size() > 0) {
        m = std::max(m, b.abs().maxCoeff());
      }
    }
  }
  return m;
}

std::string validate_level_spec(Eigen::Index rows, Eigen::Index cols, std::span<const int> level_spec) {
  if (level_spec.empty()) {
    return "level spec must have at least one scale";
  }
  for (const int l : level_spec) {
    if (l < 0 || l > kMaxDfbLevels) {
      return "directional levels must be in [0, " + std::to_string(kMaxDfbLevels) + "], got " + std::to_string(l);
    }
  }
  const auto depth = level_spec.size();
  if (depth > 20) {
    return "too many pyramid scales";
  }
  const Eigen::Index m = Eigen::Index{1} << depth;
  if (rows < m || cols < m || rows % m != 0 || cols % m != 0) {
    return "image " + std::to_string(cols) + "x" + std::to_string(rows) + " is not divisible by 2^" +
           std::to_string(depth) + " for a " + std::to_string(depth) + "-scale pyramid";
  }
  for (std::size_t t = 0; t < depth; ++t) {
    const int l = levels_at(level_spec, t);
    if (!dfb_compatible(rows >> t, cols >> t, l)) {
      return "scale " + std::to_string(t) + " (" + std::to_string(cols >> t) + "x" + std::to_string(rows >> t) +
             ") cannot be split into 2^" + std::to_string(l) + " directions";
    }
  }
  return {};
}

Eigen::Index required_multiple(std::span<const int> level_spec) {
  Eigen::Index m = Eigen::Index{1} << level_spec.size();
  for (std::size_t t = 0; t < level_spec.size(); ++t) {
    const int l = levels_at(level_spec, t);
    if (l > 0) {
      m = std::max(m, Eigen::Index{1} << (t + static_cast<std::size_t>(std::max(l, 2))));
    }
  }
  return m;
}

ContourletCoeffs ct_analyze(const ImageGrid& img, std::span<const int> level_spec, const ContourletFilters& filters) {
  if (const std::string why = validate_level_spec(img.rows(), img.cols(), level_spec); !why.empty()) {
    throw std::invalid_argument(why);
  }
  PyramidLevels lp = lp_analyze(img, static_cast<int>(level_spec.size()), filters.pyramid);
  ContourletCoeffs out;
  out.rows = img.rows();
  out.cols = img.cols();
  out.filters = filters;
  out.level_spec.assign(level_spec.begin(), level_spec.end());
  out.lowpass = std::move(lp.lowpass);
  out.scales.reserve(level_spec.size());
  for (std::size_t t = 0; t < level_spec.size(); ++t) {
    out.scales.push_back(dfb_analyze(lp.bandpass[t], levels_at(level_spec, t), filters.directional));
  }
  return out;
}

ImageGrid ct_synthesize(const ContourletCoeffs& coeffs) {
  const std::size_t depth = coeffs.level_spec.size();
  if (depth == 0 || coeffs.scales.size() != depth) {
    throw std::invalid_argument("contourlet coefficients: scale count does not match level spec");
  }
  if (coeffs.lowpass.rows() << depth != coeffs.rows || coeffs.lowpass.cols() << depth != coeffs.cols) {
    throw std::invalid_argument("contourlet coefficients: lowpass size does not match source shape");
  }
  PyramidLevels lp;
  lp.filter = coeffs.filters.pyramid;
  lp.lowpass = coeffs.lowpass;
  lp.bandpass.reserve(depth);
  for (std::size_t t = 0; t < depth; ++t) {
    const auto& s = coeffs.scales[t];
    if (s.levels != levels_at(coeffs.level_spec, t)) {
      throw std::invalid_argument("contourlet coefficients: scale " + std::to_string(t) +
                                  " has the wrong number of directional levels");
    }
    lp.bandpass.push_back(dfb_synthesize(s, coeffs.rows >> t, coeffs.cols >> t));
  }
  return lp_synthesize(lp);
}

ThresholdResult cst(const ImageGrid& img, double threshold, std::span<const int> level_spec,
                    const ContourletFilters& filters) {
  if (!(threshold >= 0.0)) {
    throw std::invalid_argument("threshold must be nonnegative");
  }
  ThresholdResult out;
  out.kept = ct_analyze(img, level_spec, filters);
  out.kept.transform_directional([threshold](double c) { return soft_threshold(c, threshold); });
  out.result = ct_synthesize(out.kept);
  return out;
}

double co_norm(const ContourletCoeffs& coeffs, const CoNormSpec& spec) {
  if (!(spec.p > 0.0) || !(spec.q > 0.0)) {
    throw std::invalid_argument("co_norm: p and q must be in (0, inf]");
  }
  if (coeffs.scales.empty() && coeffs.lowpass.size() == 0) {
    throw std::invalid_argument("co_norm: empty coefficient structure");
  }
  const double inv_p = std::isinf(spec.p) ? 0.0 : 1.0 / spec.p;
  // Per scale: 2^(j (d/2 - 1/p + s)) * [sum 2^(j p/2) |beta|^p]^(1/p)
  //          = 2^(j (d/2 - 1/p + s + 1/2)) * ||beta_j||_p.
  std::vector<double> terms;
  terms.reserve(coeffs.scales.size());
  for (std::size_t t = 0; t < coeffs.scales.size(); ++t) {
    const double j = static_cast<double>(spec.finest_scale) - static_cast<double>(t);
    PowerSum ps{spec.p, 0.0, {}};
    for (const auto& b : coeffs.scales[t].bands) {
      ps.add(b);
    }
    const double nrm = ps.norm();
    terms.push_back(nrm == 0.0 ? 0.0 : std::exp2(j * (CoNormSpec::d / 2.0 - inv_p + spec.s + 0.5)) * nrm);
  }
  double scale_part = 0.0;
  const double tmax = terms.empty() ? 0.0 : *std::max_element(terms.begin(), terms.end());
  if (tmax > 0.0) {
    if (std::isinf(spec.q)) {
      scale_part = tmax;
    } else {
      double acc = 0.0;
      for (const double v : terms) {
        acc += std::pow(v / tmax, spec.q);
      }
      scale_part = tmax * std::pow(acc, 1.0 / spec.q);
    }
  }
  if (spec.homogeneous) {
    return scale_part;
  }
  PowerSum low{spec.p, 0.0, {}};
  low.add(coeffs.lowpass);
  return low.norm() + scale_part;
}

void write_coeffs(const ContourletCoeffs& coeffs, std::ostream& out) {
  out.write("CTC1", 4);
  put_u32(out, static_cast<std::uint32_t>(coeffs.cols));
  put_u32(out, static_cast<std::uint32_t>(coeffs.rows));
  put_u32(out, static_cast<std::uint32_t>(coeffs.scales.size()));
  for (const auto& s : coeffs.scales) {
    put_u32(out, static_cast<std::uint32_t>(s.levels));
  }
  for (const auto& s : coeffs.scales) {
    for (const auto& b : s.bands) {
      put_band(out, b);
    }
  }
  put_band(out, coeffs.lowpass);
  if (!out) {
    throw IoError("coefficient dump: write failed");
  }
}

ContourletCoeffs read_coeffs(std::istream& in) {
  std::array<char, 4> magic{};
  if (!in.read(magic.data(), 4)) {
    throw IoError("coefficient dump: unexpected end of data");
  }
  if (std::memcmp(magic.data(), "CTC1", 4) != 0) {
    throw IoError("coefficient dump: bad magic");
  }
  ContourletCoeffs c;
  c.cols = get_u32(in);
  c.rows = get_u32(in);
  const std::uint32_t nscales = get_u32(in);
  if (nscales == 0 || nscales > 20) {
    throw IoError("coefficient dump: bad scale count " + std::to_string(nscales));
  }
  std::vector<int> fine_first(nscales);
  for (auto& l : fine_first) {
    l = static_cast<int>(get_u32(in));
  }
  c.level_spec.assign(fine_first.rbegin(), fine_first.rend());
  if (const std::string why = validate_level_spec(c.rows, c.cols, c.level_spec); !why.empty()) {
    throw IoError("coefficient dump: " + why);
  }
  for (std::uint32_t t = 0; t < nscales; ++t) {
    DirectionalSubbands s;
    s.levels = fine_first[t];
    s.filter = c.filters.directional;
    for (const auto& lat : dfb_lattices(c.rows >> t, c.cols >> t, s.levels)) {
      // Band grid rows = h11, cols = h22 of the Hermite form; recover them from
      // the lattice determinant and the gcd of the first basis row.
      const std::int64_t a = lat.basis[0][0];
      const std::int64_t b = lat.basis[0][1];
      const std::int64_t h11 = std::gcd(a, b);
      const std::int64_t det = std::abs(lat.basis[0][0] * lat.basis[1][1] - lat.basis[0][1] * lat.basis[1][0]);
      const Eigen::Index br = (c.rows >> t) / h11;
      const Eigen::Index bc = (c.cols >> t) / (det / h11);
      s.bands.push_back(get_band(in, br, bc));
    }
    c.scales.push_back(std::move(s));
  }
  c.lowpass = get_band(in, c.rows >> nscales, c.cols >> nscales);
  return c;
}

}  // namespace ctdecomp
