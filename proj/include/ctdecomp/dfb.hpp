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

#ifndef CTDECOMP_DFB_HPP
#define CTDECOMP_DFB_HPP

#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "ctdecomp/image.hpp"

namespace ctdecomp {

/// Half-sample interpolators used as the ladder prediction filter of each
/// quincunx split (Phoong-Kim-Vaidyanathan-Ansari family).
enum class DfbFilter { Pkva12, Pkva8, Pkva6 };

std::string_view to_string(DfbFilter f);

/// One side of the symmetric even-length prototype: v[0] is the tap next to
/// the interpolation point.
std::span<const double> ladder_prototype(DfbFilter f);

inline constexpr int kMaxDfbLevels = 5;

/// Output of an l-level directional filter bank: 2^l subbands ordered by
/// increasing frequency-plane orientation. Bands 0..2^(l-1)-1 cover the
/// frequencies with |w_row| > |w_col| (slope w_col/w_row rising from -1 to 1),
/// the rest cover |w_col| > |w_row| (slope w_row/w_col falling from 1 to -1).
struct DirectionalSubbands {
  int levels = 0;
  std::vector<ImageGrid> bands;
  DfbFilter filter = DfbFilter::Pkva12;

  Eigen::Index total_samples() const;
};

/// Sampling lattice of one subband: sites offset + basis * n (row, col), taken
/// modulo the image size. The subband grid stores them in Hermite-normal-form
/// order: grid(a, b) is the site (offset_r + h11 a, offset_c + h21 a + h22 b).
struct SubbandLattice {
  std::int64_t basis[2][2];
  std::int64_t offset[2];
};

/// True when an image of this size can be split into 2^levels directions:
/// levels == 0, or both sides divisible by 2^max(levels, 2).
bool dfb_compatible(Eigen::Index rows, Eigen::Index cols, int levels);

/// Tree-structured, critically sampled directional filter bank with
/// periodic extension. Throws std::invalid_argument for levels outside
/// [0, 5] or incompatible dimensions.
DirectionalSubbands dfb_analyze(const ImageGrid& img, int levels, DfbFilter filter = DfbFilter::Pkva12);

/// Exact inverse of dfb_analyze.
ImageGrid dfb_synthesize(const DirectionalSubbands& subbands, Eigen::Index rows, Eigen::Index cols);

/// Sampling lattices of the subbands, in band order.
std::vector<SubbandLattice> dfb_lattices(Eigen::Index rows, Eigen::Index cols, int levels);

/// Per-band scale factors 1 / ||h_k|| applied after the tree, where h_k is the
/// equivalent analysis filter of band k on this image size.
std::vector<double> dfb_band_gains(Eigen::Index rows, Eigen::Index cols, int levels,
                                   DfbFilter filter = DfbFilter::Pkva12);

}  // namespace ctdecomp

#endif  // CTDECOMP_DFB_HPP
