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

// Directional filter bank as a tree of two-channel quincunx splits.
//
// Every node owns a coset  offset + M Z^2  of the image torus, where the
// columns of M are a basis of the node's sampling lattice. The node splits
// its coset by the parity of n1 + n2 (node coordinates) into two cosets of
// the lattice M [[1,1],[1,-1]] Z^2 with a ladder (lifting) network whose
// prediction filter is a separable half-sample interpolator along the two
// diagonals, modulated by (pi, 0) so the channels are fans. All cosets live in
// a single array, so the whole transform runs in place and is critically
// sampled by construction. Lifting is invertible for any taps, which makes
// reconstruction exact.
//
// The basis chosen for a child decides which lines its own split follows in
// the original frequency plane (node frequencies are M^T w). Below the root,
// a node of family A (|w1| > |w2|) at tree level l holding the slope range
// w2/w1 in [t0, t0 + 2^(2-l)] uses
//     M = 2^(l-1) [[t0 + width, -t0], [-1, 1]],
// which maps its wedge onto the triangle {a, b > 0, a + b < 2 pi} of the node
// plane; the fan split a = b then bisects the slope range. Family B is the
// same with the two frequency axes exchanged. These bases are always bases of
// the lattice produced by the parent's split (checked at plan time).

#include "ctdecomp/dfb.hpp"

#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <tuple>
#include <numbers>
#include <numeric>
#include <stdexcept>
#include <string>

#include "ctdecomp/parallel.hpp"

namespace ctdecomp {
namespace {

using Mat2 = Eigen::Matrix<std::int64_t, 2, 2>;
using Vec2 = Eigen::Matrix<std::int64_t, 2, 1>;

constexpr double kPkva12[] = {0.6300, -0.1930, 0.0972, -0.0526, 0.0272, -0.0144};
constexpr double kPkva8[] = {0.6302, -0.1924, 0.0930, -0.0403};
constexpr double kPkva6[] = {0.6261, -0.1794, 0.0688};

std::int64_t floor_mod(std::int64_t a, std::int64_t n) {
  a %= n;
  return a < 0 ? a + n : a;
}

// Returns g = gcd(a, b) >= 0 with x a + y b = g.
std::int64_t ext_gcd(std::int64_t a, std::int64_t b, std::int64_t& x, std::int64_t& y) {
  std::int64_t old_r = a, r = b, old_s = 1, s = 0, old_t = 0, t = 1;
  while (r != 0) {
    const std::int64_t q = old_r / r;
    std::int64_t tmp = old_r - q * r;
    old_r = r;
    r = tmp;
    tmp = old_s - q * s;
    old_s = s;
    s = tmp;
    tmp = old_t - q * t;
    old_t = t;
    t = tmp;
  }
  if (old_r < 0) {
    old_r = -old_r;
    old_s = -old_s;
    old_t = -old_t;
  }
  x = old_s;
  y = old_t;
  return old_r;
}

std::int64_t det(const Mat2& m) { return m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0); }

bool in_lattice(const Mat2& m, const Vec2& v) {
  const std::int64_t d = det(m);
  Mat2 adj;
  adj << m(1, 1), -m(0, 1), -m(1, 0), m(0, 0);
  const Vec2 n = adj * v;
  return n(0) % d == 0 && n(1) % d == 0;
}

bool same_lattice(const Mat2& a, const Mat2& b) {
  return std::abs(det(a)) == std::abs(det(b)) && in_lattice(a, b.col(0)) && in_lattice(a, b.col(1));
}

// Coset offset + M Z^2 on the rows x cols torus, in Hermite normal form order.
struct Coset {
  Eigen::Index rows = 0;  // grid shape of the packed subband
  Eigen::Index cols = 0;
  std::vector<std::ptrdiff_t> sites;  // row-major linear indices into the image
};

Coset enumerate_coset(const Mat2& m, const Vec2& offset, Eigen::Index img_rows, Eigen::Index img_cols) {
  const std::int64_t R = img_rows, C = img_cols;
  if (!in_lattice(m, Vec2(R, 0)) || !in_lattice(m, Vec2(0, C))) {
    throw std::logic_error("subband lattice does not contain the image periods");
  }
  std::int64_t x = 0, y = 0;
  const std::int64_t h11 = ext_gcd(m(0, 0), m(0, 1), x, y);
  const std::int64_t h22 = std::abs(det(m)) / h11;
  const std::int64_t h21 = floor_mod(x * m(1, 0) + y * m(1, 1), h22);
  Coset out;
  out.rows = R / h11;
  out.cols = C / h22;
  out.sites.reserve(static_cast<std::size_t>(out.rows * out.cols));
  for (std::int64_t a = 0; a < out.rows; ++a) {
    const std::int64_t i = floor_mod(offset(0) + h11 * a, R);
    for (std::int64_t b = 0; b < out.cols; ++b) {
      const std::int64_t j = floor_mod(offset(1) + h21 * a + h22 * b, C);
      out.sites.push_back(static_cast<std::ptrdiff_t>(i * C + j));
    }
  }
  return out;
}

// Basis for a node below the root. family 0: |w1| > |w2|, family 1 the other.
Mat2 canonical_basis(int family, int level, std::int64_t k) {
  const std::int64_t s = std::int64_t{1} << (level - 1);
  Mat2 m;
  if (family == 0) {
    m << -s + 2 * (k + 1), s - 2 * k, -s, s;
  } else {
    m << -s, s, -s + 2 * (k + 1), s - 2 * k;
  }
  return m;
}

struct TreeNode {
  Mat2 basis;
  Vec2 offset;
  int family = 0;
  std::int64_t k = 0;
};

struct Split {
  std::vector<std::ptrdiff_t> c0;
  std::vector<std::ptrdiff_t> c1;
  // Wrapped (row, col) displacements, one per tap product.
  std::vector<std::array<std::int64_t, 2>> predict;
  std::vector<std::array<std::int64_t, 2>> update;
};

struct Plan {
  Eigen::Index rows = 0;
  Eigen::Index cols = 0;
  std::vector<std::vector<Split>> levels;
  std::vector<Coset> leaves;
  std::vector<SubbandLattice> lattices;
  // 1 / ||equivalent analysis filter|| per leaf; applied after the tree so
  // white noise of unit variance gives unit-variance coefficients in every band.
  std::vector<double> gains;
};

Split make_split(const TreeNode& node, std::span<const double> proto, Eigen::Index R, Eigen::Index C) {
  const Vec2 half = node.basis.col(0);
  const Vec2 ea = node.basis * Vec2(1, 1);
  const Vec2 eb = node.basis * Vec2(1, -1);
  Mat2 child;
  child << ea, eb;
  Split s;
  s.c0 = enumerate_coset(child, node.offset, R, C).sites;
  s.c1 = enumerate_coset(child, node.offset + half, R, C).sites;
  const auto taps = static_cast<std::int64_t>(proto.size());
  for (std::int64_t k = -taps + 1; k <= taps; ++k) {
    for (std::int64_t m = -taps + 1; m <= taps; ++m) {
      const Vec2 dp = -half + k * ea + m * eb;
      const Vec2 du = half - k * ea - m * eb;
      s.predict.push_back({floor_mod(dp(0), R), floor_mod(dp(1), C)});
      s.update.push_back({floor_mod(du(0), R), floor_mod(du(1), C)});
    }
  }
  return s;
}

// Prediction weights w_km = -g_k g_m with g_k = (-1)^k f_k, where f is the
// symmetric interpolator f_k = f_{1-k} built from the prototype.
std::vector<double> tap_weights(std::span<const double> proto) {
  const auto taps = static_cast<std::int64_t>(proto.size());
  std::vector<double> g;
  for (std::int64_t k = -taps + 1; k <= taps; ++k) {
    const double f = proto[static_cast<std::size_t>(k >= 1 ? k - 1 : -k)];
    g.push_back((k % 2 == 0) ? f : -f);
  }
  std::vector<double> w;
  for (const double gk : g) {
    for (const double gm : g) {
      w.push_back(-gk * gm);
    }
  }
  return w;
}

// a[x] += scale * sum_t w[t] a[x + disp[t]] for every x in targets. Reads only
// the complementary coset, so targets can be processed in any order.
void lift(double* a, Eigen::Index R, Eigen::Index C, const std::vector<std::ptrdiff_t>& targets,
          const std::vector<std::array<std::int64_t, 2>>& disp, const std::vector<double>& w, double scale) {
  parallel_for(0, static_cast<std::ptrdiff_t>(targets.size()), [&](std::ptrdiff_t t0, std::ptrdiff_t t1) {
    for (std::ptrdiff_t t = t0; t < t1; ++t) {
      const std::ptrdiff_t x = targets[static_cast<std::size_t>(t)];
      const std::int64_t i = x / C;
      const std::int64_t j = x % C;
      double acc = 0.0;
      for (std::size_t q = 0; q < w.size(); ++q) {
        std::int64_t ii = i + disp[q][0];
        std::int64_t jj = j + disp[q][1];
        if (ii >= R) ii -= R;
        if (jj >= C) jj -= C;
        acc += w[q] * a[ii * C + jj];
      }
      a[x] += scale * acc;
    }
  }, 64);
}

void scale_sites(double* a, const std::vector<std::ptrdiff_t>& sites, double s) {
  for (const std::ptrdiff_t x : sites) a[x] *= s;
}

// Which split of a tree level owns each site, and on which side.
struct SiteLabels {
  std::vector<std::uint32_t> split;
  std::vector<std::uint8_t> channel;
};

std::vector<SiteLabels> label_sites(const Plan& plan) {
  const auto n = static_cast<std::size_t>(plan.rows * plan.cols);
  std::vector<SiteLabels> labels(plan.levels.size());
  for (std::size_t level = 0; level < plan.levels.size(); ++level) {
    labels[level].split.resize(n);
    labels[level].channel.resize(n);
    for (std::size_t s = 0; s < plan.levels[level].size(); ++s) {
      for (const auto x : plan.levels[level][s].c0) {
        labels[level].split[static_cast<std::size_t>(x)] = static_cast<std::uint32_t>(s);
        labels[level].channel[static_cast<std::size_t>(x)] = 0;
      }
      for (const auto x : plan.levels[level][s].c1) {
        labels[level].split[static_cast<std::size_t>(x)] = static_cast<std::uint32_t>(s);
        labels[level].channel[static_cast<std::size_t>(x)] = 1;
      }
    }
  }
  return labels;
}

// Norm of row `site` of the analysis operator, i.e. of its transpose applied
// to e_site. Propagated sparsely: each transposed lifting step scatters the
// active sites of its target coset onto the complementary coset.
double analysis_row_norm(const Plan& plan, const std::vector<SiteLabels>& labels, const std::vector<double>& w,
                         std::ptrdiff_t site) {
  const std::int64_t R = plan.rows, C = plan.cols;
  std::vector<double> b(static_cast<std::size_t>(R * C), 0.0);
  std::vector<char> touched(b.size(), 0);
  std::vector<std::ptrdiff_t> active = {site};
  b[static_cast<std::size_t>(site)] = 1.0;
  touched[static_cast<std::size_t>(site)] = 1;
  const double r2 = std::numbers::sqrt2;

  const auto scatter = [&](std::size_t level, std::uint8_t from, double s) {
    const SiteLabels& lab = labels[level];
    const std::size_t n = active.size();
    for (std::size_t t = 0; t < n; ++t) {
      const auto x = static_cast<std::size_t>(active[t]);
      if (lab.channel[x] != from || b[x] == 0.0) continue;
      const Split& split = plan.levels[level][lab.split[x]];
      const auto& disp = from == 0 ? split.update : split.predict;
      const double v = b[x];
      const std::int64_t i = static_cast<std::int64_t>(x) / C;
      const std::int64_t j = static_cast<std::int64_t>(x) % C;
      for (std::size_t q = 0; q < w.size(); ++q) {
        const auto y = static_cast<std::size_t>(((i + disp[q][0]) % R) * C + (j + disp[q][1]) % C);
        b[y] += s * w[q] * v;
        if (touched[y] == 0) {
          touched[y] = 1;
          active.push_back(static_cast<std::ptrdiff_t>(y));
        }
      }
    }
  };

  for (std::size_t level = plan.levels.size(); level-- > 0;) {
    for (const std::ptrdiff_t x : active) {
      b[static_cast<std::size_t>(x)] *= labels[level].channel[static_cast<std::size_t>(x)] == 0 ? r2 : 1.0 / r2;
    }
    scatter(level, 0, 0.5);
    scatter(level, 1, -1.0);
  }
  double e = 0.0;
  for (const std::ptrdiff_t x : active) e += b[static_cast<std::size_t>(x)] * b[static_cast<std::size_t>(x)];
  return std::sqrt(e);
}

Plan make_plan(Eigen::Index rows, Eigen::Index cols, int levels, std::span<const double> proto) {
  Plan plan;
  plan.rows = rows;
  plan.cols = cols;
  std::vector<TreeNode> nodes = {TreeNode{Mat2::Identity(), Vec2::Zero(), 0, 0}};
  for (int level = 0; level < levels; ++level) {
    std::vector<Split> splits;
    std::vector<TreeNode> next;
    for (const TreeNode& node : nodes) {
      splits.push_back(make_split(node, proto, rows, cols));
      Mat2 raw;
      raw << node.basis * Vec2(1, 1), node.basis * Vec2(1, -1);
      for (int ch = 0; ch < 2; ++ch) {
        TreeNode c;
        c.offset = node.offset + (ch == 0 ? Vec2::Zero().eval() : node.basis.col(0).eval());
        c.family = level == 0 ? ch : node.family;
        c.k = level == 0 ? 0 : 2 * node.k + ch;
        c.basis = canonical_basis(c.family, level + 1, c.k);
        if (!same_lattice(raw, c.basis)) {
          throw std::logic_error("directional filter bank basis does not match the split lattice");
        }
        next.push_back(c);
      }
    }
    plan.levels.push_back(std::move(splits));
    nodes = std::move(next);
  }
  // Orientation order: family 0 by rising k, then family 1 by falling k.
  std::vector<const TreeNode*> order;
  for (const TreeNode& n : nodes) {
    if (n.family == 0) order.push_back(&n);
  }
  for (auto it = nodes.rbegin(); it != nodes.rend(); ++it) {
    if (it->family == 1) order.push_back(&*it);
  }
  for (const TreeNode* n : order) {
    plan.leaves.push_back(enumerate_coset(n->basis, n->offset, rows, cols));
    SubbandLattice lat{};
    for (int r = 0; r < 2; ++r) {
      for (int c = 0; c < 2; ++c) lat.basis[r][c] = n->basis(r, c);
      lat.offset[r] = n->offset(r);
    }
    plan.lattices.push_back(lat);
  }

  const std::vector<double> w = tap_weights(proto);
  const std::vector<SiteLabels> labels = label_sites(plan);
  for (const Coset& leaf : plan.leaves) {
    plan.gains.push_back(levels == 0 ? 1.0 : 1.0 / analysis_row_norm(plan, labels, w, leaf.sites.front()));
  }
  return plan;
}

// Plans depend only on (shape, levels, filter) and are reused across the
// outer iterations of the decomposition.
std::shared_ptr<const Plan> cached_plan(Eigen::Index rows, Eigen::Index cols, int levels, DfbFilter filter) {
  static std::mutex mutex;
  static std::map<std::tuple<Eigen::Index, Eigen::Index, int, int>, std::shared_ptr<const Plan>> cache;
  const auto key = std::make_tuple(rows, cols, levels, static_cast<int>(filter));
  {
    const std::lock_guard lock(mutex);
    if (const auto it = cache.find(key); it != cache.end()) return it->second;
  }
  auto plan = std::make_shared<const Plan>(make_plan(rows, cols, levels, ladder_prototype(filter)));
  const std::lock_guard lock(mutex);
  return cache.emplace(key, std::move(plan)).first->second;
}

void check_args(Eigen::Index rows, Eigen::Index cols, int levels) {
  if (levels < 0 || levels > kMaxDfbLevels) {
    throw std::invalid_argument("unsupported number of directional levels: " + std::to_string(levels));
  }
  if (!dfb_compatible(rows, cols, levels)) {
    throw std::invalid_argument("image " + std::to_string(cols) + "x" + std::to_string(rows) +
                                " incompatible with " + std::to_string(levels) + " directional levels");
  }
}

}  // namespace

std::string_view to_string(DfbFilter f) {
  switch (f) {
    case DfbFilter::Pkva12:
      return "pkva12";
    case DfbFilter::Pkva8:
      return "pkva8";
    case DfbFilter::Pkva6:
      return "pkva6";
  }
  return "unknown";
}

std::span<const double> ladder_prototype(DfbFilter f) {
  switch (f) {
    case DfbFilter::Pkva12:
      return kPkva12;
    case DfbFilter::Pkva8:
      return kPkva8;
    case DfbFilter::Pkva6:
      return kPkva6;
  }
  throw std::invalid_argument("unknown directional filter");
}

Eigen::Index DirectionalSubbands::total_samples() const {
  Eigen::Index n = 0;
  for (const auto& b : bands) n += b.size();
  return n;
}

bool dfb_compatible(Eigen::Index rows, Eigen::Index cols, int levels) {
  if (rows < 1 || cols < 1) return false;
  if (levels == 0) return true;
  const Eigen::Index m = Eigen::Index{1} << std::max(levels, 2);
  return rows % m == 0 && cols % m == 0;
}

std::vector<SubbandLattice> dfb_lattices(Eigen::Index rows, Eigen::Index cols, int levels) {
  check_args(rows, cols, levels);
  return cached_plan(rows, cols, levels, DfbFilter::Pkva12)->lattices;
}

std::vector<double> dfb_band_gains(Eigen::Index rows, Eigen::Index cols, int levels, DfbFilter filter) {
  check_args(rows, cols, levels);
  return cached_plan(rows, cols, levels, filter)->gains;
}

DirectionalSubbands dfb_analyze(const ImageGrid& img, int levels, DfbFilter filter) {
  check_args(img.rows(), img.cols(), levels);
  const auto plan = cached_plan(img.rows(), img.cols(), levels, filter);
  const std::vector<double> w = tap_weights(ladder_prototype(filter));
  const double r2 = std::numbers::sqrt2;

  ImageGrid a = img;
  double* data = a.data();
  for (const auto& splits : plan->levels) {
    for (const Split& s : splits) {
      lift(data, a.rows(), a.cols(), s.c1, s.predict, w, -1.0);
      lift(data, a.rows(), a.cols(), s.c0, s.update, w, 0.5);
      scale_sites(data, s.c0, r2);
      scale_sites(data, s.c1, 1.0 / r2);
    }
  }

  DirectionalSubbands out;
  out.levels = levels;
  out.filter = filter;
  for (std::size_t b = 0; b < plan->leaves.size(); ++b) {
    const Coset& leaf = plan->leaves[b];
    ImageGrid band(leaf.rows, leaf.cols);
    for (std::size_t q = 0; q < leaf.sites.size(); ++q) band.data()[q] = plan->gains[b] * data[leaf.sites[q]];
    out.bands.push_back(std::move(band));
  }
  return out;
}

ImageGrid dfb_synthesize(const DirectionalSubbands& subbands, Eigen::Index rows, Eigen::Index cols) {
  check_args(rows, cols, subbands.levels);
  const auto plan = cached_plan(rows, cols, subbands.levels, subbands.filter);
  if (subbands.bands.size() != plan->leaves.size()) {
    throw std::invalid_argument("expected " + std::to_string(plan->leaves.size()) + " directional bands, got " +
                                std::to_string(subbands.bands.size()));
  }
  ImageGrid a(rows, cols);
  double* data = a.data();
  for (std::size_t b = 0; b < plan->leaves.size(); ++b) {
    const Coset& leaf = plan->leaves[b];
    const ImageGrid& band = subbands.bands[b];
    if (band.rows() != leaf.rows || band.cols() != leaf.cols) {
      throw std::invalid_argument("directional band " + std::to_string(b) + " has inconsistent shape");
    }
    for (std::size_t q = 0; q < leaf.sites.size(); ++q) data[leaf.sites[q]] = band.data()[q] / plan->gains[b];
  }
  const std::vector<double> w = tap_weights(ladder_prototype(subbands.filter));
  const double r2 = std::numbers::sqrt2;
  for (auto level = plan->levels.rbegin(); level != plan->levels.rend(); ++level) {
    for (const Split& s : *level) {
      scale_sites(data, s.c0, 1.0 / r2);
      scale_sites(data, s.c1, r2);
      lift(data, rows, cols, s.c0, s.update, w, -0.5);
      lift(data, rows, cols, s.c1, s.predict, w, 1.0);
    }
  }
  return a;
}

}  // namespace ctdecomp
