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

#ifndef CTDECOMP_TV_HPP
#define CTDECOMP_TV_HPP

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "ctdecomp/image.hpp"
#include "ctdecomp/parallel.hpp"

namespace ctdecomp {

/// Vector field on the pixel grid. p1 is the row-direction component, p2 the
/// column-direction component.
template <typename Scalar>
struct DualField {
  Image<Scalar> p1;
  Image<Scalar> p2;

  static DualField zeros(Eigen::Index rows, Eigen::Index cols) {
    return {Image<Scalar>::Zero(rows, cols), Image<Scalar>::Zero(rows, cols)};
  }

  /// max over pixels of sqrt(p1^2 + p2^2).
  Scalar max_magnitude() const {
    if (p1.size() == 0) {
      return Scalar(0);
    }
    return (p1.square() + p2.square()).sqrt().maxCoeff();
  }
};

/// Forward differences, zero across the last row / column.
template <typename Scalar>
DualField<Scalar> gradient(const Image<Scalar>& u) {
  const Eigen::Index R = u.rows();
  const Eigen::Index C = u.cols();
  DualField<Scalar> g = DualField<Scalar>::zeros(R, C);
  if (R > 1) {
    g.p1.topRows(R - 1) = u.bottomRows(R - 1) - u.topRows(R - 1);
  }
  if (C > 1) {
    g.p2.leftCols(C - 1) = u.rightCols(C - 1) - u.leftCols(C - 1);
  }
  return g;
}

/// Negative adjoint of gradient: backward differences where the first row
/// (column) takes p, interior p[i] - p[i-1], and the last takes -p[R-2].
template <typename Scalar>
Image<Scalar> divergence(const DualField<Scalar>& p) {
  const Eigen::Index R = p.p1.rows();
  const Eigen::Index C = p.p1.cols();
  if (p.p2.rows() != R || p.p2.cols() != C) {
    throw std::invalid_argument("divergence: field components differ in shape");
  }
  Image<Scalar> d = Image<Scalar>::Zero(R, C);
  if (R > 1) {
    d.topRows(R - 1) += p.p1.topRows(R - 1);
    d.bottomRows(R - 1) -= p.p1.topRows(R - 1);
  }
  if (C > 1) {
    d.leftCols(C - 1) += p.p2.leftCols(C - 1);
    d.rightCols(C - 1) -= p.p2.leftCols(C - 1);
  }
  return d;
}

struct ChambolleOpts {
  double tau = 0.248;
  int max_iter = 200;
  double tol = 1e-4;  // on max |p^{n+1} - p^n|
};

template <typename Scalar>
struct Projection {
  Image<Scalar> proj;       // lambda * div(witness)
  DualField<Scalar> witness;
  int iterations = 0;
  bool converged = false;
  Scalar last_change = Scalar(0);
};

/// Chambolle's projection onto the G-ball of radius lambda:
///   p <- (p + tau grad(div p - f / lambda)) / (1 + tau |grad(div p - f / lambda)|),
/// from p = 0. Reaching max_iter is reported through `converged`, not thrown.
template <typename Scalar>
Projection<Scalar> project_G(const Image<Scalar>& f, Scalar lambda, const ChambolleOpts& opts = {}) {
  if (!(lambda >= Scalar(0))) {
    throw std::invalid_argument("project_G: lambda must be nonnegative");
  }
  if (!(opts.tau > 0.0 && opts.tau <= 0.25)) {
    throw std::invalid_argument("project_G: tau must be in (0, 0.25]");
  }
  const Eigen::Index R = f.rows();
  const Eigen::Index C = f.cols();
  Projection<Scalar> out;
  out.witness = DualField<Scalar>::zeros(R, C);
  out.proj = Image<Scalar>::Zero(R, C);
  if (lambda == Scalar(0) || f.size() == 0) {
    out.converged = true;
    return out;
  }
  const Scalar tau = static_cast<Scalar>(opts.tau);
  const Image<Scalar> f_scaled = f / lambda;
  Image<Scalar> q(R, C);
  Image<Scalar> change(R, 1);
  auto& p1 = out.witness.p1;
  auto& p2 = out.witness.p2;

  for (int it = 1; it <= opts.max_iter; ++it) {
    // q = div p - f / lambda, one row per task.
    parallel_for(0, R, [&](std::ptrdiff_t r0, std::ptrdiff_t r1) {
      for (Eigen::Index r = r0; r < r1; ++r) {
        for (Eigen::Index c = 0; c < C; ++c) {
          Scalar d = Scalar(0);
          if (r < R - 1) d += p1(r, c);
          if (r > 0) d -= p1(r - 1, c);
          if (c < C - 1) d += p2(r, c);
          if (c > 0) d -= p2(r, c - 1);
          q(r, c) = d - f_scaled(r, c);
        }
      }
    });
    parallel_for(0, R, [&](std::ptrdiff_t r0, std::ptrdiff_t r1) {
      for (Eigen::Index r = r0; r < r1; ++r) {
        Scalar row_change = Scalar(0);
        for (Eigen::Index c = 0; c < C; ++c) {
          const Scalar g1 = r < R - 1 ? q(r + 1, c) - q(r, c) : Scalar(0);
          const Scalar g2 = c < C - 1 ? q(r, c + 1) - q(r, c) : Scalar(0);
          const Scalar denom = Scalar(1) + tau * std::sqrt(g1 * g1 + g2 * g2);
          const Scalar n1 = (p1(r, c) + tau * g1) / denom;
          const Scalar n2 = (p2(r, c) + tau * g2) / denom;
          row_change = std::max({row_change, std::abs(n1 - p1(r, c)), std::abs(n2 - p2(r, c))});
          p1(r, c) = n1;
          p2(r, c) = n2;
        }
        change(r, 0) = row_change;
      }
    });
    out.iterations = it;
    out.last_change = change.maxCoeff();
    if (out.last_change <= static_cast<Scalar>(opts.tol)) {
      out.converged = true;
      break;
    }
  }
  out.proj = lambda * divergence(out.witness);
  return out;
}

}  // namespace ctdecomp

#endif  // CTDECOMP_TV_HPP
