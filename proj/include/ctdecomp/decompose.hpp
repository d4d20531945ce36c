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

#ifndef CTDECOMP_DECOMPOSE_HPP
#define CTDECOMP_DECOMPOSE_HPP

#include <functional>
#include <iosfwd>
#include <string_view>
#include <vector>

#include "ctdecomp/contourlet.hpp"
#include "ctdecomp/image.hpp"
#include "ctdecomp/tv.hpp"
#include "ctdecomp/wavelet.hpp"

namespace ctdecomp {

enum class NoiseModel { Contourlet, Wavelet };

std::string_view to_string(NoiseModel m);

/// Parameters of the structure / texture / noise split f = u + v + w.
/// Defaults are tuned for 0-255 images with noise of standard deviation ~20.
struct DecompParams {
  double lambda = 10.0;  // structure fidelity: residual lies in G_lambda
  double mu = 100.0;     // texture radius: v lies in G_mu
  double delta = 20.0;   // noise radius; coefficients are shrunk by 2 delta
  double eps = 0.5;      // stop when every component moves by at most eps
  int n_step = 50;
  std::vector<int> level_spec = {3, 3, 4};  // coarsest scale first
  ChambolleOpts inner;
  NoiseModel noise_model = NoiseModel::Contourlet;
  ContourletFilters filters;
  WaveletFilter wavelet = WaveletFilter::Daubechies4;  // depth = level_spec.size()
};

/// Bit flags of IterationRecord::inner_flags.
inline constexpr unsigned kTextureSolveConverged = 1u;
inline constexpr unsigned kStructureSolveConverged = 2u;

struct IterationRecord {
  int iteration = 0;
  double du = 0.0;
  double dv = 0.0;
  double dw = 0.0;
  unsigned inner_flags = 0;
};

/// Membership witnesses of one iterate.
struct Witnesses {
  double v_field_max = 0.0;         // max |p| of the field with v = mu div p
  double residual_field_max = 0.0;  // max |p| of the field with residual = lambda div p
  double w_coeff_max = 0.0;         // max |c| over the transform coefficients that synthesize w
};

struct DecompResult {
  ImageGrid u, v, w, residual;
  DualField<double> v_witness;
  DualField<double> residual_witness;
  Witnesses witnesses;
  std::vector<IterationRecord> trace;
  int iterations = 0;
  bool converged = false;
};

/// Snapshot passed to the observer after every iteration.
struct IterationState {
  const ImageGrid& f;
  const ImageGrid& u;
  const ImageGrid& v;
  const ImageGrid& w;
  const ImageGrid& residual;
  const Witnesses& witnesses;
  const IterationRecord& record;
};

using IterationObserver = std::function<void(const IterationState&)>;

/// Throws std::invalid_argument describing the first invalid field, if any.
void validate(const DecompParams& params);

struct ConvergenceCheck {
  bool converged = false;
  double du = 0.0;
  double dv = 0.0;
  double dw = 0.0;
};

/// Max-abs differences of each component; converged iff all are <= eps.
ConvergenceCheck convergence_check(const ImageGrid& u0, const ImageGrid& v0, const ImageGrid& w0,
                                   const ImageGrid& u1, const ImageGrid& v1, const ImageGrid& w1, double eps);

/// Starting from u = v = w = 0, repeats
///   w <- g - shrink(g, 2 delta)  with g = f - u - v,
///   v <- P_{G_mu}(f - u - w),
///   u <- h - P_{G_lambda}(h)     with h = f - v - w,
/// until convergence_check passes or n_step iterations have run.
/// shrink is contourlet soft thresholding, or wavelet soft thresholding when
/// noise_model is Wavelet.
DecompResult decompose_uvw(const ImageGrid& f, const DecompParams& params, const IterationObserver& observer = {});

struct UvResult {
  ImageGrid u, v, residual;
  std::vector<IterationRecord> trace;
  int iterations = 0;
  bool converged = false;
};

/// Two-component split: v <- P_{G_mu}(f - u), u <- (f - v) - P_{G_lambda}(f - v).
UvResult decompose_uv(const ImageGrid& f, double lambda, double mu, double eps, int n_step,
                      const ChambolleOpts& inner = {});

/// CSV with header "iteration,dU,dV,dW,inner_flags".
void write_trace_csv(const std::vector<IterationRecord>& trace, std::ostream& out);

}  // namespace ctdecomp

#endif  // CTDECOMP_DECOMPOSE_HPP
