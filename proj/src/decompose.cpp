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

#include "ctdecomp/decompose.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>
#include <string>

namespace ctdecomp {
namespace {

double max_abs_diff(const ImageGrid& a, const ImageGrid& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw std::invalid_argument("convergence_check: shape mismatch");
  }
  return a.size() == 0 ? 0.0 : (a - b).abs().maxCoeff();
}

struct NoiseStep {
  ImageGrid w;
  double coeff_max = 0.0;
};

// w = g - shrink(g, t). Its coefficients are c - soft(c, t), i.e. c clamped
// to [-t, t], with a zero lowpass band.
NoiseStep noise_step(const ImageGrid& g, const DecompParams& p) {
  const double t = 2.0 * p.delta;
  NoiseStep out;
  if (p.noise_model == NoiseModel::Contourlet) {
    const ContourletCoeffs full = ct_analyze(g, p.level_spec, p.filters);
    ContourletCoeffs kept = full;
    kept.transform_directional([t](double x) { return soft_threshold(x, t); });
    for (std::size_t s = 0; s < full.scales.size(); ++s) {
      for (std::size_t k = 0; k < full.scales[s].bands.size(); ++k) {
        const auto& a = full.scales[s].bands[k];
        if (a.size() > 0) {
          out.coeff_max = std::max(out.coeff_max, (a - kept.scales[s].bands[k]).abs().maxCoeff());
        }
      }
    }
    out.w = g - ct_synthesize(kept);
  } else {
    const int depth = static_cast<int>(p.level_spec.size());
    const WaveletCoeffs full = dwt_analyze(g, depth, p.wavelet);
    WaveletThresholdResult r = wst(g, t, depth, p.wavelet);
    double m = 0.0;
    for (std::size_t j = 0; j < full.details.size(); ++j) {
      m = std::max({m, (full.details[j].horizontal - r.kept.details[j].horizontal).abs().maxCoeff(),
                    (full.details[j].vertical - r.kept.details[j].vertical).abs().maxCoeff(),
                    (full.details[j].diagonal - r.kept.details[j].diagonal).abs().maxCoeff()});
    }
    out.w = g - r.result;
    out.coeff_max = m;
  }
  return out;
}

}  // namespace

std::string_view to_string(NoiseModel m) {
  switch (m) {
    case NoiseModel::Contourlet:
      return "contourlet";
    case NoiseModel::Wavelet:
      return "wavelet";
  }
  return "unknown";
}

void validate(const DecompParams& p) {
  const auto positive = [](double x) { return std::isfinite(x) && x > 0.0; };
  if (!positive(p.lambda)) throw std::invalid_argument("lambda must be positive");
  if (!positive(p.mu)) throw std::invalid_argument("mu must be positive");
  if (!(std::isfinite(p.delta) && p.delta >= 0.0)) throw std::invalid_argument("delta must be nonnegative");
  if (!positive(p.eps)) throw std::invalid_argument("eps must be positive");
  if (p.n_step < 1) throw std::invalid_argument("n_step must be at least 1");
  if (p.inner.max_iter < 1) throw std::invalid_argument("inner max_iter must be at least 1");
  if (!(p.inner.tau > 0.0 && p.inner.tau <= 0.25)) throw std::invalid_argument("inner tau must be in (0, 0.25]");
  if (!positive(p.inner.tol)) throw std::invalid_argument("inner tol must be positive");
  if (p.level_spec.empty()) throw std::invalid_argument("level spec must have at least one scale");
}

ConvergenceCheck convergence_check(const ImageGrid& u0, const ImageGrid& v0, const ImageGrid& w0,
                                   const ImageGrid& u1, const ImageGrid& v1, const ImageGrid& w1, double eps) {
  ConvergenceCheck c;
  c.du = max_abs_diff(u0, u1);
  c.dv = max_abs_diff(v0, v1);
  c.dw = max_abs_diff(w0, w1);
  c.converged = c.du <= eps && c.dv <= eps && c.dw <= eps;
  return c;
}

DecompResult decompose_uvw(const ImageGrid& f, const DecompParams& params, const IterationObserver& observer) {
  validate(params);
  if (params.noise_model == NoiseModel::Contourlet) {
    if (const std::string why = validate_level_spec(f.rows(), f.cols(), params.level_spec); !why.empty()) {
      throw std::invalid_argument(why);
    }
  }
  require_finite(f, "input image");
  const Eigen::Index R = f.rows();
  const Eigen::Index C = f.cols();
  DecompResult res;
  res.u = ImageGrid::Zero(R, C);
  res.v = ImageGrid::Zero(R, C);
  res.w = ImageGrid::Zero(R, C);
  res.residual = ImageGrid::Zero(R, C);

  for (int n = 1; n <= params.n_step; ++n) {
    NoiseStep ns = noise_step(f - res.u - res.v, params);
    Projection<double> pv = project_G<double>(f - res.u - ns.w, params.mu, params.inner);
    const ImageGrid h = f - pv.proj - ns.w;
    Projection<double> pr = project_G<double>(h, params.lambda, params.inner);
    ImageGrid u = h - pr.proj;

    const ConvergenceCheck cc = convergence_check(res.u, res.v, res.w, u, pv.proj, ns.w, params.eps);
    IterationRecord rec{n, cc.du, cc.dv, cc.dw,
                        (pv.converged ? kTextureSolveConverged : 0u) | (pr.converged ? kStructureSolveConverged : 0u)};
    if (!std::isfinite(cc.du) || !std::isfinite(cc.dv) || !std::isfinite(cc.dw)) {
      throw NumericalError("non-finite iterate at iteration " + std::to_string(n));
    }
    res.u = std::move(u);
    res.v = std::move(pv.proj);
    res.w = std::move(ns.w);
    res.residual = std::move(pr.proj);
    res.v_witness = std::move(pv.witness);
    res.residual_witness = std::move(pr.witness);
    res.witnesses = {res.v_witness.max_magnitude(), res.residual_witness.max_magnitude(), ns.coeff_max};
    res.trace.push_back(rec);
    res.iterations = n;
    if (observer) {
      observer(IterationState{f, res.u, res.v, res.w, res.residual, res.witnesses, res.trace.back()});
    }
    if (cc.converged) {
      res.converged = true;
      break;
    }
  }
  return res;
}

UvResult decompose_uv(const ImageGrid& f, double lambda, double mu, double eps, int n_step,
                      const ChambolleOpts& inner) {
  DecompParams p;
  p.lambda = lambda;
  p.mu = mu;
  p.eps = eps;
  p.n_step = n_step;
  p.inner = inner;
  validate(p);
  require_finite(f, "input image");
  const ImageGrid zero = ImageGrid::Zero(f.rows(), f.cols());
  UvResult res;
  res.u = zero;
  res.v = zero;
  res.residual = zero;
  for (int n = 1; n <= n_step; ++n) {
    Projection<double> pv = project_G<double>(f - res.u, mu, inner);
    const ImageGrid h = f - pv.proj;
    Projection<double> pr = project_G<double>(h, lambda, inner);
    ImageGrid u = h - pr.proj;
    const ConvergenceCheck cc = convergence_check(res.u, res.v, zero, u, pv.proj, zero, eps);
    res.trace.push_back({n, cc.du, cc.dv, 0.0,
                         (pv.converged ? kTextureSolveConverged : 0u) | (pr.converged ? kStructureSolveConverged : 0u)});
    res.u = std::move(u);
    res.v = std::move(pv.proj);
    res.residual = std::move(pr.proj);
    res.iterations = n;
    if (cc.converged) {
      res.converged = true;
      break;
    }
  }
  return res;
}

void write_trace_csv(const std::vector<IterationRecord>& trace, std::ostream& out) {
  out << "iteration,dU,dV,dW,inner_flags\n";
  char buf[160];
  for (const auto& r : trace) {
    std::snprintf(buf, sizeof buf, "%d,%.17g,%.17g,%.17g,%u\n", r.iteration, r.du, r.dv, r.dw, r.inner_flags);
    out << buf;
  }
}

}  // namespace ctdecomp
