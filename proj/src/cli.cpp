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

#include "ctdecomp/cli.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "ctdecomp/contourlet.hpp"
#include "ctdecomp/decompose.hpp"
#include "ctdecomp/image.hpp"
#include "ctdecomp/parallel.hpp"
#include "ctdecomp/random.hpp"

namespace ctdecomp::cli {
namespace {

// Thrown for flag values CLI11 cannot check on its own.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct DecomposeArgs {
  std::string input;
  std::string out_prefix;
  std::string trace;
  std::string format = "pgm";
  DecompParams params;
};

struct NoiseArgs {
  std::string input;
  std::string output;
  double sigma = 0.0;
  std::uint64_t seed = 0;
};

struct CheckArgs {
  int size = 128;
  std::vector<int> levels = {3, 3, 4};
  std::uint64_t seed = 1;
  std::string dump;
};

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

Eigen::Index round_up(Eigen::Index n, Eigen::Index m) { return (n + m - 1) / m * m; }

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out || !(out << text)) {
    throw IoError("cannot write " + path);
  }
}

int do_decompose(const DecomposeArgs& a, std::ostream& out) {
  validate(a.params);
  const ImageGrid f = load_image(a.input);
  require_finite(f, a.input);

  // Pad to the next compatible size, decompose, crop back.
  const Eigen::Index m = required_multiple(a.params.level_spec);
  const Eigen::Index R = round_up(f.rows(), m);
  const Eigen::Index C = round_up(f.cols(), m);
  if (const std::string why = validate_level_spec(R, C, a.params.level_spec); !why.empty()) {
    throw UsageError(why);
  }
  const ImageGrid padded = (R == f.rows() && C == f.cols()) ? f : pad_symmetric(f, R, C);
  const DecompResult r = decompose_uvw(padded, a.params);
  const auto crop = [&](const ImageGrid& x) -> ImageGrid { return x.topLeftCorner(f.rows(), f.cols()); };
  const ImageGrid u = crop(r.u);
  const ImageGrid v = crop(r.v);
  const ImageGrid w = crop(r.w);
  const ImageGrid res = crop(r.residual);
  for (const auto& [img, name] : {std::pair{&u, "u"}, {&v, "v"}, {&w, "w"}, {&res, "residual"}}) {
    require_finite(*img, std::string("component ") + name);
  }

  const std::string ext = "." + a.format;
  save_image(u, a.out_prefix + "_u" + ext, 0.0);
  save_image(v, a.out_prefix + "_v" + ext, 128.0);
  save_image(w, a.out_prefix + "_w" + ext, 128.0);
  save_image(res, a.out_prefix + "_residual" + ext, 128.0);
  if (!a.trace.empty()) {
    std::ostringstream csv;
    write_trace_csv(r.trace, csv);
    write_text(a.trace, csv.str());
  }
  out << "iterations " << r.iterations << (r.converged ? " (converged)" : " (stopped at max-iter)") << "\n";
  return kExitOk;
}

int do_add_noise(const NoiseArgs& a, std::ostream&) {
  const ImageGrid img = load_image(a.input);
  save_image(add_gaussian_noise(img, {a.sigma, a.seed}), a.output);
  return kExitOk;
}

int do_check(const CheckArgs& a, std::ostream& out) {
  if (const std::string why = validate_level_spec(a.size, a.size, a.levels); !why.empty()) {
    throw UsageError(why);
  }
  Xoshiro256 rng(a.seed);
  ImageGrid img(a.size, a.size);
  for (Eigen::Index i = 0; i < img.size(); ++i) {
    img.data()[i] = rng.uniform(0.0, 255.0);
  }
  const ContourletCoeffs c = ct_analyze(img, a.levels);
  const ImageGrid back = ct_synthesize(c);
  require_finite(back, "reconstruction");
  const double pr = (back - img).abs().maxCoeff();
  double energy = c.lowpass.square().sum();
  for (const auto& s : c.scales) {
    for (const auto& b : s.bands) {
      energy += b.square().sum();
    }
  }
  const double ratio = energy / img.square().sum();
  if (!a.dump.empty()) {
    std::ofstream f(a.dump, std::ios::binary);
    if (!f) {
      throw IoError("cannot write " + a.dump);
    }
    write_coeffs(c, f);
  }
  out << "pr_error " << fmt("%.3e", pr) << "\n";
  out << "parseval_ratio " << fmt("%.6f", ratio) << "\n";
  return pr <= 1e-9 ? kExitOk : kExitNumerical;
}

int do_psnr(const std::string& pa, const std::string& pb, std::ostream& out) {
  const double db = psnr(load_image(pa), load_image(pb));
  out << (std::isinf(db) ? std::string("inf") : fmt("%.4f", db)) << "\n";
  return kExitOk;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Structure / texture / noise image decomposition with contourlets"};
  app.require_subcommand(1);
  int threads = 0;
  app.add_option("--threads", threads, "worker threads (default: CTDECOMP_THREADS or 1)")->check(CLI::PositiveNumber);

  DecomposeArgs dec;
  auto* cmd_dec = app.add_subcommand("decompose", "split an image into u + v + w + residual");
  cmd_dec->add_option("--input", dec.input, "input PGM/PNG")->required();
  cmd_dec->add_option("--out-prefix", dec.out_prefix, "writes <P>_u, <P>_v, <P>_w, <P>_residual")->required();
  cmd_dec->add_option("--lambda", dec.params.lambda, "structure fidelity")->capture_default_str();
  cmd_dec->add_option("--mu", dec.params.mu, "texture G-ball radius")->capture_default_str();
  cmd_dec->add_option("--delta", dec.params.delta, "noise radius (threshold 2 delta)")->capture_default_str();
  cmd_dec->add_option("--eps", dec.params.eps, "stop threshold")->capture_default_str();
  cmd_dec->add_option("--max-iter", dec.params.n_step, "outer iterations")->capture_default_str();
  cmd_dec->add_option("--levels", dec.params.level_spec, "directional levels, coarsest scale first")
      ->delimiter(',')
      ->capture_default_str();
  std::string noise_model = "contourlet";
  cmd_dec->add_option("--noise-model", noise_model)->check(CLI::IsMember({"contourlet", "wavelet"}))->capture_default_str();
  cmd_dec->add_option("--inner-iter", dec.params.inner.max_iter, "projector iterations")->capture_default_str();
  cmd_dec->add_option("--inner-tol", dec.params.inner.tol, "projector tolerance")->capture_default_str();
  cmd_dec->add_option("--tau", dec.params.inner.tau, "projector step")->capture_default_str();
  cmd_dec->add_option("--trace", dec.trace, "per-iteration CSV");
  cmd_dec->add_option("--format", dec.format, "output image format")
      ->check(CLI::IsMember({"pgm", "png"}))
      ->capture_default_str();

  NoiseArgs noise;
  auto* cmd_noise = app.add_subcommand("add-noise", "add seeded Gaussian noise");
  cmd_noise->add_option("--input", noise.input)->required();
  cmd_noise->add_option("--output", noise.output)->required();
  cmd_noise->add_option("--sigma", noise.sigma, "standard deviation")->required()->check(CLI::NonNegativeNumber);
  cmd_noise->add_option("--seed", noise.seed)->capture_default_str();

  CheckArgs check;
  auto* cmd_check = app.add_subcommand("check-transform", "contourlet round trip on a random image");
  cmd_check->add_option("--size", check.size)->check(CLI::Range(1, 8192))->capture_default_str();
  cmd_check->add_option("--levels", check.levels)->delimiter(',')->capture_default_str();
  cmd_check->add_option("--seed", check.seed)->capture_default_str();
  cmd_check->add_option("--dump", check.dump, "write coefficients (CTC1 format)");

  std::string psnr_a;
  std::string psnr_b;
  auto* cmd_psnr = app.add_subcommand("psnr", "PSNR between two images (peak 255)");
  cmd_psnr->add_option("a", psnr_a)->required();
  cmd_psnr->add_option("b", psnr_b)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  if (threads > 0) {
    set_num_threads(threads);
  }
  dec.params.noise_model = noise_model == "wavelet" ? NoiseModel::Wavelet : NoiseModel::Contourlet;

  try {
    if (cmd_dec->parsed()) return do_decompose(dec, out);
    if (cmd_noise->parsed()) return do_add_noise(noise, out);
    if (cmd_check->parsed()) return do_check(check, out);
    if (cmd_psnr->parsed()) return do_psnr(psnr_a, psnr_b, out);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const IoError& e) {
    err << "I/O error: " << e.what() << "\n";
    return kExitIo;
  } catch (const NumericalError& e) {
    err << "numerical error: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitNumerical;
  }
  return kExitUsage;
}

}  // namespace ctdecomp::cli
