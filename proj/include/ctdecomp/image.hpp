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

#ifndef CTDECOMP_IMAGE_HPP
#define CTDECOMP_IMAGE_HPP

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace ctdecomp {

/// Dense grayscale image, row-major. rows() is the height, cols() the width.
template <typename Scalar>
using Image = Eigen::Array<Scalar, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

using ImageGrid = Image<double>;

/// Raised for unreadable, unwritable or malformed image files.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised when a computation produces NaN or Inf samples.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct NoiseSpec {
  double sigma = 0.0;  // standard deviation, intensity units
  std::uint64_t seed = 0;
};

/// Reads an 8-bit grayscale PGM (P2 or P5, maxval <= 255) or PNG file.
/// The format is detected from the file's magic bytes, not its extension.
ImageGrid load_image(const std::filesystem::path& path);

/// Writes round(clamp(sample + offset, 0, 255)) as 8 bits per pixel.
/// A ".png" extension selects PNG; anything else is written as binary PGM (P5).
void save_image(const ImageGrid& img, const std::filesystem::path& path, double offset = 0.0);

/// Adds i.i.d. N(0, sigma^2) noise drawn from xoshiro256** (seeded through
/// splitmix64) via the Box-Muller transform. Samples are generated in
/// row-major order, two per uniform pair, so the output depends only on
/// (sigma, seed, size).
ImageGrid add_gaussian_noise(const ImageGrid& img, const NoiseSpec& spec);

/// 10 log10(peak^2 / MSE). Returns +infinity for identical images.
double psnr(const ImageGrid& a, const ImageGrid& b, double peak = 255.0);

template <typename Derived>
bool all_finite(const Eigen::ArrayBase<Derived>& a) {
  return a.isFinite().all();
}

/// Throws NumericalError naming `what` if any sample is NaN or Inf.
void require_finite(const ImageGrid& img, const std::string& what);

/// Mirror-pads (half-sample symmetric) to at least rows x cols.
ImageGrid pad_symmetric(const ImageGrid& img, Eigen::Index rows, Eigen::Index cols);

}  // namespace ctdecomp

#endif  // CTDECOMP_IMAGE_HPP
