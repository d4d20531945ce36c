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

#include "ctdecomp/image.hpp"

#include <png.h>

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iterator>
#include <limits>
#include <memory>
#include <vector>

#include "ctdecomp/random.hpp"

namespace ctdecomp {
namespace {

std::vector<unsigned char> read_all(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw IoError("cannot open " + path.string());
  }
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

class PgmParser {
 public:
  PgmParser(const std::vector<unsigned char>& data, std::string name) : data_(data), name_(std::move(name)) {}

  ImageGrid parse() {
    pos_ = 2;
    const bool ascii = data_[1] == '2';
    const long w = header_int();
    const long h = header_int();
    const long maxval = header_int();
    if (w <= 0 || h <= 0) {
      fail("invalid dimensions");
    }
    if (maxval <= 0 || maxval > 255) {
      fail("maxval " + std::to_string(maxval) + " unsupported (8-bit only)");
    }
    ImageGrid img(h, w);
    if (ascii) {
      for (Eigen::Index i = 0; i < img.size(); ++i) {
        const long v = header_int();
        if (v > maxval) {
          fail("sample exceeds maxval");
        }
        img.data()[i] = static_cast<double>(v);
      }
    } else {
      // Exactly one whitespace byte separates the header from the raster.
      ++pos_;
      const auto need = static_cast<std::size_t>(w) * static_cast<std::size_t>(h);
      if (pos_ > data_.size() || data_.size() - pos_ < need) {
        fail("unexpected end of data");
      }
      for (std::size_t i = 0; i < need; ++i) {
        img.data()[i] = static_cast<double>(data_[pos_ + i]);
      }
    }
    return img;
  }

 private:
  [[noreturn]] void fail(const std::string& why) const { throw IoError(name_ + ": " + why); }

  void skip_space() {
    while (pos_ < data_.size()) {
      if (data_[pos_] == '#') {
        while (pos_ < data_.size() && data_[pos_] != '\n') {
          ++pos_;
        }
      } else if (std::isspace(data_[pos_]) != 0) {
        ++pos_;
      } else {
        break;
      }
    }
  }

  long header_int() {
    skip_space();
    if (pos_ >= data_.size()) {
      fail("unexpected end of data");
    }
    if (std::isdigit(data_[pos_]) == 0) {
      fail("malformed header");
    }
    long v = 0;
    while (pos_ < data_.size() && std::isdigit(data_[pos_]) != 0) {
      v = v * 10 + (data_[pos_] - '0');
      if (v > 1'000'000'000L) {
        fail("value out of range");
      }
      ++pos_;
    }
    return v;
  }

  const std::vector<unsigned char>& data_;
  std::string name_;
  std::size_t pos_ = 0;
};

struct PngReadState {
  const std::vector<unsigned char>* data;
  std::size_t pos;
};

void png_read_fn(png_structp png, png_bytep out, png_size_t n) {
  auto* st = static_cast<PngReadState*>(png_get_io_ptr(png));
  if (st->data->size() - st->pos < n) {
    png_error(png, "unexpected end of data");
  }
  std::copy_n(st->data->begin() + static_cast<std::ptrdiff_t>(st->pos), n, out);
  st->pos += n;
}

[[noreturn]] void png_error_fn(png_structp png, png_const_charp msg) {
  auto* err = static_cast<std::string*>(png_get_error_ptr(png));
  *err = msg;
  png_longjmp(png, 1);
}

void png_warn_fn(png_structp, png_const_charp) {}

ImageGrid load_png(const std::vector<unsigned char>& data, const std::string& name) {
  std::string err;
  png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, &err, png_error_fn, png_warn_fn);
  if (png == nullptr) {
    throw IoError(name + ": cannot initialise PNG reader");
  }
  png_infop info = png_create_info_struct(png);
  PngReadState st{&data, 0};
  std::vector<unsigned char> pixels;
  std::vector<png_bytep> rows;
  png_uint_32 w = 0;
  png_uint_32 h = 0;
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_read_struct(&png, &info, nullptr);
    throw IoError(name + ": " + err);
  }
  png_set_read_fn(png, &st, png_read_fn);
  png_read_info(png, info);
  w = png_get_image_width(png, info);
  h = png_get_image_height(png, info);
  const int depth = png_get_bit_depth(png, info);
  const int color = png_get_color_type(png, info);
  if (color == PNG_COLOR_TYPE_PALETTE) {
    png_set_palette_to_rgb(png);
  }
  if (depth < 8) {
    png_set_expand_gray_1_2_4_to_8(png);
  }
  if (depth == 16) {
    png_set_strip_16(png);
  }
  if ((color & PNG_COLOR_MASK_ALPHA) != 0) {
    png_set_strip_alpha(png);
  }
  if ((color & PNG_COLOR_MASK_COLOR) != 0) {
    // Rec. 601 luma. Defaults of -1 select the libpng coefficients.
    png_set_rgb_to_gray_fixed(png, 1, -1, -1);
  }
  png_read_update_info(png, info);
  pixels.resize(static_cast<std::size_t>(w) * h);
  rows.resize(h);
  for (png_uint_32 r = 0; r < h; ++r) {
    rows[r] = pixels.data() + static_cast<std::size_t>(r) * w;
  }
  png_read_image(png, rows.data());
  png_read_end(png, nullptr);
  png_destroy_read_struct(&png, &info, nullptr);
  ImageGrid img(h, w);
  for (std::size_t i = 0; i < pixels.size(); ++i) {
    img.data()[i] = pixels[i];
  }
  return img;
}

std::vector<unsigned char> quantize(const ImageGrid& img, double offset) {
  std::vector<unsigned char> out(static_cast<std::size_t>(img.size()));
  for (Eigen::Index i = 0; i < img.size(); ++i) {
    const double v = std::clamp(std::round(img.data()[i] + offset), 0.0, 255.0);
    out[static_cast<std::size_t>(i)] = static_cast<unsigned char>(v);
  }
  return out;
}

void save_png(const std::vector<unsigned char>& pixels, Eigen::Index h, Eigen::Index w,
              const std::filesystem::path& path) {
  std::unique_ptr<FILE, int (*)(FILE*)> fp(std::fopen(path.string().c_str(), "wb"), std::fclose);
  if (!fp) {
    throw IoError("cannot open " + path.string() + " for writing");
  }
  std::string err;
  png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, &err, png_error_fn, png_warn_fn);
  png_infop info = png_create_info_struct(png);
  std::vector<png_const_bytep> rows(static_cast<std::size_t>(h));
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_write_struct(&png, &info);
    throw IoError(path.string() + ": " + err);
  }
  png_init_io(png, fp.get());
  png_set_IHDR(png, info, static_cast<png_uint_32>(w), static_cast<png_uint_32>(h), 8, PNG_COLOR_TYPE_GRAY,
               PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
  for (Eigen::Index r = 0; r < h; ++r) {
    rows[static_cast<std::size_t>(r)] = pixels.data() + r * w;
  }
  png_write_info(png, info);
  png_write_image(png, const_cast<png_bytepp>(rows.data()));
  png_write_end(png, nullptr);
  png_destroy_write_struct(&png, &info);
}

Eigen::Index mirror(Eigen::Index i, Eigen::Index n) {
  const Eigen::Index period = 2 * n;
  i %= period;
  if (i < 0) {
    i += period;
  }
  return i < n ? i : period - 1 - i;
}

}  // namespace

ImageGrid load_image(const std::filesystem::path& path) {
  const std::vector<unsigned char> data = read_all(path);
  const std::string name = path.string();
  static constexpr unsigned char kPngMagic[8] = {0x89, 'P', 'N', 'G', '\r', '\n', 0x1a, '\n'};
  if (data.size() >= 8 && std::equal(kPngMagic, kPngMagic + 8, data.begin())) {
    return load_png(data, name);
  }
  if (data.size() >= 2 && data[0] == 'P' && (data[1] == '2' || data[1] == '5')) {
    return PgmParser(data, name).parse();
  }
  if (data.size() < 2) {
    throw IoError(name + ": unexpected end of data");
  }
  throw IoError(name + ": unrecognised image format (expected PGM P2/P5 or PNG)");
}

void save_image(const ImageGrid& img, const std::filesystem::path& path, double offset) {
  if (img.size() == 0) {
    throw IoError("refusing to write an empty image to " + path.string());
  }
  require_finite(img, "image written to " + path.string());
  const std::vector<unsigned char> pixels = quantize(img, offset);
  std::string ext = path.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
  if (ext == ".png") {
    save_png(pixels, img.rows(), img.cols(), path);
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw IoError("cannot open " + path.string() + " for writing");
  }
  out << "P5\n" << img.cols() << ' ' << img.rows() << "\n255\n";
  out.write(reinterpret_cast<const char*>(pixels.data()), static_cast<std::streamsize>(pixels.size()));
  if (!out) {
    throw IoError("write failed: " + path.string());
  }
}

ImageGrid add_gaussian_noise(const ImageGrid& img, const NoiseSpec& spec) {
  if (!(spec.sigma >= 0.0) || !std::isfinite(spec.sigma)) {
    throw std::invalid_argument("noise sigma must be finite and nonnegative");
  }
  Xoshiro256 rng(spec.seed);
  ImageGrid out = img;
  const Eigen::Index n = img.size();
  for (Eigen::Index i = 0; i < n; i += 2) {
    const auto z = rng.normal_pair();
    out.data()[i] += spec.sigma * z[0];
    if (i + 1 < n) {
      out.data()[i + 1] += spec.sigma * z[1];
    }
  }
  return out;
}

double psnr(const ImageGrid& a, const ImageGrid& b, double peak) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw std::invalid_argument("psnr: image sizes differ");
  }
  if (a.size() == 0) {
    throw std::invalid_argument("psnr: empty images");
  }
  const double mse = (a - b).square().mean();
  if (mse == 0.0) {
    return std::numeric_limits<double>::infinity();
  }
  return 10.0 * std::log10(peak * peak / mse);
}

void require_finite(const ImageGrid& img, const std::string& what) {
  if (!all_finite(img)) {
    throw NumericalError("non-finite value in " + what);
  }
}

ImageGrid pad_symmetric(const ImageGrid& img, Eigen::Index rows, Eigen::Index cols) {
  rows = std::max(rows, img.rows());
  cols = std::max(cols, img.cols());
  ImageGrid out(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    const Eigen::Index sr = mirror(r, img.rows());
    for (Eigen::Index c = 0; c < cols; ++c) {
      out(r, c) = img(sr, mirror(c, img.cols()));
    }
  }
  return out;
}

}  // namespace ctdecomp
