// Copyright 2026 The Spectradec Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "spectradec/imgio.hpp"

#include <png.h>

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <csetjmp>
#include <cstring>
#include <fstream>
#include <iterator>
#include <string>

namespace spectradec::imgio {
namespace {

namespace fs = std::filesystem;

std::vector<unsigned char> read_file(const fs::path& path) {
  std::error_code ec;
  if (!fs::is_regular_file(path, ec)) {
    throw Error(ErrorCode::kFileNotFound, path.string());
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIoError, "cannot open " + path.string());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_file(const fs::path& path, const std::vector<unsigned char>& bytes) {
  std::ofstream out(path, std::ios::binary);
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error(ErrorCode::kIoError, "cannot write " + path.string());
}

std::string lower_extension(const fs::path& path) {
  std::string ext = path.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  return ext;
}

unsigned quantize(float v, unsigned maxval) {
  const float clamped = std::clamp(v, 0.0f, 1.0f);
  return static_cast<unsigned>(std::lround(clamped * float(maxval)));
}

// ---------------------------------------------------------------------------
// PNG

struct MemoryReader {
  const unsigned char* data;
  size_t size;
  size_t pos;
};

void png_read_from_memory(png_structp png, png_bytep out, png_size_t count) {
  auto* reader = static_cast<MemoryReader*>(png_get_io_ptr(png));
  if (reader->pos + count > reader->size) png_error(png, "truncated stream");
  std::memcpy(out, reader->data + reader->pos, count);
  reader->pos += count;
}

void png_write_to_vector(png_structp png, png_bytep data, png_size_t count) {
  auto* out = static_cast<std::vector<unsigned char>*>(png_get_io_ptr(png));
  out->insert(out->end(), data, data + count);
}

void png_flush_noop(png_structp) {}

void png_error_fn(png_structp png, png_const_charp msg) {
  auto* message = static_cast<std::string*>(png_get_error_ptr(png));
  *message = msg;
  png_longjmp(png, 1);
}

void png_warning_fn(png_structp, png_const_charp) {}

// ---------------------------------------------------------------------------
// PNM

class PnmHeaderReader {
 public:
  explicit PnmHeaderReader(const std::vector<unsigned char>& bytes)
      : bytes_(bytes) {}

  unsigned next_number() {
    skip_space_and_comments();
    if (pos_ >= bytes_.size() || !std::isdigit(bytes_[pos_])) {
      throw Error(ErrorCode::kCorruptData, "malformed PNM header");
    }
    unsigned long value = 0;
    while (pos_ < bytes_.size() && std::isdigit(bytes_[pos_])) {
      value = value * 10 + (bytes_[pos_++] - '0');
      if (value > 1u << 30) {
        throw Error(ErrorCode::kCorruptData, "PNM header value too large");
      }
    }
    return static_cast<unsigned>(value);
  }

  // Exactly one whitespace byte separates the header from the raster.
  size_t raster_offset() {
    if (pos_ >= bytes_.size() || !std::isspace(bytes_[pos_])) {
      throw Error(ErrorCode::kCorruptData, "malformed PNM header");
    }
    return pos_ + 1;
  }

 private:
  void skip_space_and_comments() {
    while (pos_ < bytes_.size()) {
      if (std::isspace(bytes_[pos_])) {
        ++pos_;
      } else if (bytes_[pos_] == '#') {
        while (pos_ < bytes_.size() && bytes_[pos_] != '\n') ++pos_;
      } else {
        break;
      }
    }
  }

  const std::vector<unsigned char>& bytes_;
  size_t pos_ = 2;
};

PlanarImage decode_pnm(const std::vector<unsigned char>& bytes) {
  const int channels = bytes[1] == '5' ? 1 : 3;
  PnmHeaderReader header(bytes);
  const unsigned width = header.next_number();
  const unsigned height = header.next_number();
  const unsigned maxval = header.next_number();
  if (width == 0 || height == 0 || maxval == 0 || maxval > 65535) {
    throw Error(ErrorCode::kCorruptData, "invalid PNM dimensions or maxval");
  }
  const size_t offset = header.raster_offset();
  const size_t sample_bytes = maxval < 256 ? 1 : 2;
  const size_t needed = size_t(width) * height * channels * sample_bytes;
  if (bytes.size() < offset + needed) {
    throw Error(ErrorCode::kCorruptData, "truncated PNM raster");
  }
  PlanarImage img(channels, int(height), int(width),
                  channels == 1 ? ColorSpace::kLuma : ColorSpace::kRgb);
  const float denom = float(maxval);
  const unsigned char* p = bytes.data() + offset;
  for (Eigen::Index i = 0; i < img.pixels(); ++i) {
    for (int c = 0; c < channels; ++c) {
      unsigned v = *p++;
      if (sample_bytes == 2) v = (v << 8) | *p++;
      if (v > maxval) throw Error(ErrorCode::kCorruptData, "sample > maxval");
      img.data()(c, i) = float(v) / denom;
    }
  }
  return img;
}

std::vector<unsigned char> encode_pnm(const PlanarImage& img, int bit_depth) {
  const unsigned maxval = bit_depth == 16 ? 65535 : 255;
  const std::string header = std::string(img.channels() == 1 ? "P5" : "P6") +
                             "\n" + std::to_string(img.width()) + " " +
                             std::to_string(img.height()) + "\n" +
                             std::to_string(maxval) + "\n";
  std::vector<unsigned char> out(header.begin(), header.end());
  out.reserve(out.size() +
              size_t(img.pixels()) * img.channels() * (bit_depth / 8));
  for (Eigen::Index i = 0; i < img.pixels(); ++i) {
    for (int c = 0; c < img.channels(); ++c) {
      const unsigned v = quantize(img.data()(c, i), maxval);
      if (bit_depth == 16) out.push_back(static_cast<unsigned char>(v >> 8));
      out.push_back(static_cast<unsigned char>(v & 0xff));
    }
  }
  return out;
}

void check_bit_depth(int bit_depth) {
  if (bit_depth != 8 && bit_depth != 16) {
    throw Error(ErrorCode::kInvalidArgument,
                "bit depth must be 8 or 16, got " + std::to_string(bit_depth));
  }
}

// Keys cubic convolution kernel with a = -0.5.
double cubic_weight(double t) {
  t = std::abs(t);
  if (t < 1.0) return (1.5 * t - 2.5) * t * t + 1.0;
  if (t < 2.0) return ((-0.5 * t + 2.5) * t - 4.0) * t + 2.0;
  return 0.0;
}

struct Tap {
  std::array<int, 4> index{};
  std::array<double, 4> weight{};
  int count = 0;
};

// Per-output-sample taps along one axis, half-pixel-centre mapping.
std::vector<Tap> build_taps(int in, int out, Filter filter) {
  std::vector<Tap> taps(out);
  const double scale = double(in) / double(out);
  for (int o = 0; o < out; ++o) {
    const double src = (o + 0.5) * scale - 0.5;
    Tap& tap = taps[o];
    if (filter == Filter::kBilinear) {
      const double clamped = std::clamp(src, 0.0, double(in - 1));
      const int i0 = static_cast<int>(std::floor(clamped));
      const int i1 = std::min(i0 + 1, in - 1);
      tap.index = {i0, i1, i0, i0};
      tap.weight = {1.0 - (clamped - i0), clamped - i0, 0.0, 0.0};
      tap.count = 2;
    } else {
      const int base = static_cast<int>(std::floor(src));
      const double frac = src - base;
      for (int k = 0; k < 4; ++k) {
        tap.index[k] = std::clamp(base - 1 + k, 0, in - 1);
        tap.weight[k] = cubic_weight(frac - (k - 1));
      }
      tap.count = 4;
    }
  }
  return taps;
}

// Interpolates relative to the first tap so that constant inputs reproduce
// exactly: v0 + sum w_k (v_k - v0) with sum w_k = 1.
template <typename Get>
float interpolate(const Tap& tap, Get&& get) {
  const double v0 = get(tap.index[0]);
  double acc = v0;
  for (int k = 0; k < tap.count; ++k) {
    acc += tap.weight[k] * (get(tap.index[k]) - v0);
  }
  return static_cast<float>(acc);
}

void require_valid_grid(const PlanarImage& img, Grid grid) {
  if (grid.rows < 1 || grid.cols < 1) {
    throw Error(ErrorCode::kInvalidArgument, "grid rows/cols must be >= 1");
  }
  if (img.height() % grid.rows != 0 || img.width() % grid.cols != 0) {
    throw Error(ErrorCode::kIndivisibleDimensions,
                std::to_string(img.height()) + "x" +
                    std::to_string(img.width()) + " not divisible by grid " +
                    std::to_string(grid.rows) + "x" +
                    std::to_string(grid.cols));
  }
}

}  // namespace

std::vector<unsigned char> encode_png(const PlanarImage& img, int bit_depth) {
  check_bit_depth(bit_depth);
  if (img.empty()) throw Error(ErrorCode::kInvalidArgument, "empty image");
  std::vector<unsigned char> out;
  std::string message;
  const int channels = img.channels();
  const size_t row_bytes = size_t(img.width()) * channels * (bit_depth / 8);
  std::vector<unsigned char> row(row_bytes);

  png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, &message,
                                            png_error_fn, png_warning_fn);
  png_infop info = png ? png_create_info_struct(png) : nullptr;
  if (!png || !info) {
    png_destroy_write_struct(&png, &info);
    throw Error(ErrorCode::kCodecError, "libpng allocation failed");
  }
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_write_struct(&png, &info);
    throw Error(ErrorCode::kCodecError, "PNG encode: " + message);
  }
  png_set_write_fn(png, &out, png_write_to_vector, png_flush_noop);
  png_set_IHDR(png, info, png_uint_32(img.width()), png_uint_32(img.height()),
               bit_depth,
               channels == 1 ? PNG_COLOR_TYPE_GRAY : PNG_COLOR_TYPE_RGB,
               PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT,
               PNG_FILTER_TYPE_DEFAULT);
  png_write_info(png, info);
  const unsigned maxval = bit_depth == 16 ? 65535 : 255;
  for (int y = 0; y < img.height(); ++y) {
    unsigned char* p = row.data();
    for (int x = 0; x < img.width(); ++x) {
      for (int c = 0; c < channels; ++c) {
        const unsigned v = quantize(img.at(c, y, x), maxval);
        if (bit_depth == 16) *p++ = static_cast<unsigned char>(v >> 8);
        *p++ = static_cast<unsigned char>(v & 0xff);
      }
    }
    png_write_row(png, row.data());
  }
  png_write_end(png, nullptr);
  png_destroy_write_struct(&png, &info);
  return out;
}

PlanarImage decode_png(const std::vector<unsigned char>& bytes) {
  if (bytes.size() < 8 || png_sig_cmp(bytes.data(), 0, 8) != 0) {
    throw Error(ErrorCode::kUnsupportedFormat, "not a PNG stream");
  }
  MemoryReader reader{bytes.data(), bytes.size(), 0};
  std::string message;
  std::vector<unsigned char> raster;
  std::vector<png_bytep> rows;
  png_uint_32 width = 0;
  png_uint_32 height = 0;
  int channels = 0;
  int depth = 0;

  png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, &message,
                                           png_error_fn, png_warning_fn);
  png_infop info = png ? png_create_info_struct(png) : nullptr;
  if (!png || !info) {
    png_destroy_read_struct(&png, &info, nullptr);
    throw Error(ErrorCode::kCodecError, "libpng allocation failed");
  }
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_read_struct(&png, &info, nullptr);
    throw Error(ErrorCode::kCorruptData, "PNG decode: " + message);
  }
  png_set_read_fn(png, &reader, png_read_from_memory);
  png_read_info(png, info);
  const int color_type = png_get_color_type(png, info);
  if (color_type == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(png);
  if (color_type == PNG_COLOR_TYPE_GRAY &&
      png_get_bit_depth(png, info) < 8) {
    png_set_expand_gray_1_2_4_to_8(png);
  }
  if (color_type & PNG_COLOR_MASK_ALPHA) png_set_strip_alpha(png);
  png_set_interlace_handling(png);
  png_read_update_info(png, info);
  width = png_get_image_width(png, info);
  height = png_get_image_height(png, info);
  channels = png_get_channels(png, info);
  depth = png_get_bit_depth(png, info);
  raster.resize(size_t(png_get_rowbytes(png, info)) * height);
  rows.resize(height);
  for (png_uint_32 y = 0; y < height; ++y) {
    rows[y] = raster.data() + size_t(y) * png_get_rowbytes(png, info);
  }
  png_read_image(png, rows.data());
  png_read_end(png, nullptr);
  png_destroy_read_struct(&png, &info, nullptr);

  if ((channels != 1 && channels != 3) || (depth != 8 && depth != 16)) {
    throw Error(ErrorCode::kUnsupportedFormat,
                "unsupported PNG layout: " + std::to_string(channels) +
                    " channels, " + std::to_string(depth) + " bits");
  }
  PlanarImage img(channels, int(height), int(width),
                  channels == 1 ? ColorSpace::kLuma : ColorSpace::kRgb);
  const float denom = depth == 16 ? 65535.0f : 255.0f;
  const unsigned char* p = raster.data();
  for (Eigen::Index i = 0; i < img.pixels(); ++i) {
    for (int c = 0; c < channels; ++c) {
      unsigned v = *p++;
      if (depth == 16) v = (v << 8) | *p++;
      img.data()(c, i) = float(v) / denom;
    }
  }
  return img;
}

PlanarImage load_image(const std::filesystem::path& path) {
  const std::vector<unsigned char> bytes = read_file(path);
  if (bytes.size() >= 8 && png_sig_cmp(bytes.data(), 0, 8) == 0) {
    return decode_png(bytes);
  }
  if (bytes.size() >= 2 && bytes[0] == 'P' &&
      (bytes[1] == '5' || bytes[1] == '6')) {
    return decode_pnm(bytes);
  }
  throw Error(ErrorCode::kUnsupportedFormat, path.string());
}

void save_image(const std::filesystem::path& path, const PlanarImage& img,
                int bit_depth) {
  check_bit_depth(bit_depth);
  const std::string ext = lower_extension(path);
  if (ext == ".png") {
    write_file(path, encode_png(img, bit_depth));
  } else if (ext == ".pgm" || ext == ".ppm") {
    if ((ext == ".pgm") != (img.channels() == 1)) {
      throw Error(ErrorCode::kWrongChannelCount,
                  ext + " does not match " + std::to_string(img.channels()) +
                      " channels");
    }
    write_file(path, encode_pnm(img, bit_depth));
  } else {
    throw Error(ErrorCode::kUnsupportedFormat,
                "unknown extension '" + ext + "'");
  }
}

PlanarImage to_luma(const PlanarImage& img) {
  if (img.channels() == 1) return img;
  if (img.colorspace() != ColorSpace::kRgb) {
    throw Error(ErrorCode::kWrongChannelCount, "to_luma needs an RGB image");
  }
  PlanarImage out(1, img.height(), img.width(), ColorSpace::kLuma);
  const Eigen::RowVector3f weights(0.299f, 0.587f, 0.114f);
  out.data() = (weights * img.data()).cwiseMax(0.0f).cwiseMin(1.0f);
  return out;
}

PlanarImage replicate_to_rgb(const PlanarImage& luma) {
  if (luma.channels() != 1) {
    throw Error(ErrorCode::kWrongChannelCount, "expected one channel");
  }
  PlanarImage out(3, luma.height(), luma.width(), ColorSpace::kRgb);
  out.data() = luma.data().replicate(3, 1);
  return out;
}

PlanarImage quantize_8bit(const PlanarImage& img) {
  PlanarImage out = img;
  out.data() = out.data().unaryExpr(
      [](float v) { return float(quantize(v, 255)) / 255.0f; });
  return out;
}

PlanarImage resize(const PlanarImage& img, int new_height, int new_width,
                   Filter filter) {
  if (new_height < 1 || new_width < 1) {
    throw Error(ErrorCode::kInvalidArgument, "resize target must be positive");
  }
  const std::vector<Tap> xtaps = build_taps(img.width(), new_width, filter);
  const std::vector<Tap> ytaps = build_taps(img.height(), new_height, filter);
  PlanarImage out(img.channels(), new_height, new_width, img.colorspace());
  PlaneMatrix<float> rows(img.height(), new_width);
  const bool clamp_range = filter == Filter::kBicubic &&
                           img.colorspace() != ColorSpace::kFeature;
  for (int c = 0; c < img.channels(); ++c) {
    const auto src = img.plane(c);
    for (int y = 0; y < img.height(); ++y) {
      for (int x = 0; x < new_width; ++x) {
        rows(y, x) = interpolate(xtaps[x], [&](int i) { return src(y, i); });
      }
    }
    auto dst = out.plane(c);
    for (int y = 0; y < new_height; ++y) {
      for (int x = 0; x < new_width; ++x) {
        float v = interpolate(ytaps[y], [&](int i) { return rows(i, x); });
        if (clamp_range) v = std::clamp(v, 0.0f, 1.0f);
        dst(y, x) = v;
      }
    }
  }
  return out;
}

std::vector<PlanarImage> split_patches(const PlanarImage& img, Grid grid) {
  require_valid_grid(img, grid);
  const int ph = img.height() / grid.rows;
  const int pw = img.width() / grid.cols;
  std::vector<PlanarImage> patches;
  patches.reserve(size_t(grid.rows) * grid.cols);
  for (int r = 0; r < grid.rows; ++r) {
    for (int q = 0; q < grid.cols; ++q) {
      PlanarImage patch(img.channels(), ph, pw, img.colorspace());
      for (int c = 0; c < img.channels(); ++c) {
        patch.plane(c) = img.plane(c).block(r * ph, q * pw, ph, pw);
      }
      patches.push_back(std::move(patch));
    }
  }
  return patches;
}

PlanarImage stitch_patches(const std::vector<PlanarImage>& patches,
                           Grid grid) {
  if (grid.rows < 1 || grid.cols < 1) {
    throw Error(ErrorCode::kInvalidArgument, "grid rows/cols must be >= 1");
  }
  if (patches.size() != size_t(grid.rows) * grid.cols) {
    throw Error(ErrorCode::kPatchCountMismatch,
                "expected " + std::to_string(grid.rows * grid.cols) +
                    " patches, got " + std::to_string(patches.size()));
  }
  const PlanarImage& first = patches.front();
  for (const PlanarImage& p : patches) {
    require_same_shape(first, p, "stitch_patches");
  }
  const int ph = first.height();
  const int pw = first.width();
  PlanarImage out(first.channels(), ph * grid.rows, pw * grid.cols,
                  first.colorspace());
  for (int r = 0; r < grid.rows; ++r) {
    for (int q = 0; q < grid.cols; ++q) {
      const PlanarImage& patch = patches[size_t(r) * grid.cols + q];
      for (int c = 0; c < out.channels(); ++c) {
        out.plane(c).block(r * ph, q * pw, ph, pw) = patch.plane(c);
      }
    }
  }
  return out;
}

PlanarImage resample(const PlanarImage& img, const ResampleSpec& spec,
                     const RestoreFn& restore) {
  auto checked = [&](const PlanarImage& in) {
    PlanarImage out = restore(in);
    if (!out.same_shape(in)) {
      throw Error(ErrorCode::kCallbackShapeMismatch,
                  "restore callback changed the image shape");
    }
    return out;
  };
  if (spec.mode == ResampleSpec::Mode::kResize) {
    if (spec.factor < 1) {
      throw Error(ErrorCode::kInvalidArgument, "resize factor must be >= 1");
    }
    if (spec.factor == 1) return checked(img);
    const int h = std::max(1, img.height() / spec.factor);
    const int w = std::max(1, img.width() / spec.factor);
    const PlanarImage small = resize(img, h, w, spec.filter);
    return resize(checked(small), img.height(), img.width(), spec.filter);
  }
  std::vector<PlanarImage> patches = split_patches(img, spec.grid);
  for (PlanarImage& p : patches) p = checked(p);
  return stitch_patches(patches, spec.grid);
}

}  // namespace spectradec::imgio
