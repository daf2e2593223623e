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

#include "spectradec/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <iterator>

namespace spectradec::spectral {
namespace {

template <typename Fn>
void for_each_tile(int height, int width, const std::optional<int>& tile,
                   Fn&& fn) {
  if (!tile) {
    fn(0, 0, height, width);
    return;
  }
  if (*tile < 1) {
    throw Error(ErrorCode::kInvalidArgument, "tile size must be >= 1");
  }
  for (int y = 0; y < height; y += *tile) {
    for (int x = 0; x < width; x += *tile) {
      fn(y, x, std::min(*tile, height - y), std::min(*tile, width - x));
    }
  }
}

void transform_plane(Eigen::Map<PlaneMatrix<float>> dst,
                     Eigen::Map<const PlaneMatrix<float>> src,
                     const TransformOptions& opts, bool inverse) {
  for_each_tile(
      int(src.rows()), int(src.cols()), opts.tile_size,
      [&](int y, int x, int h, int w) {
        PlaneMatrix<double> work = src.block(y, x, h, w).cast<double>();
        inverse ? dct::inverse_2d_inplace(work, opts.path)
                : dct::forward_2d_inplace(work, opts.path);
        dst.block(y, x, h, w) = work.cast<float>();
      });
}

void put_u32(std::vector<unsigned char>& out, uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<unsigned char>(v >> (8 * i)));
}

uint32_t get_u32(const unsigned char* p) {
  return uint32_t(p[0]) | uint32_t(p[1]) << 8 | uint32_t(p[2]) << 16 |
         uint32_t(p[3]) << 24;
}

}  // namespace

Spectrum dct2(const PlanarImage& img, const TransformOptions& opts) {
  if (img.empty()) throw Error(ErrorCode::kEmptyInput, "dct2 of empty image");
  Spectrum spec(img.channels(), img.height(), img.width(), img.colorspace());
  for (int c = 0; c < img.channels(); ++c) {
    transform_plane(spec.plane(c), img.plane(c), opts, false);
  }
  return spec;
}

PlanarImage idct2(const Spectrum& spec, const TransformOptions& opts) {
  if (spec.empty()) throw Error(ErrorCode::kEmptyInput, "idct2 of empty spectrum");
  ColorSpace cs = spec.origin();
  if (spec.channels() == 1 && cs == ColorSpace::kRgb) cs = ColorSpace::kFeature;
  if (spec.channels() == 3 && cs == ColorSpace::kLuma) cs = ColorSpace::kFeature;
  PlanarImage img(spec.channels(), spec.height(), spec.width(), cs);
  for (int c = 0; c < spec.channels(); ++c) {
    transform_plane(img.plane(c), spec.plane(c), opts, true);
  }
  return img;
}

int max_cutoff(int height, int width) { return std::max(height, width) - 1; }

BandMask::BandMask(BandKind kind, FrequencyCutoff cutoff, int height, int width)
    : kind_(kind), cutoff_(cutoff), height_(height), width_(width) {
  if (height < 1 || width < 1) {
    throw Error(ErrorCode::kInvalidArgument, "band mask needs a positive shape");
  }
  if (cutoff.k < 0 || cutoff.k > max_cutoff(height, width)) {
    throw Error(ErrorCode::kCutoffOutOfRange,
                "k=" + std::to_string(cutoff.k) + " outside [0, " +
                    std::to_string(max_cutoff(height, width)) + "]");
  }
}

bool BandMask::contains(int i, int j) const {
  const int ki = std::min(cutoff_.k, height_ - 1);
  const int kj = std::min(cutoff_.k, width_ - 1);
  switch (kind_) {
    case BandKind::kZero:
      return i == 0 && j == 0;
    case BandKind::kLow:
      return i <= ki && j <= kj && !(i == 0 && j == 0);
    case BandKind::kHigh:
      return i >= ki || j >= kj;
  }
  return false;
}

IndexMask BandMask::indices() const {
  IndexMask mask(height_, width_);
  for (int i = 0; i < height_; ++i) {
    for (int j = 0; j < width_; ++j) mask(i, j) = contains(i, j);
  }
  return mask;
}

IndexMask leading_block(int k, int height, int width, bool include_dc) {
  if (k < 0 || k > max_cutoff(height, width)) {
    throw Error(ErrorCode::kCutoffOutOfRange, "k=" + std::to_string(k));
  }
  IndexMask mask = IndexMask::Constant(height, width, false);
  mask.topLeftCorner(std::min(k + 1, height), std::min(k + 1, width)) = true;
  if (!include_dc) mask(0, 0) = false;
  return mask;
}

std::pair<Spectrum, Spectrum> exchange_band(const Spectrum& a,
                                            const Spectrum& b,
                                            const IndexMask& mask) {
  require_same_shape(a, b, "exchange_band");
  if (mask.rows() != a.height() || mask.cols() != a.width()) {
    throw Error(ErrorCode::kDimensionMismatch, "mask shape differs from spectra");
  }
  Spectrum out_a = a;
  Spectrum out_b = b;
  for (int c = 0; c < a.channels(); ++c) {
    auto pa = out_a.plane(c);
    auto pb = out_b.plane(c);
    pa = mask.select(b.plane(c), a.plane(c));
    pb = mask.select(a.plane(c), b.plane(c));
  }
  return {std::move(out_a), std::move(out_b)};
}

std::pair<Spectrum, Spectrum> exchange_band(const Spectrum& a,
                                            const Spectrum& b,
                                            const BandMask& mask) {
  return exchange_band(a, b, mask.indices());
}

PlanarImage dc_reconstruct(const Spectrum& spec) {
  if (spec.empty()) throw Error(ErrorCode::kEmptyInput, "empty spectrum");
  ColorSpace cs = spec.origin();
  if (spec.channels() == 1 && cs == ColorSpace::kRgb) cs = ColorSpace::kFeature;
  if (spec.channels() == 3 && cs == ColorSpace::kLuma) cs = ColorSpace::kFeature;
  PlanarImage img(spec.channels(), spec.height(), spec.width(), cs);
  const double norm = std::sqrt(double(spec.pixels()));
  for (int c = 0; c < spec.channels(); ++c) {
    img.data().row(c).setConstant(float(double(spec.at(c, 0, 0)) / norm));
  }
  return img;
}

ZigzagOrder::ZigzagOrder(int height, int width)
    : height_(height), width_(width) {
  if (height < 1 || width < 1) {
    throw Error(ErrorCode::kInvalidArgument, "zigzag needs a positive shape");
  }
  path_.reserve(size_t(height) * width);
  for (int s = 0; s <= height + width - 2; ++s) {
    const int lo = std::max(0, s - (width - 1));
    const int hi = std::min(s, height - 1);
    if (s % 2 == 1) {
      for (int r = lo; r <= hi; ++r) path_.push_back({r, s - r});
    } else {
      for (int r = hi; r >= lo; --r) path_.push_back({r, s - r});
    }
  }
  gather_.reserve(path_.size());
  for (const Index2& p : path_) {
    gather_.push_back(Eigen::Index(p.row) * width + p.col);
  }
}

Sequence apply_zigzag(const Spectrum& spec, const ZigzagOrder& order) {
  if (spec.height() != order.height() || spec.width() != order.width()) {
    throw Error(ErrorCode::kLengthMismatch, "zigzag order shape differs");
  }
  Sequence seq(spec.channels(), spec.pixels());
  const auto& gather = order.gather();
  for (int c = 0; c < spec.channels(); ++c) {
    for (size_t i = 0; i < gather.size(); ++i) {
      seq(c, Eigen::Index(i)) = spec.data()(c, gather[i]);
    }
  }
  return seq;
}

Spectrum invert_zigzag(const Sequence& seq, const ZigzagOrder& order,
                       ColorSpace origin) {
  const auto& gather = order.gather();
  if (seq.cols() != Eigen::Index(gather.size()) || seq.rows() < 1) {
    throw Error(ErrorCode::kLengthMismatch,
                "sequence length " + std::to_string(seq.cols()) + " vs " +
                    std::to_string(gather.size()));
  }
  Spectrum spec(int(seq.rows()), order.height(), order.width(), origin);
  for (int c = 0; c < spec.channels(); ++c) {
    for (size_t i = 0; i < gather.size(); ++i) {
      spec.data()(c, gather[i]) = static_cast<float>(seq(c, Eigen::Index(i)));
    }
  }
  return spec;
}

std::pair<Windows, WindowPartition> window_partition(
    const Eigen::Ref<const Eigen::VectorXd>& seq, int window_len) {
  if (window_len < 1) {
    throw Error(ErrorCode::kInvalidArgument, "window length must be >= 1");
  }
  const int n = static_cast<int>(seq.size());
  WindowPartition part;
  part.window_len = window_len;
  part.count = (n + window_len - 1) / window_len;
  part.pad = part.count * window_len - n;
  Windows windows = Windows::Zero(part.count, window_len);
  Eigen::Map<Eigen::VectorXd>(windows.data(), n) = seq;
  return {std::move(windows), part};
}

Eigen::VectorXd window_reverse(const Windows& windows,
                               const WindowPartition& part) {
  if (windows.rows() != part.count || windows.cols() != part.window_len ||
      part.pad < 0 || part.pad >= std::max(part.window_len, 1) ||
      part.length() < 0) {
    throw Error(ErrorCode::kPartitionMetadataMismatch,
                "windows " + std::to_string(windows.rows()) + "x" +
                    std::to_string(windows.cols()) + " vs partition count=" +
                    std::to_string(part.count) +
                    " len=" + std::to_string(part.window_len) +
                    " pad=" + std::to_string(part.pad));
  }
  return Eigen::Map<const Eigen::VectorXd>(windows.data(), part.length());
}

std::vector<unsigned char> encode_spectrum(const Spectrum& spec) {
  std::vector<unsigned char> out{'S', 'P', 'E', 'C'};
  put_u32(out, uint32_t(spec.height()));
  put_u32(out, uint32_t(spec.width()));
  put_u32(out, uint32_t(spec.channels()));
  out.reserve(out.size() + size_t(spec.data().size()) * 4);
  for (int c = 0; c < spec.channels(); ++c) {
    for (Eigen::Index i = 0; i < spec.pixels(); ++i) {
      uint32_t bits;
      const float v = spec.data()(c, i);
      std::memcpy(&bits, &v, 4);
      put_u32(out, bits);
    }
  }
  return out;
}

Spectrum decode_spectrum(const std::vector<unsigned char>& bytes) {
  if (bytes.size() < 16 || std::memcmp(bytes.data(), "SPEC", 4) != 0) {
    throw Error(ErrorCode::kUnsupportedFormat, "missing SPEC header");
  }
  const uint32_t h = get_u32(bytes.data() + 4);
  const uint32_t w = get_u32(bytes.data() + 8);
  const uint32_t c = get_u32(bytes.data() + 12);
  if (h == 0 || w == 0 || c == 0 ||
      uint64_t(h) * w * c * 4 != bytes.size() - 16) {
    throw Error(ErrorCode::kCorruptData, "SPEC payload size mismatch");
  }
  Spectrum spec(static_cast<int>(c), static_cast<int>(h), static_cast<int>(w));
  const unsigned char* p = bytes.data() + 16;
  for (int ch = 0; ch < spec.channels(); ++ch) {
    for (Eigen::Index i = 0; i < spec.pixels(); ++i, p += 4) {
      const uint32_t bits = get_u32(p);
      float v;
      std::memcpy(&v, &bits, 4);
      spec.data()(ch, i) = v;
    }
  }
  return spec;
}

void write_spectrum(const std::filesystem::path& path, const Spectrum& spec) {
  const std::vector<unsigned char> bytes = encode_spectrum(spec);
  std::ofstream out(path, std::ios::binary);
  out.write(reinterpret_cast<const char*>(bytes.data()),
            std::streamsize(bytes.size()));
  if (!out) throw Error(ErrorCode::kIoError, "cannot write " + path.string());
}

Spectrum read_spectrum(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kFileNotFound, path.string());
  const std::vector<unsigned char> bytes{std::istreambuf_iterator<char>(in),
                                         std::istreambuf_iterator<char>()};
  return decode_spectrum(bytes);
}

}  // namespace spectradec::spectral
