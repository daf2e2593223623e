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

#pragma once

#include <Eigen/Core>

#include <filesystem>
#include <optional>
#include <utility>
#include <vector>

#include "spectradec/dct.hpp"
#include "spectradec/image.hpp"

namespace spectradec::spectral {

// Orthonormal DCT-II coefficients, one plane per source channel, indexed
// (u, v) = (row frequency, column frequency). `origin` remembers the colour
// space of the image the coefficients came from.
class Spectrum : public Planes<float> {
 public:
  Spectrum() = default;
  Spectrum(int channels, int height, int width,
           ColorSpace origin = ColorSpace::kFeature)
      : Planes<float>(channels, height, width), origin_(origin) {}

  ColorSpace origin() const { return origin_; }

  friend bool operator==(const Spectrum& a, const Spectrum& b) {
    return a.same_shape(b) && a.data() == b.data();
  }

 private:
  ColorSpace origin_ = ColorSpace::kFeature;
};

struct TransformOptions {
  dct::Path path = dct::Path::kAuto;
  // Independent transforms over square tiles (edge tiles may be smaller).
  // NOT equivalent to the whole-plane transform: band masks and exchanges
  // then act on tile-local frequencies.
  std::optional<int> tile_size;
};

Spectrum dct2(const PlanarImage& img, const TransformOptions& opts = {});
PlanarImage idct2(const Spectrum& spec, const TransformOptions& opts = {});

// ---------------------------------------------------------------------------
// Frequency bands

struct FrequencyCutoff {
  int k = 0;
};

// Largest admissible cutoff for a plane: the maximum index along either axis.
int max_cutoff(int height, int width);

using IndexMask = Eigen::Array<bool, Eigen::Dynamic, Eigen::Dynamic>;

enum class BandKind { kZero, kLow, kHigh };

// zero = {(0,0)}
// low  = {(i,j) : i <= k, j <= k} minus (0,0)
// high = {(i,j) : i >= k or j >= k}
// with k clamped per axis to that axis's maximum index. Low and high share
// the boundary i == k or j == k inside [0,k]^2.
class BandMask {
 public:
  BandMask(BandKind kind, FrequencyCutoff cutoff, int height, int width);

  static BandMask zero(int height, int width) {
    return BandMask(BandKind::kZero, {0}, height, width);
  }
  static BandMask low(int k, int height, int width) {
    return BandMask(BandKind::kLow, {k}, height, width);
  }
  static BandMask high(int k, int height, int width) {
    return BandMask(BandKind::kHigh, {k}, height, width);
  }

  BandKind kind() const { return kind_; }
  int k() const { return cutoff_.k; }
  int height() const { return height_; }
  int width() const { return width_; }

  bool contains(int i, int j) const;
  IndexMask indices() const;

 private:
  BandKind kind_;
  FrequencyCutoff cutoff_;
  int height_;
  int width_;
};

// [0,k]^2 block, optionally without the DC coefficient.
IndexMask leading_block(int k, int height, int width, bool include_dc);

// Swaps the masked coefficients between a and b, leaving the rest in place.
std::pair<Spectrum, Spectrum> exchange_band(const Spectrum& a,
                                            const Spectrum& b,
                                            const IndexMask& mask);
std::pair<Spectrum, Spectrum> exchange_band(const Spectrum& a,
                                            const Spectrum& b,
                                            const BandMask& mask);

// Image from the DC coefficient alone: every pixel of channel c equals
// DC_c / sqrt(H W), i.e. the channel mean.
PlanarImage dc_reconstruct(const Spectrum& spec);

// ---------------------------------------------------------------------------
// Zigzag reordering

struct Index2 {
  int row = 0;
  int col = 0;
  friend bool operator==(const Index2&, const Index2&) = default;
};

// JPEG-style anti-diagonal traversal generalised to H x W. Odd diagonals run
// top-right to bottom-left, even diagonals bottom-left to top-right.
class ZigzagOrder {
 public:
  ZigzagOrder(int height, int width);

  int height() const { return height_; }
  int width() const { return width_; }
  const std::vector<Index2>& path() const { return path_; }
  // Flat row-major index of the coefficient visited at each position.
  const std::vector<Eigen::Index>& gather() const { return gather_; }

 private:
  int height_;
  int width_;
  std::vector<Index2> path_;
  std::vector<Eigen::Index> gather_;
};

// channels x (H W): row c is channel c read along the zigzag path.
using Sequence = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic,
                               Eigen::RowMajor>;

Sequence apply_zigzag(const Spectrum& spec, const ZigzagOrder& order);
Spectrum invert_zigzag(const Sequence& seq, const ZigzagOrder& order,
                       ColorSpace origin = ColorSpace::kFeature);

// ---------------------------------------------------------------------------
// Window partition

struct WindowPartition {
  int window_len = 1;
  int count = 0;
  int pad = 0;
  int length() const { return count * window_len - pad; }
};

// Rows are windows.
using Windows = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic,
                              Eigen::RowMajor>;

std::pair<Windows, WindowPartition> window_partition(
    const Eigen::Ref<const Eigen::VectorXd>& seq, int window_len);
Eigen::VectorXd window_reverse(const Windows& windows,
                               const WindowPartition& part);

// ---------------------------------------------------------------------------
// Raw spectrum dump: "SPEC", u32 H, u32 W, u32 C (little endian), then
// little-endian float32 coefficients, row-major, channel after channel.

void write_spectrum(const std::filesystem::path& path, const Spectrum& spec);
Spectrum read_spectrum(const std::filesystem::path& path);
std::vector<unsigned char> encode_spectrum(const Spectrum& spec);
Spectrum decode_spectrum(const std::vector<unsigned char>& bytes);

}  // namespace spectradec::spectral
