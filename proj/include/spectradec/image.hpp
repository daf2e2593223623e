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

#include <string>

#include "spectradec/error.hpp"

namespace spectradec {

template <typename Scalar>
using PlaneMatrix =
    Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

// Channel-planar raster. Storage is a channels x (height*width) row-major
// matrix, so each channel is one contiguous row and a per-pixel linear map
// across channels is a plain matrix product.
template <typename Scalar>
class Planes {
 public:
  using Matrix = PlaneMatrix<Scalar>;
  using PlaneMap = Eigen::Map<Matrix>;
  using ConstPlaneMap = Eigen::Map<const Matrix>;

  Planes() = default;
  Planes(int channels, int height, int width)
      : height_(height), width_(width) {
    if (channels < 1 || height < 1 || width < 1) {
      throw Error(ErrorCode::kInvalidArgument,
                  "planes need positive channels/height/width, got " +
                      std::to_string(channels) + "x" + std::to_string(height) +
                      "x" + std::to_string(width));
    }
    data_ = Matrix::Zero(channels, Eigen::Index(height) * width);
  }

  int channels() const { return static_cast<int>(data_.rows()); }
  int height() const { return height_; }
  int width() const { return width_; }
  Eigen::Index pixels() const { return Eigen::Index(height_) * width_; }
  bool empty() const { return data_.size() == 0; }

  PlaneMap plane(int c) {
    return PlaneMap(data_.data() + c * pixels(), height_, width_);
  }
  ConstPlaneMap plane(int c) const {
    return ConstPlaneMap(data_.data() + c * pixels(), height_, width_);
  }

  Scalar& at(int c, int y, int x) {
    return data_(c, Eigen::Index(y) * width_ + x);
  }
  Scalar at(int c, int y, int x) const {
    return data_(c, Eigen::Index(y) * width_ + x);
  }

  Matrix& data() { return data_; }
  const Matrix& data() const { return data_; }

  template <typename Other>
  bool same_shape(const Planes<Other>& other) const {
    return channels() == other.channels() && height_ == other.height() &&
           width_ == other.width();
  }

 private:
  int height_ = 0;
  int width_ = 0;
  Matrix data_;
};

enum class ColorSpace { kRgb, kLuma, kFeature };

std::string_view to_string(ColorSpace cs);

// The universal pixel container: 1 or 3 float planes, nominal range [0,1]
// for RGB and Luma.
class PlanarImage : public Planes<float> {
 public:
  PlanarImage() = default;
  PlanarImage(int channels, int height, int width,
              ColorSpace cs = ColorSpace::kRgb);

  ColorSpace colorspace() const { return colorspace_; }
  void set_colorspace(ColorSpace cs);

  // Every sample equal, bit for bit.
  friend bool operator==(const PlanarImage& a, const PlanarImage& b) {
    return a.colorspace_ == b.colorspace_ && a.same_shape(b) &&
           a.data() == b.data();
  }

  static PlanarImage constant(int channels, int height, int width, float value,
                              ColorSpace cs = ColorSpace::kRgb);

 private:
  ColorSpace colorspace_ = ColorSpace::kRgb;
};

// Unbounded real feature planes for the network kernels. Double precision so
// that finite-difference gradient checks are meaningful.
using FeatureMap = Planes<double>;

// Throws DimensionMismatch unless the two rasters agree in every dimension.
template <typename A, typename B>
void require_same_shape(const Planes<A>& a, const Planes<B>& b,
                        const char* what) {
  if (!a.same_shape(b)) {
    throw Error(ErrorCode::kDimensionMismatch,
                std::string(what) + ": " + std::to_string(a.channels()) + "x" +
                    std::to_string(a.height()) + "x" +
                    std::to_string(a.width()) + " vs " +
                    std::to_string(b.channels()) + "x" +
                    std::to_string(b.height()) + "x" +
                    std::to_string(b.width()));
  }
}

}  // namespace spectradec
