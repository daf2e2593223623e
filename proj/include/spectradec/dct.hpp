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

// Orthonormal DCT-II / DCT-III (inverse) on dense Eigen planes.
//
//   X(k) = a(k) * sum_n x(n) cos(pi (2n+1) k / 2N),
//   a(0) = sqrt(1/N), a(k>0) = sqrt(2/N)
//
// The 2-D transform is separable: rows first, then columns. All arithmetic is
// carried out in double precision regardless of the caller's scalar type.

#include <Eigen/Core>

#include <memory>

#include "spectradec/image.hpp"

namespace spectradec::dct {

// Lines of at most this length use the direct O(N^2) basis product.
inline constexpr int kNaiveMaxLength = 32;

enum class Path {
  kAuto,   // naive for N <= kNaiveMaxLength, FFT folding otherwise
  kNaive,  // direct basis product
  kFast,   // Makhoul's even/odd folding onto a length-N complex FFT
           // (chirp-z for lengths with a large prime factor)
};

// One-dimensional transform of a fixed length. Holds FFT plans and scratch
// space, so an instance must not be shared between threads.
class Dct1d {
 public:
  explicit Dct1d(int n, Path path = Path::kAuto);
  ~Dct1d();
  Dct1d(Dct1d&&) noexcept;
  Dct1d& operator=(Dct1d&&) noexcept;

  int size() const;
  bool uses_fft() const;

  // `in` and `out` may alias.
  void forward(const double* in, double* out);
  void inverse(const double* in, double* out);

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

void forward_2d_inplace(PlaneMatrix<double>& plane, Path path = Path::kAuto);
void inverse_2d_inplace(PlaneMatrix<double>& plane, Path path = Path::kAuto);

template <typename Derived>
PlaneMatrix<typename Derived::Scalar> forward_2d(
    const Eigen::MatrixBase<Derived>& plane, Path path = Path::kAuto) {
  PlaneMatrix<double> work = plane.template cast<double>();
  forward_2d_inplace(work, path);
  return work.template cast<typename Derived::Scalar>();
}

template <typename Derived>
PlaneMatrix<typename Derived::Scalar> inverse_2d(
    const Eigen::MatrixBase<Derived>& coeffs, Path path = Path::kAuto) {
  PlaneMatrix<double> work = coeffs.template cast<double>();
  inverse_2d_inplace(work, path);
  return work.template cast<typename Derived::Scalar>();
}

inline Eigen::VectorXd forward_1d(const Eigen::VectorXd& x,
                                  Path path = Path::kAuto) {
  Eigen::VectorXd out(x.size());
  Dct1d(static_cast<int>(x.size()), path).forward(x.data(), out.data());
  return out;
}

inline Eigen::VectorXd inverse_1d(const Eigen::VectorXd& x,
                                  Path path = Path::kAuto) {
  Eigen::VectorXd out(x.size());
  Dct1d(static_cast<int>(x.size()), path).inverse(x.data(), out.data());
  return out;
}

}  // namespace spectradec::dct
