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


// Independent reference implementations. Deliberately naive: direct sums
// straight from the textbook definitions, no shared code with the library.

#pragma once

#include <Eigen/Core>

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include <unistd.h>

#include "spectradec/image.hpp"

namespace spectradec::testing {

inline constexpr double kPi = 3.14159265358979323846;

// Orthonormal 2D DCT-II by the O(H^2 W^2) double sum.
inline Eigen::MatrixXd naive_dct2(const Eigen::MatrixXd& x) {
  const Eigen::Index h = x.rows();
  const Eigen::Index w = x.cols();
  Eigen::MatrixXd out(h, w);
  for (Eigen::Index u = 0; u < h; ++u) {
    const double au = u == 0 ? std::sqrt(1.0 / h) : std::sqrt(2.0 / h);
    for (Eigen::Index v = 0; v < w; ++v) {
      const double av = v == 0 ? std::sqrt(1.0 / w) : std::sqrt(2.0 / w);
      double acc = 0.0;
      for (Eigen::Index i = 0; i < h; ++i) {
        const double cu = std::cos(kPi * (2 * i + 1) * u / (2.0 * h));
        for (Eigen::Index j = 0; j < w; ++j) {
          acc += x(i, j) * cu * std::cos(kPi * (2 * j + 1) * v / (2.0 * w));
        }
      }
      out(u, v) = au * av * acc;
    }
  }
  return out;
}

inline PlanarImage random_image(int channels, int height, int width,
                                std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<float> u(0.0f, 1.0f);
  PlanarImage img(channels, height, width,
                  channels == 1 ? ColorSpace::kLuma : ColorSpace::kRgb);
  for (float& v : img.data().reshaped()) v = u(rng);
  return img;
}

inline Eigen::MatrixXd plane_of(const PlanarImage& img, int c) {
  return img.plane(c).cast<double>();
}

// SSIM by explicit per-window sums with the 11x11 Gaussian (sigma 1.5).
inline double direct_ssim_plane(const Eigen::MatrixXd& a,
                                const Eigen::MatrixXd& b) {
  const int n = 11;
  Eigen::MatrixXd wnd(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const double di = i - 5;
      const double dj = j - 5;
      wnd(i, j) = std::exp(-(di * di + dj * dj) / (2 * 1.5 * 1.5));
    }
  }
  wnd /= wnd.sum();
  const double c1 = 0.01 * 0.01;
  const double c2 = 0.03 * 0.03;
  double total = 0.0;
  int count = 0;
  for (Eigen::Index y = 0; y + n <= a.rows(); ++y) {
    for (Eigen::Index x = 0; x + n <= a.cols(); ++x) {
      double ma = 0, mb = 0;
      for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
          ma += wnd(i, j) * a(y + i, x + j);
          mb += wnd(i, j) * b(y + i, x + j);
        }
      }
      double va = 0, vb = 0, cov = 0;
      for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
          const double da = a(y + i, x + j) - ma;
          const double db = b(y + i, x + j) - mb;
          va += wnd(i, j) * da * da;
          vb += wnd(i, j) * db * db;
          cov += wnd(i, j) * da * db;
        }
      }
      total += ((2 * ma * mb + c1) * (2 * cov + c2)) /
               ((ma * ma + mb * mb + c1) * (va + vb + c2));
      ++count;
    }
  }
  return total / count;
}

// Scratch directory removed on scope exit.
class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    static int counter = 0;
    path_ = std::filesystem::temp_directory_path() /
            ("spectradec_" + tag + "_" + std::to_string(::getpid()) + "_" +
             std::to_string(counter++));
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

}  // namespace spectradec::testing
