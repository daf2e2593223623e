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

#include "spectradec/dct.hpp"

#include <unsupported/Eigen/FFT>

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <optional>
#include <vector>

namespace spectradec::dct {

namespace {

int largest_prime_factor(int n) {
  int best = 1;
  for (int p = 2; p * p <= n; ++p) {
    while (n % p == 0) {
      best = p;
      n /= p;
    }
  }
  return std::max(best, n);
}

// kissfft degrades to O(n p) for a prime factor p; beyond this, go through a
// power-of-two chirp-z convolution instead.
constexpr int kMaxDirectRadix = 31;

// Length-n complex DFT, either directly or by Bluestein's algorithm.
class Dft {
 public:
  explicit Dft(int n) : n_(n) {
    if (largest_prime_factor(n) <= kMaxDirectRadix) return;
    m_ = 1;
    while (m_ < 2 * n - 1) m_ *= 2;
    chirp_.resize(n);
    const long long period = 2LL * n;
    for (int k = 0; k < n; ++k) {
      const long long kk = (static_cast<long long>(k) * k) % period;
      chirp_[k] = std::polar(1.0, -std::numbers::pi * double(kk) / double(n));
    }
    std::vector<std::complex<double>> b(m_, 0.0);
    b[0] = std::conj(chirp_[0]);
    for (int k = 1; k < n; ++k) b[k] = b[m_ - k] = std::conj(chirp_[k]);
    engine_.fwd(kernel_, b);
    a_.resize(m_);
  }

  void forward(const std::vector<std::complex<double>>& in,
               std::vector<std::complex<double>>& out) {
    if (m_ == 0) {
      engine_.fwd(out, in);
      return;
    }
    std::fill(a_.begin(), a_.end(), 0.0);
    for (int k = 0; k < n_; ++k) a_[k] = in[k] * chirp_[k];
    engine_.fwd(spec_, a_);
    for (int k = 0; k < m_; ++k) spec_[k] *= kernel_[k];
    engine_.inv(a_, spec_);
    out.resize(n_);
    for (int k = 0; k < n_; ++k) out[k] = a_[k] * chirp_[k];
  }

  // Normalized by 1/n, like Eigen::FFT::inv.
  void inverse(const std::vector<std::complex<double>>& in,
               std::vector<std::complex<double>>& out) {
    if (m_ == 0) {
      engine_.inv(out, in);
      return;
    }
    conj_.resize(n_);
    for (int k = 0; k < n_; ++k) conj_[k] = std::conj(in[k]);
    forward(conj_, out);
    for (auto& v : out) v = std::conj(v) / double(n_);
  }

 private:
  int n_;
  int m_ = 0;  // 0: direct
  Eigen::FFT<double> engine_;
  std::vector<std::complex<double>> chirp_, kernel_, a_, spec_, conj_;
};

}  // namespace

struct Dct1d::Impl {
  int n = 0;
  bool fft = false;
  Eigen::MatrixXd basis;  // naive path: basis(k, i) = a(k) cos(pi (2i+1) k / 2N)
  std::vector<std::complex<double>> twiddle;  // exp(-i pi k / 2N)
  std::vector<double> scale;                  // a(k)
  std::optional<Dft> engine;
  std::vector<std::complex<double>> time;
  std::vector<std::complex<double>> freq;
  std::vector<double> line;
};

Dct1d::Dct1d(int n, Path path) : impl_(std::make_unique<Impl>()) {
  if (n < 1) {
    throw Error(ErrorCode::kInvalidArgument, "DCT length must be >= 1");
  }
  Impl& s = *impl_;
  s.n = n;
  // kissfft cannot plan a length-1 transform; that case is the identity.
  s.fft = n > 1 && (path == Path::kFast || (path == Path::kAuto && n > kNaiveMaxLength));
  s.scale.resize(n);
  for (int k = 0; k < n; ++k) {
    s.scale[k] = std::sqrt((k == 0 ? 1.0 : 2.0) / n);
  }
  s.line.resize(n);
  if (s.fft) {
    s.twiddle.resize(n);
    for (int k = 0; k < n; ++k) {
      s.twiddle[k] = std::polar(1.0, -std::numbers::pi * k / (2.0 * n));
    }
    s.time.resize(n);
    s.freq.resize(n);
    s.engine.emplace(n);
  } else {
    s.basis.resize(n, n);
    for (int k = 0; k < n; ++k) {
      for (int i = 0; i < n; ++i) {
        s.basis(k, i) =
            s.scale[k] * std::cos(std::numbers::pi * (2 * i + 1) * k / (2.0 * n));
      }
    }
  }
}

Dct1d::~Dct1d() = default;
Dct1d::Dct1d(Dct1d&&) noexcept = default;
Dct1d& Dct1d::operator=(Dct1d&&) noexcept = default;

int Dct1d::size() const { return impl_->n; }
bool Dct1d::uses_fft() const { return impl_->fft; }

void Dct1d::forward(const double* in, double* out) {
  Impl& s = *impl_;
  const int n = s.n;
  if (!s.fft) {
    Eigen::Map<const Eigen::VectorXd> x(in, n);
    Eigen::Map<Eigen::VectorXd> line(s.line.data(), n);
    line.noalias() = s.basis * x;
    std::copy(s.line.begin(), s.line.end(), out);
    return;
  }
  // v = [x0, x2, x4, ..., x5, x3, x1]; X(k) = a(k) Re(w(k) V(k)).
  const int half = (n + 1) / 2;
  for (int i = 0; i < half; ++i) s.time[i] = in[2 * i];
  for (int i = 0; i < n / 2; ++i) s.time[n - 1 - i] = in[2 * i + 1];
  s.engine->forward(s.time, s.freq);
  for (int k = 0; k < n; ++k) {
    out[k] = s.scale[k] * (s.twiddle[k] * s.freq[k]).real();
  }
}

void Dct1d::inverse(const double* in, double* out) {
  Impl& s = *impl_;
  const int n = s.n;
  if (!s.fft) {
    Eigen::Map<const Eigen::VectorXd> c(in, n);
    Eigen::Map<Eigen::VectorXd> line(s.line.data(), n);
    line.noalias() = s.basis.transpose() * c;
    std::copy(s.line.begin(), s.line.end(), out);
    return;
  }
  // With y(k) = X(k) / a(k):  V(k) = conj(w(k)) (y(k) - i y(N-k)), y(N) = 0.
  for (int k = 0; k < n; ++k) {
    const double yk = in[k] / s.scale[k];
    const double ynk = k == 0 ? 0.0 : in[n - k] / s.scale[n - k];
    s.freq[k] = std::conj(s.twiddle[k]) * std::complex<double>(yk, -ynk);
  }
  s.engine->inverse(s.freq, s.time);
  const int half = (n + 1) / 2;
  for (int i = 0; i < half; ++i) s.line[2 * i] = s.time[i].real();
  for (int i = 0; i < n / 2; ++i) s.line[2 * i + 1] = s.time[n - 1 - i].real();
  std::copy(s.line.begin(), s.line.end(), out);
}

namespace {

void transform_2d(PlaneMatrix<double>& plane, Path path, bool inverse) {
  const int rows = static_cast<int>(plane.rows());
  const int cols = static_cast<int>(plane.cols());
  if (rows == 0 || cols == 0) return;

  Dct1d row_dct(cols, path);
  for (int r = 0; r < rows; ++r) {
    double* p = plane.row(r).data();
    inverse ? row_dct.inverse(p, p) : row_dct.forward(p, p);
  }

  Dct1d col_dct(rows, path);
  std::vector<double> column(rows);
  for (int c = 0; c < cols; ++c) {
    for (int r = 0; r < rows; ++r) column[r] = plane(r, c);
    inverse ? col_dct.inverse(column.data(), column.data())
            : col_dct.forward(column.data(), column.data());
    for (int r = 0; r < rows; ++r) plane(r, c) = column[r];
  }
}

}  // namespace

void forward_2d_inplace(PlaneMatrix<double>& plane, Path path) {
  transform_2d(plane, path, false);
}

void inverse_2d_inplace(PlaneMatrix<double>& plane, Path path) {
  transform_2d(plane, path, true);
}

}  // namespace spectradec::dct
