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

// Deterministic forward kernels of the restoration network's building
// blocks. Nothing here trains; weights are supplied by the caller or drawn
// by the variance-preserving initializer.

#include <Eigen/Core>

#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "spectradec/image.hpp"
#include "spectradec/spectral.hpp"

namespace spectradec::nn {

FeatureMap to_feature_map(const PlanarImage& img);

// Per-pixel affine map across channels (a 1x1 convolution).
struct LinearMap {
  Eigen::MatrixXd weight;  // out x in
  Eigen::VectorXd bias;    // out

  int in() const { return static_cast<int>(weight.cols()); }
  int out() const { return static_cast<int>(weight.rows()); }

  static LinearMap identity(int n);
  static LinearMap zero(int out, int in);

  FeatureMap apply(const FeatureMap& x) const;
};

// ---------------------------------------------------------------------------
// Pooling prior

struct PoolGrid {
  int rows = 1;
  int cols = 1;
};

// Output-size (adaptive) average pooling: cell (r, c) averages input rows
// [floor(r H / R), ceil((r+1) H / R)) and the analogous column range.
FeatureMap adaptive_avg_pool(const FeatureMap& x, PoolGrid grid);

// Default prior grid: (H/16, W/16), at least 1x1.
PoolGrid default_prior_grid(int height, int width);

// AAP(x) = g * local + g, where g is the global (1x1) mean broadcast over the
// grid and local the adaptive pool to `grid`.
FeatureMap aap(const FeatureMap& x, std::optional<PoolGrid> grid = {});

// ---------------------------------------------------------------------------
// Gates

inline double gelu(double x) {
  return 0.5 * x * (1.0 + std::erf(x / std::sqrt(2.0)));
}

// Channel split [F1, F2] -> gelu(F1) * F2; halves the channel count.
FeatureMap simple_gate(const FeatureMap& x);

struct BbgmWeights {
  LinearMap conv_g;    // C -> D
  LinearMap conv_f;    // C -> D
  LinearMap conv_mix;  // D -> 2C, split into (W_a, W_b) after gelu
  // 2C -> C applied to the concat; channel-pair averaging when absent.
  std::optional<LinearMap> reduce;
  // The second interaction branch uses W_a as written; set to use W_b.
  bool second_branch_uses_wb = false;

  static BbgmWeights identity(int channels);
};

// Bi-branch gated modulation of features f with prior g (same shape):
//   (W_a, W_b) = split(gelu(conv_mix(conv_g(g) * conv_f(f))))
//   out        = reduce(concat[f + W_a * g, g + W_a * f])
FeatureMap bbgm(const FeatureMap& f, const FeatureMap& g,
                const BbgmWeights& weights);

// ---------------------------------------------------------------------------
// Rational activation

// y = P(x) / Q(x), P(x) = sum_{i=0}^m a_i x^i, Q(x) = 1 + |sum_{j=1}^n b_j x^j|.
// Coefficients are stored per group (one row each); element e of a width-W
// vector uses group floor(e g / W).
template <typename Scalar>
class RationalActivation {
 public:
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
  using Coeffs =
      Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

  struct Gradient {
    Scalar dx;
    Vector da;  // m + 1
    Vector db;  // n
  };

  RationalActivation() : RationalActivation(identity()) {}
  RationalActivation(Coeffs numerator, Coeffs denominator)
      : numerator_(std::move(numerator)), denominator_(std::move(denominator)) {
    if (numerator_.rows() < 1 || numerator_.cols() < 1 ||
        denominator_.rows() != numerator_.rows()) {
      throw Error(ErrorCode::kInvalidArgument,
                  "rational activation needs matching per-group coefficient "
                  "rows and at least one numerator term");
    }
  }

  static RationalActivation identity(int groups = 1, int m = 5, int n = 4) {
    Coeffs a = Coeffs::Zero(groups, m + 1);
    if (m >= 1) a.col(1).setOnes();
    return RationalActivation(std::move(a), Coeffs::Zero(groups, n));
  }

  int groups() const { return static_cast<int>(numerator_.rows()); }
  int numerator_order() const { return static_cast<int>(numerator_.cols()) - 1; }
  int denominator_order() const { return static_cast<int>(denominator_.cols()); }
  const Coeffs& numerator() const { return numerator_; }
  const Coeffs& denominator() const { return denominator_; }
  Coeffs& numerator() { return numerator_; }
  Coeffs& denominator() { return denominator_; }

  int group_of(Eigen::Index element, Eigen::Index width) const {
    return static_cast<int>(element * groups() / width);
  }

  // Inner denominator polynomial s(x) = sum_j b_j x^j; the |.| kink sits at
  // its roots.
  Scalar inner_denominator(Scalar x, int group = 0) const {
    Scalar s = 0;
    for (Eigen::Index j = denominator_.cols(); j >= 1; --j) {
      s = (s + denominator_(group, j - 1)) * x;
    }
    return s;
  }

  Scalar forward(Scalar x, int group = 0) const {
    check_finite(x);
    return numerator_poly(x, group) / (Scalar(1) + std::abs(inner_denominator(x, group)));
  }

  // Analytic derivatives; the |.| subgradient is taken as 0 at s(x) = 0.
  Gradient backward(Scalar x, int group = 0) const {
    check_finite(x);
    const Eigen::Index m1 = numerator_.cols();
    const Eigen::Index n = denominator_.cols();
    Scalar p = 0, dp = 0;
    for (Eigen::Index i = m1 - 1; i >= 0; --i) {
      dp = dp * x + p;
      p = p * x + numerator_(group, i);
    }
    Scalar s = 0, ds = 0;
    for (Eigen::Index j = n; j >= 1; --j) {
      ds = ds * x + s;
      s = s * x + denominator_(group, j - 1);
    }
    // Horner above produced s/x and its derivative; restore the factor x.
    ds = ds * x + s;
    s = s * x;
    const Scalar sign = s > 0 ? Scalar(1) : (s < 0 ? Scalar(-1) : Scalar(0));
    const Scalar q = Scalar(1) + std::abs(s);
    const Scalar dq = sign * ds;

    Gradient g;
    g.dx = (dp * q - p * dq) / (q * q);
    g.da.resize(m1);
    Scalar power = 1;
    for (Eigen::Index i = 0; i < m1; ++i, power *= x) g.da[i] = power / q;
    g.db.resize(n);
    power = x;
    for (Eigen::Index j = 0; j < n; ++j, power *= x) {
      g.db[j] = -p * sign * power / (q * q);
    }
    return g;
  }

  // Element-wise over a vector with grouped coefficients.
  Vector apply(const Eigen::Ref<const Vector>& x) const {
    Vector y(x.size());
    for (Eigen::Index e = 0; e < x.size(); ++e) {
      y[e] = forward(x[e], group_of(e, x.size()));
    }
    return y;
  }

 private:
  Scalar numerator_poly(Scalar x, int group) const {
    Scalar p = 0;
    for (Eigen::Index i = numerator_.cols() - 1; i >= 0; --i) {
      p = p * x + numerator_(group, i);
    }
    return p;
  }

  static void check_finite(Scalar x) {
    if (!std::isfinite(static_cast<double>(x))) {
      throw Error(ErrorCode::kNonFiniteInput, "rational activation input");
    }
  }

  Coeffs numerator_;
  Coeffs denominator_;
};

// Least-squares (m, n) rational approximation of GELU on [-4, 4], the usual
// starting point for group-rational layers.
RationalActivation<double> gelu_rational(int groups = 1, int m = 5, int n = 4);

// ---------------------------------------------------------------------------
// Frequency-windowed KAN

// One group-rational KAN layer: y = W phi(x) + b.
struct KanLayer {
  RationalActivation<double> activation;
  LinearMap linear;
};

class FwKanStack {
 public:
  FwKanStack() = default;
  FwKanStack(int window_len, std::vector<KanLayer> layers,
             std::uint64_t seed = 0);

  static FwKanStack identity(int window_len, int depth = 1);

  int window_len() const { return window_len_; }
  int depth() const { return static_cast<int>(layers_.size()); }
  std::uint64_t seed() const { return seed_; }
  const std::vector<KanLayer>& layers() const { return layers_; }
  std::vector<KanLayer>& layers() { return layers_; }

  // Throws IncompatibleStack if widths do not chain from window_len back to
  // window_len.
  void validate() const;

  Eigen::VectorXd forward(const Eigen::Ref<const Eigen::VectorXd>& window) const;
  // Each row (window) is mapped independently.
  spectral::Windows forward_windows(const spectral::Windows& windows) const;

 private:
  int window_len_ = 0;
  std::vector<KanLayer> layers_;
  std::uint64_t seed_ = 0;
};

// Per channel: DCT, zigzag, window partition, stack, window reverse,
// inverse zigzag, inverse DCT.
FeatureMap fwkan_pipeline(const FeatureMap& x, const FwKanStack& stack);

// The windowed spectral sequence the stack sees for channel c.
std::pair<spectral::Windows, spectral::WindowPartition> fwkan_windows(
    const FeatureMap& x, int channel, int window_len);

// Monte-Carlo estimate of E[phi(z)^2], z ~ N(0,1), averaged over groups.
double activation_second_moment(const RationalActivation<double>& act,
                                std::uint64_t seed, int samples = 100000);

// Redraws every linear map with N(0, 1 / (fan_in E[phi^2])) entries and zero
// bias. Deterministic in `seed`.
FwKanStack init_variance_preserving(const FwKanStack& stack, std::uint64_t seed);

// ---------------------------------------------------------------------------
// Self-check used by `kan-check`

struct KanCheckOptions {
  int gradient_samples = 1000;
  double x_range = 5.0;
  double fd_step = 1e-5;
  double gradient_tolerance = 1e-4;
  double identity_tolerance = 1e-4;
  double kink_exclusion = 1e-6;
  int probe_height = 24;
  int probe_width = 20;
  int probe_channels = 2;
};

struct KanCheckReport {
  int stacks = 0;
  int gradient_samples = 0;  // samples with at least the input derivative checked
  int gradient_skipped = 0;  // samples with some check excluded near the kink
  double max_gradient_rel_err = 0.0;
  double max_identity_err = 0.0;
  bool locality_exact = true;
  bool passed = false;
};

// Relative error used for gradient checks: |g - fd| / max(1, |g|, |fd|).
double gradient_rel_err(double analytic, double numeric);

KanCheckReport kan_check(const std::vector<FwKanStack>& stacks,
                         std::uint64_t seed, const KanCheckOptions& opts = {});

// Random stacks for property sweeps: window length, depth, hidden widths and
// activation coefficients drawn from `seed`, then variance-preserving init.
std::vector<FwKanStack> random_stacks(int count, std::uint64_t seed);

}  // namespace spectradec::nn
