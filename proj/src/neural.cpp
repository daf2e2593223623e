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

#include "spectradec/neural.hpp"

#include <Eigen/QR>

#include <algorithm>
#include <random>

#include "spectradec/dct.hpp"
#include "spectradec/rng.hpp"

namespace spectradec::nn {

FeatureMap to_feature_map(const PlanarImage& img) {
  FeatureMap x(img.channels(), img.height(), img.width());
  x.data() = img.data().cast<double>();
  return x;
}

LinearMap LinearMap::identity(int n) {
  return {Eigen::MatrixXd::Identity(n, n), Eigen::VectorXd::Zero(n)};
}

LinearMap LinearMap::zero(int out, int in) {
  return {Eigen::MatrixXd::Zero(out, in), Eigen::VectorXd::Zero(out)};
}

FeatureMap LinearMap::apply(const FeatureMap& x) const {
  if (x.channels() != in() || bias.size() != out()) {
    throw Error(ErrorCode::kWeightShapeMismatch,
                "linear map " + std::to_string(out()) + "x" +
                    std::to_string(in()) + " applied to " +
                    std::to_string(x.channels()) + " channels");
  }
  FeatureMap y(out(), x.height(), x.width());
  y.data().noalias() = weight * x.data();
  y.data().colwise() += bias;
  return y;
}

PoolGrid default_prior_grid(int height, int width) {
  return {std::max(1, height / 16), std::max(1, width / 16)};
}

FeatureMap adaptive_avg_pool(const FeatureMap& x, PoolGrid grid) {
  if (x.empty()) throw Error(ErrorCode::kEmptyInput, "pooling an empty map");
  if (grid.rows < 1 || grid.cols < 1) {
    throw Error(ErrorCode::kInvalidArgument, "pool grid must be positive");
  }
  const int h = x.height();
  const int w = x.width();
  FeatureMap out(x.channels(), grid.rows, grid.cols);
  for (int r = 0; r < grid.rows; ++r) {
    const int y0 = r * h / grid.rows;
    const int y1 = ((r + 1) * h + grid.rows - 1) / grid.rows;
    for (int q = 0; q < grid.cols; ++q) {
      const int x0 = q * w / grid.cols;
      const int x1 = ((q + 1) * w + grid.cols - 1) / grid.cols;
      for (int c = 0; c < x.channels(); ++c) {
        out.at(c, r, q) = x.plane(c).block(y0, x0, y1 - y0, x1 - x0).mean();
      }
    }
  }
  return out;
}

FeatureMap aap(const FeatureMap& x, std::optional<PoolGrid> grid) {
  if (x.empty()) throw Error(ErrorCode::kEmptyInput, "AAP of an empty map");
  const PoolGrid g = grid.value_or(default_prior_grid(x.height(), x.width()));
  FeatureMap local = adaptive_avg_pool(x, g);
  const Eigen::VectorXd global = x.data().rowwise().mean();
  for (int c = 0; c < x.channels(); ++c) {
    local.data().row(c) =
        (global[c] * local.data().row(c).array() + global[c]).matrix();
  }
  return local;
}

FeatureMap simple_gate(const FeatureMap& x) {
  if (x.channels() % 2 != 0) {
    throw Error(ErrorCode::kOddChannelCount,
                "SimpleGate needs an even channel count, got " +
                    std::to_string(x.channels()));
  }
  const int half = x.channels() / 2;
  FeatureMap y(half, x.height(), x.width());
  y.data() = x.data().topRows(half).unaryExpr([](double v) { return gelu(v); })
                 .cwiseProduct(x.data().bottomRows(half));
  return y;
}

BbgmWeights BbgmWeights::identity(int channels) {
  BbgmWeights w;
  w.conv_g = LinearMap::identity(channels);
  w.conv_f = LinearMap::identity(channels);
  w.conv_mix = LinearMap::zero(2 * channels, channels);
  w.conv_mix.weight.topRows(channels).setIdentity();
  w.conv_mix.weight.bottomRows(channels).setIdentity();
  return w;
}

FeatureMap bbgm(const FeatureMap& f, const FeatureMap& g,
                const BbgmWeights& weights) {
  if (!f.same_shape(g)) {
    throw Error(ErrorCode::kShapeMismatch, "BBGM inputs differ in shape");
  }
  const int c = f.channels();
  if (weights.conv_g.in() != c || weights.conv_f.in() != c ||
      weights.conv_g.out() != weights.conv_f.out() ||
      weights.conv_mix.in() != weights.conv_g.out() ||
      weights.conv_mix.out() != 2 * c ||
      (weights.reduce && (weights.reduce->in() != 2 * c ||
                          weights.reduce->out() != c))) {
    throw Error(ErrorCode::kWeightShapeMismatch, "BBGM weight shapes");
  }
  FeatureMap fused = weights.conv_g.apply(g);
  fused.data().array() *= weights.conv_f.apply(f).data().array();
  FeatureMap gates = weights.conv_mix.apply(fused);
  gates.data() = gates.data().unaryExpr([](double v) { return gelu(v); });
  const auto wa = gates.data().topRows(c).array();
  const auto wb = gates.data().bottomRows(c).array();

  FeatureMap concat(2 * c, f.height(), f.width());
  concat.data().topRows(c) = (f.data().array() + wa * g.data().array()).matrix();
  if (weights.second_branch_uses_wb) {
    concat.data().bottomRows(c) = (g.data().array() + wb * f.data().array()).matrix();
  } else {
    concat.data().bottomRows(c) = (g.data().array() + wa * f.data().array()).matrix();
  }
  if (weights.reduce) return weights.reduce->apply(concat);
  FeatureMap out(c, f.height(), f.width());
  out.data() = 0.5 * (concat.data().topRows(c) + concat.data().bottomRows(c));
  return out;
}

RationalActivation<double> gelu_rational(int groups, int m, int n) {
  constexpr int kPoints = 801;
  Eigen::MatrixXd a(kPoints, m + 1 + n);
  Eigen::VectorXd y(kPoints);
  for (int p = 0; p < kPoints; ++p) {
    const double x = -4.0 + 8.0 * p / (kPoints - 1);
    y[p] = gelu(x);
    double power = 1.0;
    for (int i = 0; i <= m; ++i, power *= x) a(p, i) = power;
    power = x;
    for (int j = 0; j < n; ++j, power *= x) a(p, m + 1 + j) = -y[p] * power;
  }
  // P(x) - y s(x) = y, linear in (a, b).
  const Eigen::VectorXd sol = a.colPivHouseholderQr().solve(y);
  RationalActivation<double>::Coeffs num(groups, m + 1);
  RationalActivation<double>::Coeffs den(groups, n);
  for (int g = 0; g < groups; ++g) {
    num.row(g) = sol.head(m + 1).transpose();
    den.row(g) = sol.tail(n).transpose();
  }
  return {std::move(num), std::move(den)};
}

FwKanStack::FwKanStack(int window_len, std::vector<KanLayer> layers,
                       std::uint64_t seed)
    : window_len_(window_len), layers_(std::move(layers)), seed_(seed) {
  validate();
}

FwKanStack FwKanStack::identity(int window_len, int depth) {
  std::vector<KanLayer> layers;
  for (int d = 0; d < depth; ++d) {
    layers.push_back({RationalActivation<double>::identity(),
                      LinearMap::identity(window_len)});
  }
  return FwKanStack(window_len, std::move(layers));
}

void FwKanStack::validate() const {
  if (window_len_ < 1) {
    throw Error(ErrorCode::kIncompatibleStack, "window length must be >= 1");
  }
  if (layers_.empty()) {
    throw Error(ErrorCode::kIncompatibleStack, "stack has no layers");
  }
  int width = window_len_;
  for (size_t l = 0; l < layers_.size(); ++l) {
    const LinearMap& lin = layers_[l].linear;
    if (lin.in() != width || lin.bias.size() != lin.out()) {
      throw Error(ErrorCode::kIncompatibleStack,
                  "layer " + std::to_string(l) + " expects width " +
                      std::to_string(lin.in()) + ", receives " +
                      std::to_string(width));
    }
    if (layers_[l].activation.groups() > width) {
      throw Error(ErrorCode::kIncompatibleStack,
                  "layer " + std::to_string(l) + " has more groups than inputs");
    }
    width = lin.out();
  }
  if (width != window_len_) {
    throw Error(ErrorCode::kIncompatibleStack,
                "stack ends at width " + std::to_string(width) +
                    ", window length is " + std::to_string(window_len_));
  }
}

Eigen::VectorXd FwKanStack::forward(
    const Eigen::Ref<const Eigen::VectorXd>& window) const {
  if (window.size() != window_len_) {
    throw Error(ErrorCode::kIncompatibleStack, "window length mismatch");
  }
  Eigen::VectorXd x = window;
  for (const KanLayer& layer : layers_) {
    const Eigen::VectorXd phi = layer.activation.apply(x);
    x = layer.linear.weight * phi + layer.linear.bias;
  }
  return x;
}

spectral::Windows FwKanStack::forward_windows(
    const spectral::Windows& windows) const {
  if (windows.cols() != window_len_) {
    throw Error(ErrorCode::kIncompatibleStack, "window length mismatch");
  }
  spectral::Windows out(windows.rows(), windows.cols());
  for (Eigen::Index r = 0; r < windows.rows(); ++r) {
    out.row(r) = forward(windows.row(r).transpose()).transpose();
  }
  return out;
}

std::pair<spectral::Windows, spectral::WindowPartition> fwkan_windows(
    const FeatureMap& x, int channel, int window_len) {
  PlaneMatrix<double> coeffs = x.plane(channel);
  dct::forward_2d_inplace(coeffs);
  const spectral::ZigzagOrder order(x.height(), x.width());
  Eigen::VectorXd seq(coeffs.size());
  for (size_t i = 0; i < order.gather().size(); ++i) {
    seq[Eigen::Index(i)] = coeffs.data()[order.gather()[i]];
  }
  return spectral::window_partition(seq, window_len);
}

FeatureMap fwkan_pipeline(const FeatureMap& x, const FwKanStack& stack) {
  stack.validate();
  if (x.empty()) throw Error(ErrorCode::kEmptyInput, "FW-KAN of an empty map");
  const spectral::ZigzagOrder order(x.height(), x.width());
  FeatureMap out(x.channels(), x.height(), x.width());
  for (int c = 0; c < x.channels(); ++c) {
    auto [windows, part] = fwkan_windows(x, c, stack.window_len());
    const Eigen::VectorXd seq =
        spectral::window_reverse(stack.forward_windows(windows), part);
    PlaneMatrix<double> coeffs(x.height(), x.width());
    for (size_t i = 0; i < order.gather().size(); ++i) {
      coeffs.data()[order.gather()[i]] = seq[Eigen::Index(i)];
    }
    dct::inverse_2d_inplace(coeffs);
    out.plane(c) = coeffs;
  }
  return out;
}

double activation_second_moment(const RationalActivation<double>& act,
                                std::uint64_t seed, int samples) {
  double total = 0.0;
  for (int g = 0; g < act.groups(); ++g) {
    std::mt19937_64 rng = item_rng(seed, std::uint64_t(g));
    std::normal_distribution<double> normal(0.0, 1.0);
    double sum = 0.0;
    for (int s = 0; s < samples; ++s) {
      const double v = act.forward(normal(rng), g);
      sum += v * v;
    }
    total += sum / samples;
  }
  return total / act.groups();
}

FwKanStack init_variance_preserving(const FwKanStack& stack,
                                    std::uint64_t seed) {
  stack.validate();
  std::vector<KanLayer> layers = stack.layers();
  for (size_t l = 0; l < layers.size(); ++l) {
    KanLayer& layer = layers[l];
    const double moment =
        activation_second_moment(layer.activation, stream_key(seed, "moment" + std::to_string(l)));
    const double stddev =
        1.0 / std::sqrt(double(layer.linear.in()) * std::max(moment, 1e-12));
    std::mt19937_64 rng = item_rng(seed, "weights" + std::to_string(l));
    std::normal_distribution<double> normal(0.0, stddev);
    for (Eigen::Index r = 0; r < layer.linear.weight.rows(); ++r) {
      for (Eigen::Index c = 0; c < layer.linear.weight.cols(); ++c) {
        layer.linear.weight(r, c) = normal(rng);
      }
    }
    layer.linear.bias.setZero();
  }
  return FwKanStack(stack.window_len(), std::move(layers), seed);
}

double gradient_rel_err(double analytic, double numeric) {
  return std::abs(analytic - numeric) /
         std::max({1.0, std::abs(analytic), std::abs(numeric)});
}

namespace {

struct KinkStatus {
  bool x_smooth = false;     // input derivative checkable
  bool coeff_smooth = false; // denominator-coefficient derivatives checkable
};

// A group whose denominator coefficients are all zero has s(x) == 0
// everywhere; central differences in b are then symmetric and match the zero
// subgradient, so nothing needs excluding.
KinkStatus kink_status(const RationalActivation<double>& act, int group,
                       double x, double h, double exclusion) {
  if (act.denominator_order() == 0 || act.denominator().row(group).isZero(0.0)) {
    return {true, true};
  }
  KinkStatus status;
  const double s0 = act.inner_denominator(x, group);
  const double sl = act.inner_denominator(x - h, group);
  const double sr = act.inner_denominator(x + h, group);
  if (std::abs(s0) <= exclusion) return status;
  status.x_smooth =
      (sl > 0) == (s0 > 0) && (sr > 0) == (s0 > 0) && sl != 0 && sr != 0;
  // Coefficient perturbations of size h move s(x) by at most h sum |x|^j.
  double reach = 0.0;
  double power = std::abs(x);
  for (int j = 0; j < act.denominator_order(); ++j, power *= std::abs(x)) {
    reach += h * power;
  }
  status.coeff_smooth = status.x_smooth && std::abs(s0) > reach;
  return status;
}

double check_activation_gradients(const RationalActivation<double>& act,
                                  std::mt19937_64& rng,
                                  const KanCheckOptions& opts, int& checked,
                                  int& skipped) {
  std::uniform_real_distribution<double> uniform(-opts.x_range, opts.x_range);
  const double h = opts.fd_step;
  double worst = 0.0;
  for (int s = 0; s < opts.gradient_samples; ++s) {
    const int group = static_cast<int>(rng() % std::uint64_t(act.groups()));
    const double x = uniform(rng);
    const KinkStatus kink = kink_status(act, group, x, h, opts.kink_exclusion);
    if (!kink.x_smooth) {
      ++skipped;
      continue;
    }
    ++checked;
    const auto grad = act.backward(x, group);
    const double fd_x =
        (act.forward(x + h, group) - act.forward(x - h, group)) / (2 * h);
    worst = std::max(worst, gradient_rel_err(grad.dx, fd_x));
    RationalActivation<double> probe = act;
    for (int i = 0; i < act.numerator().cols(); ++i) {
      const double a = act.numerator()(group, i);
      probe.numerator()(group, i) = a + h;
      const double up = probe.forward(x, group);
      probe.numerator()(group, i) = a - h;
      const double down = probe.forward(x, group);
      probe.numerator()(group, i) = a;
      worst = std::max(worst, gradient_rel_err(grad.da[i], (up - down) / (2 * h)));
    }
    if (!kink.coeff_smooth) {
      ++skipped;
      continue;
    }
    for (int j = 0; j < act.denominator().cols(); ++j) {
      const double b = act.denominator()(group, j);
      probe.denominator()(group, j) = b + h;
      const double up = probe.forward(x, group);
      probe.denominator()(group, j) = b - h;
      const double down = probe.forward(x, group);
      probe.denominator()(group, j) = b;
      worst = std::max(worst, gradient_rel_err(grad.db[j], (up - down) / (2 * h)));
    }
  }
  return worst;
}

FeatureMap random_feature_map(int channels, int height, int width,
                              std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  FeatureMap x(channels, height, width);
  x.data() = x.data().unaryExpr([&](double) { return normal(rng); });
  return x;
}

}  // namespace

KanCheckReport kan_check(const std::vector<FwKanStack>& stacks,
                         std::uint64_t seed, const KanCheckOptions& opts) {
  KanCheckReport report;
  report.stacks = static_cast<int>(stacks.size());
  for (size_t s = 0; s < stacks.size(); ++s) {
    const FwKanStack& stack = stacks[s];
    stack.validate();
    std::mt19937_64 rng = item_rng(seed, std::uint64_t(s));

    for (const KanLayer& layer : stack.layers()) {
      report.max_gradient_rel_err = std::max(
          report.max_gradient_rel_err,
          check_activation_gradients(layer.activation, rng, opts,
                                     report.gradient_samples,
                                     report.gradient_skipped));
    }

    const FeatureMap probe = random_feature_map(
        opts.probe_channels, opts.probe_height, opts.probe_width, rng);
    const FeatureMap same =
        fwkan_pipeline(probe, FwKanStack::identity(stack.window_len(), stack.depth()));
    report.max_identity_err =
        std::max(report.max_identity_err,
                 (same.data() - probe.data()).cwiseAbs().maxCoeff());

    // Locality: perturb one window, every other output window must be
    // bit-identical.
    auto [windows, part] = fwkan_windows(probe, 0, stack.window_len());
    const spectral::Windows base = stack.forward_windows(windows);
    const Eigen::Index target =
        Eigen::Index(rng() % std::uint64_t(windows.rows()));
    spectral::Windows perturbed = windows;
    perturbed.row(target).array() += 0.5;
    const spectral::Windows moved = stack.forward_windows(perturbed);
    for (Eigen::Index r = 0; r < windows.rows(); ++r) {
      if (r != target && moved.row(r) != base.row(r)) {
        report.locality_exact = false;
      }
    }
  }
  report.passed = report.max_gradient_rel_err < opts.gradient_tolerance &&
                  report.max_identity_err < opts.identity_tolerance &&
                  report.locality_exact;
  return report;
}

std::vector<FwKanStack> random_stacks(int count, std::uint64_t seed) {
  std::vector<FwKanStack> stacks;
  stacks.reserve(std::max(count, 0));
  for (int s = 0; s < count; ++s) {
    std::mt19937_64 rng = item_rng(seed, "stack" + std::to_string(s));
    const int window_len = 4 << (rng() % 3);
    const int depth = 1 + int(rng() % 3);
    const int groups = 1 + int(rng() % 2);
    std::normal_distribution<double> coeff(0.0, 0.3);
    std::vector<KanLayer> layers;
    int width = window_len;
    for (int d = 0; d < depth; ++d) {
      const int out = d + 1 == depth ? window_len : window_len * (1 + int(rng() % 2));
      RationalActivation<double> act = gelu_rational(groups);
      act.numerator() += act.numerator().unaryExpr([&](double) { return coeff(rng); });
      act.denominator() +=
          act.denominator().unaryExpr([&](double) { return coeff(rng); });
      layers.push_back({std::move(act), LinearMap::zero(out, width)});
      width = out;
    }
    stacks.push_back(init_variance_preserving(
        FwKanStack(window_len, std::move(layers)), stream_key(seed, std::uint64_t(s))));
  }
  return stacks;
}

}  // namespace spectradec::nn
