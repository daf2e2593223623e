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

#include "spectradec/analysis.hpp"

#include <algorithm>
#include <cmath>

#include "spectradec/dct.hpp"
#include "spectradec/metrics.hpp"
#include "spectradec/parallel.hpp"
#include "json.hpp"

namespace spectradec::analysis {

using spectral::Spectrum;

namespace {

// D(input - gt) per channel, in double precision.
std::vector<PlaneMatrix<double>> residual_spectrum(const PlanarImage& input,
                                                   const PlanarImage& gt) {
  std::vector<PlaneMatrix<double>> planes;
  for (int c = 0; c < input.channels(); ++c) {
    PlaneMatrix<double> d =
        input.plane(c).cast<double>() - gt.plane(c).cast<double>();
    dct::forward_2d_inplace(d);
    planes.push_back(std::move(d));
  }
  return planes;
}

// PSNR from the residual energy on (inside == true) or off the mask. By
// Parseval this is the spatial PSNR of the corresponding reconstruction, and
// summing non-negative terms in a fixed order keeps it monotone in the mask.
double masked_psnr(const std::vector<PlaneMatrix<double>>& residual,
                   const spectral::IndexMask& mask, bool inside) {
  double energy = 0.0;
  Eigen::Index count = 0;
  for (const PlaneMatrix<double>& d : residual) {
    for (Eigen::Index i = 0; i < d.rows(); ++i) {
      for (Eigen::Index j = 0; j < d.cols(); ++j) {
        if (mask(i, j) == inside) energy += d(i, j) * d(i, j);
      }
    }
    count += d.size();
  }
  return metrics::psnr_from_mse(energy / double(count));
}

}  // namespace

ZeroSwapReport zero_swap_experiment(const PlanarImage& input,
                                    const PlanarImage& gt) {
  require_same_shape(input, gt, "zero_swap_experiment");
  const Spectrum in_spec = spectral::dct2(input);
  const Spectrum gt_spec = spectral::dct2(gt);
  auto [x_in, x_gt] = spectral::exchange_band(
      in_spec, gt_spec, spectral::BandMask::zero(input.height(), input.width()));
  ZeroSwapReport r;
  r.exchanged_input = spectral::idct2(x_in);
  r.exchanged_gt = spectral::idct2(x_gt);
  const auto residual = residual_spectrum(input, gt);
  const spectral::IndexMask dc =
      spectral::BandMask::zero(input.height(), input.width()).indices();
  r.psnr_in = metrics::psnr(input, gt);
  r.psnr_xin = masked_psnr(residual, dc, false);
  r.psnr_xgt = masked_psnr(residual, dc, true);
  return r;
}

std::vector<int> default_ks(int max_k) {
  std::vector<int> ks{0};
  for (int k = 1; k < max_k; k *= 2) ks.push_back(k);
  if (max_k > 0) ks.push_back(max_k);
  return ks;
}

ExchangeCurve progressive_fill_curve(const PlanarImage& input,
                                     const PlanarImage& gt,
                                     const std::vector<int>& ks,
                                     bool include_dc, int threads) {
  require_same_shape(input, gt, "progressive_fill_curve");
  const int max_k = spectral::max_cutoff(input.height(), input.width());
  for (size_t i = 0; i < ks.size(); ++i) {
    if (ks[i] < 0 || ks[i] > max_k) {
      throw Error(ErrorCode::kCutoffOutOfRange,
                  "k=" + std::to_string(ks[i]) + " outside [0, " +
                      std::to_string(max_k) + "]");
    }
    if (i > 0 && ks[i] <= ks[i - 1]) {
      throw Error(ErrorCode::kInvalidArgument, "ks must be strictly increasing");
    }
  }
  const auto residual = residual_spectrum(input, gt);

  ExchangeCurve curve;
  curve.ks = ks;
  curve.include_dc = include_dc;
  curve.psnr_filled.resize(ks.size());
  curve.psnr_drained.resize(ks.size());
  parallel_for(ks.size(), threads, [&](size_t i) {
    const spectral::IndexMask mask = spectral::leading_block(
        ks[i], input.height(), input.width(), include_dc);
    curve.psnr_filled[i] = masked_psnr(residual, mask, false);
    curve.psnr_drained[i] = masked_psnr(residual, mask, true);
  });
  return curve;
}

std::string ExchangeCurve::to_csv() const {
  std::string out = "k,psnr_filled,psnr_drained\n";
  for (size_t i = 0; i < ks.size(); ++i) {
    out += std::to_string(ks[i]) + "," + metrics::format_number(psnr_filled[i]) +
           "," + metrics::format_number(psnr_drained[i]) + "\n";
  }
  return out;
}

std::string ExchangeCurve::to_json() const {
  auto encode = [](double v) -> nlohmann::json {
    if (std::isinf(v)) return metrics::format_number(v);
    return v;
  };
  nlohmann::json points = nlohmann::json::array();
  for (size_t i = 0; i < ks.size(); ++i) {
    points.push_back({{"k", ks[i]},
                      {"psnr_filled", encode(psnr_filled[i])},
                      {"psnr_drained", encode(psnr_drained[i])}});
  }
  nlohmann::json doc = {{"include_dc", include_dc}, {"points", points}};
  return doc.dump(2) + "\n";
}

PlanarImage zero_component_map(const PlanarImage& img,
                               std::optional<int> tile_size) {
  if (!tile_size) return spectral::dc_reconstruct(spectral::dct2(img));
  if (*tile_size < 1) {
    throw Error(ErrorCode::kInvalidArgument, "tile size must be >= 1");
  }
  const Spectrum spec = spectral::dct2(img, {dct::Path::kAuto, tile_size});
  PlanarImage out(img.channels(), img.height(), img.width(), img.colorspace());
  const int t = *tile_size;
  for (int y = 0; y < img.height(); y += t) {
    for (int x = 0; x < img.width(); x += t) {
      const int h = std::min(t, img.height() - y);
      const int w = std::min(t, img.width() - x);
      const double norm = std::sqrt(double(h) * w);
      for (int c = 0; c < img.channels(); ++c) {
        out.plane(c).block(y, x, h, w).setConstant(
            float(double(spec.at(c, y, x)) / norm));
      }
    }
  }
  return out;
}

PlanarImage synthetic_lowlight(const PlanarImage& clean, double gamma,
                               double gain) {
  PlanarImage out = clean;
  out.data() = clean.data().unaryExpr([&](float v) {
    const double d = gain * std::pow(std::max(0.0, double(v)), gamma);
    return float(std::clamp(d, 0.0, 1.0));
  });
  return out;
}

PlanarImage gaussian_blur(const PlanarImage& img, double sigma) {
  if (sigma <= 0) return img;
  const int radius = std::max(1, int(std::ceil(3 * sigma)));
  std::vector<double> taps(2 * radius + 1);
  double sum = 0;
  for (int i = -radius; i <= radius; ++i) {
    taps[i + radius] = std::exp(-0.5 * i * i / (sigma * sigma));
    sum += taps[i + radius];
  }
  for (double& t : taps) t /= sum;
  PlanarImage out = img;
  const int h = img.height();
  const int w = img.width();
  PlaneMatrix<double> tmp(h, w);
  for (int c = 0; c < img.channels(); ++c) {
    const auto src = img.plane(c);
    for (int y = 0; y < h; ++y) {
      for (int x = 0; x < w; ++x) {
        double acc = 0;
        for (int i = -radius; i <= radius; ++i) {
          acc += taps[i + radius] * src(y, std::clamp(x + i, 0, w - 1));
        }
        tmp(y, x) = acc;
      }
    }
    auto dst = out.plane(c);
    for (int y = 0; y < h; ++y) {
      for (int x = 0; x < w; ++x) {
        double acc = 0;
        for (int i = -radius; i <= radius; ++i) {
          acc += taps[i + radius] * tmp(std::clamp(y + i, 0, h - 1), x);
        }
        dst(y, x) = float(acc);
      }
    }
  }
  return out;
}

}  // namespace spectradec::analysis
