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

#include "spectradec/metrics.hpp"

#include <charconv>
#include <cmath>
#include <limits>

#include "spectradec/dct.hpp"

namespace spectradec::metrics {
namespace {

Eigen::VectorXd gaussian_taps() {
  Eigen::VectorXd taps(kSsimWindow);
  const int r = kSsimWindow / 2;
  for (int i = 0; i < kSsimWindow; ++i) {
    const double d = i - r;
    taps[i] = std::exp(-d * d / (2 * kSsimSigma * kSsimSigma));
  }
  return taps / taps.sum();
}

// 'valid' separable filtering: output is (H - 10) x (W - 10).
PlaneMatrix<double> filter_valid(const PlaneMatrix<double>& x,
                                 const Eigen::VectorXd& taps) {
  const Eigen::Index n = taps.size();
  const Eigen::Index oh = x.rows() - n + 1;
  const Eigen::Index ow = x.cols() - n + 1;
  PlaneMatrix<double> rows = PlaneMatrix<double>::Zero(x.rows(), ow);
  for (Eigen::Index k = 0; k < n; ++k) rows += taps[k] * x.middleCols(k, ow);
  PlaneMatrix<double> out = PlaneMatrix<double>::Zero(oh, ow);
  for (Eigen::Index k = 0; k < n; ++k) out += taps[k] * rows.middleRows(k, oh);
  return out;
}

}  // namespace

double mse(const PlanarImage& a, const PlanarImage& b) {
  require_same_shape(a, b, "mse");
  if (a.empty()) throw Error(ErrorCode::kEmptyInput, "mse of empty images");
  return (a.data().cast<double>() - b.data().cast<double>()).squaredNorm() /
         double(a.data().size());
}

double psnr_from_mse(double m) {
  if (m <= 0.0) return std::numeric_limits<double>::infinity();
  return -10.0 * std::log10(m);
}

double psnr(const PlanarImage& a, const PlanarImage& b) {
  return psnr_from_mse(mse(a, b));
}

double ssim_plane(const Eigen::Ref<const PlaneMatrix<double>>& a,
                  const Eigen::Ref<const PlaneMatrix<double>>& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw Error(ErrorCode::kDimensionMismatch, "ssim planes differ in shape");
  }
  if (a.rows() < kSsimWindow || a.cols() < kSsimWindow) {
    throw Error(ErrorCode::kImageTooSmall,
                "SSIM needs at least " + std::to_string(kSsimWindow) + "x" +
                    std::to_string(kSsimWindow) + " pixels");
  }
  const Eigen::VectorXd taps = gaussian_taps();
  const PlaneMatrix<double> pa = a;
  const PlaneMatrix<double> pb = b;
  const Eigen::ArrayXXd mu_a = filter_valid(pa, taps).array();
  const Eigen::ArrayXXd mu_b = filter_valid(pb, taps).array();
  const Eigen::ArrayXXd aa = filter_valid(pa.cwiseProduct(pa), taps).array();
  const Eigen::ArrayXXd bb = filter_valid(pb.cwiseProduct(pb), taps).array();
  const Eigen::ArrayXXd ab = filter_valid(pa.cwiseProduct(pb), taps).array();
  const double c1 = (kSsimK1 * 1.0) * (kSsimK1 * 1.0);
  const double c2 = (kSsimK2 * 1.0) * (kSsimK2 * 1.0);
  const Eigen::ArrayXXd var_a = aa - mu_a.square();
  const Eigen::ArrayXXd var_b = bb - mu_b.square();
  const Eigen::ArrayXXd cov = ab - mu_a * mu_b;
  const Eigen::ArrayXXd map = ((2 * mu_a * mu_b + c1) * (2 * cov + c2)) /
                              ((mu_a.square() + mu_b.square() + c1) *
                               (var_a + var_b + c2));
  return map.mean();
}

double ssim(const PlanarImage& a, const PlanarImage& b) {
  require_same_shape(a, b, "ssim");
  double total = 0.0;
  for (int c = 0; c < a.channels(); ++c) {
    total += ssim_plane(a.plane(c).cast<double>(), b.plane(c).cast<double>());
  }
  return total / a.channels();
}

double band_l1(const PlanarImage& a, const PlanarImage& b,
               const spectral::IndexMask& mask) {
  require_same_shape(a, b, "band_l1");
  if (mask.rows() != a.height() || mask.cols() != a.width()) {
    throw Error(ErrorCode::kDimensionMismatch, "mask shape differs from images");
  }
  double total = 0.0;
  for (int c = 0; c < a.channels(); ++c) {
    PlaneMatrix<double> diff =
        a.plane(c).cast<double>() - b.plane(c).cast<double>();
    dct::forward_2d_inplace(diff);
    total += mask.select(diff.array().abs(), 0.0).sum();
  }
  return total;
}

double band_l1(const PlanarImage& a, const PlanarImage& b,
               const spectral::BandMask& mask) {
  return band_l1(a, b, mask.indices());
}

double l_zf(const PlanarImage& a, const PlanarImage& b) {
  return band_l1(a, b, spectral::BandMask::zero(a.height(), a.width()));
}

double l_lf(const PlanarImage& a, const PlanarImage& b, int k) {
  return band_l1(a, b, spectral::BandMask::low(k, a.height(), a.width()));
}

double l_hf(const PlanarImage& a, const PlanarImage& b, int k) {
  return band_l1(a, b, spectral::BandMask::high(k, a.height(), a.width()));
}

double zf_psnr(const PlanarImage& a, const PlanarImage& b) {
  require_same_shape(a, b, "zf_psnr");
  const Eigen::VectorXd gap = a.data().cast<double>().rowwise().mean() -
                              b.data().cast<double>().rowwise().mean();
  return psnr_from_mse(gap.squaredNorm() / double(gap.size()));
}

double l1(const PlanarImage& a, const PlanarImage& b) {
  require_same_shape(a, b, "l1");
  return (a.data().cast<double>() - b.data().cast<double>()).cwiseAbs().mean();
}

double rec_loss(const std::array<PlanarImage, 3>& stages,
                const PlanarImage& gt) {
  double total = 0.0;
  for (const PlanarImage& out : stages) {
    total += l1(out, gt) + (1.0 - ssim(out, gt));
  }
  return total;
}

double prior_loss(const PriorLossInput& prior, const PlanarImage& gt) {
  const FeatureMap& pred = prior.prediction;
  if (pred.empty()) throw Error(ErrorCode::kEmptyInput, "empty prior prediction");
  const FeatureMap target = nn::aap(
      nn::to_feature_map(gt), nn::PoolGrid{pred.height(), pred.width()});
  Eigen::MatrixXd projected;
  if (prior.projection) {
    const Eigen::MatrixXd& p = *prior.projection;
    if (p.cols() != pred.channels() || p.rows() != gt.channels()) {
      throw Error(ErrorCode::kDimensionMismatch, "prior projection shape");
    }
    projected = p * pred.data();
  } else {
    if (pred.channels() != gt.channels()) {
      throw Error(ErrorCode::kDimensionMismatch,
                  "prior channels differ from image channels");
    }
    projected = pred.data();
  }
  return (projected - Eigen::MatrixXd(target.data())).cwiseAbs().mean();
}

LossBreakdown total_loss(const std::array<PlanarImage, 3>& stages,
                         const PlanarImage& gt, const PriorLossInput& prior,
                         int k) {
  LossBreakdown loss;
  loss.rec = rec_loss(stages, gt);
  loss.prior = prior_loss(prior, gt);
  loss.zf = l_zf(stages[0], gt);
  loss.lf = l_lf(stages[1], gt, k);
  loss.hf = l_hf(stages[2], gt, k);
  return loss;
}

MetricsRecord evaluate_pair(const PlanarImage& restored, const PlanarImage& gt,
                            int k) {
  MetricsRecord r;
  r.psnr = psnr(restored, gt);
  r.ssim = ssim(restored, gt);
  r.zf_psnr = zf_psnr(restored, gt);
  r.l_zf = l_zf(restored, gt);
  r.l_lf = l_lf(restored, gt, k);
  r.l_hf = l_hf(restored, gt, k);
  r.k = k;
  return r;
}

std::string format_number(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (std::isnan(v)) return "nan";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

}  // namespace spectradec::metrics
