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

#include <array>
#include <optional>
#include <string>

#include "spectradec/image.hpp"
#include "spectradec/neural.hpp"
#include "spectradec/spectral.hpp"

namespace spectradec::metrics {

double mse(const PlanarImage& a, const PlanarImage& b);

// 10 log10(1 / MSE) for unit peak; +inf for identical inputs.
double psnr(const PlanarImage& a, const PlanarImage& b);
double psnr_from_mse(double mse);

inline constexpr int kSsimWindow = 11;
inline constexpr double kSsimSigma = 1.5;
inline constexpr double kSsimK1 = 0.01;
inline constexpr double kSsimK2 = 0.03;

// Mean SSIM over all valid 11x11 Gaussian windows (sigma 1.5, unit dynamic
// range), averaged across channels.
double ssim(const PlanarImage& a, const PlanarImage& b);
double ssim_plane(const Eigen::Ref<const PlaneMatrix<double>>& a,
                  const Eigen::Ref<const PlaneMatrix<double>>& b);

// Sum over masked indices of |D(a) - D(b)|, summed across channels. The
// transform is applied to a - b in double precision.
double band_l1(const PlanarImage& a, const PlanarImage& b,
               const spectral::IndexMask& mask);
double band_l1(const PlanarImage& a, const PlanarImage& b,
               const spectral::BandMask& mask);

double l_zf(const PlanarImage& a, const PlanarImage& b);
double l_lf(const PlanarImage& a, const PlanarImage& b, int k);
double l_hf(const PlanarImage& a, const PlanarImage& b, int k);

// PSNR between the DC reconstructions, i.e. between per-channel means.
double zf_psnr(const PlanarImage& a, const PlanarImage& b);

// Mean absolute error.
double l1(const PlanarImage& a, const PlanarImage& b);

// sum over the three stage outputs of L1(O, GT) + (1 - SSIM(O, GT)).
double rec_loss(const std::array<PlanarImage, 3>& stages, const PlanarImage& gt);

struct PriorLossInput {
  FeatureMap prediction;  // C' x (H/16) x (W/16)
  // Maps C' prediction channels to the image's channels; identity if absent.
  std::optional<Eigen::MatrixXd> projection;
};

// L1(projection * prediction, AAP(gt)) with AAP at the prediction's grid.
double prior_loss(const PriorLossInput& prior, const PlanarImage& gt);

struct LossBreakdown {
  double rec = 0;
  double prior = 0;
  double zf = 0;
  double lf = 0;
  double hf = 0;
  double total() const { return rec + prior + zf + lf + hf; }
};

// rec + L_g + L_zf(O1) + L_lf(O2, k) + L_hf(O3, k).
LossBreakdown total_loss(const std::array<PlanarImage, 3>& stages,
                         const PlanarImage& gt, const PriorLossInput& prior,
                         int k);

struct MetricsRecord {
  std::string path;
  double psnr = 0;
  double ssim = 0;
  double zf_psnr = 0;
  double l_zf = 0;
  double l_lf = 0;
  double l_hf = 0;
  int k = 0;
};

MetricsRecord evaluate_pair(const PlanarImage& restored, const PlanarImage& gt,
                            int k);

// Shortest round-trip decimal; infinities as "inf" / "-inf".
std::string format_number(double v);

}  // namespace spectradec::metrics
