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

#include <optional>
#include <string>
#include <vector>

#include "spectradec/image.hpp"
#include "spectradec/spectral.hpp"

namespace spectradec::analysis {

struct ZeroSwapReport {
  PlanarImage exchanged_input;  // degraded spectrum carrying the GT DC
  PlanarImage exchanged_gt;     // GT spectrum carrying the degraded DC
  double psnr_in = 0;
  double psnr_xin = 0;
  double psnr_xgt = 0;
};

// Swaps the (0,0) coefficient between input and GT and scores both
// reconstructions (and the raw input) against GT.
ZeroSwapReport zero_swap_experiment(const PlanarImage& input,
                                    const PlanarImage& gt);

struct ExchangeCurve {
  std::vector<int> ks;
  std::vector<double> psnr_filled;   // input with GT coefficients on the band
  std::vector<double> psnr_drained;  // GT with input coefficients on the band
  bool include_dc = true;

  std::string to_csv() const;
  std::string to_json() const;
};

// 0, 1, 2, 4, 8, ... up to and including max_k.
std::vector<int> default_ks(int max_k);

// For each k, exchanges the [0,k]^2 block (without DC when include_dc is
// false) between input and GT, reconstructs both, and records PSNR against
// GT. Points are computed on up to `threads` workers; the result does not
// depend on the worker count.
ExchangeCurve progressive_fill_curve(const PlanarImage& input,
                                     const PlanarImage& gt,
                                     const std::vector<int>& ks,
                                     bool include_dc, int threads = 1);

// DC reconstruction over the whole image, or per tile so spatially varying
// means can be rendered.
PlanarImage zero_component_map(const PlanarImage& img,
                               std::optional<int> tile_size = {});

// Desk-scale stand-ins for the real degraded datasets.
PlanarImage synthetic_lowlight(const PlanarImage& clean, double gamma,
                               double gain);
PlanarImage gaussian_blur(const PlanarImage& img, double sigma);

}  // namespace spectradec::analysis
