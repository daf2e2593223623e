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

#include <filesystem>
#include <functional>
#include <vector>

#include "spectradec/image.hpp"

namespace spectradec::imgio {

// PNG (8/16-bit gray or RGB; alpha dropped, palettes expanded) and binary
// PGM/PPM (P5/P6). Samples map to [0,1] by v/maxval.
PlanarImage load_image(const std::filesystem::path& path);

// Format chosen by extension: .png, .pgm, .ppm. bit_depth is 8 or 16.
void save_image(const std::filesystem::path& path, const PlanarImage& img,
                int bit_depth = 8);

// In-memory PNG codec, used by the file routines and by tests.
std::vector<unsigned char> encode_png(const PlanarImage& img, int bit_depth = 8);
PlanarImage decode_png(const std::vector<unsigned char>& bytes);

// BT.601 luma. Luma input is returned unchanged.
PlanarImage to_luma(const PlanarImage& img);

// Replicates a single plane into three RGB planes.
PlanarImage replicate_to_rgb(const PlanarImage& luma);

// Rounds every sample to the nearest multiple of 1/255 (what an 8-bit save
// would keep).
PlanarImage quantize_8bit(const PlanarImage& img);

enum class Filter { kBilinear, kBicubic };

PlanarImage resize(const PlanarImage& img, int new_height, int new_width,
                   Filter filter = Filter::kBilinear);

struct Grid {
  int rows = 1;
  int cols = 1;
};

std::vector<PlanarImage> split_patches(const PlanarImage& img, Grid grid);
PlanarImage stitch_patches(const std::vector<PlanarImage>& patches, Grid grid);

struct ResampleSpec {
  enum class Mode { kResize, kStitch };
  Mode mode = Mode::kResize;
  int factor = 2;
  Grid grid{2, 2};
  Filter filter = Filter::kBilinear;
};

using RestoreFn = std::function<PlanarImage(const PlanarImage&)>;

// Full-resolution evaluation wrapper: either downsample / restore / upsample,
// or split into a patch grid / restore each patch / stitch. The output always
// has the input's dimensions.
PlanarImage resample(const PlanarImage& img, const ResampleSpec& spec,
                     const RestoreFn& restore);

}  // namespace spectradec::imgio
