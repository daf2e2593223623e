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

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "spectradec/curation.hpp"
#include "spectradec/image.hpp"

namespace spectradec::degrade {

// Adds i.i.d. N(0, (sigma/255)^2) noise and clamps to [0,1]. The stream
// depends only on (seed, key), typically the image's relative path.
PlanarImage add_gaussian_noise(const PlanarImage& img, double sigma,
                               std::uint64_t seed, std::string_view key);

// Baseline JPEG at `quality` (1..100) and back. RGB uses 4:2:0 chroma
// subsampling; Luma is coded as a grayscale JPEG.
PlanarImage jpeg_roundtrip(const PlanarImage& img, int quality);

std::vector<unsigned char> encode_jpeg(const PlanarImage& img, int quality);
PlanarImage decode_jpeg(const std::vector<unsigned char>& bytes);

inline constexpr std::string_view kChromaSubsampling = "4:2:0";

struct DegradationSpec {
  enum class Kind { kGaussianNoise, kJpeg };
  Kind kind = Kind::kGaussianNoise;
  double sigma = 25.0;  // 8-bit scale
  int quality = 10;

  static DegradationSpec noise(double sigma);
  static DegradationSpec jpeg(int quality);

  void validate() const;
  // Directory suffix, e.g. "noise_s25" or "jpeg_q10".
  std::string tag() const;
  PlanarImage apply(const PlanarImage& img, std::uint64_t seed,
                    std::string_view key) const;
};

struct BenchmarkSpec {
  int train = 8;
  int val = 1;
  int test = 1;
  std::vector<DegradationSpec> specs;
  std::uint64_t seed = 0;
  int threads = 1;
};

nlohmann::json spec_to_json(const BenchmarkSpec& spec);
BenchmarkSpec spec_from_json(const nlohmann::json& doc);
BenchmarkSpec read_spec(const std::filesystem::path& path);

struct BenchmarkEntry {
  std::string split;
  std::string source;  // relative to the corpus root
  std::string gt;      // relative to out_dir
  std::string input;   // relative to out_dir
  DegradationSpec spec;
};

struct BenchmarkIndex {
  std::uint64_t seed = 0;
  int train = 0;
  int val = 0;
  int test = 0;
  std::vector<DegradationSpec> specs;
  std::vector<BenchmarkEntry> entries;  // by split, source, spec order
};

inline constexpr int kIndexVersion = 1;

nlohmann::json index_to_json(const BenchmarkIndex& index);

// Shuffles the manifest's selected set with spec.seed, assigns the first
// train/val/test images to the splits and writes
// out_dir/{split}/{gt,input_<tag>}/<name>.png plus out_dir/index.json.
// Images are read from `corpus_root`, defaulting to the manifest's corpus.
BenchmarkIndex build_benchmark(const curation::CurationManifest& manifest,
                               const BenchmarkSpec& spec,
                               const std::filesystem::path& out_dir,
                               const std::filesystem::path& corpus_root = {});

// Deterministic Fisher-Yates permutation of 0..n-1.
std::vector<size_t> seeded_permutation(size_t n, std::uint64_t seed);

}  // namespace spectradec::degrade
