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
#include <filesystem>
#include <limits>
#include <map>
#include <string>
#include <vector>

#include "json.hpp"
#include "spectradec/image.hpp"

namespace spectradec::curation {

// ---------------------------------------------------------------------------
// Per-image statistics. All take a single-channel (luma) image and work on
// interior pixels only, so a one-pixel border never influences the result.

// Variance of the 4-neighbour Laplacian response over interior pixels.
double laplacian_variance(const PlanarImage& luma);

// Fraction of interior pixels whose Sobel magnitude exceeds `threshold`.
double sobel_edge_density(const PlanarImage& luma, double threshold);

// Entropy in bits of the 256-bin histogram of round(255 v).
double shannon_entropy(const PlanarImage& luma);

enum class Orientation { k0, k45, k90, k135 };
inline constexpr std::array<Orientation, 4> kOrientations = {
    Orientation::k0, Orientation::k45, Orientation::k90, Orientation::k135};
int degrees(Orientation o);

// Gray level of a sample after quantization to `levels` bins.
int quantize_level(float v, int levels);

// Symmetric co-occurrence counts (each pixel pair counted both ways).
Eigen::MatrixXd glcm_counts(const PlanarImage& luma, int levels, int distance,
                            Orientation orientation);

struct GlcmFeatures {
  double contrast = 0;
  double entropy = 0;      // bits
  double correlation = 0;  // 0 when degenerate
  bool degenerate = false; // zero marginal variance
};

GlcmFeatures glcm_features(const Eigen::MatrixXd& counts);

struct GlcmStats {
  std::array<GlcmFeatures, 4> by_orientation;  // 0, 45, 90, 135 degrees
};

GlcmStats glcm_stats(const PlanarImage& luma, int levels = 64,
                     int distance = 1);

// ---------------------------------------------------------------------------
// Corpus selection

struct CurationConfig {
  // Laplacian variance band in [0,1]^2 intensity units.
  double lap_low = 10.0 / (255.0 * 255.0);
  double lap_high = std::numeric_limits<double>::infinity();
  double edge_min = 0.01;
  double sobel_threshold = 0.1;
  int glcm_levels = 64;
  int glcm_distance = 1;
  double fraction = 0.5;
  // Human-inspection outcome: when non-empty, only listed paths may be
  // selected.
  std::vector<std::string> approved;
  int threads = 1;
};

struct QualityReport {
  std::string path;  // relative to the corpus root, '/'-separated
  int width = 0;
  int height = 0;
  double laplacian_var = 0;
  double edge_density = 0;
  GlcmStats glcm;
  double glcm_score = 0;
  double shannon_entropy = 0;
  bool passed_screen = false;
  bool in_sg = false;
  bool in_se = false;
  bool selected = false;
  std::string error;  // non-empty if the image could not be processed
};

QualityReport analyze_image(const PlanarImage& img, const std::string& path,
                            const CurationConfig& config);

// Indices of reports that pass both low-level screens (errored reports never
// pass).
std::vector<size_t> screen_corpus(const std::vector<QualityReport>& reports,
                                  double lap_low, double lap_high,
                                  double edge_min);

// The ceil(fraction n) highest-scoring names, ties broken by name order.
// Result is sorted by name.
std::vector<std::string> select_top_fraction(
    const std::map<std::string, double>& scores, double fraction = 0.5);

// Mean over orientations of z(contrast) + z(entropy) + z(correlation), with
// z-scores taken across `members`.
std::vector<double> aggregated_glcm_scores(
    const std::vector<QualityReport>& reports,
    const std::vector<size_t>& members);

struct StageCounts {
  size_t scanned = 0;
  size_t errors = 0;
  size_t screened = 0;  // |S|
  size_t sg = 0;
  size_t se = 0;
  size_t selected = 0;
};

struct CurationManifest {
  std::string corpus;
  CurationConfig config;
  std::vector<QualityReport> reports;  // sorted by path
  StageCounts counts;

  std::vector<std::string> selected_paths() const;
};

inline constexpr int kManifestSchemaVersion = 1;

// Scans for .png/.ppm/.pgm files (recursively), computes reports in
// parallel, screens, scores and intersects. Deterministic for a fixed corpus
// and config.
CurationManifest run_pipeline(const std::filesystem::path& corpus_dir,
                              const CurationConfig& config);

// Applies screening, scoring and selection to precomputed reports.
void select(std::vector<QualityReport>& reports, const CurationConfig& config,
            StageCounts& counts);

nlohmann::json manifest_to_json(const CurationManifest& manifest);
CurationManifest manifest_from_json(const nlohmann::json& doc);
std::string manifest_to_csv(const CurationManifest& manifest);

void write_manifest(const std::filesystem::path& path,
                    const CurationManifest& manifest);
CurationManifest read_manifest(const std::filesystem::path& path);

}  // namespace spectradec::curation
