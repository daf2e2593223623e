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

#include "spectradec/curation.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <set>
#include <sstream>

#include "spectradec/imgio.hpp"
#include "spectradec/metrics.hpp"
#include "spectradec/parallel.hpp"

namespace spectradec::curation {
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

void require_single_channel(const PlanarImage& img, const char* what) {
  if (img.channels() != 1) {
    throw Error(ErrorCode::kWrongChannelCount,
                std::string(what) + " expects one channel, got " +
                    std::to_string(img.channels()));
  }
}

double entropy_bits(const Eigen::ArrayXd& p) {
  double h = 0.0;
  for (double v : p) {
    if (v > 0.0) h -= v * std::log2(v);
  }
  return h;
}

json encode_real(double v) {
  if (std::isinf(v)) return metrics::format_number(v);
  return v;
}

double decode_real(const json& j) {
  if (j.is_string()) {
    const std::string s = j.get<std::string>();
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
    throw Error(ErrorCode::kParseError, "bad number '" + s + "'");
  }
  return j.get<double>();
}

bool is_image_file(const fs::path& p) {
  std::string ext = p.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(),
                 [](unsigned char c) { return char(std::tolower(c)); });
  return ext == ".png" || ext == ".ppm" || ext == ".pgm";
}

}  // namespace

double laplacian_variance(const PlanarImage& luma) {
  require_single_channel(luma, "laplacian_variance");
  const int h = luma.height();
  const int w = luma.width();
  if (h < 3 || w < 3) return 0.0;
  const PlaneMatrix<double> p = luma.plane(0).cast<double>();
  const auto c = p.block(1, 1, h - 2, w - 2);
  const Eigen::ArrayXXd r =
      (p.block(0, 1, h - 2, w - 2) + p.block(2, 1, h - 2, w - 2) +
       p.block(1, 0, h - 2, w - 2) + p.block(1, 2, h - 2, w - 2) - 4.0 * c)
          .array();
  return (r - r.mean()).square().mean();
}

double sobel_edge_density(const PlanarImage& luma, double threshold) {
  require_single_channel(luma, "sobel_edge_density");
  const int h = luma.height();
  const int w = luma.width();
  if (h < 3 || w < 3) return 0.0;
  const PlaneMatrix<double> p = luma.plane(0).cast<double>();
  auto at = [&](int dy, int dx) { return p.block(1 + dy, 1 + dx, h - 2, w - 2); };
  const Eigen::ArrayXXd gx =
      (at(-1, 1) + 2.0 * at(0, 1) + at(1, 1) - at(-1, -1) - 2.0 * at(0, -1) -
       at(1, -1))
          .array();
  const Eigen::ArrayXXd gy =
      (at(1, -1) + 2.0 * at(1, 0) + at(1, 1) - at(-1, -1) - 2.0 * at(-1, 0) -
       at(-1, 1))
          .array();
  const Eigen::ArrayXXd mag = (gx.square() + gy.square()).sqrt();
  return double((mag > threshold).count()) / double(mag.size());
}

double shannon_entropy(const PlanarImage& luma) {
  require_single_channel(luma, "shannon_entropy");
  Eigen::ArrayXd hist = Eigen::ArrayXd::Zero(256);
  for (float v : luma.data().reshaped()) {
    const long bin = std::lround(std::clamp(double(v), 0.0, 1.0) * 255.0);
    hist[bin] += 1.0;
  }
  return entropy_bits(hist / hist.sum());
}

int degrees(Orientation o) {
  switch (o) {
    case Orientation::k0: return 0;
    case Orientation::k45: return 45;
    case Orientation::k90: return 90;
    case Orientation::k135: return 135;
  }
  return 0;
}

int quantize_level(float v, int levels) {
  const double q = std::floor(std::clamp(double(v), 0.0, 1.0) * levels);
  return std::min(levels - 1, int(q));
}

Eigen::MatrixXd glcm_counts(const PlanarImage& luma, int levels, int distance,
                            Orientation orientation) {
  require_single_channel(luma, "glcm");
  if (levels < 2) throw Error(ErrorCode::kInvalidArgument, "levels must be >= 2");
  if (distance < 1) {
    throw Error(ErrorCode::kInvalidArgument, "distance must be >= 1");
  }
  int dy = 0;
  int dx = 0;
  switch (orientation) {
    case Orientation::k0: dx = distance; break;
    case Orientation::k45: dy = -distance; dx = distance; break;
    case Orientation::k90: dy = -distance; break;
    case Orientation::k135: dy = -distance; dx = -distance; break;
  }
  const int h = luma.height();
  const int w = luma.width();
  Eigen::MatrixXi q(h, w);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) q(y, x) = quantize_level(luma.at(0, y, x), levels);
  }
  Eigen::MatrixXd counts = Eigen::MatrixXd::Zero(levels, levels);
  for (int y = std::max(0, -dy); y < std::min(h, h - dy); ++y) {
    for (int x = std::max(0, -dx); x < std::min(w, w - dx); ++x) {
      counts(q(y, x), q(y + dy, x + dx)) += 1.0;
    }
  }
  return counts + counts.transpose();
}

GlcmFeatures glcm_features(const Eigen::MatrixXd& counts) {
  GlcmFeatures f;
  const double total = counts.sum();
  if (total <= 0.0) {
    f.degenerate = true;
    return f;
  }
  const Eigen::ArrayXXd p = counts.array() / total;
  const Eigen::Index n = p.rows();
  const Eigen::ArrayXd idx = Eigen::ArrayXd::LinSpaced(n, 0.0, double(n - 1));
  const Eigen::ArrayXd row_marg = p.rowwise().sum();
  const Eigen::ArrayXd col_marg = p.colwise().sum().transpose();
  const double mu_i = (idx * row_marg).sum();
  const double mu_j = (idx * col_marg).sum();
  const double var_i = ((idx - mu_i).square() * row_marg).sum();
  const double var_j = ((idx - mu_j).square() * col_marg).sum();

  const Eigen::ArrayXXd di = idx.replicate(1, n);              // row index
  const Eigen::ArrayXXd dj = idx.transpose().replicate(n, 1);  // col index
  f.contrast = (p * (di - dj).square()).sum();
  f.entropy = entropy_bits(p.reshaped());
  if (var_i <= 1e-15 || var_j <= 1e-15) {
    f.degenerate = true;
    f.correlation = 0.0;
  } else {
    f.correlation =
        (p * (di - mu_i) * (dj - mu_j)).sum() / std::sqrt(var_i * var_j);
  }
  return f;
}

GlcmStats glcm_stats(const PlanarImage& luma, int levels, int distance) {
  GlcmStats s;
  for (size_t o = 0; o < kOrientations.size(); ++o) {
    s.by_orientation[o] =
        glcm_features(glcm_counts(luma, levels, distance, kOrientations[o]));
  }
  return s;
}

QualityReport analyze_image(const PlanarImage& img, const std::string& path,
                            const CurationConfig& config) {
  const PlanarImage luma = imgio::to_luma(img);
  QualityReport r;
  r.path = path;
  r.width = img.width();
  r.height = img.height();
  r.laplacian_var = laplacian_variance(luma);
  r.edge_density = sobel_edge_density(luma, config.sobel_threshold);
  r.glcm = glcm_stats(luma, config.glcm_levels, config.glcm_distance);
  r.shannon_entropy = shannon_entropy(luma);
  return r;
}

std::vector<size_t> screen_corpus(const std::vector<QualityReport>& reports,
                                  double lap_low, double lap_high,
                                  double edge_min) {
  std::vector<size_t> kept;
  for (size_t i = 0; i < reports.size(); ++i) {
    const QualityReport& r = reports[i];
    if (!r.error.empty()) continue;
    if (r.laplacian_var >= lap_low && r.laplacian_var <= lap_high &&
        r.edge_density >= edge_min) {
      kept.push_back(i);
    }
  }
  return kept;
}

std::vector<std::string> select_top_fraction(
    const std::map<std::string, double>& scores, double fraction) {
  if (scores.empty()) throw Error(ErrorCode::kEmptyInput, "no scores to select");
  if (!(fraction > 0.0 && fraction <= 1.0)) {
    throw Error(ErrorCode::kInvalidArgument, "fraction must be in (0, 1]");
  }
  std::vector<std::pair<std::string, double>> order(scores.begin(), scores.end());
  // Map iteration is already in name order; a stable sort keeps it for ties.
  std::stable_sort(order.begin(), order.end(),
                   [](const auto& a, const auto& b) { return a.second > b.second; });
  const size_t keep = size_t(std::ceil(fraction * double(order.size())));
  std::vector<std::string> out;
  for (size_t i = 0; i < keep; ++i) out.push_back(order[i].first);
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<double> aggregated_glcm_scores(
    const std::vector<QualityReport>& reports,
    const std::vector<size_t>& members) {
  const Eigen::Index n = Eigen::Index(members.size());
  constexpr int kFeatures = 3 * 4;
  Eigen::MatrixXd feat(n, kFeatures);
  for (Eigen::Index m = 0; m < n; ++m) {
    const GlcmStats& g = reports[members[m]].glcm;
    for (int o = 0; o < 4; ++o) {
      feat(m, 3 * o + 0) = g.by_orientation[o].contrast;
      feat(m, 3 * o + 1) = g.by_orientation[o].entropy;
      feat(m, 3 * o + 2) = g.by_orientation[o].correlation;
    }
  }
  std::vector<double> out(members.size(), 0.0);
  if (n == 0) return out;
  const Eigen::RowVectorXd mean = feat.colwise().mean();
  const Eigen::MatrixXd centred = feat.rowwise() - mean;
  const Eigen::RowVectorXd sd =
      (centred.array().square().colwise().sum() / double(n)).sqrt();
  for (Eigen::Index m = 0; m < n; ++m) {
    double total = 0.0;
    for (int f = 0; f < kFeatures; ++f) {
      if (sd[f] > 0.0) total += centred(m, f) / sd[f];
    }
    out[m] = total / 4.0;
  }
  return out;
}

void select(std::vector<QualityReport>& reports, const CurationConfig& config,
            StageCounts& counts) {
  counts = StageCounts{};
  counts.scanned = reports.size();
  for (QualityReport& r : reports) {
    r.passed_screen = r.in_sg = r.in_se = r.selected = false;
    r.glcm_score = 0.0;
    if (!r.error.empty()) ++counts.errors;
  }
  const std::vector<size_t> s =
      screen_corpus(reports, config.lap_low, config.lap_high, config.edge_min);
  counts.screened = s.size();
  if (s.empty()) return;

  const std::vector<double> g = aggregated_glcm_scores(reports, s);
  std::map<std::string, double> g_scores;
  std::map<std::string, double> e_scores;
  std::map<std::string, size_t> index;
  for (size_t m = 0; m < s.size(); ++m) {
    QualityReport& r = reports[s[m]];
    r.passed_screen = true;
    r.glcm_score = g[m];
    g_scores[r.path] = g[m];
    e_scores[r.path] = r.shannon_entropy;
    index[r.path] = s[m];
  }
  for (const std::string& p : select_top_fraction(g_scores, config.fraction)) {
    reports[index[p]].in_sg = true;
  }
  for (const std::string& p : select_top_fraction(e_scores, config.fraction)) {
    reports[index[p]].in_se = true;
  }
  const std::set<std::string> approved(config.approved.begin(),
                                       config.approved.end());
  for (size_t i : s) {
    QualityReport& r = reports[i];
    counts.sg += r.in_sg;
    counts.se += r.in_se;
    r.selected = r.in_sg && r.in_se &&
                 (approved.empty() || approved.count(r.path) > 0);
    counts.selected += r.selected;
  }
}

std::vector<std::string> CurationManifest::selected_paths() const {
  std::vector<std::string> out;
  for (const QualityReport& r : reports) {
    if (r.selected) out.push_back(r.path);
  }
  return out;
}

CurationManifest run_pipeline(const fs::path& corpus_dir,
                              const CurationConfig& config) {
  std::error_code ec;
  if (!fs::is_directory(corpus_dir, ec)) {
    throw Error(ErrorCode::kFileNotFound,
                "corpus directory " + corpus_dir.string() + " not found");
  }
  std::vector<std::string> files;
  for (fs::recursive_directory_iterator it(corpus_dir, ec), end; !ec && it != end;
       it.increment(ec)) {
    if (it->is_regular_file() && is_image_file(it->path())) {
      files.push_back(fs::relative(it->path(), corpus_dir).generic_string());
    }
  }
  if (ec) {
    throw Error(ErrorCode::kIoError,
                "cannot scan " + corpus_dir.string() + ": " + ec.message());
  }
  std::sort(files.begin(), files.end());

  CurationManifest manifest;
  manifest.corpus = corpus_dir.generic_string();
  manifest.config = config;
  manifest.reports.resize(files.size());
  parallel_for(files.size(), config.threads, [&](size_t i) {
    try {
      const PlanarImage img = imgio::load_image(corpus_dir / files[i]);
      manifest.reports[i] = analyze_image(img, files[i], config);
    } catch (const Error& e) {
      QualityReport r;
      r.path = files[i];
      r.error = e.what();
      manifest.reports[i] = r;
    }
  });
  select(manifest.reports, config, manifest.counts);
  return manifest;
}

nlohmann::json manifest_to_json(const CurationManifest& m) {
  const CurationConfig& c = m.config;
  json config = {{"lap_low", encode_real(c.lap_low)},
                 {"lap_high", encode_real(c.lap_high)},
                 {"edge_min", encode_real(c.edge_min)},
                 {"sobel_threshold", encode_real(c.sobel_threshold)},
                 {"glcm_levels", c.glcm_levels},
                 {"glcm_distance", c.glcm_distance},
                 {"fraction", c.fraction},
                 {"approved", c.approved}};
  json reports = json::array();
  for (const QualityReport& r : m.reports) {
    json glcm = json::array();
    for (size_t o = 0; o < kOrientations.size(); ++o) {
      const GlcmFeatures& f = r.glcm.by_orientation[o];
      glcm.push_back({{"orientation", degrees(kOrientations[o])},
                      {"contrast", f.contrast},
                      {"entropy", f.entropy},
                      {"correlation", f.correlation},
                      {"degenerate", f.degenerate}});
    }
    json rec = {{"path", r.path},
                {"width", r.width},
                {"height", r.height},
                {"laplacian_var", r.laplacian_var},
                {"edge_density", r.edge_density},
                {"glcm", glcm},
                {"glcm_score", r.glcm_score},
                {"shannon_entropy", r.shannon_entropy},
                {"passed_screen", r.passed_screen},
                {"in_sg", r.in_sg},
                {"in_se", r.in_se},
                {"selected", r.selected}};
    if (!r.error.empty()) rec["error"] = r.error;
    reports.push_back(std::move(rec));
  }
  const StageCounts& n = m.counts;
  return {{"schema_version", kManifestSchemaVersion},
          {"corpus", m.corpus},
          {"config", config},
          {"counts",
           {{"scanned", n.scanned},
            {"errors", n.errors},
            {"screened", n.screened},
            {"sg", n.sg},
            {"se", n.se},
            {"selected", n.selected}}},
          {"reports", reports}};
}

CurationManifest manifest_from_json(const nlohmann::json& doc) {
  try {
    if (doc.at("schema_version").get<int>() != kManifestSchemaVersion) {
      throw Error(ErrorCode::kParseError, "unsupported manifest schema version");
    }
    CurationManifest m;
    m.corpus = doc.value("corpus", "");
    const json& c = doc.at("config");
    m.config.lap_low = decode_real(c.at("lap_low"));
    m.config.lap_high = decode_real(c.at("lap_high"));
    m.config.edge_min = decode_real(c.at("edge_min"));
    m.config.sobel_threshold = decode_real(c.at("sobel_threshold"));
    m.config.glcm_levels = c.at("glcm_levels").get<int>();
    m.config.glcm_distance = c.at("glcm_distance").get<int>();
    m.config.fraction = c.at("fraction").get<double>();
    m.config.approved = c.at("approved").get<std::vector<std::string>>();
    const json& n = doc.at("counts");
    m.counts.scanned = n.at("scanned").get<size_t>();
    m.counts.errors = n.at("errors").get<size_t>();
    m.counts.screened = n.at("screened").get<size_t>();
    m.counts.sg = n.at("sg").get<size_t>();
    m.counts.se = n.at("se").get<size_t>();
    m.counts.selected = n.at("selected").get<size_t>();
    for (const json& rec : doc.at("reports")) {
      QualityReport r;
      r.path = rec.at("path").get<std::string>();
      r.width = rec.at("width").get<int>();
      r.height = rec.at("height").get<int>();
      r.laplacian_var = rec.at("laplacian_var").get<double>();
      r.edge_density = rec.at("edge_density").get<double>();
      const json& glcm = rec.at("glcm");
      if (glcm.size() != kOrientations.size()) {
        throw Error(ErrorCode::kParseError, "glcm needs four orientations");
      }
      for (size_t o = 0; o < kOrientations.size(); ++o) {
        GlcmFeatures& f = r.glcm.by_orientation[o];
        f.contrast = glcm[o].at("contrast").get<double>();
        f.entropy = glcm[o].at("entropy").get<double>();
        f.correlation = glcm[o].at("correlation").get<double>();
        f.degenerate = glcm[o].at("degenerate").get<bool>();
      }
      r.glcm_score = rec.at("glcm_score").get<double>();
      r.shannon_entropy = rec.at("shannon_entropy").get<double>();
      r.passed_screen = rec.at("passed_screen").get<bool>();
      r.in_sg = rec.at("in_sg").get<bool>();
      r.in_se = rec.at("in_se").get<bool>();
      r.selected = rec.at("selected").get<bool>();
      r.error = rec.value("error", "");
      m.reports.push_back(std::move(r));
    }
    return m;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kParseError, std::string("manifest: ") + e.what());
  }
}

std::string manifest_to_csv(const CurationManifest& m) {
  using metrics::format_number;
  std::ostringstream out;
  out << "path,width,height,laplacian_var,edge_density,glcm_score,"
         "shannon_entropy,passed_screen,in_sg,in_se,selected,error\n";
  for (const QualityReport& r : m.reports) {
    out << r.path << ',' << r.width << ',' << r.height << ','
        << format_number(r.laplacian_var) << ','
        << format_number(r.edge_density) << ',' << format_number(r.glcm_score)
        << ',' << format_number(r.shannon_entropy) << ',' << r.passed_screen
        << ',' << r.in_sg << ',' << r.in_se << ',' << r.selected << ','
        << (r.error.empty() ? "" : "\"" + r.error + "\"") << '\n';
  }
  return out.str();
}

void write_manifest(const fs::path& path, const CurationManifest& manifest) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::kIoError, "cannot write " + path.string());
  out << manifest_to_json(manifest).dump(2) << '\n';
  if (!out) throw Error(ErrorCode::kIoError, "write failed: " + path.string());
}

CurationManifest read_manifest(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kFileNotFound, "cannot open " + path.string());
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kParseError, path.string() + ": " + e.what());
  }
  return manifest_from_json(doc);
}

}  // namespace spectradec::curation
