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

#include "spectradec/degrade.hpp"

#include <algorithm>
#include <cmath>
#include <csetjmp>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <random>

#include <jpeglib.h>

#include "spectradec/imgio.hpp"
#include "spectradec/metrics.hpp"
#include "spectradec/parallel.hpp"
#include "spectradec/rng.hpp"

namespace spectradec::degrade {
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct JpegErrorManager {
  jpeg_error_mgr pub;
  std::jmp_buf jump;
  char message[JMSG_LENGTH_MAX];
};

void jpeg_error_exit(j_common_ptr cinfo) {
  auto* err = reinterpret_cast<JpegErrorManager*>(cinfo->err);
  (*cinfo->err->format_message)(cinfo, err->message);
  std::longjmp(err->jump, 1);
}

unsigned char to_byte(float v) {
  return static_cast<unsigned char>(
      std::lround(std::clamp(double(v), 0.0, 1.0) * 255.0));
}

}  // namespace

PlanarImage add_gaussian_noise(const PlanarImage& img, double sigma,
                               std::uint64_t seed, std::string_view key) {
  if (!(sigma >= 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "noise sigma must be >= 0");
  }
  PlanarImage out = img;
  if (sigma == 0.0) return out;
  std::mt19937_64 rng = item_rng(seed, key);
  std::normal_distribution<double> normal(0.0, sigma / 255.0);
  for (float& v : out.data().reshaped<Eigen::RowMajor>()) {
    v = float(std::clamp(double(v) + normal(rng), 0.0, 1.0));
  }
  return out;
}

std::vector<unsigned char> encode_jpeg(const PlanarImage& img, int quality) {
  if (quality < 1 || quality > 100) {
    throw Error(ErrorCode::kInvalidArgument,
                "JPEG quality must be in [1, 100], got " + std::to_string(quality));
  }
  const bool gray = img.channels() == 1;
  const int channels = img.channels();
  const int w = img.width();
  const int h = img.height();

  jpeg_compress_struct cinfo;
  JpegErrorManager err;
  unsigned char* buffer = nullptr;
  unsigned long size = 0;
  std::vector<unsigned char> row(size_t(w) * channels);
  cinfo.err = jpeg_std_error(&err.pub);
  err.pub.error_exit = jpeg_error_exit;
  if (setjmp(err.jump)) {
    jpeg_destroy_compress(&cinfo);
    std::free(buffer);
    throw Error(ErrorCode::kCodecError, err.message);
  }
  jpeg_create_compress(&cinfo);
  jpeg_mem_dest(&cinfo, &buffer, &size);
  cinfo.image_width = JDIMENSION(w);
  cinfo.image_height = JDIMENSION(h);
  cinfo.input_components = channels;
  cinfo.in_color_space = gray ? JCS_GRAYSCALE : JCS_RGB;
  jpeg_set_defaults(&cinfo);
  jpeg_set_quality(&cinfo, quality, TRUE);
  if (!gray) {
    cinfo.comp_info[0].h_samp_factor = 2;
    cinfo.comp_info[0].v_samp_factor = 2;
    for (int c = 1; c < 3; ++c) {
      cinfo.comp_info[c].h_samp_factor = 1;
      cinfo.comp_info[c].v_samp_factor = 1;
    }
  }
  jpeg_start_compress(&cinfo, TRUE);
  while (cinfo.next_scanline < cinfo.image_height) {
    const int y = int(cinfo.next_scanline);
    for (int x = 0; x < w; ++x) {
      for (int c = 0; c < channels; ++c) {
        row[size_t(x) * channels + c] = to_byte(img.at(c, y, x));
      }
    }
    JSAMPROW rows[1] = {row.data()};
    jpeg_write_scanlines(&cinfo, rows, 1);
  }
  jpeg_finish_compress(&cinfo);
  std::vector<unsigned char> out(buffer, buffer + size);
  jpeg_destroy_compress(&cinfo);
  std::free(buffer);
  return out;
}

PlanarImage decode_jpeg(const std::vector<unsigned char>& bytes) {
  jpeg_decompress_struct cinfo;
  JpegErrorManager err;
  std::vector<unsigned char> row;
  PlanarImage out;
  cinfo.err = jpeg_std_error(&err.pub);
  err.pub.error_exit = jpeg_error_exit;
  if (setjmp(err.jump)) {
    jpeg_destroy_decompress(&cinfo);
    throw Error(ErrorCode::kCodecError, err.message);
  }
  jpeg_create_decompress(&cinfo);
  jpeg_mem_src(&cinfo, bytes.data(), static_cast<unsigned long>(bytes.size()));
  jpeg_read_header(&cinfo, TRUE);
  const bool gray = cinfo.jpeg_color_space == JCS_GRAYSCALE;
  cinfo.out_color_space = gray ? JCS_GRAYSCALE : JCS_RGB;
  jpeg_start_decompress(&cinfo);
  const int channels = cinfo.output_components;
  const int w = int(cinfo.output_width);
  const int h = int(cinfo.output_height);
  out = PlanarImage(channels, h, w, gray ? ColorSpace::kLuma : ColorSpace::kRgb);
  row.resize(size_t(w) * channels);
  while (cinfo.output_scanline < cinfo.output_height) {
    const int y = int(cinfo.output_scanline);
    JSAMPROW rows[1] = {row.data()};
    jpeg_read_scanlines(&cinfo, rows, 1);
    for (int x = 0; x < w; ++x) {
      for (int c = 0; c < channels; ++c) {
        out.at(c, y, x) = float(row[size_t(x) * channels + c]) / 255.0f;
      }
    }
  }
  jpeg_finish_decompress(&cinfo);
  jpeg_destroy_decompress(&cinfo);
  return out;
}

PlanarImage jpeg_roundtrip(const PlanarImage& img, int quality) {
  if (img.colorspace() == ColorSpace::kFeature) {
    throw Error(ErrorCode::kInvalidArgument, "JPEG needs an RGB or Luma image");
  }
  PlanarImage out = decode_jpeg(encode_jpeg(img, quality));
  if (!out.same_shape(img)) {
    throw Error(ErrorCode::kCodecError, "JPEG round trip changed the shape");
  }
  return out;
}

DegradationSpec DegradationSpec::noise(double sigma) {
  DegradationSpec s;
  s.kind = Kind::kGaussianNoise;
  s.sigma = sigma;
  s.validate();
  return s;
}

DegradationSpec DegradationSpec::jpeg(int quality) {
  DegradationSpec s;
  s.kind = Kind::kJpeg;
  s.quality = quality;
  s.validate();
  return s;
}

void DegradationSpec::validate() const {
  if (kind == Kind::kGaussianNoise && !(sigma > 0.0 && std::isfinite(sigma))) {
    throw Error(ErrorCode::kInvalidArgument, "noise sigma must be positive");
  }
  if (kind == Kind::kJpeg && (quality < 1 || quality > 100)) {
    throw Error(ErrorCode::kInvalidArgument, "JPEG quality must be in [1, 100]");
  }
}

std::string DegradationSpec::tag() const {
  if (kind == Kind::kJpeg) return "jpeg_q" + std::to_string(quality);
  return "noise_s" + metrics::format_number(sigma);
}

PlanarImage DegradationSpec::apply(const PlanarImage& img, std::uint64_t seed,
                                   std::string_view key) const {
  if (kind == Kind::kJpeg) return jpeg_roundtrip(img, quality);
  return add_gaussian_noise(img, sigma, seed, key);
}

namespace {

json degradation_to_json(const DegradationSpec& s) {
  if (s.kind == DegradationSpec::Kind::kJpeg) {
    return {{"kind", "jpeg"}, {"quality", s.quality}};
  }
  return {{"kind", "gaussian_noise"}, {"sigma", s.sigma}};
}

DegradationSpec degradation_from_json(const json& j) {
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "jpeg") return DegradationSpec::jpeg(j.at("quality").get<int>());
  if (kind == "gaussian_noise") {
    return DegradationSpec::noise(j.at("sigma").get<double>());
  }
  throw Error(ErrorCode::kParseError, "unknown degradation kind '" + kind + "'");
}

std::string output_name(const std::string& source) {
  std::string stem = fs::path(source).replace_extension().generic_string();
  std::replace(stem.begin(), stem.end(), '/', '_');
  return stem + ".png";
}

}  // namespace

json spec_to_json(const BenchmarkSpec& spec) {
  json specs = json::array();
  for (const DegradationSpec& s : spec.specs) specs.push_back(degradation_to_json(s));
  return {{"splits", {{"train", spec.train}, {"val", spec.val}, {"test", spec.test}}},
          {"seed", spec.seed},
          {"specs", specs}};
}

BenchmarkSpec spec_from_json(const json& doc) {
  try {
    BenchmarkSpec spec;
    const json& splits = doc.at("splits");
    spec.train = splits.at("train").get<int>();
    spec.val = splits.at("val").get<int>();
    spec.test = splits.at("test").get<int>();
    if (spec.train < 0 || spec.val < 0 || spec.test < 0) {
      throw Error(ErrorCode::kInvalidArgument, "split counts must be >= 0");
    }
    spec.seed = doc.value("seed", std::uint64_t{0});
    for (const json& s : doc.at("specs")) {
      spec.specs.push_back(degradation_from_json(s));
    }
    return spec;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kParseError, std::string("benchmark spec: ") + e.what());
  }
}

BenchmarkSpec read_spec(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kFileNotFound, "cannot open " + path.string());
  try {
    return spec_from_json(json::parse(in));
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kParseError, path.string() + ": " + e.what());
  }
}

json index_to_json(const BenchmarkIndex& index) {
  json specs = json::array();
  for (const DegradationSpec& s : index.specs) specs.push_back(degradation_to_json(s));
  json entries = json::array();
  for (const BenchmarkEntry& e : index.entries) {
    entries.push_back({{"split", e.split},
                       {"source", e.source},
                       {"gt", e.gt},
                       {"input", e.input},
                       {"spec", degradation_to_json(e.spec)},
                       {"seed", index.seed}});
  }
  return {{"version", kIndexVersion},
          {"seed", index.seed},
          {"jpeg_chroma_subsampling", std::string(kChromaSubsampling)},
          {"splits", {{"train", index.train}, {"val", index.val}, {"test", index.test}}},
          {"specs", specs},
          {"entries", entries}};
}

std::vector<size_t> seeded_permutation(size_t n, std::uint64_t seed) {
  std::vector<size_t> perm(n);
  for (size_t i = 0; i < n; ++i) perm[i] = i;
  std::mt19937_64 rng(splitmix64(seed));
  for (size_t i = n; i > 1; --i) {
    const size_t j = size_t(rng() % i);
    std::swap(perm[i - 1], perm[j]);
  }
  return perm;
}

BenchmarkIndex build_benchmark(const curation::CurationManifest& manifest,
                               const BenchmarkSpec& spec, const fs::path& out_dir,
                               const fs::path& corpus_root) {
  if (spec.specs.empty()) {
    throw Error(ErrorCode::kInsufficientSpecs, "no degradation specs given");
  }
  for (const DegradationSpec& s : spec.specs) s.validate();
  std::vector<std::string> selected = manifest.selected_paths();
  std::sort(selected.begin(), selected.end());
  const size_t wanted = size_t(spec.train) + size_t(spec.val) + size_t(spec.test);
  if (selected.empty() || wanted == 0 || wanted > selected.size()) {
    throw Error(ErrorCode::kInsufficientImages,
                "splits need " + std::to_string(wanted) + " images, manifest selects " +
                    std::to_string(selected.size()));
  }
  const fs::path root = corpus_root.empty() ? fs::path(manifest.corpus) : corpus_root;
  const std::vector<size_t> perm = seeded_permutation(selected.size(), spec.seed);

  struct Job {
    std::string split;
    std::string source;
  };
  std::vector<Job> jobs;
  const std::pair<const char*, int> splits[] = {
      {"train", spec.train}, {"val", spec.val}, {"test", spec.test}};
  size_t next = 0;
  for (const auto& [name, count] : splits) {
    std::vector<std::string> members;
    for (int i = 0; i < count; ++i) members.push_back(selected[perm[next++]]);
    std::sort(members.begin(), members.end());
    for (std::string& m : members) jobs.push_back({name, std::move(m)});
  }

  std::error_code ec;
  for (const auto& [name, count] : splits) {
    if (count == 0) continue;
    fs::create_directories(out_dir / name / "gt", ec);
    for (const DegradationSpec& s : spec.specs) {
      fs::create_directories(out_dir / name / ("input_" + s.tag()), ec);
    }
    if (ec) {
      throw Error(ErrorCode::kIoError, "cannot create " + out_dir.string() + ": " +
                                           ec.message());
    }
  }

  BenchmarkIndex index;
  index.seed = spec.seed;
  index.train = spec.train;
  index.val = spec.val;
  index.test = spec.test;
  index.specs = spec.specs;
  std::vector<std::vector<BenchmarkEntry>> per_job(jobs.size());
  parallel_for(jobs.size(), spec.threads, [&](size_t i) {
    const Job& job = jobs[i];
    const std::string name = output_name(job.source);
    const PlanarImage clean = imgio::quantize_8bit(imgio::load_image(root / job.source));
    const std::string gt_rel = job.split + "/gt/" + name;
    imgio::save_image(out_dir / gt_rel, clean);
    for (const DegradationSpec& s : spec.specs) {
      const std::string input_rel = job.split + "/input_" + s.tag() + "/" + name;
      const std::string key = job.source + "|" + s.tag();
      imgio::save_image(out_dir / input_rel, s.apply(clean, spec.seed, key));
      per_job[i].push_back({job.split, job.source, gt_rel, input_rel, s});
    }
  });
  for (auto& entries : per_job) {
    for (BenchmarkEntry& e : entries) index.entries.push_back(std::move(e));
  }

  std::ofstream out(out_dir / "index.json", std::ios::binary);
  if (!out) throw Error(ErrorCode::kIoError, "cannot write index.json");
  out << index_to_json(index).dump(2) << '\n';
  return index;
}

}  // namespace spectradec::degrade
