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


#include <gtest/gtest.h>

#include <fstream>
#include <set>
#include <sstream>

#include "../corpus.hpp"
#include "../oracles.hpp"
#include "spectradec/degrade.hpp"
#include "spectradec/metrics.hpp"

namespace spectradec {
namespace {

using namespace spectradec::degrade;
using testing::TempDir;

TEST(Noise, StatisticsAndDeterminism) {
  const PlanarImage gray = PlanarImage::constant(1, 1024, 1024, 0.5f, ColorSpace::kLuma);
  const PlanarImage noisy = add_gaussian_noise(gray, 25.0, 42, "a.png");
  const Eigen::ArrayXd d = (noisy.data().cast<double>().array() - 0.5).reshaped();
  const double sd = std::sqrt((d - d.mean()).square().mean());
  EXPECT_NEAR(sd / (25.0 / 255.0), 1.0, 0.02);
  EXPECT_TRUE(add_gaussian_noise(gray, 25.0, 42, "a.png") == noisy);
  EXPECT_FALSE(add_gaussian_noise(gray, 25.0, 42, "b.png") == noisy);
  const PlanarImage tiny = add_gaussian_noise(gray, 1e-9, 1, "x");
  EXPECT_LT((tiny.data().array() - 0.5f).abs().maxCoeff(), 1e-6);
  EXPECT_GE(noisy.data().minCoeff(), 0.0f);
  EXPECT_LE(noisy.data().maxCoeff(), 1.0f);
}

TEST(Noise, PsnrFallsWithSigma) {
  const PlanarImage clean = testing::textured_image(64, 64, 1);
  double last = INFINITY;
  for (double sigma : {15.0, 25.0, 50.0}) {
    const double p = metrics::psnr(add_gaussian_noise(clean, sigma, 7, "k"), clean);
    EXPECT_LT(p, last);
    last = p;
  }
}

TEST(Jpeg, QualityBehaviour) {
  PlanarImage grad(3, 64, 96);
  for (int c = 0; c < 3; ++c) {
    for (int y = 0; y < 64; ++y) {
      for (int x = 0; x < 96; ++x) grad.at(c, y, x) = float((x + y + 10 * c) / 200.0);
    }
  }
  grad = imgio::quantize_8bit(grad);
  EXPECT_GT(metrics::psnr(jpeg_roundtrip(grad, 100), grad), 40.0);
  // Mid-gray sits at zero after the level shift, so its DC survives any table.
  const PlanarImage flat = PlanarImage::constant(3, 40, 40, 128.0f / 255.0f);
  for (int q : {5, 10, 30, 90}) {
    const PlanarImage out = jpeg_roundtrip(flat, q);
    EXPECT_TRUE(out.same_shape(flat));
    EXPECT_GT(metrics::psnr(out, flat), 50.0) << q;
  }
  const PlanarImage tex = testing::textured_image(96, 96, 3);
  const double p5 = metrics::psnr(jpeg_roundtrip(tex, 5), tex);
  const double p10 = metrics::psnr(jpeg_roundtrip(tex, 10), tex);
  const double p30 = metrics::psnr(jpeg_roundtrip(tex, 30), tex);
  EXPECT_GT(p30, p10);
  EXPECT_GT(p10, p5);
  EXPECT_THROW(jpeg_roundtrip(tex, 0), Error);
  EXPECT_EQ(jpeg_roundtrip(imgio::to_luma(tex), 50).channels(), 1);
}

TEST(Jpeg, CorruptStream) {
  try {
    decode_jpeg({0xFF, 0xD8, 0xFF, 0x00, 0x12});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kCodecError);
  }
}

TEST(Permutation, SeededAndComplete) {
  const auto a = seeded_permutation(50, 3);
  EXPECT_EQ(a, seeded_permutation(50, 3));
  EXPECT_NE(a, seeded_permutation(50, 4));
  std::set<size_t> s(a.begin(), a.end());
  EXPECT_EQ(s.size(), 50u);
}

curation::CurationManifest toy_manifest(const std::filesystem::path& corpus, int n) {
  curation::CurationManifest m;
  m.corpus = corpus.generic_string();
  for (int i = 0; i < n; ++i) {
    const std::string name = "s" + std::to_string(i) + ".png";
    imgio::save_image(corpus / name, testing::textured_image(24, 32, 100 + i));
    curation::QualityReport r;
    r.path = name;
    r.selected = r.in_sg = r.in_se = r.passed_screen = true;
    m.reports.push_back(r);
  }
  return m;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

TEST(Benchmark, ToyCorpusLayout) {
  TempDir corpus("bench_src");
  TempDir out1("bench_a");
  TempDir out2("bench_b");
  const auto m = toy_manifest(corpus.path(), 10);
  BenchmarkSpec spec;
  spec.train = 8;
  spec.val = 1;
  spec.test = 1;
  spec.seed = 5;
  spec.specs = {DegradationSpec::noise(25)};
  const BenchmarkIndex idx = build_benchmark(m, spec, out1.path());
  ASSERT_EQ(idx.entries.size(), 10u);
  std::map<std::string, std::set<std::string>> splits;
  for (const auto& e : idx.entries) {
    splits[e.split].insert(e.source);
    EXPECT_TRUE(std::filesystem::exists(out1.path() / e.gt));
    EXPECT_TRUE(std::filesystem::exists(out1.path() / e.input));
    EXPECT_NE(e.input.find("input_noise_s25/"), std::string::npos);
  }
  EXPECT_EQ(splits["train"].size(), 8u);
  EXPECT_EQ(splits["val"].size(), 1u);
  EXPECT_EQ(splits["test"].size(), 1u);
  std::set<std::string> all;
  for (auto& [k, v] : splits) all.insert(v.begin(), v.end());
  EXPECT_EQ(all.size(), 10u);

  spec.threads = 4;
  build_benchmark(m, spec, out2.path());
  EXPECT_EQ(slurp(out1.path() / "index.json"), slurp(out2.path() / "index.json"));
  EXPECT_EQ(slurp(out1.path() / "train" / "input_noise_s25" / "s3.png").size() > 0, true);

  const auto doc = nlohmann::json::parse(slurp(out1.path() / "index.json"));
  EXPECT_EQ(doc["version"], 1);
  EXPECT_EQ(doc["jpeg_chroma_subsampling"], "4:2:0");
  EXPECT_EQ(doc["entries"].size(), 10u);
}

TEST(Benchmark, OutputsMatchAcrossThreadCounts) {
  TempDir corpus("bench_src");
  TempDir a("bench_a");
  TempDir b("bench_b");
  const auto m = toy_manifest(corpus.path(), 6);
  BenchmarkSpec spec;
  spec.train = 4;
  spec.val = 1;
  spec.test = 1;
  spec.specs = {DegradationSpec::noise(15), DegradationSpec::jpeg(10)};
  build_benchmark(m, spec, a.path());
  spec.threads = 3;
  const auto idx = build_benchmark(m, spec, b.path());
  for (const auto& e : idx.entries) {
    EXPECT_EQ(slurp(a.path() / e.input), slurp(b.path() / e.input)) << e.input;
  }
}

TEST(Benchmark, Errors) {
  TempDir corpus("bench_src");
  TempDir out("bench_out");
  const auto m = toy_manifest(corpus.path(), 3);
  BenchmarkSpec spec;
  try {
    build_benchmark(m, spec, out.path());
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kInsufficientSpecs);
  }
  spec.specs = {DegradationSpec::jpeg(30)};
  spec.train = 5;
  try {
    build_benchmark(m, spec, out.path());
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kInsufficientImages);
  }
  EXPECT_THROW(DegradationSpec::jpeg(101), Error);
  EXPECT_THROW(DegradationSpec::noise(0), Error);
}

TEST(BenchmarkSpecJson, RoundTrip) {
  BenchmarkSpec spec;
  spec.train = 80;
  spec.val = 1;
  spec.test = 1;
  spec.seed = 12345678901234ULL;
  spec.specs = {DegradationSpec::noise(50), DegradationSpec::jpeg(5)};
  const BenchmarkSpec back = spec_from_json(spec_to_json(spec));
  EXPECT_EQ(spec_to_json(back), spec_to_json(spec));
  EXPECT_THROW(spec_from_json(nlohmann::json::parse(R"({"splits": {}})")), Error);
}

}  // namespace
}  // namespace spectradec
