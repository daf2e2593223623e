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


// Acceptance suite: one line per criterion, non-zero exit if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "../corpus.hpp"
#include "../oracles.hpp"
#include "spectradec/analysis.hpp"
#include "spectradec/cli.hpp"
#include "spectradec/curation.hpp"
#include "spectradec/dct.hpp"
#include "spectradec/degrade.hpp"
#include "spectradec/kan_json.hpp"
#include "spectradec/metrics.hpp"
#include "spectradec/neural.hpp"
#include "spectradec/spectral.hpp"

namespace spectradec {
namespace {

namespace fs = std::filesystem;
using testing::naive_dct2;
using testing::plane_of;
using testing::random_image;
using testing::TempDir;

struct Outcome {
  bool pass = true;
  std::string detail;
};

std::string num(double v) { return metrics::format_number(v); }

void require(Outcome& o, bool cond, const std::string& what) {
  if (!cond && o.pass) {
    o.pass = false;
    o.detail = what;
  }
}

// ---------------------------------------------------------------------------

Outcome dct_fidelity() {
  Outcome o;
  std::mt19937_64 rng(101);
  double worst_rt = 0;
  for (int n = 0; n < 100; ++n) {
    const int h = n == 0 ? 2160 : 1 + int(rng() % 2160);
    const int w = n == 0 ? 3840 : 1 + int(rng() % 3840);
    const PlanarImage img = random_image(1, h, w, 5000 + n);
    const PlanarImage back = spectral::idct2(spectral::dct2(img));
    worst_rt = std::max(worst_rt, double((back.data() - img.data()).cwiseAbs().maxCoeff()));
  }
  double worst_oracle = 0;
  for (int h = 1; h <= 32; h += 3) {
    for (int w = 1; w <= 32; w += 5) {
      const PlanarImage img = random_image(1, h, w, 9000 + h * 33 + w);
      const Eigen::MatrixXd ref = naive_dct2(plane_of(img, 0));
      const spectral::Spectrum fast = spectral::dct2(img, {dct::Path::kFast, std::nullopt});
      worst_oracle = std::max(
          worst_oracle, (fast.plane(0).cast<double>() - ref).cwiseAbs().maxCoeff());
    }
  }
  const PlanarImage big = random_image(1, 2160, 3840, 77);
  const auto t0 = std::chrono::steady_clock::now();
  const spectral::Spectrum s = spectral::dct2(big);
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  require(o, worst_rt < 1e-4, "round trip error " + num(worst_rt));
  require(o, worst_oracle < 1e-5, "fast vs naive error " + num(worst_oracle));
  require(o, secs < 5.0, "4K forward took " + num(secs) + " s");
  if (o.pass) {
    o.detail = "round trip " + num(worst_rt) + ", oracle " + num(worst_oracle) +
               ", 4K forward " + num(std::round(secs * 1000) / 1000) + " s";
  }
  (void)s;
  return o;
}

Outcome parseval() {
  Outcome o;
  std::mt19937_64 rng(202);
  double worst = 0;
  for (int n = 0; n < 100; ++n) {
    const int h = 1 + int(rng() % 256);
    const int w = 1 + int(rng() % 256);
    const int c = rng() % 2 ? 3 : 1;
    const PlanarImage a = random_image(c, h, w, 100 + n);
    const PlanarImage b = random_image(c, h, w, 300 + n);
    const double spatial =
        (a.data().cast<double>() - b.data().cast<double>()).squaredNorm();
    const spectral::Spectrum da = spectral::dct2(a);
    const spectral::Spectrum db = spectral::dct2(b);
    const double spectral =
        (da.data().cast<double>() - db.data().cast<double>()).squaredNorm();
    worst = std::max(worst, std::abs(spatial - spectral) / spatial);
  }
  require(o, worst < 1e-6, "relative SSE gap " + num(worst));
  if (o.pass) o.detail = "max relative SSE gap " + num(worst);
  return o;
}

PlanarImage degraded_pair(const PlanarImage& gt, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  PlanarImage x = analysis::synthetic_lowlight(gt, 1.2 + 1.8 * u(rng), 0.3 + 0.5 * u(rng));
  x = analysis::gaussian_blur(x, 0.5 + 1.5 * u(rng));
  return degrade::add_gaussian_noise(x, 5.0 + 20.0 * u(rng), seed, "pair");
}

Outcome progressive_fill() {
  Outcome o;
  int violations = 0;
  int terminal_bad = 0;
  std::mt19937_64 rng(303);
  for (int n = 0; n < 50; ++n) {
    const int h = 16 + int(rng() % 80);
    const int w = 16 + int(rng() % 80);
    const PlanarImage gt = testing::textured_image(h, w, 400 + n);
    const PlanarImage input = degraded_pair(gt, 500 + n);
    const auto ks = analysis::default_ks(spectral::max_cutoff(h, w));
    const auto curve = analysis::progressive_fill_curve(input, gt, ks, true);
    for (size_t i = 1; i < ks.size(); ++i) {
      violations += curve.psnr_filled[i] < curve.psnr_filled[i - 1];
    }
    terminal_bad += !std::isinf(curve.psnr_filled.back());
  }
  require(o, violations == 0, std::to_string(violations) + " monotonicity violations");
  require(o, terminal_bad == 0, std::to_string(terminal_bad) + " curves not ending at inf");
  if (o.pass) o.detail = "50 pairs, 0 violations, all terminal values inf";
  return o;
}

Outcome zero_swap() {
  Outcome o;
  std::mt19937_64 rng(404);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const int pairs = 24;
  int wins = 0;
  double margin = 0;
  for (int n = 0; n < pairs; ++n) {
    const PlanarImage gt = testing::textured_image(64, 96, 600 + n);
    const PlanarImage input =
        analysis::synthetic_lowlight(gt, 1.5 + 1.5 * u(rng), 0.25 + 0.5 * u(rng));
    const auto r = analysis::zero_swap_experiment(input, gt);
    wins += r.psnr_xin > r.psnr_xgt;
    margin += r.psnr_xin - r.psnr_xgt;
  }
  const double rate = double(wins) / pairs;
  require(o, rate >= 0.9, "exchanged input better in " + num(rate * 100) + "% of pairs");
  if (o.pass) {
    o.detail = std::to_string(wins) + "/" + std::to_string(pairs) +
               " pairs, mean margin " + num(std::round(margin / pairs * 100) / 100) + " dB";
  }
  return o;
}

Outcome zigzag() {
  Outcome o;
  for (int h = 1; h <= 16; ++h) {
    for (int w = 1; w <= 16; ++w) {
      const spectral::ZigzagOrder order(h, w);
      std::set<std::pair<int, int>> seen;
      const auto& path = order.path();
      bool monotone = true;
      for (size_t t = 0; t < path.size(); ++t) {
        seen.insert({path[t].row, path[t].col});
        if (t > 0 && path[t].row + path[t].col < path[t - 1].row + path[t - 1].col) {
          monotone = false;
        }
      }
      require(o, int(path.size()) == h * w && int(seen.size()) == h * w,
              "not bijective at " + std::to_string(h) + "x" + std::to_string(w));
      require(o, monotone, "diagonal order broken at " + std::to_string(h) + "x" +
                               std::to_string(w));
    }
  }
  const std::vector<spectral::Index2> expected{{0, 0}, {0, 1}, {1, 0}, {2, 0}, {1, 1},
                                               {0, 2}, {1, 2}, {2, 1}, {2, 2}};
  require(o, spectral::ZigzagOrder(3, 3).path() == expected, "3x3 order differs");
  if (o.pass) o.detail = "256 shapes bijective and monotone; 3x3 order matches";
  return o;
}

Outcome fwkan() {
  Outcome o;
  std::vector<nn::FwKanStack> stacks = nn::random_stacks(20, 606);
  stacks.push_back(nn::FwKanStack::identity(16, 3));
  nn::KanCheckOptions opts;
  opts.gradient_samples = 1000;
  const nn::KanCheckReport r = nn::kan_check(stacks, 707, opts);
  require(o, r.max_gradient_rel_err < 1e-4, "gradient rel err " + num(r.max_gradient_rel_err));
  require(o, r.max_identity_err < 1e-4, "identity err " + num(r.max_identity_err));
  require(o, r.locality_exact, "window locality broken");
  if (o.pass) {
    o.detail = "grad rel err " + num(r.max_gradient_rel_err) + " over " +
               std::to_string(r.gradient_samples) + " samples (" +
               std::to_string(r.gradient_skipped) + " near kink), identity err " +
               num(r.max_identity_err) + ", locality exact";
  }
  return o;
}

Outcome band_losses() {
  Outcome o;
  double worst = 0;
  for (int seed = 0; seed < 5; ++seed) {
    const PlanarImage a = random_image(3, 16, 16, 800 + seed);
    const PlanarImage b = random_image(3, 16, 16, 900 + seed);
    for (int k : {1, 2, 4}) {
      double zf = 0, lf = 0, hf = 0;
      for (int c = 0; c < 3; ++c) {
        const Eigen::MatrixXd d = naive_dct2(plane_of(a, c)) - naive_dct2(plane_of(b, c));
        for (int i = 0; i < 16; ++i) {
          for (int j = 0; j < 16; ++j) {
            const double v = std::abs(d(i, j));
            if (i == 0 && j == 0) zf += v;
            if (i <= k && j <= k && !(i == 0 && j == 0)) lf += v;
            if (i >= k || j >= k) hf += v;
          }
        }
      }
      worst = std::max({worst, std::abs(metrics::l_zf(a, b) - zf) / zf,
                        std::abs(metrics::l_lf(a, b, k) - lf) / lf,
                        std::abs(metrics::l_hf(a, b, k) - hf) / hf});
    }
  }
  require(o, worst < 1e-5, "band loss rel err " + num(worst));
  // 0.1 has no exact binary form; the offset below is 0.1 rounded to float.
  double offset_err = 0;
  for (int channels : {1, 3}) {
    const PlanarImage a = PlanarImage::constant(channels, 2, 2, 0.25f,
                                                channels == 1 ? ColorSpace::kLuma
                                                              : ColorSpace::kRgb);
    PlanarImage b = a;
    b.data().array() += 0.1f;
    const double per_channel = metrics::l_zf(a, b) / channels;
    offset_err = std::max(offset_err, std::abs(per_channel - 0.2));
  }
  require(o, offset_err < 1e-7, "2x2 offset l_zf off by " + num(offset_err));
  if (o.pass) {
    o.detail = "oracle rel err " + num(worst) + "; 2x2 offset l_zf within " +
               num(offset_err) + " of 0.2";
  }
  return o;
}

Outcome metric_values() {
  Outcome o;
  const PlanarImage a = PlanarImage::constant(3, 32, 32, 128.0f / 255.0f);
  const PlanarImage b = PlanarImage::constant(3, 32, 32, 129.0f / 255.0f);
  const double p = metrics::psnr(a, b);
  require(o, std::abs(p - 48.13) <= 0.01, "PSNR " + num(p));
  double worst = 0;
  double self = 1;
  for (int seed = 0; seed < 5; ++seed) {
    const PlanarImage x = random_image(1, 64, 64, 1000 + seed);
    PlanarImage y = x;
    y.data() = 0.6f * x.data() + 0.4f * random_image(1, 64, 64, 1100 + seed).data();
    worst = std::max(worst, std::abs(metrics::ssim(x, y) -
                                     testing::direct_ssim_plane(plane_of(x, 0),
                                                                plane_of(y, 0))));
    self = std::min(self, metrics::ssim(x, x));
  }
  require(o, std::abs(self - 1.0) < 1e-12, "SSIM self score " + num(self));
  require(o, worst < 1e-4, "SSIM oracle gap " + num(worst));
  if (o.pass) {
    o.detail = "PSNR " + num(std::round(p * 1000) / 1000) + " dB, SSIM self " +
               num(self) + ", oracle gap " + num(worst);
  }
  return o;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

Outcome curation_check() {
  Outcome o;
  TempDir dir("accept_curate");
  const auto items = testing::write_corpus(dir.path() / "corpus", 20, 64, 11);
  curation::CurationConfig cfg;
  cfg.lap_high = 0.5;  // calibrated above the textured class, below noise
  cfg.threads = 0;
  const curation::CurationManifest m = curation::run_pipeline(dir.path() / "corpus", cfg);

  std::set<std::string> textured, screened, sg, se, selected;
  for (const auto& it : items) {
    if (it.category == testing::Category::kTextured) textured.insert(it.path);
  }
  for (const auto& r : m.reports) {
    if (r.passed_screen) screened.insert(r.path);
    if (r.in_sg) sg.insert(r.path);
    if (r.in_se) se.insert(r.path);
    if (r.selected) selected.insert(r.path);
  }
  std::set<std::string> both;
  std::set_intersection(sg.begin(), sg.end(), se.begin(), se.end(),
                        std::inserter(both, both.begin()));
  const size_t half = (screened.size() + 1) / 2;
  require(o, items.size() == 60 && m.reports.size() == 60, "corpus size");
  require(o, screened == textured, "screened " + std::to_string(screened.size()) +
                                       " images, textured class has " +
                                       std::to_string(textured.size()));
  require(o, sg.size() == half && se.size() == half, "|S_G| or |S_E| != ceil(|S|/2)");
  require(o, selected == both, "selected != S_G intersect S_E");

  curation::write_manifest(dir.path() / "a.json", m);
  cfg.threads = 1;
  curation::write_manifest(dir.path() / "b.json",
                           curation::run_pipeline(dir.path() / "corpus", cfg));
  require(o, slurp(dir.path() / "a.json") == slurp(dir.path() / "b.json"),
          "manifest rerun differs");

  // GLCM against brute-force pair counting on each corpus image.
  const int offsets[4][2] = {{0, 1}, {-1, 1}, {-1, 0}, {-1, -1}};
  bool glcm_exact = true;
  for (const auto& it : items) {
    const PlanarImage luma = imgio::to_luma(imgio::load_image(dir.path() / "corpus" / it.path));
    for (int q = 0; q < 4; ++q) {
      Eigen::MatrixXd ref = Eigen::MatrixXd::Zero(64, 64);
      for (int y = 0; y < luma.height(); ++y) {
        for (int x = 0; x < luma.width(); ++x) {
          const int y2 = y + offsets[q][0];
          const int x2 = x + offsets[q][1];
          if (y2 < 0 || y2 >= luma.height() || x2 < 0 || x2 >= luma.width()) continue;
          const int a = std::min(63, int(std::floor(luma.at(0, y, x) * 64)));
          const int b = std::min(63, int(std::floor(luma.at(0, y2, x2) * 64)));
          ref(a, b) += 1;
          ref(b, a) += 1;
        }
      }
      glcm_exact &= curation::glcm_counts(luma, 64, 1, curation::kOrientations[q]) == ref;
    }
  }
  require(o, glcm_exact, "GLCM differs from pair-count oracle");
  if (o.pass) {
    o.detail = "S=" + std::to_string(screened.size()) + " (textured class), S_G=" +
               std::to_string(sg.size()) + ", S_E=" + std::to_string(se.size()) +
               ", selected=" + std::to_string(selected.size()) +
               ", manifest byte-stable, GLCM exact";
  }
  return o;
}

curation::CurationManifest toy_manifest(const fs::path& corpus, int n) {
  curation::CurationManifest m;
  m.corpus = corpus.generic_string();
  fs::create_directories(corpus);
  for (int i = 0; i < n; ++i) {
    char name[32];
    std::snprintf(name, sizeof(name), "u%03d.png", i);
    imgio::save_image(corpus / name, testing::textured_image(16, 16, 2000 + i));
    curation::QualityReport r;
    r.path = name;
    r.selected = r.in_sg = r.in_se = r.passed_screen = true;
    m.reports.push_back(r);
  }
  return m;
}

Outcome degradation() {
  Outcome o;
  const PlanarImage gray = PlanarImage::constant(1, 1024, 1024, 0.5f, ColorSpace::kLuma);
  const PlanarImage noisy = degrade::add_gaussian_noise(gray, 25.0, 1234, "gray.png");
  const Eigen::ArrayXd d = (noisy.data().cast<double>().array() - 0.5).reshaped();
  const double sd = std::sqrt((d - d.mean()).square().mean()) * 255.0;
  require(o, std::abs(sd / 25.0 - 1.0) < 0.02, "noise std " + num(sd) + "/255");

  int ordered = 0;
  for (int n = 0; n < 10; ++n) {
    const PlanarImage img = testing::textured_image(128, 160, 3000 + n);
    const double p5 = metrics::psnr(degrade::jpeg_roundtrip(img, 5), img);
    const double p10 = metrics::psnr(degrade::jpeg_roundtrip(img, 10), img);
    const double p30 = metrics::psnr(degrade::jpeg_roundtrip(img, 30), img);
    ordered += p30 > p10 && p10 > p5;
  }
  require(o, ordered == 10, "JPEG order held on " + std::to_string(ordered) + "/10");

  // 80,126 / 1,000 / 1,000 scaled down by 1000.
  TempDir dir("accept_bench");
  const auto m = toy_manifest(dir.path() / "corpus", 82);
  degrade::BenchmarkSpec spec;
  spec.train = 80;
  spec.val = 1;
  spec.test = 1;
  spec.seed = 42;
  spec.specs = {degrade::DegradationSpec::noise(25), degrade::DegradationSpec::jpeg(10)};
  const auto idx = degrade::build_benchmark(m, spec, dir.path() / "a");
  std::map<std::string, std::set<std::string>> splits;
  for (const auto& e : idx.entries) splits[e.split].insert(e.source);
  std::set<std::string> all;
  size_t total = 0;
  for (auto& [k, v] : splits) {
    all.insert(v.begin(), v.end());
    total += v.size();
  }
  require(o, splits["train"].size() == 80 && splits["val"].size() == 1 &&
                 splits["test"].size() == 1,
          "split sizes");
  require(o, all.size() == total && total == 82, "splits not disjoint");
  degrade::build_benchmark(m, spec, dir.path() / "b");
  require(o, slurp(dir.path() / "a" / "index.json") == slurp(dir.path() / "b" / "index.json"),
          "index.json differs on rerun");
  spec.seed = 43;
  const auto other = degrade::build_benchmark(m, spec, dir.path() / "c");
  std::set<std::string> other_val;
  for (const auto& e : other.entries) {
    if (e.split != "train") other_val.insert(e.source);
  }
  std::set<std::string> val = splits["val"];
  val.insert(splits["test"].begin(), splits["test"].end());
  require(o, other_val != val, "seed does not change the assignment");
  if (o.pass) {
    o.detail = "noise std " + num(std::round(sd * 100) / 100) +
               "/255, JPEG ordered on 10/10, splits 80/1/1 disjoint and reproducible";
  }
  return o;
}

// Runs one CLI invocation and returns stdout plus every file it wrote.
std::string capture(const std::vector<std::string>& args, const fs::path& out_dir,
                    int& code) {
  std::ostringstream out, err;
  code = cli::run(args, out, err);
  std::string blob = "exit=" + std::to_string(code) + "\n" + out.str();
  if (fs::exists(out_dir)) {
    std::vector<fs::path> files;
    for (const auto& e : fs::recursive_directory_iterator(out_dir)) {
      if (e.is_regular_file()) files.push_back(e.path());
    }
    std::sort(files.begin(), files.end());
    for (const auto& f : files) {
      blob += "--" + fs::relative(f, out_dir).generic_string() + "\n" + slurp(f);
    }
  }
  return blob;
}

Outcome determinism() {
  Outcome o;
  TempDir dir("accept_cli");
  const fs::path root = dir.path();
  const auto items = testing::write_corpus(root / "corpus", 10, 48, 21);
  const fs::path gt = root / "corpus" / items[2].path;
  const fs::path input = root / "input.png";
  imgio::save_image(input, degraded_pair(imgio::load_image(gt), 5));
  fs::create_directories(root / "restored");
  fs::create_directories(root / "gts");
  for (int i = 0; i < 6; ++i) {
    const PlanarImage g = testing::textured_image(40, 40, 4000 + i);
    imgio::save_image(root / "gts" / ("e" + std::to_string(i) + ".png"), g);
    imgio::save_image(root / "restored" / ("e" + std::to_string(i) + ".png"),
                      degraded_pair(g, 4100 + i));
  }
  {
    std::ofstream cfg(root / "curate.toml");
    cfg << "[curation]\nlap_high = 0.5\n";
  }
  {
    std::ofstream spec(root / "spec.json");
    spec << R"({"splits": {"train": 1, "val": 1, "test": 1}, "seed": 9,
               "specs": [{"kind": "gaussian_noise", "sigma": 25},
                         {"kind": "jpeg", "quality": 10}]})";
  }
  int code = 0;
  const std::string manifest_args = (root / "manifest_ref.json").string();
  {
    std::vector<std::string> args{"curate", "--corpus", (root / "corpus").string(),
                                  "--out", manifest_args, "--config",
                                  (root / "curate.toml").string()};
    std::ostringstream out, err;
    code = cli::run(args, out, err);
    require(o, code == 0, "reference curate failed: " + err.str());
  }

  using Build = std::function<std::vector<std::string>(const fs::path&)>;
  const std::vector<std::pair<std::string, Build>> commands = {
      {"analyze",
       [&](const fs::path& out) {
         return std::vector<std::string>{"analyze", "--input", input.string(), "--gt",
                                         gt.string(), "--out", out.string()};
       }},
      {"evaluate",
       [&](const fs::path& out) {
         return std::vector<std::string>{"evaluate", "--restored",
                                         (root / "restored").string(), "--gt",
                                         (root / "gts").string(), "--out",
                                         (out / "metrics.csv").string()};
       }},
      {"curate",
       [&](const fs::path& out) {
         return std::vector<std::string>{"curate", "--corpus", (root / "corpus").string(),
                                         "--out", (out / "manifest.json").string(),
                                         "--csv", (out / "manifest.csv").string(),
                                         "--config", (root / "curate.toml").string()};
       }},
      {"degrade",
       [&](const fs::path& out) {
         return std::vector<std::string>{"degrade", "--manifest", manifest_args, "--spec",
                                         (root / "spec.json").string(), "--out",
                                         out.string(), "--seed", "77"};
       }},
      {"kan-check",
       [&](const fs::path&) {
         return std::vector<std::string>{"kan-check", "--random", "10", "--seed", "5"};
       }},
      {"dct",
       [&](const fs::path& out) {
         return std::vector<std::string>{"dct", "--input", gt.string(), "--out",
                                         (out / "spectrum.bin").string()};
       }},
  };
  for (const auto& [name, build] : commands) {
    std::string reference;
    for (const char* threads : {"1", "4", "16"}) {
      const fs::path out = root / "runs" / (name + "_" + threads);
      fs::create_directories(out);
      std::vector<std::string> args = build(out);
      args.push_back("--threads");
      args.push_back(threads);
      const std::string blob = capture(args, out, code);
      require(o, code == 0, name + " exited " + std::to_string(code) + ": " +
                                blob.substr(0, 200));
      if (reference.empty()) {
        reference = blob;
      } else {
        require(o, blob == reference, name + " output depends on --threads");
      }
    }
  }
  if (o.pass) o.detail = "6 commands byte-identical at --threads 1, 4, 16";
  return o;
}

}  // namespace
}  // namespace spectradec

// Optional arguments restrict the run to criteria whose label starts with one
// of them, e.g. `spectradec_acceptance AC3 AC11`.
int main(int argc, char** argv) {
  using namespace spectradec;
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"AC1  DCT fidelity", dct_fidelity},
      {"AC2  Parseval", parseval},
      {"AC3  progressive-fill monotonicity", progressive_fill},
      {"AC4  zero-swap exchanged input beats exchanged GT", zero_swap},
      {"AC5  zigzag order", zigzag},
      {"AC6  FW-KAN gradients, identity, locality", fwkan},
      {"AC7  band losses", band_losses},
      {"AC8  PSNR / SSIM", metric_values},
      {"AC9  curation pipeline", curation_check},
      {"AC10 degradation synthesis", degradation},
      {"AC11 CLI determinism across thread counts", determinism},
  };
  const std::vector<std::string> only(argv + 1, argv + argc);
  int failed = 0;
  for (const auto& [name, fn] : criteria) {
    if (!only.empty() &&
        std::none_of(only.begin(), only.end(), [&](const std::string& prefix) {
          return name.rfind(prefix + " ", 0) == 0;
        })) {
      continue;
    }
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = fn();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    failed += !o.pass;
    std::cout << (o.pass ? "PASS " : "FAIL ") << name << " | " << o.detail << " ["
              << metrics::format_number(std::round(secs * 10) / 10) << " s]"
              << std::endl;
  }
  std::cout << (failed == 0 ? "ALL ACCEPTANCE CRITERIA PASSED"
                            : std::to_string(failed) + " CRITERIA FAILED")
            << std::endl;
  return failed == 0 ? 0 : 1;
}
