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


#include "spectradec/cli.hpp"

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <optional>
#include <set>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "spectradec/analysis.hpp"
#include "spectradec/config.hpp"
#include "spectradec/curation.hpp"
#include "spectradec/degrade.hpp"
#include "spectradec/imgio.hpp"
#include "spectradec/kan_json.hpp"
#include "spectradec/metrics.hpp"
#include "spectradec/parallel.hpp"
#include "spectradec/spectral.hpp"

namespace spectradec::cli {
namespace fs = std::filesystem;
using nlohmann::json;
using metrics::format_number;

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument:
    case ErrorCode::kParseError:
    case ErrorCode::kCutoffOutOfRange:
      return kUsage;
    case ErrorCode::kFileNotFound:
    case ErrorCode::kUnsupportedFormat:
    case ErrorCode::kCorruptData:
    case ErrorCode::kIoError:
    case ErrorCode::kCodecError:
      return kIo;
    default:
      return kDataInconsistency;
  }
}

namespace {

// Flags shared by every subcommand. Unset optionals fall back to the config
// file, then to built-in defaults.
struct CommonFlags {
  std::optional<int> threads;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> format;
  std::string config_path;
};

struct RunConfig {
  int threads = 0;
  std::uint64_t seed = 0;
  std::optional<int> tile_size;
  int cutoff_k = 4;
  std::string format = "csv";
  json file = json::object();  // full parsed config, for module sections
};

template <typename T>
std::optional<T> config_value(const json& root, std::string_view key) {
  const json* node = config::find(root, key);
  if (!node) return std::nullopt;
  try {
    return node->get<T>();
  } catch (const json::exception&) {
    throw Error(ErrorCode::kParseError,
                "config key '" + std::string(key) + "' has the wrong type");
  }
}

std::optional<int> env_threads() {
  const char* v = std::getenv("SPECTRADEC_THREADS");
  if (!v || !*v) return std::nullopt;
  char* end = nullptr;
  const long n = std::strtol(v, &end, 10);
  if (*end != '\0' || n < 0) {
    throw Error(ErrorCode::kInvalidArgument,
                std::string("SPECTRADEC_THREADS must be a non-negative integer, got '") +
                    v + "'");
  }
  return int(n);
}

RunConfig resolve(const CommonFlags& flags) {
  RunConfig rc;
  if (!flags.config_path.empty()) rc.file = config::read(flags.config_path);
  if (auto v = config_value<int>(rc.file, "run.threads")) rc.threads = *v;
  if (auto v = env_threads()) rc.threads = *v;
  if (flags.threads) rc.threads = *flags.threads;
  if (auto v = config_value<std::uint64_t>(rc.file, "run.seed")) rc.seed = *v;
  if (flags.seed) rc.seed = *flags.seed;
  if (auto v = config_value<int>(rc.file, "run.tile_size")) rc.tile_size = *v;
  if (auto v = config_value<int>(rc.file, "run.cutoff_k")) rc.cutoff_k = *v;
  if (auto v = config_value<std::string>(rc.file, "run.format")) rc.format = *v;
  if (flags.format) rc.format = *flags.format;
  if (rc.threads < 0) throw Error(ErrorCode::kInvalidArgument, "threads must be >= 0");
  if (rc.format != "csv" && rc.format != "json") {
    throw Error(ErrorCode::kInvalidArgument, "format must be csv or json");
  }
  return rc;
}

void add_common(CLI::App* sub, CommonFlags& flags) {
  sub->add_option("--threads", flags.threads,
                   "Worker count, 0 = all cores (env SPECTRADEC_THREADS)");
  sub->add_option("--seed", flags.seed, "Seed for randomized steps");
  sub->add_option("--config", flags.config_path, "TOML run config")
      ->check(CLI::ExistingFile);
  sub->add_option("--format", flags.format, "Report format")
      ->check(CLI::IsMember({"csv", "json"}));
}

void write_text(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) {
    std::error_code ec;
    fs::create_directories(path.parent_path(), ec);
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::kIoError, "cannot write " + path.string());
  out << text;
  if (!out) throw Error(ErrorCode::kIoError, "write failed: " + path.string());
}

json encode_real(double v) {
  if (std::isinf(v) || std::isnan(v)) return format_number(v);
  return v;
}

std::vector<int> parse_ks(const std::string& text) {
  std::vector<int> ks;
  std::istringstream in(text);
  std::string tok;
  while (std::getline(in, tok, ',')) {
    try {
      size_t used = 0;
      ks.push_back(std::stoi(tok, &used));
      if (used != tok.size()) throw std::invalid_argument(tok);
    } catch (const std::exception&) {
      throw Error(ErrorCode::kInvalidArgument, "bad --ks entry '" + tok + "'");
    }
  }
  if (ks.empty()) throw Error(ErrorCode::kInvalidArgument, "--ks is empty");
  return ks;
}

bool is_image_file(const fs::path& p) {
  std::string ext = p.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(),
                 [](unsigned char c) { return char(std::tolower(c)); });
  return ext == ".png" || ext == ".ppm" || ext == ".pgm";
}

std::vector<std::string> list_images(const fs::path& dir) {
  std::error_code ec;
  if (!fs::is_directory(dir, ec)) {
    throw Error(ErrorCode::kFileNotFound, "directory " + dir.string() + " not found");
  }
  std::vector<std::string> files;
  for (fs::recursive_directory_iterator it(dir, ec), end; !ec && it != end;
       it.increment(ec)) {
    if (it->is_regular_file() && is_image_file(it->path())) {
      files.push_back(fs::relative(it->path(), dir).generic_string());
    }
  }
  if (ec) throw Error(ErrorCode::kIoError, "cannot scan " + dir.string());
  std::sort(files.begin(), files.end());
  return files;
}

// ---------------------------------------------------------------------------

struct AnalyzeArgs {
  std::string input;
  std::string gt;
  std::string ks;
  bool no_dc = false;
  std::string out_dir;
};

int cmd_analyze(const AnalyzeArgs& a, const RunConfig& rc, std::ostream& out) {
  const PlanarImage input = imgio::load_image(a.input);
  const PlanarImage gt = imgio::load_image(a.gt);
  require_same_shape(input, gt, "analyze");

  std::vector<int> ks;
  if (!a.ks.empty()) {
    ks = parse_ks(a.ks);
  } else if (auto v = config_value<std::vector<int>>(rc.file, "analysis.ks")) {
    ks = *v;
  } else {
    ks = analysis::default_ks(spectral::max_cutoff(input.height(), input.width()));
  }
  bool include_dc = config_value<bool>(rc.file, "analysis.include_dc").value_or(true);
  if (a.no_dc) include_dc = false;

  const analysis::ZeroSwapReport swap = analysis::zero_swap_experiment(input, gt);
  const analysis::ExchangeCurve curve =
      analysis::progressive_fill_curve(input, gt, ks, include_dc, rc.threads);
  const std::string report = rc.format == "json" ? curve.to_json() : curve.to_csv();
  out << report;

  if (!a.out_dir.empty()) {
    const fs::path dir(a.out_dir);
    write_text(dir / ("curve." + rc.format), report);
    const json zs = {{"psnr_in", encode_real(swap.psnr_in)},
                     {"psnr_exchanged_input", encode_real(swap.psnr_xin)},
                     {"psnr_exchanged_gt", encode_real(swap.psnr_xgt)}};
    write_text(dir / "zero_swap.json", zs.dump(2) + "\n");
    imgio::save_image(dir / "exchanged_input.png", swap.exchanged_input);
    imgio::save_image(dir / "exchanged_gt.png", swap.exchanged_gt);
  }
  return kOk;
}

// ---------------------------------------------------------------------------

struct EvaluateArgs {
  std::string restored;
  std::string gt;
  std::optional<int> k;
  std::string out_file;
};

int cmd_evaluate(const EvaluateArgs& a, const RunConfig& rc, std::ostream& out,
                 std::ostream& err) {
  const std::vector<std::string> restored = list_images(a.restored);
  const std::vector<std::string> gt = list_images(a.gt);
  std::vector<std::string> paired;
  std::vector<std::string> missing;
  std::set_intersection(restored.begin(), restored.end(), gt.begin(), gt.end(),
                        std::back_inserter(paired));
  std::set_symmetric_difference(restored.begin(), restored.end(), gt.begin(),
                                gt.end(), std::back_inserter(missing));
  const int k = a.k.value_or(rc.cutoff_k);

  std::vector<metrics::MetricsRecord> rows(paired.size());
  parallel_for(paired.size(), rc.threads, [&](size_t i) {
    const PlanarImage r = imgio::load_image(fs::path(a.restored) / paired[i]);
    const PlanarImage g = imgio::load_image(fs::path(a.gt) / paired[i]);
    rows[i] = metrics::evaluate_pair(r, g, k);
    rows[i].path = paired[i];
  });

  metrics::MetricsRecord mean;
  mean.path = "mean";
  mean.k = k;
  if (!rows.empty()) {
    for (const auto& r : rows) {
      mean.psnr += r.psnr;
      mean.ssim += r.ssim;
      mean.zf_psnr += r.zf_psnr;
      mean.l_zf += r.l_zf;
      mean.l_lf += r.l_lf;
      mean.l_hf += r.l_hf;
    }
    const double n = double(rows.size());
    mean.psnr /= n;
    mean.ssim /= n;
    mean.zf_psnr /= n;
    mean.l_zf /= n;
    mean.l_lf /= n;
    mean.l_hf /= n;
  }

  std::string report;
  if (rc.format == "json") {
    auto encode = [](const metrics::MetricsRecord& r) {
      return json{{"path", r.path},
                  {"psnr", encode_real(r.psnr)},
                  {"ssim", encode_real(r.ssim)},
                  {"zf_psnr", encode_real(r.zf_psnr)},
                  {"l_zf", encode_real(r.l_zf)},
                  {"l_lf", encode_real(r.l_lf)},
                  {"l_hf", encode_real(r.l_hf)},
                  {"k", r.k}};
    };
    json doc = {{"rows", json::array()}, {"missing", missing}};
    for (const auto& r : rows) doc["rows"].push_back(encode(r));
    doc["summary"] = rows.empty() ? json(nullptr) : encode(mean);
    report = doc.dump(2) + "\n";
  } else {
    std::ostringstream csv;
    csv << "path,psnr,ssim,zf_psnr,l_zf,l_lf,l_hf,k\n";
    auto line = [&](const metrics::MetricsRecord& r) {
      csv << r.path << ',' << format_number(r.psnr) << ',' << format_number(r.ssim)
          << ',' << format_number(r.zf_psnr) << ',' << format_number(r.l_zf) << ','
          << format_number(r.l_lf) << ',' << format_number(r.l_hf) << ',' << r.k
          << '\n';
    };
    for (const auto& r : rows) line(r);
    if (!rows.empty()) line(mean);
    report = csv.str();
  }
  if (a.out_file.empty()) {
    out << report;
  } else {
    write_text(a.out_file, report);
  }
  for (const std::string& m : missing) err << "missing pair: " << m << '\n';
  return missing.empty() ? kOk : kDataInconsistency;
}

// ---------------------------------------------------------------------------

struct CurateArgs {
  std::string corpus;
  std::string out_file;
  std::string csv_file;
  std::optional<double> fraction;
  std::optional<double> lap_low;
  std::optional<double> lap_high;
  std::optional<double> edge_min;
  std::optional<double> sobel_threshold;
};

int cmd_curate(const CurateArgs& a, const RunConfig& rc, std::ostream& out) {
  curation::CurationConfig cfg;
  const json& f = rc.file;
  auto pick = [&](double& target, const char* key, const std::optional<double>& flag) {
    if (auto v = config_value<double>(f, key)) target = *v;
    if (flag) target = *flag;
  };
  pick(cfg.lap_low, "curation.lap_low", a.lap_low);
  pick(cfg.lap_high, "curation.lap_high", a.lap_high);
  pick(cfg.edge_min, "curation.edge_min", a.edge_min);
  pick(cfg.sobel_threshold, "curation.sobel_threshold", a.sobel_threshold);
  pick(cfg.fraction, "curation.fraction", a.fraction);
  if (auto v = config_value<int>(f, "curation.glcm_levels")) cfg.glcm_levels = *v;
  if (auto v = config_value<int>(f, "curation.glcm_distance")) cfg.glcm_distance = *v;
  if (auto v = config_value<std::vector<std::string>>(f, "curation.approved")) {
    cfg.approved = *v;
  }
  cfg.threads = rc.threads;

  const curation::CurationManifest m = curation::run_pipeline(a.corpus, cfg);
  write_text(a.out_file, curation::manifest_to_json(m).dump(2) + "\n");
  if (!a.csv_file.empty()) write_text(a.csv_file, curation::manifest_to_csv(m));
  const curation::StageCounts& n = m.counts;
  out << "scanned=" << n.scanned << " errors=" << n.errors
      << " screened=" << n.screened << " sg=" << n.sg << " se=" << n.se
      << " selected=" << n.selected << '\n';
  return kOk;
}

// ---------------------------------------------------------------------------

struct DegradeArgs {
  std::string manifest;
  std::string spec;
  std::string out_dir;
  std::string corpus;
};

int cmd_degrade(const DegradeArgs& a, const CommonFlags& flags, const RunConfig& rc,
                std::ostream& out) {
  const curation::CurationManifest m = curation::read_manifest(a.manifest);
  degrade::BenchmarkSpec spec = degrade::read_spec(a.spec);
  if (flags.seed || config::find(rc.file, "run.seed")) spec.seed = rc.seed;
  spec.threads = rc.threads;
  const degrade::BenchmarkIndex index =
      degrade::build_benchmark(m, spec, a.out_dir, a.corpus);
  out << "pairs=" << index.entries.size() << " train=" << index.train
      << " val=" << index.val << " test=" << index.test << '\n';
  return kOk;
}

// ---------------------------------------------------------------------------

struct KanCheckArgs {
  std::string stack;
  int random = 0;
  std::optional<int> trials;
};

int cmd_kan_check(const KanCheckArgs& a, const RunConfig& rc, std::ostream& out) {
  std::vector<nn::FwKanStack> stacks;
  if (!a.stack.empty()) stacks = nn::read_stacks(a.stack);
  const int random =
      a.random > 0 ? a.random : config_value<int>(rc.file, "kan.random").value_or(0);
  for (nn::FwKanStack& s : nn::random_stacks(random, rc.seed)) {
    stacks.push_back(std::move(s));
  }
  if (stacks.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "give --stack FILE and/or --random N");
  }
  nn::KanCheckOptions opts;
  if (auto v = config_value<int>(rc.file, "kan.trials")) opts.gradient_samples = *v;
  if (a.trials) opts.gradient_samples = *a.trials;
  if (auto v = config_value<double>(rc.file, "kan.tolerance")) {
    opts.gradient_tolerance = *v;
    opts.identity_tolerance = *v;
  }
  const nn::KanCheckReport r = nn::kan_check(stacks, rc.seed, opts);
  const json doc = {{"stacks", r.stacks},
                    {"gradient_samples", r.gradient_samples},
                    {"gradient_skipped", r.gradient_skipped},
                    {"max_gradient_rel_err", r.max_gradient_rel_err},
                    {"max_identity_err", r.max_identity_err},
                    {"locality_exact", r.locality_exact},
                    {"gradient_tolerance", opts.gradient_tolerance},
                    {"identity_tolerance", opts.identity_tolerance},
                    {"passed", r.passed}};
  out << doc.dump(2) << '\n';
  return r.passed ? kOk : kToleranceFailure;
}

// ---------------------------------------------------------------------------

struct DctArgs {
  std::string input;
  std::string out_file;
  bool inverse = false;
  std::optional<int> tile;
  std::string path = "auto";
};

int cmd_dct(const DctArgs& a, const RunConfig& rc) {
  spectral::TransformOptions opts;
  opts.path = a.path == "naive" ? dct::Path::kNaive
              : a.path == "fast" ? dct::Path::kFast
                                 : dct::Path::kAuto;
  opts.tile_size = a.tile ? a.tile : rc.tile_size;
  if (a.inverse) {
    PlanarImage img = spectral::idct2(spectral::read_spectrum(a.input), opts);
    img.set_colorspace(img.channels() == 3 ? ColorSpace::kRgb : ColorSpace::kLuma);
    imgio::save_image(a.out_file, img);
  } else {
    spectral::write_spectrum(a.out_file, spectral::dct2(imgio::load_image(a.input), opts));
  }
  return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Frequency-domain analysis and dataset tooling for UHD restoration",
               "spectradec"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "Show help for all subcommands");

  CommonFlags flags;

  AnalyzeArgs analyze;
  CLI::App* analyze_cmd =
      app.add_subcommand("analyze", "Zero-swap and progressive band-exchange curve");
  analyze_cmd->add_option("--input", analyze.input, "Degraded image")->required();
  analyze_cmd->add_option("--gt", analyze.gt, "Ground-truth image")->required();
  analyze_cmd->add_option("--ks", analyze.ks, "Comma-separated cutoffs, e.g. 0,4,16");
  analyze_cmd->add_flag("--no-dc", analyze.no_dc, "Keep DC out of the exchanged block");
  analyze_cmd->add_option("--out", analyze.out_dir, "Directory for curve and images");
  add_common(analyze_cmd, flags);

  EvaluateArgs evaluate;
  CLI::App* evaluate_cmd =
      app.add_subcommand("evaluate", "Per-image metrics for restored vs GT folders");
  evaluate_cmd->add_option("--restored", evaluate.restored, "Restored images")->required();
  evaluate_cmd->add_option("--gt", evaluate.gt, "Ground-truth images")->required();
  evaluate_cmd->add_option("--k", evaluate.k, "Band cutoff for L_lf / L_hf");
  evaluate_cmd->add_option("--out", evaluate.out_file, "Report file (default stdout)");
  add_common(evaluate_cmd, flags);

  CurateArgs curate;
  CLI::App* curate_cmd = app.add_subcommand("curate", "Screen and select a UHD corpus");
  curate_cmd->add_option("--corpus", curate.corpus, "Image directory")->required();
  curate_cmd->add_option("--out", curate.out_file, "Manifest JSON")->required();
  curate_cmd->add_option("--csv", curate.csv_file, "Optional CSV export");
  curate_cmd->add_option("--fraction", curate.fraction, "Top fraction kept per score");
  curate_cmd->add_option("--lap-low", curate.lap_low, "Laplacian variance lower bound");
  curate_cmd->add_option("--lap-high", curate.lap_high, "Laplacian variance upper bound");
  curate_cmd->add_option("--edge-min", curate.edge_min, "Minimum Sobel edge density");
  curate_cmd->add_option("--sobel-threshold", curate.sobel_threshold,
                         "Sobel magnitude counted as an edge");
  add_common(curate_cmd, flags);

  DegradeArgs degrade_args;
  CLI::App* degrade_cmd =
      app.add_subcommand("degrade", "Synthesize noise / JPEG benchmark pairs");
  degrade_cmd->add_option("--manifest", degrade_args.manifest, "Curation manifest")
      ->required();
  degrade_cmd->add_option("--spec", degrade_args.spec, "Benchmark spec JSON")->required();
  degrade_cmd->add_option("--out", degrade_args.out_dir, "Output directory")->required();
  degrade_cmd->add_option("--corpus", degrade_args.corpus,
                          "Corpus root (default: the manifest's)");
  add_common(degrade_cmd, flags);

  KanCheckArgs kan;
  CLI::App* kan_cmd =
      app.add_subcommand("kan-check", "Gradient, identity and locality checks");
  kan_cmd->add_option("--stack", kan.stack, "Stack JSON (object or array)");
  kan_cmd->add_option("--random", kan.random, "Also check N random stacks")
      ->check(CLI::NonNegativeNumber);
  kan_cmd->add_option("--trials", kan.trials, "Gradient samples per activation")
      ->check(CLI::PositiveNumber);
  add_common(kan_cmd, flags);

  DctArgs dct_args;
  CLI::App* dct_cmd = app.add_subcommand("dct", "Raw 2D DCT dump or its inverse");
  dct_cmd->add_option("--input", dct_args.input, "Image (or spectrum with --inverse)")
      ->required();
  dct_cmd->add_option("--out", dct_args.out_file, "Spectrum (or image) output")
      ->required();
  dct_cmd->add_flag("--inverse", dct_args.inverse, "Spectrum to image");
  dct_cmd->add_option("--tile", dct_args.tile, "Tile size")->check(CLI::PositiveNumber);
  dct_cmd->add_option("--path", dct_args.path, "Transform path")
      ->check(CLI::IsMember({"auto", "naive", "fast"}));
  add_common(dct_cmd, flags);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  try {
    const RunConfig rc = resolve(flags);
    if (analyze_cmd->parsed()) return cmd_analyze(analyze, rc, out);
    if (evaluate_cmd->parsed()) return cmd_evaluate(evaluate, rc, out, err);
    if (curate_cmd->parsed()) return cmd_curate(curate, rc, out);
    if (degrade_cmd->parsed()) return cmd_degrade(degrade_args, flags, rc, out);
    if (kan_cmd->parsed()) return cmd_kan_check(kan, rc, out);
    if (dct_cmd->parsed()) return cmd_dct(dct_args, rc);
    return kUsage;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return exit_code_for(e.code());
  } catch (const fs::filesystem_error& e) {
    err << "error: " << e.what() << '\n';
    return kIo;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace spectradec::cli
