#include "dht/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <ostream>
#include <random>
#include <string>
#include <vector>

#include "dht/detect.hpp"
#include "dht/error.hpp"
#include "dht/eval.hpp"
#include "dht/hough.hpp"
#include "dht/io.hpp"
#include "dht/metrics.hpp"
#include "dht/pipeline.hpp"
#include "dht/refine.hpp"

namespace dht::cli {

namespace {

namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

struct RunConfig {
  std::string input;
  std::string input2;
  std::string output;
  double dtheta = kDefaultDTheta;
  double dr = kDefaultDr;
  double threshold = kDefaultDetectThreshold;
  int delta_r = kDefaultDeltaR;
  std::string metric = "ea";
  unsigned threads = 0;  // 0 = all cores
  bool from_param = false;
  bool classical = false;
  bool refine = false;
  std::string edge_map;
  std::string image;
  int width = 0;
  int height = 0;
  float edge_threshold = ClassicalOptions{}.edge_threshold;
  double peak_fraction = ClassicalOptions{}.peak_fraction;
  std::string match_mode = "per-threshold";
  // bench
  int channels = 64;
  int bench_height = 100;
  int bench_width = 100;
  std::vector<unsigned> thread_list{1, 4};
  int iterations = 10;
  std::string isa = "auto";
};

ComputeOptions compute_options(const RunConfig& cfg) {
  ComputeOptions opts;
  opts.threads = cfg.threads;
  if (cfg.isa != "auto") opts.isa = simd::parse_isa(cfg.isa);
  return opts;
}

double elapsed_ms(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

void add_grid_flags(CLI::App* cmd, RunConfig& cfg) {
  cmd->add_option("--dtheta", cfg.dtheta, "Angular bin width in radians (default pi/100)")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--dr", cfg.dr, "Distance bin width in pixels (default sqrt(2))")
      ->check(CLI::PositiveNumber);
}

void add_threads_flag(CLI::App* cmd, RunConfig& cfg) {
  cmd->add_option("--threads", cfg.threads, "Worker threads (default: all cores)");
}

int cmd_transform(const RunConfig& cfg, std::ostream& out) {
  const FeatureMap x = io::read_feature_map(cfg.input);
  const auto grid = grid_from_intervals(ImageDims(x.cols(), x.rows()), cfg.dtheta, cfg.dr);
  const auto start = Clock::now();
  const ParametricMap y = dht_forward(x, grid, compute_options(cfg));
  const double ms = elapsed_ms(start);
  io::write_tensor(cfg.output, y);
  out << "grid: theta=" << grid.n_theta() << " r=" << grid.n_r() << " channels=" << y.channels()
      << "\n";
  char buf[64];
  std::snprintf(buf, sizeof buf, "time_ms: %.3f\n", ms);
  out << buf;
  return kExitOk;
}

std::optional<EdgeMap> load_edges(const RunConfig& cfg, const FeatureMap* image) {
  if (!cfg.edge_map.empty()) return io::read_edge_map(cfg.edge_map);
  if (image != nullptr) return sobel_edge_map(*image, compute_options(cfg));
  return std::nullopt;
}

int cmd_detect(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  if (cfg.from_param == cfg.classical) {
    err << "detect: choose exactly one of --from-param or --classical\n";
    return kExitFailure;
  }
  std::optional<FeatureMap> image;
  std::vector<Detection> detections;
  std::optional<ImageDims> dims;

  if (cfg.classical) {
    image = io::read_image_pgm(cfg.input);
    dims = ImageDims(image->cols(), image->rows());
    ClassicalOptions copts;
    copts.edge_threshold = cfg.edge_threshold;
    copts.peak_fraction = cfg.peak_fraction;
    const auto grid = grid_from_intervals(*dims, cfg.dtheta, cfg.dr);
    detections = detect_classical(*image, grid, copts, compute_options(cfg));
  } else {
    if (!cfg.image.empty()) {
      image = io::read_image_pgm(cfg.image);
      dims = ImageDims(image->cols(), image->rows());
    } else if (cfg.width > 0 && cfg.height > 0) {
      dims = ImageDims(cfg.width, cfg.height);
    } else if (!cfg.edge_map.empty()) {
      dims = io::read_edge_map(cfg.edge_map).dims();
    } else {
      err << "detect --from-param: image size unknown; pass --width/--height, --image or "
             "--edge-map\n";
      return kExitFailure;
    }
    const ProbabilityMap prob = io::read_probability_map(cfg.input);
    const auto grid = grid_from_intervals(*dims, cfg.dtheta, cfg.dr);
    if (prob.n_theta() != grid.n_theta() || prob.n_r() != grid.n_r()) {
      err << "detect: probability map is " << prob.n_theta() << "x" << prob.n_r()
          << " but the grid for " << dims->width << "x" << dims->height << " is "
          << grid.n_theta() << "x" << grid.n_r() << "\n";
      return kExitFailure;
    }
    detections = detect_lines(prob, grid, cfg.threshold);
  }

  std::vector<LineSegment> segments = detections_to_segments(detections, *dims);
  if (cfg.refine) {
    const auto edges = load_edges(cfg, image ? &*image : nullptr);
    if (!edges) {
      err << "detect --refine: needs --edge-map or an image (--image or --classical input)\n";
      return kExitFailure;
    }
    if (edges->dims() != *dims) {
      err << "detect --refine: edge map size does not match the image\n";
      return kExitFailure;
    }
    segments = refine_all(segments, *edges, cfg.delta_r, compute_options(cfg));
  }
  io::write_annotations(*dims, segments, cfg.output);
  out << "detections: " << segments.size() << "\n";
  return kExitOk;
}

int cmd_score(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  const auto kind = parse_metric(cfg.metric);
  const auto a = io::read_annotations(cfg.input);
  const auto b = io::read_annotations(cfg.input2);
  if (a.dims != b.dims) {
    err << "score: image sizes differ (" << a.dims.width << "x" << a.dims.height << " vs "
        << b.dims.width << "x" << b.dims.height << ")\n";
    return kExitFailure;
  }
  const auto m = similarity_matrix(a.lines, b.lines, a.dims, *kind, compute_options(cfg));
  char buf[32];
  for (int i = 0; i < m.n_pred; ++i) {
    for (int j = 0; j < m.n_gt; ++j) {
      std::snprintf(buf, sizeof buf, "%.6f", m.at(i, j));
      out << (j ? "," : "") << buf;
    }
    out << "\n";
  }
  return kExitOk;
}

std::map<std::string, fs::path> list_files(const fs::path& dir) {
  if (!fs::is_directory(dir)) throw IoError("not a directory: " + dir.string());
  std::map<std::string, fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.is_regular_file()) files.emplace(entry.path().filename().string(), entry.path());
  }
  return files;
}

int cmd_eval(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  const auto kind = *parse_metric(cfg.metric);
  const auto mode = *parse_match_mode(cfg.match_mode);
  const auto preds = list_files(cfg.input);
  const auto gts = list_files(cfg.input2);
  std::vector<SimilarityMatrix> images;
  std::size_t skipped = 0;

  for (const auto& [name, pred_path] : preds) {
    const auto gt = gts.find(name);
    if (gt == gts.end()) {
      err << "warning: no ground truth for " << name << ", skipped\n";
      ++skipped;
      continue;
    }
    const auto p = io::read_annotations(pred_path);
    const auto g = io::read_annotations(gt->second);
    if (p.dims != g.dims) {
      err << "warning: image size mismatch for " << name << ", skipped\n";
      ++skipped;
      continue;
    }
    images.push_back(similarity_matrix(p.lines, g.lines, p.dims, kind, compute_options(cfg)));
  }
  for (const auto& [name, path] : gts) {
    if (!preds.contains(name)) {
      err << "warning: no prediction for " << name << ", skipped\n";
      ++skipped;
    }
  }
  if (skipped > 0) err << "skipped " << skipped << " file(s)\n";
  if (images.empty()) {
    err << "eval: no prediction/ground-truth pairs to evaluate\n";
    return kExitFailure;
  }

  ComputeOptions opts = compute_options(cfg);
  const MatchReport report = sweep(images, mode, opts);
  if (cfg.output.empty()) {
    write_report_csv(report, out);
    return kExitOk;
  }
  std::ofstream csv(cfg.output, std::ios::trunc);
  if (!csv) throw IoError("cannot open " + cfg.output + " for writing");
  write_report_csv(report, csv);
  char buf[128];
  std::snprintf(buf, sizeof buf, "avg_precision=%.6f avg_recall=%.6f avg_f=%.6f\n", report.avg_p,
                report.avg_r, report.avg_f);
  out << "images: " << images.size() << "\n" << buf;
  return kExitOk;
}

int cmd_bench(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  if (cfg.channels < 1 || cfg.bench_height < 1 || cfg.bench_width < 1) {
    err << "bench: sizes must be positive\n";
    return kExitFailure;
  }
  const ImageDims dims(cfg.bench_width, cfg.bench_height);
  const auto grid = grid_from_intervals(dims, cfg.dtheta, cfg.dr);
  FeatureMap x(cfg.channels, cfg.bench_height, cfg.bench_width);
  std::mt19937_64 rng(20240601);
  std::uniform_real_distribution<float> dist(-1.0f, 1.0f);
  for (float& v : x.data()) v = dist(rng);

  const HoughTransform op(grid);
  const int iterations = std::max(10, cfg.iterations);
  ComputeOptions base = compute_options(cfg);
  std::optional<ParametricMap> reference;
  double reference_ms = 0.0;

  out << "channels,height,width,threads,isa,median_ms,speedup,identical\n";
  for (unsigned threads : cfg.thread_list) {
    ComputeOptions opts = base;
    opts.threads = std::max(1u, threads);
    ParametricMap y = op.forward(x, opts);  // warm-up
    std::vector<double> times;
    for (int i = 0; i < iterations; ++i) {
      const auto start = Clock::now();
      y = op.forward(x, opts);
      times.push_back(elapsed_ms(start));
    }
    std::nth_element(times.begin(), times.begin() + times.size() / 2, times.end());
    const double median = times[times.size() / 2];
    bool identical = true;
    if (!reference) {
      reference = y;
      reference_ms = median;
    } else {
      identical = std::memcmp(reference->data().data(), y.data().data(),
                              y.size() * sizeof(float)) == 0;
    }
    char buf[256];
    std::snprintf(buf, sizeof buf, "%d,%d,%d,%u,%s,%.4f,%.3f,%s\n", cfg.channels,
                  cfg.bench_height, cfg.bench_width, opts.threads,
                  std::string(simd::isa_name(opts.kernels().isa)).c_str(),
                  median, reference_ms / median, identical ? "true" : "false");
    out << buf;
    if (!identical) {
      err << "bench: output differs between thread counts\n";
      return kExitFailure;
    }
  }
  return kExitOk;
}

int cmd_gtmap(const RunConfig& cfg, std::ostream& out) {
  const auto ann = io::read_annotations(cfg.input);
  const auto grid = grid_from_intervals(ann.dims, cfg.dtheta, cfg.dr);
  std::vector<ParametricLine> lines;
  for (const auto& s : ann.lines) lines.push_back(params_from_segment(s, ann.dims));
  io::write_probability_map(cfg.output, ground_truth_map(lines, grid));
  out << "grid: theta=" << grid.n_theta() << " r=" << grid.n_r() << " lines=" << lines.size()
      << "\n";
  return kExitOk;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  RunConfig cfg;
  CLI::App app{"Deep Hough transform line detection toolkit", "dht"};
  app.require_subcommand(1);

  auto* transform = app.add_subcommand("transform", "C x H x W tensor -> C x Theta x R tensor");
  transform->add_option("input", cfg.input, "Input feature tensor")->required();
  transform->add_option("output", cfg.output, "Output parametric tensor")->required();
  add_grid_flags(transform, cfg);
  add_threads_flag(transform, cfg);

  auto* detect = app.add_subcommand("detect", "Detect lines and write an annotation file");
  detect->add_option("input", cfg.input, "Probability tensor (--from-param) or PGM (--classical)")
      ->required();
  detect->add_option("output", cfg.output, "Output annotation file")->required();
  detect->add_flag("--from-param", cfg.from_param, "Input is a Theta x R probability map");
  detect->add_flag("--classical", cfg.classical, "Input is a PGM: Sobel + Hough voting");
  detect->add_option("--threshold", cfg.threshold, "Probability threshold (--from-param)")
      ->check(CLI::Range(0.0, 1.0));
  detect->add_option("--edge-threshold", cfg.edge_threshold,
                     "Edge strength that casts a vote (--classical)");
  detect->add_option("--peak-fraction", cfg.peak_fraction,
                     "Detection threshold on votes / max vote (--classical)")
      ->check(CLI::Range(0.0, 1.0));
  detect->add_flag("--refine", cfg.refine, "Apply edge-guided refinement");
  detect->add_option("--delta-r", cfg.delta_r, "Refinement search size")
      ->check(CLI::NonNegativeNumber);
  detect->add_option("--edge-map", cfg.edge_map, "Precomputed edge map (tensor or PGM)");
  detect->add_option("--image", cfg.image, "Source PGM (size and Sobel edges for --from-param)");
  detect->add_option("--width", cfg.width, "Image width for --from-param");
  detect->add_option("--height", cfg.height, "Image height for --from-param");
  add_grid_flags(detect, cfg);
  add_threads_flag(detect, cfg);

  auto* score = app.add_subcommand("score", "Pairwise similarity matrix of two annotation files");
  score->add_option("a", cfg.input, "Row annotation file")->required();
  score->add_option("b", cfg.input2, "Column annotation file")->required();
  score->add_option("--metric", cfg.metric, "ea, chamfer or emd")
      ->check(CLI::IsMember({"ea", "chamfer", "emd"}));
  add_threads_flag(score, cfg);

  auto* eval = app.add_subcommand("eval", "Precision/recall/F sweep over annotation directories");
  eval->add_option("predictions", cfg.input, "Directory of predicted annotations")->required();
  eval->add_option("ground_truth", cfg.input2, "Directory of ground-truth annotations")
      ->required();
  eval->add_option("-o,--output", cfg.output, "CSV report path (default: standard output)");
  eval->add_option("--metric", cfg.metric, "ea, chamfer or emd")
      ->check(CLI::IsMember({"ea", "chamfer", "emd"}));
  eval->add_option("--match-mode", cfg.match_mode, "per-threshold or match-once")
      ->check(CLI::IsMember({"per-threshold", "match-once"}));
  add_threads_flag(eval, cfg);

  auto* bench = app.add_subcommand("bench", "Time the forward transform across thread counts");
  bench->add_option("--channels", cfg.channels, "C");
  bench->add_option("--height", cfg.bench_height, "H");
  bench->add_option("--width", cfg.bench_width, "W");
  bench->add_option("--thread-counts", cfg.thread_list, "Thread counts to compare")
      ->delimiter(',');
  bench->add_option("--iterations", cfg.iterations, "Timed iterations (at least 10)");
  bench->add_option("--isa", cfg.isa, "auto, scalar, avx2 or neon")
      ->check(CLI::IsMember({"auto", "scalar", "avx2", "neon"}));
  add_grid_flags(bench, cfg);

  auto* gtmap = app.add_subcommand("gtmap", "Annotation file -> smoothed ground-truth map");
  gtmap->add_option("input", cfg.input, "Annotation file")->required();
  gtmap->add_option("output", cfg.output, "Output probability tensor")->required();
  add_grid_flags(gtmap, cfg);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err);
  }

  try {
    if (*transform) return cmd_transform(cfg, out);
    if (*detect) return cmd_detect(cfg, out, err);
    if (*score) return cmd_score(cfg, out, err);
    if (*eval) return cmd_eval(cfg, out, err);
    if (*bench) return cmd_bench(cfg, out, err);
    if (*gtmap) return cmd_gtmap(cfg, out);
  } catch (const IoError& e) {
    err << "error: " << e.what() << "\n";
    return kExitIo;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitFailure;
  }
  return kExitFailure;
}

}  // namespace dht::cli
