#pragma once

#include <iosfwd>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "dht/geometry.hpp"
#include "dht/metrics.hpp"
#include "dht/parallel.hpp"

namespace dht {

struct SimilarityMatrix {
  int n_pred = 0;
  int n_gt = 0;
  std::vector<double> values;  // n_pred x n_gt, row-major

  double at(int pred, int gt) const noexcept {
    return values[static_cast<std::size_t>(pred) * n_gt + gt];
  }
};

SimilarityMatrix similarity_matrix(std::span<const LineSegment> preds,
                                   std::span<const LineSegment> gts, const ImageDims& dims,
                                   MetricKind kind, const ComputeOptions& opts = {});

struct MatchPair {
  int pred = 0;
  int gt = 0;
  friend bool operator==(const MatchPair&, const MatchPair&) = default;
  friend auto operator<=>(const MatchPair&, const MatchPair&) = default;
};

// Maximum-cardinality matching over edges with similarity >= tau; among
// those, the one with the largest total similarity. Sorted by pred index.
std::vector<MatchPair> max_matching(const SimilarityMatrix& sim, double tau);

struct Prf {
  double precision = 0.0;
  double recall = 0.0;
  double f = 0.0;
};

// Zero denominators yield 0.
Prf prf(long tp, long fp, long fn);

enum class MatchMode {
  kPerThreshold,  // re-match on the tau-filtered graph at every threshold
  kMatchOnce,     // match once on all positive edges, then threshold the pairs
};

std::string_view match_mode_name(MatchMode mode) noexcept;
std::optional<MatchMode> parse_match_mode(std::string_view name) noexcept;

struct ThresholdRow {
  double tau = 0.0;
  long tp = 0;
  long fp = 0;
  long fn = 0;
  double precision = 0.0;
  double recall = 0.0;
  double f = 0.0;
};

struct MatchReport {
  std::vector<ThresholdRow> rows;
  double avg_p = 0.0;
  double avg_r = 0.0;
  double avg_f = 0.0;
};

// tau = 0.01, 0.02, ..., 0.99
std::vector<double> sweep_thresholds();

// Counts are summed across images at each threshold before P/R/F
// (micro-averaging); averages are plain means over the thresholds.
MatchReport sweep(std::span<const SimilarityMatrix> images,
                  MatchMode mode = MatchMode::kPerThreshold, const ComputeOptions& opts = {});

MatchReport sweep(std::span<const LineSegment> preds, std::span<const LineSegment> gts,
                  const ImageDims& dims, MetricKind kind,
                  MatchMode mode = MatchMode::kPerThreshold);

// Header "tau,tp,fp,fn,precision,recall,f", one row per threshold, then an
// "avg" row. Six decimals.
void write_report_csv(const MatchReport& report, std::ostream& out);

}  // namespace dht
