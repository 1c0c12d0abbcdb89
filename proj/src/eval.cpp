#include "dht/eval.hpp"

#include <algorithm>
#include <cstdio>
#include <ostream>

#include "dht/assignment.hpp"
#include "dht/error.hpp"

namespace dht {

SimilarityMatrix similarity_matrix(std::span<const LineSegment> preds,
                                   std::span<const LineSegment> gts, const ImageDims& dims,
                                   MetricKind kind, const ComputeOptions& opts) {
  SimilarityMatrix m;
  m.n_pred = static_cast<int>(preds.size());
  m.n_gt = static_cast<int>(gts.size());
  m.values.assign(preds.size() * gts.size(), 0.0);
  parallel_for(m.values.size(), opts.resolved_threads(), [&](std::size_t begin, std::size_t end) {
    for (std::size_t k = begin; k < end; ++k) {
      m.values[k] = similarity(kind, preds[k / gts.size()], gts[k % gts.size()], dims).value;
    }
  });
  return m;
}

namespace {

// Cardinality first, then weight: every allowed edge is worth more than any
// possible total of similarities.
template <typename Allowed>
std::vector<MatchPair> matching_where(const SimilarityMatrix& sim, Allowed allowed) {
  if (sim.n_pred == 0 || sim.n_gt == 0) return {};
  const double bonus = std::min(sim.n_pred, sim.n_gt) + 1.0;
  std::vector<double> cost(sim.values.size(), 0.0);
  bool any = false;
  for (std::size_t k = 0; k < cost.size(); ++k) {
    if (allowed(sim.values[k])) {
      cost[k] = -(bonus + sim.values[k]);
      any = true;
    }
  }
  if (!any) return {};
  const auto assign = solve_min_cost_assignment(cost, sim.n_pred, sim.n_gt);
  std::vector<MatchPair> out;
  for (int i = 0; i < sim.n_pred; ++i) {
    const int j = assign[static_cast<std::size_t>(i)];
    if (j >= 0 && allowed(sim.at(i, j))) out.push_back({i, j});
  }
  return out;
}

struct Counts {
  long tp = 0;
  long fp = 0;
  long fn = 0;
};

}  // namespace

std::vector<MatchPair> max_matching(const SimilarityMatrix& sim, double tau) {
  return matching_where(sim, [tau](double s) { return s >= tau; });
}

Prf prf(long tp, long fp, long fn) {
  Prf out;
  if (tp + fp > 0) out.precision = static_cast<double>(tp) / static_cast<double>(tp + fp);
  if (tp + fn > 0) out.recall = static_cast<double>(tp) / static_cast<double>(tp + fn);
  if (out.precision + out.recall > 0.0) {
    out.f = 2.0 * out.precision * out.recall / (out.precision + out.recall);
  }
  return out;
}

std::string_view match_mode_name(MatchMode mode) noexcept {
  return mode == MatchMode::kPerThreshold ? "per-threshold" : "match-once";
}

std::optional<MatchMode> parse_match_mode(std::string_view name) noexcept {
  if (name == "per-threshold") return MatchMode::kPerThreshold;
  if (name == "match-once") return MatchMode::kMatchOnce;
  return std::nullopt;
}

std::vector<double> sweep_thresholds() {
  std::vector<double> taus;
  for (int k = 1; k <= 99; ++k) taus.push_back(k / 100.0);
  return taus;
}

MatchReport sweep(std::span<const SimilarityMatrix> images, MatchMode mode,
                  const ComputeOptions& opts) {
  const auto taus = sweep_thresholds();
  std::vector<Counts> counts(taus.size());

  std::vector<std::vector<double>> once_matched(images.size());
  if (mode == MatchMode::kMatchOnce) {
    for (std::size_t n = 0; n < images.size(); ++n) {
      for (const auto& m : matching_where(images[n], [](double s) { return s > 0.0; })) {
        once_matched[n].push_back(images[n].at(m.pred, m.gt));
      }
    }
  }

  parallel_for(taus.size(), opts.resolved_threads(), [&](std::size_t begin, std::size_t end) {
    for (std::size_t t = begin; t < end; ++t) {
      Counts c;
      for (std::size_t n = 0; n < images.size(); ++n) {
        long tp = 0;
        if (mode == MatchMode::kPerThreshold) {
          tp = static_cast<long>(max_matching(images[n], taus[t]).size());
        } else {
          tp = std::count_if(once_matched[n].begin(), once_matched[n].end(),
                             [&](double s) { return s >= taus[t]; });
        }
        c.tp += tp;
        c.fp += images[n].n_pred - tp;
        c.fn += images[n].n_gt - tp;
      }
      counts[t] = c;
    }
  });

  MatchReport report;
  for (std::size_t t = 0; t < taus.size(); ++t) {
    const Prf v = prf(counts[t].tp, counts[t].fp, counts[t].fn);
    report.rows.push_back({taus[t], counts[t].tp, counts[t].fp, counts[t].fn, v.precision,
                           v.recall, v.f});
    report.avg_p += v.precision;
    report.avg_r += v.recall;
    report.avg_f += v.f;
  }
  const double n = static_cast<double>(taus.size());
  report.avg_p /= n;
  report.avg_r /= n;
  report.avg_f /= n;
  return report;
}

MatchReport sweep(std::span<const LineSegment> preds, std::span<const LineSegment> gts,
                  const ImageDims& dims, MetricKind kind, MatchMode mode) {
  const SimilarityMatrix m = similarity_matrix(preds, gts, dims, kind);
  return sweep(std::span<const SimilarityMatrix>(&m, 1), mode);
}

void write_report_csv(const MatchReport& report, std::ostream& out) {
  char buf[256];
  out << "tau,tp,fp,fn,precision,recall,f\n";
  for (const auto& r : report.rows) {
    std::snprintf(buf, sizeof buf, "%.6f,%ld,%ld,%ld,%.6f,%.6f,%.6f\n", r.tau, r.tp, r.fp, r.fn,
                  r.precision, r.recall, r.f);
    out << buf;
  }
  std::snprintf(buf, sizeof buf, "avg,,,,%.6f,%.6f,%.6f\n", report.avg_p, report.avg_r,
                report.avg_f);
  out << buf;
}

}  // namespace dht
