#pragma once

// End-to-end evaluation: per-region contexts and labels, method rankings,
// random baseline, ROC curves and the signed-rank comparison.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ccr/data.hpp"
#include "ccr/metrics.hpp"
#include "ccr/ranking.hpp"
#include "ccr/roc.hpp"
#include "ccr/scoring.hpp"
#include "ccr/wilcoxon.hpp"

namespace ccr {

struct ExperimentConfig {
  ScoringConfig scoring;
  std::vector<int> ks{1, 3, 5};
  std::uint64_t baseline_trials = 100000;
  std::uint64_t seed = 0;
};

struct SkippedUser {
  std::string worker_id;
  std::string reason;
};

/// Users of one region whose context and labels could be built.
struct RegionData {
  Region region = Region::Other;
  Experiment experiment = Experiment::Exp1ComfortTasteCuriosityIngredient;
  std::size_t total_users = 0;
  std::vector<UserContext> contexts;     // evaluable users, worker_id order
  std::vector<RelevanceLabels> labels;   // parallel to contexts
  std::vector<SkippedUser> skipped;      // insufficient history, no relevant item, too few candidates
  std::vector<std::string> insufficient_history;
};

/// Builds every worker's context for `region`. Users with |H| < 3, without a
/// relevant candidate, or with fewer candidates than max(ks) are skipped.
RegionData prepare_region(const Dataset& dataset, Region region, Experiment experiment, std::span<const int> ks);

struct MethodRegionResult {
  Region region = Region::Other;
  std::vector<RankingRun> runs;
  MetricReport report;
  /// Pooled (user, candidate) pairs of the region, score = balance total.
  std::vector<double> pooled_scores;
  std::vector<std::uint8_t> pooled_labels;
  std::optional<RocCurve> roc;
};

/// Ranks every evaluable user (OpenMP across users) and computes metrics.
/// Users whose scoring fails on degenerate input are skipped and counted.
MethodRegionResult evaluate_method(const RegionData& data, Method method, const ExperimentConfig& config,
                                   bool parallel = true);

MetricReport evaluate_baseline(const RegionData& data, const ExperimentConfig& config, bool parallel = true);

struct ExperimentReport {
  Method method = Method::Mds;
  Experiment experiment = Experiment::Exp1ComfortTasteCuriosityIngredient;
  std::vector<MethodRegionResult> regions;
  std::vector<MetricReport> baseline;  // parallel to regions
  MetricReport all_regions;
  MetricReport all_regions_baseline;
  std::optional<RocCurve> average_roc;
  std::optional<RocCurve> pooled_roc;  // every region's pairs pooled together
  std::optional<WilcoxonResult> wilcoxon;
  std::string wilcoxon_error;
};

/// Paired (method, baseline) values over metric x K x region, in that
/// nesting order (region outermost).
std::vector<std::pair<double, double>> wilcoxon_pairs(const std::vector<MetricReport>& method,
                                                      const std::vector<MetricReport>& baseline);

ExperimentReport run_experiment(const std::vector<RegionData>& regions, Method method, const ExperimentConfig& config,
                                const std::vector<MetricReport>* precomputed_baseline = nullptr);

ExperimentReport run_experiment(const Dataset& dataset, Method method, Experiment experiment,
                                const ExperimentConfig& config);

}  // namespace ccr
