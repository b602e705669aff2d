#include "ccr/experiment.hpp"

#include <algorithm>
#include <exception>

#include <fmt/format.h>

#include "ccr/baseline.hpp"
#include "ccr/error.hpp"

namespace ccr {

RegionData prepare_region(const Dataset& dataset, Region region, Experiment experiment, std::span<const int> ks) {
  RegionData data;
  data.region = region;
  data.experiment = experiment;
  const int max_k = ks.empty() ? 1 : *std::max_element(ks.begin(), ks.end());
  const auto workers = workers_in_region(dataset, region);
  data.total_users = workers.size();
  for (const auto& worker : workers) {
    UserContext context;
    try {
      context = build_user_context(worker, dataset, region);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::InsufficientHistory) throw;
      data.insufficient_history.push_back(worker);
      data.skipped.push_back({worker, "insufficient history"});
      continue;
    }
    auto labels = relevance_labels(context, dataset.interactions, experiment);
    if (context.candidates.size() < static_cast<std::size_t>(max_k)) {
      data.skipped.push_back({worker, fmt::format("{} candidates, fewer than K={}", context.candidates.size(), max_k)});
      continue;
    }
    const bool any = std::any_of(labels.labels.begin(), labels.labels.end(), [](const auto& kv) { return kv.second; });
    if (!any) {
      data.skipped.push_back({worker, "no relevant candidate"});
      continue;
    }
    data.contexts.push_back(std::move(context));
    data.labels.push_back(std::move(labels));
  }
  return data;
}

MethodRegionResult evaluate_method(const RegionData& data, Method method, const ExperimentConfig& config,
                                   bool parallel) {
  const auto count = static_cast<std::ptrdiff_t>(data.contexts.size());
  std::vector<std::optional<RankingRun>> runs(data.contexts.size());
  std::vector<std::exception_ptr> errors(data.contexts.size());
  std::vector<std::string> failures(data.contexts.size());

#pragma omp parallel for schedule(dynamic) if (parallel)
  for (std::ptrdiff_t u = 0; u < count; ++u) {
    try {
      runs[u] = rank_user(data.contexts[u], method, data.experiment, config.scoring);
    } catch (const Error& e) {
      if (e.kind() == ErrorKind::DegenerateInput) {
        failures[u] = e.what();
      } else {
        errors[u] = std::current_exception();
      }
    } catch (...) {
      errors[u] = std::current_exception();
    }
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }

  MethodRegionResult result;
  result.region = data.region;
  std::vector<std::vector<std::uint8_t>> ranked_relevance;
  int skipped = static_cast<int>(data.skipped.size());
  for (std::size_t u = 0; u < runs.size(); ++u) {
    if (!runs[u]) {
      ++skipped;
      continue;
    }
    std::vector<std::string> ids;
    for (const auto& s : runs[u]->ranked) {
      ids.push_back(s.food_id);
      result.pooled_scores.push_back(s.total);
    }
    auto relevance = relevance_in_order(ids, data.labels[u]);
    result.pooled_labels.insert(result.pooled_labels.end(), relevance.begin(), relevance.end());
    ranked_relevance.push_back(std::move(relevance));
    result.runs.push_back(std::move(*runs[u]));
  }

  result.report.method = std::string(to_string(method));
  result.report.experiment = data.experiment;
  result.report.region = std::string(to_string(data.region));
  result.report.at_k = mean_metrics(ranked_relevance, config.ks);
  result.report.users_evaluated = static_cast<int>(ranked_relevance.size());
  result.report.users_skipped = skipped;

  const auto positives = std::count(result.pooled_labels.begin(), result.pooled_labels.end(), std::uint8_t{1});
  if (positives > 0 && positives < static_cast<std::ptrdiff_t>(result.pooled_labels.size())) {
    result.roc = roc_points(result.pooled_scores, result.pooled_labels);
  }
  return result;
}

MetricReport evaluate_baseline(const RegionData& data, const ExperimentConfig& config, bool parallel) {
  std::vector<std::vector<std::uint8_t>> users;
  users.reserve(data.contexts.size());
  for (std::size_t u = 0; u < data.contexts.size(); ++u) {
    std::vector<std::uint8_t> flags;
    for (const auto& candidate : data.contexts[u].candidates) {
      flags.push_back(data.labels[u].labels.at(candidate.food_id) ? 1 : 0);
    }
    users.push_back(std::move(flags));
  }
  MetricReport report;
  report.method = "baseline";
  report.experiment = data.experiment;
  report.region = std::string(to_string(data.region));
  report.users_evaluated = static_cast<int>(users.size());
  report.users_skipped = static_cast<int>(data.skipped.size());
  // Per-region seed stream keeps regions independent of evaluation order.
  const auto seed = config.seed ^ (0x9E3779B97F4A7C15ull * (static_cast<std::uint64_t>(data.region) + 1));
  if (!users.empty()) {
    report.at_k = parallel ? monte_carlo_baseline(users, config.ks, config.baseline_trials, seed)
                           : monte_carlo_baseline_serial(users, config.ks, config.baseline_trials, seed);
  }
  return report;
}

std::vector<std::pair<double, double>> wilcoxon_pairs(const std::vector<MetricReport>& method,
                                                      const std::vector<MetricReport>& baseline) {
  std::vector<std::pair<double, double>> pairs;
  for (std::size_t r = 0; r < method.size() && r < baseline.size(); ++r) {
    for (int metric = 0; metric < 3; ++metric) {
      for (const auto& [k, m] : method[r].at_k) {
        const auto it = baseline[r].at_k.find(k);
        if (it == baseline[r].at_k.end()) continue;
        const auto& b = it->second;
        switch (metric) {
          case 0: pairs.emplace_back(m.precision, b.precision); break;
          case 1: pairs.emplace_back(m.recall, b.recall); break;
          default: pairs.emplace_back(m.ndcg, b.ndcg); break;
        }
      }
    }
  }
  return pairs;
}

ExperimentReport run_experiment(const std::vector<RegionData>& regions, Method method, const ExperimentConfig& config,
                                const std::vector<MetricReport>* precomputed_baseline) {
  ExperimentReport report;
  report.method = method;
  if (!regions.empty()) report.experiment = regions.front().experiment;

  std::vector<MetricReport> method_reports;
  std::vector<RocCurve> curves;
  std::vector<double> pooled_scores;
  std::vector<std::uint8_t> pooled_labels;
  for (std::size_t r = 0; r < regions.size(); ++r) {
    const auto& data = regions[r];
    if (data.contexts.empty()) {
      throw Error(ErrorKind::InsufficientData,
                  fmt::format("region {} has no evaluable users", to_string(data.region)));
    }
    auto result = evaluate_method(data, method, config);
    method_reports.push_back(result.report);
    if (result.roc) curves.push_back(*result.roc);
    pooled_scores.insert(pooled_scores.end(), result.pooled_scores.begin(), result.pooled_scores.end());
    pooled_labels.insert(pooled_labels.end(), result.pooled_labels.begin(), result.pooled_labels.end());
    report.regions.push_back(std::move(result));
    report.baseline.push_back(precomputed_baseline ? precomputed_baseline->at(r) : evaluate_baseline(data, config));
  }

  report.all_regions = combine_reports(method_reports, "all");
  report.all_regions_baseline = combine_reports(report.baseline, "all");
  if (!curves.empty()) report.average_roc = average_roc(curves);
  const auto positives = std::count(pooled_labels.begin(), pooled_labels.end(), std::uint8_t{1});
  if (positives > 0 && positives < static_cast<std::ptrdiff_t>(pooled_labels.size())) {
    report.pooled_roc = roc_points(pooled_scores, pooled_labels);
  }

  try {
    report.wilcoxon = wilcoxon_signed_rank(wilcoxon_pairs(method_reports, report.baseline));
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::InsufficientData) throw;
    report.wilcoxon_error = e.what();
  }
  return report;
}

ExperimentReport run_experiment(const Dataset& dataset, Method method, Experiment experiment,
                                const ExperimentConfig& config) {
  std::vector<RegionData> regions;
  for (const auto region : target_regions(dataset.all_food)) {
    regions.push_back(prepare_region(dataset, region, experiment, config.ks));
  }
  return run_experiment(regions, method, config);
}

}  // namespace ccr
