#include "ccr/metrics.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "ccr/error.hpp"

namespace ccr {

namespace {

void check_k(RankedRelevance ranked, int k) {
  if (k < 1 || static_cast<std::size_t>(k) > ranked.size()) {
    throw Error(ErrorKind::OutOfRange, fmt::format("K={} outside [1, {}]", k, ranked.size()));
  }
}

int require_relevant(RankedRelevance ranked) {
  const int relevant = total_relevant(ranked);
  if (relevant == 0) throw Error(ErrorKind::OutOfRange, "metric undefined without relevant items");
  return relevant;
}

}  // namespace

int hits_at_k(RankedRelevance ranked, int k) {
  check_k(ranked, k);
  return static_cast<int>(std::count_if(ranked.begin(), ranked.begin() + k, [](auto r) { return r != 0; }));
}

int total_relevant(RankedRelevance ranked) {
  return static_cast<int>(std::count_if(ranked.begin(), ranked.end(), [](auto r) { return r != 0; }));
}

double precision_at_k(RankedRelevance ranked, int k) {
  return static_cast<double>(hits_at_k(ranked, k)) / static_cast<double>(k);
}

double recall_at_k(RankedRelevance ranked, int k) {
  check_k(ranked, k);
  const int relevant = require_relevant(ranked);
  return static_cast<double>(hits_at_k(ranked, k)) / static_cast<double>(relevant);
}

double ndcg_at_k(RankedRelevance ranked, int k) {
  check_k(ranked, k);
  const int relevant = require_relevant(ranked);
  double dcg = 0.0;
  for (int i = 0; i < k; ++i) {
    if (ranked[i]) dcg += 1.0 / std::log2(static_cast<double>(i) + 2.0);
  }
  double ideal = 0.0;
  for (int i = 0; i < std::min(k, relevant); ++i) ideal += 1.0 / std::log2(static_cast<double>(i) + 2.0);
  return dcg / ideal;
}

std::vector<std::uint8_t> relevance_in_order(std::span<const std::string> ranked_ids, const RelevanceLabels& labels) {
  std::vector<std::uint8_t> out;
  out.reserve(ranked_ids.size());
  for (const auto& id : ranked_ids) {
    const auto it = labels.labels.find(id);
    if (it == labels.labels.end()) throw Error(ErrorKind::Validation, "no relevance label for '" + id + "'");
    out.push_back(it->second ? 1 : 0);
  }
  return out;
}

double precision_at_k(std::span<const std::string> ranked_ids, const RelevanceLabels& labels, int k) {
  return precision_at_k(relevance_in_order(ranked_ids, labels), k);
}

double recall_at_k(std::span<const std::string> ranked_ids, const RelevanceLabels& labels, int k) {
  return recall_at_k(relevance_in_order(ranked_ids, labels), k);
}

double ndcg_at_k(std::span<const std::string> ranked_ids, const RelevanceLabels& labels, int k) {
  return ndcg_at_k(relevance_in_order(ranked_ids, labels), k);
}

RandomExpectation expected_random_metrics(int n, int relevant, int k) {
  if (n < 1 || relevant < 1 || relevant > n || k < 1 || k > n) {
    throw Error(ErrorKind::OutOfRange, fmt::format("invalid counts N={} R={} K={}", n, relevant, k));
  }
  return {static_cast<double>(relevant) / n, static_cast<double>(k) / n};
}

std::map<int, MetricValues> mean_metrics(std::span<const std::vector<std::uint8_t>> users, std::span<const int> ks) {
  std::map<int, MetricValues> sums;
  for (const int k : ks) sums[k] = {};
  for (const auto& ranked : users) {
    for (const int k : ks) {
      auto& s = sums[k];
      s.precision += precision_at_k(ranked, k);
      s.recall += recall_at_k(ranked, k);
      s.ndcg += ndcg_at_k(ranked, k);
    }
  }
  if (!users.empty()) {
    const double n = static_cast<double>(users.size());
    for (auto& [k, s] : sums) {
      s.precision /= n;
      s.recall /= n;
      s.ndcg /= n;
    }
  }
  return sums;
}

MetricReport combine_reports(std::span<const MetricReport> reports, std::string region) {
  MetricReport out;
  out.region = std::move(region);
  if (reports.empty()) return out;
  out.method = reports.front().method;
  out.experiment = reports.front().experiment;
  for (const auto& report : reports) {
    out.users_evaluated += report.users_evaluated;
    out.users_skipped += report.users_skipped;
    for (const auto& [k, v] : report.at_k) {
      auto& s = out.at_k[k];
      s.precision += v.precision * report.users_evaluated;
      s.recall += v.recall * report.users_evaluated;
      s.ndcg += v.ndcg * report.users_evaluated;
    }
  }
  if (out.users_evaluated > 0) {
    for (auto& [k, s] : out.at_k) {
      s.precision /= out.users_evaluated;
      s.recall /= out.users_evaluated;
      s.ndcg /= out.users_evaluated;
    }
  }
  return out;
}

}  // namespace ccr
