#pragma once

// Top-K ranking metrics with binary relevance.

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "ccr/data.hpp"

namespace ccr {

/// Relevance flags listed in rank order (index 0 is rank 1).
using RankedRelevance = std::span<const std::uint8_t>;

int hits_at_k(RankedRelevance ranked, int k);
int total_relevant(RankedRelevance ranked);

double precision_at_k(RankedRelevance ranked, int k);
/// Requires at least one relevant item.
double recall_at_k(RankedRelevance ranked, int k);
/// Binary gains, DCG = sum rel_i / log2(i + 1), ideal DCG from
/// min(K, relevant) leading ones. Requires at least one relevant item.
double ndcg_at_k(RankedRelevance ranked, int k);

std::vector<std::uint8_t> relevance_in_order(std::span<const std::string> ranked_ids, const RelevanceLabels& labels);
double precision_at_k(std::span<const std::string> ranked_ids, const RelevanceLabels& labels, int k);
double recall_at_k(std::span<const std::string> ranked_ids, const RelevanceLabels& labels, int k);
double ndcg_at_k(std::span<const std::string> ranked_ids, const RelevanceLabels& labels, int k);

struct RandomExpectation {
  double precision;
  double recall;
};

/// Expectation over uniformly random orderings of N items, R of them
/// relevant: E[P@K] = R/N, E[R@K] = K/N.
RandomExpectation expected_random_metrics(int n, int relevant, int k);

struct MetricValues {
  double precision = 0.0;
  double recall = 0.0;
  double ndcg = 0.0;
};

struct MetricReport {
  std::string method;      // kds, mds or baseline
  Experiment experiment = Experiment::Exp1ComfortTasteCuriosityIngredient;
  std::string region;      // region name or "all"
  std::map<int, MetricValues> at_k;
  int users_evaluated = 0;
  int users_skipped = 0;
};

/// Mean metrics over users. Every list must hold at least one relevant item
/// and at least max(ks) entries.
std::map<int, MetricValues> mean_metrics(std::span<const std::vector<std::uint8_t>> users, std::span<const int> ks);

/// User-weighted mean of several reports; skipped counts are summed.
MetricReport combine_reports(std::span<const MetricReport> reports, std::string region);

}  // namespace ccr
