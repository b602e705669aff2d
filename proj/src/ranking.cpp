#include "ccr/ranking.hpp"

#include <algorithm>
#include <cassert>
#include <limits>

#include <fmt/format.h>

#include "ccr/csv.hpp"
#include "ccr/error.hpp"

namespace ccr {

ScaledAxisScores scale_scores(const AxisScores& axis_scores) {
  if (axis_scores.history_scores.empty()) throw Error(ErrorKind::Validation, "cannot scale without history scores");

  ScaledAxisScores out;
  out.base = axis_scores;

  double lowest = std::numeric_limits<double>::infinity();
  for (const auto& [id, v] : axis_scores.history_scores) lowest = std::min(lowest, v);
  for (const auto& [id, v] : axis_scores.candidate_scores) lowest = std::min(lowest, v);
  out.shift = lowest <= 0.0 ? 1e-6 - lowest : 0.0;

  double highest = -std::numeric_limits<double>::infinity();
  for (const auto& [id, v] : axis_scores.history_scores) highest = std::max(highest, v + out.shift);
  out.score_max = highest;
  assert(out.score_max > 0.0);

  for (const auto& [id, v] : axis_scores.history_scores) out.scaled_history[id] = (v + out.shift) / out.score_max;
  for (const auto& [id, v] : axis_scores.candidate_scores) {
    out.scaled_candidates[id] = (v + out.shift) / out.score_max;
  }
  return out;
}

Anchor comfort_anchor(const ScaledAxisScores& comfort, const ScaledAxisScores& curiosity) {
  const auto& history = comfort.base.history_scores;
  if (history.empty()) throw Error(ErrorKind::Validation, "cannot pick a comfort anchor from an empty history");

  // std::map iterates in ascending id order, so strict < keeps the smallest id on ties.
  auto best = history.begin();
  for (auto it = history.begin(); it != history.end(); ++it) {
    if (it->second < best->second) best = it;
  }
  const auto found = curiosity.scaled_history.find(best->first);
  if (found == curiosity.scaled_history.end()) {
    throw Error(ErrorKind::Validation, "comfort and curiosity axes have different history foods");
  }
  return {best->first, found->second};
}

std::vector<BalanceScore> total_scores(const ScaledAxisScores& comfort, const ScaledAxisScores& curiosity, double r) {
  if (comfort.scaled_candidates.size() != curiosity.scaled_candidates.size()) {
    throw Error(ErrorKind::Validation, "comfort and curiosity axes have different candidates");
  }
  std::vector<BalanceScore> totals;
  totals.reserve(comfort.scaled_candidates.size());
  for (const auto& [id, comfort_value] : comfort.scaled_candidates) {
    const auto it = curiosity.scaled_candidates.find(id);
    if (it == curiosity.scaled_candidates.end()) {
      throw Error(ErrorKind::Validation, "candidate '" + id + "' missing from the curiosity axis");
    }
    assert(comfort_value > 0.0);
    BalanceScore score;
    score.food_id = id;
    score.comfort_axis = comfort.base.axis;
    score.curiosity_axis = curiosity.base.axis;
    score.r = r;
    score.comfort_scaled = comfort_value;
    score.curiosity_scaled = it->second;
    score.total = (it->second - r) / comfort_value;
    totals.push_back(std::move(score));
  }
  return totals;
}

RankingRun rank(std::string worker_id, Method method, Experiment experiment, std::string h_min,
                std::vector<BalanceScore> totals) {
  std::sort(totals.begin(), totals.end(), [](const BalanceScore& a, const BalanceScore& b) {
    if (a.total != b.total) return a.total > b.total;
    return a.food_id < b.food_id;
  });
  return {std::move(worker_id), method, experiment, std::move(h_min), std::move(totals)};
}

RankingRun rank_user(const UserContext& context, Method method, Experiment experiment, const ScoringConfig& config) {
  const auto roles = axis_roles(experiment);
  const auto comfort = scale_scores(score_axis_serial(context, roles.comfort, method, config));
  const auto curiosity = scale_scores(score_axis_serial(context, roles.curiosity, method, config));
  const auto anchor = comfort_anchor(comfort, curiosity);
  return rank(context.worker_id, method, experiment, anchor.h_min, total_scores(comfort, curiosity, anchor.r));
}

void write_ranking_csv(std::ostream& out, std::span<const RankingRun> runs) {
  csv::write_row(out, {"worker_id", "rank", "food_id", "total_score", "comfort_scaled", "curiosity_scaled", "r",
                       "h_min"});
  for (const auto& run : runs) {
    for (std::size_t i = 0; i < run.ranked.size(); ++i) {
      const auto& s = run.ranked[i];
      csv::write_row(out, {run.worker_id, std::to_string(i + 1), s.food_id, fmt::format("{:.10g}", s.total),
                           fmt::format("{:.10g}", s.comfort_scaled), fmt::format("{:.10g}", s.curiosity_scaled),
                           fmt::format("{:.10g}", s.r), run.h_min});
    }
  }
}

}  // namespace ccr
