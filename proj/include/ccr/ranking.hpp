#pragma once

#include <map>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "ccr/data.hpp"
#include "ccr/scoring.hpp"

namespace ccr {

/// Axis scores divided by the largest history score. When any raw score on
/// the axis is <= 0 (KDS with densities above 1), every score is first
/// shifted by 1e-6 - min so that all scaled values are positive.
struct ScaledAxisScores {
  AxisScores base;
  double score_max = 1.0;  // max shifted history score
  double shift = 0.0;
  std::map<std::string, double> scaled_history;
  std::map<std::string, double> scaled_candidates;
};

ScaledAxisScores scale_scores(const AxisScores& axis_scores);

struct Anchor {
  std::string h_min;  // history food with the smallest raw comfort score
  double r = 0.0;     // its scaled curiosity score
};

/// Ties on the comfort score go to the smallest food_id.
Anchor comfort_anchor(const ScaledAxisScores& comfort, const ScaledAxisScores& curiosity);

struct BalanceScore {
  std::string food_id;
  double total = 0.0;
  Axis comfort_axis = Axis::Taste;
  Axis curiosity_axis = Axis::Ingredient;
  double r = 0.0;
  double comfort_scaled = 0.0;
  double curiosity_scaled = 0.0;
};

/// total = (curiosity' - r) / comfort' for every candidate, in food_id order.
std::vector<BalanceScore> total_scores(const ScaledAxisScores& comfort, const ScaledAxisScores& curiosity, double r);

struct RankingRun {
  std::string worker_id;
  Method method = Method::Mds;
  Experiment experiment = Experiment::Exp1ComfortTasteCuriosityIngredient;
  std::string h_min;
  std::vector<BalanceScore> ranked;  // descending total, ties by ascending food_id
};

RankingRun rank(std::string worker_id, Method method, Experiment experiment, std::string h_min,
                std::vector<BalanceScore> totals);

/// Scores both axes of `context`, derives the anchor and ranks the candidates.
RankingRun rank_user(const UserContext& context, Method method, Experiment experiment,
                     const ScoringConfig& config = {});

/// Columns: worker_id,rank,food_id,total_score,comfort_scaled,curiosity_scaled,r,h_min
void write_ranking_csv(std::ostream& out, std::span<const RankingRun> runs);

}  // namespace ccr
