#include "ccr/scoring.hpp"

#include <cmath>
#include <exception>
#include <optional>

#include <fmt/format.h>

#include "ccr/covariance.hpp"
#include "ccr/csv.hpp"
#include "ccr/error.hpp"
#include "ccr/pca.hpp"

namespace ccr {

std::string_view to_string(Method method) { return method == Method::Kds ? "kds" : "mds"; }

Method parse_method(std::string_view text) {
  std::string lower;
  for (const char c : csv::trim(text)) lower.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  if (lower == "kds") return Method::Kds;
  if (lower == "mds") return Method::Mds;
  throw Error(ErrorKind::Parse, fmt::format("unknown method '{}' (expected kds or mds)", text));
}

ReducedHistory::ReducedHistory(std::vector<Eigen::Vector2d> points, Method method, const BandwidthRule& bandwidth)
    : points_(std::move(points)), method_(method) {
  const auto n = points_.size();
  if (n < kMinHistory) {
    throw Error(ErrorKind::InsufficientHistory, fmt::format("scoring needs at least 3 history foods, got {}", n));
  }
  if (method_ == Method::Kds) {
    density_ = kde_fit(points_, bandwidth);
    return;
  }
  const auto cov = sample_covariance(points_);
  inverse_ = cov.inverse;
  // Unordered pairs divided by n(n-1)/2 equal the ordered double sum over n(n-1).
  double sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const Eigen::Vector2d d = points_[i] - points_[j];
      sum += std::sqrt(std::max(0.0, d.dot(inverse_ * d)));
    }
  }
  d_in_ = sum / (static_cast<double>(n) * static_cast<double>(n - 1) / 2.0);
  if (!(d_in_ > 0.0)) {
    throw Error(ErrorKind::DegenerateInput, "history points coincide, mean pairwise distance is zero");
  }
}

double ReducedHistory::mean_distance(const Eigen::Vector2d& x, std::size_t skip) const {
  double sum = 0.0;
  std::size_t count = 0;
  for (std::size_t i = 0; i < points_.size(); ++i) {
    if (i == skip) continue;
    const Eigen::Vector2d d = x - points_[i];
    sum += std::sqrt(std::max(0.0, d.dot(inverse_ * d)));
    ++count;
  }
  return sum / static_cast<double>(count);
}

double ReducedHistory::score_candidate(const Eigen::Vector2d& candidate) const {
  if (method_ == Method::Kds) return -kde_log_density(density_, candidate);
  return mean_distance(candidate, points_.size()) / d_in_;
}

double ReducedHistory::score_member(std::size_t index) const {
  if (method_ == Method::Kds) return -kde_log_density(density_, points_.at(index));
  return mean_distance(points_.at(index), index) / d_in_;
}

namespace {

double score_with_candidate_pca(Method method, std::span<const Eigen::VectorXd> history,
                                const Eigen::VectorXd& candidate, const ScoringConfig& config) {
  if (history.size() < kMinHistory) {
    throw Error(ErrorKind::InsufficientHistory,
                fmt::format("scoring needs at least 3 history foods, got {}", history.size()));
  }
  std::vector<Eigen::VectorXd> joint(history.begin(), history.end());
  joint.push_back(candidate);
  const auto reduced = pca_reduce(joint);
  std::vector<Eigen::Vector2d> reduced_history(reduced.points.begin(), reduced.points.end() - 1);
  const ReducedHistory model(std::move(reduced_history), method, config.bandwidth);
  return model.score_candidate(reduced.points.back());
}

std::vector<Eigen::VectorXd> axis_vectors(const std::vector<EmbeddedFood>& foods, Axis axis) {
  std::vector<Eigen::VectorXd> out;
  out.reserve(foods.size());
  for (const auto& food : foods) out.push_back(food.vector(axis));
  return out;
}

AxisScores score_axis_impl(const UserContext& context, Axis axis, Method method, const ScoringConfig& config,
                           bool parallel) {
  const auto history = axis_vectors(context.history, axis);
  const auto candidates = axis_vectors(context.candidates, axis);

  AxisScores result;
  result.axis = axis;
  result.method = method;

  {
    const auto reduced = pca_reduce(history);
    const ReducedHistory model(reduced.points, method, config.bandwidth);
    for (std::size_t i = 0; i < history.size(); ++i) {
      result.history_scores[context.history[i].food_id] = model.score_member(i);
    }
  }

  const auto count = static_cast<std::ptrdiff_t>(candidates.size());
  std::vector<double> values(candidates.size(), 0.0);
  std::vector<std::exception_ptr> errors(candidates.size());

  if (config.shared_pca) {
    std::vector<Eigen::VectorXd> joint = history;
    joint.insert(joint.end(), candidates.begin(), candidates.end());
    const auto reduced = pca_reduce(joint);
    const ReducedHistory model({reduced.points.begin(), reduced.points.begin() + history.size()}, method,
                               config.bandwidth);
#pragma omp parallel for schedule(static) if (parallel)
    for (std::ptrdiff_t k = 0; k < count; ++k) {
      values[k] = model.score_candidate(reduced.points[history.size() + k]);
    }
  } else {
#pragma omp parallel for schedule(dynamic) if (parallel)
    for (std::ptrdiff_t k = 0; k < count; ++k) {
      try {
        values[k] = score_with_candidate_pca(method, history, candidates[k], config);
      } catch (...) {
        errors[k] = std::current_exception();
      }
    }
  }

  for (std::size_t k = 0; k < candidates.size(); ++k) {
    if (errors[k]) std::rethrow_exception(errors[k]);
    result.candidate_scores[context.candidates[k].food_id] = values[k];
  }
  return result;
}

}  // namespace

double kds_score(std::span<const Eigen::VectorXd> history, const Eigen::VectorXd& candidate,
                 const ScoringConfig& config) {
  return score_with_candidate_pca(Method::Kds, history, candidate, config);
}

double mds_score(std::span<const Eigen::VectorXd> history, const Eigen::VectorXd& candidate,
                 const ScoringConfig& config) {
  return score_with_candidate_pca(Method::Mds, history, candidate, config);
}

double score(Method method, std::span<const Eigen::VectorXd> history, const Eigen::VectorXd& candidate,
             const ScoringConfig& config) {
  return score_with_candidate_pca(method, history, candidate, config);
}

AxisScores score_axis(const UserContext& context, Axis axis, Method method, const ScoringConfig& config) {
  return score_axis_impl(context, axis, method, config, true);
}

AxisScores score_axis_serial(const UserContext& context, Axis axis, Method method, const ScoringConfig& config) {
  return score_axis_impl(context, axis, method, config, false);
}

}  // namespace ccr
