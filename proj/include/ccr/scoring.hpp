#pragma once

// Comfort/curiosity scorers. Both map a candidate's fit to the history
// distribution onto a real score: small means comfortable, large means
// curious.

#include <Eigen/Core>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ccr/data.hpp"
#include "ccr/kde.hpp"

namespace ccr {

enum class Method { Kds, Mds };
std::string_view to_string(Method method);
Method parse_method(std::string_view text);

struct ScoringConfig {
  BandwidthRule bandwidth = BandwidthRule::scott();
  /// Fit PCA once on H ∪ F instead of once per candidate on H ∪ {f}.
  bool shared_pca = false;
};

/// Kernel density scoring: PCA on history ∪ {candidate}, Gaussian KDE on the
/// reduced history, score = -log p(candidate).
double kds_score(std::span<const Eigen::VectorXd> history, const Eigen::VectorXd& candidate,
                 const ScoringConfig& config = {});

/// Mahalanobis distance scoring: PCA on history ∪ {candidate}, covariance on
/// the reduced history, score = d_out / d_in where d_in is the mean pairwise
/// history distance and d_out the mean candidate-to-history distance.
double mds_score(std::span<const Eigen::VectorXd> history, const Eigen::VectorXd& candidate,
                 const ScoringConfig& config = {});

double score(Method method, std::span<const Eigen::VectorXd> history, const Eigen::VectorXd& candidate,
             const ScoringConfig& config = {});

/// Precomputed history statistics in a fixed reduced frame, shared by the
/// per-candidate evaluations of one context.
class ReducedHistory {
 public:
  ReducedHistory(std::vector<Eigen::Vector2d> points, Method method, const BandwidthRule& bandwidth);

  double score_candidate(const Eigen::Vector2d& candidate) const;
  /// Score of history member `index`: MDS excludes the member from d_out,
  /// KDS evaluates the full-history density at the member.
  double score_member(std::size_t index) const;

  std::size_t size() const { return points_.size(); }

 private:
  double mean_distance(const Eigen::Vector2d& x, std::size_t skip) const;

  std::vector<Eigen::Vector2d> points_;
  Method method_;
  DensityModel density_;
  Eigen::Matrix2d inverse_;
  double d_in_ = 0.0;
};

struct AxisScores {
  Axis axis = Axis::Taste;
  Method method = Method::Kds;
  std::map<std::string, double> history_scores;
  std::map<std::string, double> candidate_scores;
};

/// Scores every history and candidate food of `context` on one axis. Candidate
/// scores run in parallel with OpenMP; the result does not depend on thread
/// count or scheduling.
AxisScores score_axis(const UserContext& context, Axis axis, Method method, const ScoringConfig& config = {});

/// Single-threaded reference for score_axis.
AxisScores score_axis_serial(const UserContext& context, Axis axis, Method method,
                             const ScoringConfig& config = {});

}  // namespace ccr
