#pragma once

#include <Eigen/Core>
#include <span>

namespace ccr {

struct CovarianceModel {
  Eigen::Vector2d mean;
  Eigen::Matrix2d matrix;   // symmetric positive definite, regularization included
  Eigen::Matrix2d inverse;
  double regularization = 0.0;  // value added to the diagonal, 0 when none was needed
};

/// Unbiased (n-1) covariance of 2-D points. When the smallest eigenvalue falls
/// below 1e-9 * trace / 2 the diagonal is lifted by
/// max(1e-9 * trace / 2, 1e-12). Requires at least 3 points.
CovarianceModel sample_covariance(std::span<const Eigen::Vector2d> points);

/// sqrt((a-b)^T M^-1 (a-b)).
double mahalanobis(const Eigen::Vector2d& a, const Eigen::Vector2d& b, const CovarianceModel& cov);

}  // namespace ccr
