#include "ccr/covariance.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "ccr/error.hpp"

namespace ccr {

namespace {

double smallest_eigenvalue(const Eigen::Matrix2d& m) {
  const double half_trace = 0.5 * (m(0, 0) + m(1, 1));
  const double half_gap = 0.5 * (m(0, 0) - m(1, 1));
  return half_trace - std::hypot(half_gap, m(0, 1));
}

}  // namespace

CovarianceModel sample_covariance(std::span<const Eigen::Vector2d> points) {
  const auto n = points.size();
  if (n < 3) {
    throw Error(ErrorKind::InsufficientHistory, "covariance needs at least 3 points, got " + std::to_string(n));
  }
  CovarianceModel model;
  model.mean.setZero();
  for (const auto& p : points) model.mean += p;
  model.mean /= static_cast<double>(n);

  model.matrix.setZero();
  for (const auto& p : points) {
    const Eigen::Vector2d d = p - model.mean;
    model.matrix += d * d.transpose();
  }
  model.matrix /= static_cast<double>(n - 1);
  model.matrix(1, 0) = model.matrix(0, 1);

  const double threshold = 1e-9 * model.matrix.trace() / 2.0;
  if (smallest_eigenvalue(model.matrix) <= threshold) {
    model.regularization = std::max(threshold, 1e-12);
    model.matrix.diagonal().array() += model.regularization;
  }

  const double det = model.matrix(0, 0) * model.matrix(1, 1) - model.matrix(0, 1) * model.matrix(1, 0);
  model.inverse << model.matrix(1, 1), -model.matrix(0, 1), -model.matrix(1, 0), model.matrix(0, 0);
  model.inverse /= det;
  return model;
}

double mahalanobis(const Eigen::Vector2d& a, const Eigen::Vector2d& b, const CovarianceModel& cov) {
  const Eigen::Vector2d d = a - b;
  return std::sqrt(std::max(0.0, d.dot(cov.inverse * d)));
}

}  // namespace ccr
