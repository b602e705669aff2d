#pragma once

#include <Eigen/Core>
#include <span>
#include <vector>

namespace ccr {

/// Input vectors projected onto their top two principal axes.
struct ReducedPointSet {
  std::vector<Eigen::Vector2d> points;
  Eigen::Matrix<double, 2, Eigen::Dynamic> projection;  // rows are the principal axes
  Eigen::VectorXd mean;
  Eigen::Vector2d eigenvalues;  // descending

  Eigen::Vector2d project(const Eigen::VectorXd& x) const { return projection * (x - mean); }
};

/// Projects `vectors` onto the two leading eigenvectors of their sample
/// covariance. Each axis is oriented so that its largest-magnitude entry is
/// positive (first such entry on ties).
///
/// Requires at least 3 vectors of a common dimension D >= 2. Throws
/// DegenerateInput when all vectors coincide.
ReducedPointSet pca_reduce(std::span<const Eigen::VectorXd> vectors);

}  // namespace ccr
