#pragma once

#include <Eigen/Core>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace ccr {

/// Scott's rule unless `fixed` holds a bandwidth shared by both dimensions.
struct BandwidthRule {
  std::optional<double> fixed;

  static BandwidthRule scott() { return {}; }
  static BandwidthRule fixed_scalar(double h) { return {h}; }
  std::string describe() const;
};

/// Gaussian product-kernel density over 2-D support points.
struct DensityModel {
  std::vector<Eigen::Vector2d> support;
  Eigen::Vector2d bandwidths;
};

inline constexpr double kDensityFloor = 1e-300;

/// Scott: h_d = sigma_d * n^(-1/6), sigma_d the unbiased per-dimension
/// standard deviation (1e-6 when zero). Requires at least 3 points and a
/// positive fixed bandwidth.
DensityModel kde_fit(std::span<const Eigen::Vector2d> points, const BandwidthRule& rule = BandwidthRule::scott());

/// log p(x) by log-sum-exp over the support, floored at log(1e-300).
double kde_log_density(const DensityModel& model, const Eigen::Vector2d& x);

}  // namespace ccr
