#include "ccr/kde.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <fmt/format.h>

#include "ccr/error.hpp"

namespace ccr {

std::string BandwidthRule::describe() const { return fixed ? fmt::format("{}", *fixed) : "scott"; }

DensityModel kde_fit(std::span<const Eigen::Vector2d> points, const BandwidthRule& rule) {
  const auto n = points.size();
  if (n < 3) throw Error(ErrorKind::InsufficientHistory, fmt::format("KDE needs at least 3 points, got {}", n));

  DensityModel model;
  model.support.assign(points.begin(), points.end());
  if (rule.fixed) {
    if (!(*rule.fixed > 0.0) || !std::isfinite(*rule.fixed)) {
      throw Error(ErrorKind::Validation, fmt::format("bandwidth must be positive, got {}", *rule.fixed));
    }
    model.bandwidths.setConstant(*rule.fixed);
    return model;
  }

  Eigen::Vector2d mean = Eigen::Vector2d::Zero();
  for (const auto& p : points) mean += p;
  mean /= static_cast<double>(n);
  Eigen::Vector2d sum_sq = Eigen::Vector2d::Zero();
  for (const auto& p : points) sum_sq += (p - mean).cwiseAbs2();
  const double factor = std::pow(static_cast<double>(n), -1.0 / 6.0);
  for (int d = 0; d < 2; ++d) {
    double sigma = std::sqrt(sum_sq(d) / static_cast<double>(n - 1));
    if (sigma == 0.0) sigma = 1e-6;
    model.bandwidths(d) = sigma * factor;
  }
  return model;
}

double kde_log_density(const DensityModel& model, const Eigen::Vector2d& x) {
  const double log_floor = std::log(kDensityFloor);
  if (model.support.empty()) return log_floor;

  std::vector<double> exponents;
  exponents.reserve(model.support.size());
  double peak = -std::numeric_limits<double>::infinity();
  for (const auto& s : model.support) {
    const Eigen::Vector2d z = (x - s).cwiseQuotient(model.bandwidths);
    const double e = -0.5 * z.squaredNorm();
    exponents.push_back(e);
    peak = std::max(peak, e);
  }
  double total = 0.0;
  for (const double e : exponents) total += std::exp(e - peak);

  const double log_norm = std::log(static_cast<double>(model.support.size())) +
                          std::log(2.0 * std::numbers::pi * model.bandwidths(0) * model.bandwidths(1));
  const double value = peak + std::log(total) - log_norm;
  return std::max(value, log_floor);
}

}  // namespace ccr
