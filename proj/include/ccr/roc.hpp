#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace ccr {

struct RocPoint {
  double fpr = 0.0;
  double tpr = 0.0;
};

struct RocCurve {
  std::vector<RocPoint> points;  // from (0,0) to (1,1), nondecreasing in both coordinates
  double auc = 0.0;
};

/// Threshold sweep over descending scores, one step per distinct score, AUC
/// by the trapezoid rule (equal to the Mann-Whitney statistic with half
/// credit for ties). Needs at least one positive and one negative label.
RocCurve roc_points(std::span<const double> scores, std::span<const std::uint8_t> labels);

/// Trapezoid area under a polyline.
double trapezoid_auc(std::span<const RocPoint> points);

/// TPR of a curve at `fpr`, linear between vertices; on a vertical segment
/// the upper value is used.
double interpolate_tpr(const RocCurve& curve, double fpr);

/// Vertical averaging on a `grid_points`-point FPR grid over [0, 1].
RocCurve average_roc(std::span<const RocCurve> curves, int grid_points = 101);

}  // namespace ccr
