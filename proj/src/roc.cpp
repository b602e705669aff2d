#include "ccr/roc.hpp"

#include <algorithm>
#include <numeric>

#include "ccr/error.hpp"

namespace ccr {

double trapezoid_auc(std::span<const RocPoint> points) {
  double area = 0.0;
  for (std::size_t i = 1; i < points.size(); ++i) {
    area += (points[i].fpr - points[i - 1].fpr) * (points[i].tpr + points[i - 1].tpr) / 2.0;
  }
  return area;
}

RocCurve roc_points(std::span<const double> scores, std::span<const std::uint8_t> labels) {
  if (scores.size() != labels.size()) throw Error(ErrorKind::Validation, "scores and labels differ in length");
  std::size_t positives = 0;
  for (const auto l : labels) positives += l ? 1 : 0;
  const std::size_t negatives = labels.size() - positives;
  if (positives == 0 || negatives == 0) {
    throw Error(ErrorKind::InsufficientData, "ROC needs both positive and negative labels");
  }

  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });

  RocCurve curve;
  curve.points.push_back({0.0, 0.0});
  std::size_t tp = 0;
  std::size_t fp = 0;
  for (std::size_t i = 0; i < order.size();) {
    const double threshold = scores[order[i]];
    for (; i < order.size() && scores[order[i]] == threshold; ++i) {
      if (labels[order[i]]) {
        ++tp;
      } else {
        ++fp;
      }
    }
    curve.points.push_back({static_cast<double>(fp) / negatives, static_cast<double>(tp) / positives});
  }
  curve.auc = trapezoid_auc(curve.points);
  return curve;
}

double interpolate_tpr(const RocCurve& curve, double fpr) {
  const auto& pts = curve.points;
  if (pts.empty()) return 0.0;
  // Last vertex with fpr <= x; the first vertex beyond x closes the segment.
  const auto upper = std::upper_bound(pts.begin(), pts.end(), fpr,
                                      [](double x, const RocPoint& p) { return x < p.fpr; });
  if (upper == pts.begin()) return pts.front().tpr;
  const auto& left = *(upper - 1);
  if (upper == pts.end() || left.fpr == fpr) return left.tpr;
  const auto& right = *upper;
  const double t = (fpr - left.fpr) / (right.fpr - left.fpr);
  return left.tpr + t * (right.tpr - left.tpr);
}

RocCurve average_roc(std::span<const RocCurve> curves, int grid_points) {
  if (curves.empty()) throw Error(ErrorKind::InsufficientData, "no ROC curves to average");
  if (grid_points < 2) throw Error(ErrorKind::OutOfRange, "ROC grid needs at least 2 points");

  RocCurve out;
  out.points.reserve(static_cast<std::size_t>(grid_points) + 1);
  for (int g = 0; g < grid_points; ++g) {
    const double x = static_cast<double>(g) / (grid_points - 1);
    double tpr = 0.0;
    for (const auto& c : curves) tpr += interpolate_tpr(c, x);
    tpr /= static_cast<double>(curves.size());
    if (g == 0 && tpr > 0.0) out.points.push_back({0.0, 0.0});
    out.points.push_back({x, tpr});
  }
  out.points.back().tpr = 1.0;
  out.auc = trapezoid_auc(out.points);
  return out;
}

}  // namespace ccr
