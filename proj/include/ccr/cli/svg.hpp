#pragma once

#include <span>
#include <string>

#include "ccr/roc.hpp"

namespace ccr::cli {

struct LabeledCurve {
  std::string label;
  RocCurve curve;
};

/// ROC plot: one polyline per curve, dashed chance diagonal, legend with
/// four-decimal AUC values.
std::string render_roc_svg(std::span<const LabeledCurve> curves, const std::string& title);

}  // namespace ccr::cli
