#pragma once

#include <span>
#include <utility>

namespace ccr {

struct WilcoxonResult {
  int n_effective = 0;     // pairs with a nonzero difference
  double w = 0.0;          // min(W+, W-)
  double w_plus = 0.0;     // rank sum of positive differences
  double z = 0.0;          // normal approximation, continuity and tie corrected
  double p_two_sided = 1.0;
  bool exact = false;      // p from full sign enumeration
  bool significant = false;
};

inline constexpr int kWilcoxonExactLimit = 12;
inline constexpr int kWilcoxonMinPairs = 5;

/// Two-sided signed-rank test on differences a - b. Zero differences are
/// dropped, tied magnitudes share average ranks. The p-value comes from
/// enumerating all 2^n sign patterns when n <= 12, otherwise from the normal
/// approximation. Throws InsufficientData with fewer than 5 nonzero
/// differences.
WilcoxonResult wilcoxon_signed_rank(std::span<const std::pair<double, double>> pairs, double alpha = 0.05);

/// Normal-approximation p for the same data, regardless of n.
double wilcoxon_normal_p(std::span<const std::pair<double, double>> pairs);

/// Exact p by sign enumeration, regardless of the exact limit (n <= 30).
double wilcoxon_exact_p(std::span<const std::pair<double, double>> pairs);

}  // namespace ccr
