#include "ccr/wilcoxon.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <numeric>
#include <vector>

#include <fmt/format.h>

#include "ccr/error.hpp"

namespace ccr {

namespace {

struct SignedRanks {
  // Ranks are doubled so that average ranks of ties stay integral.
  std::vector<std::int64_t> doubled_ranks;
  std::vector<bool> positive;
  double tie_term = 0.0;  // sum of t^3 - t over tie groups
};

SignedRanks signed_ranks(std::span<const std::pair<double, double>> pairs) {
  std::vector<double> diffs;
  for (const auto& [a, b] : pairs) {
    const double d = a - b;
    if (d != 0.0) diffs.push_back(d);
  }
  std::vector<std::size_t> order(diffs.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t x, std::size_t y) { return std::abs(diffs[x]) < std::abs(diffs[y]); });

  SignedRanks out;
  out.doubled_ranks.resize(diffs.size());
  out.positive.resize(diffs.size());
  for (std::size_t i = 0; i < order.size();) {
    std::size_t j = i;
    while (j < order.size() && std::abs(diffs[order[j]]) == std::abs(diffs[order[i]])) ++j;
    // Positions i..j-1 share rank (i+1 + j) / 2.
    const auto doubled = static_cast<std::int64_t>(i + 1 + j);
    for (std::size_t k = i; k < j; ++k) out.doubled_ranks[order[k]] = doubled;
    const double t = static_cast<double>(j - i);
    out.tie_term += t * t * t - t;
    i = j;
  }
  for (std::size_t i = 0; i < diffs.size(); ++i) out.positive[i] = diffs[i] > 0.0;
  return out;
}

std::int64_t doubled_w_plus(const SignedRanks& ranks) {
  std::int64_t sum = 0;
  for (std::size_t i = 0; i < ranks.doubled_ranks.size(); ++i) {
    if (ranks.positive[i]) sum += ranks.doubled_ranks[i];
  }
  return sum;
}

double exact_p(const SignedRanks& ranks) {
  const auto n = ranks.doubled_ranks.size();
  const std::int64_t total = std::accumulate(ranks.doubled_ranks.begin(), ranks.doubled_ranks.end(), std::int64_t{0});
  // counts[s]: sign patterns whose doubled W+ equals s.
  std::vector<double> counts(static_cast<std::size_t>(total) + 1, 0.0);
  counts[0] = 1.0;
  std::int64_t reach = 0;
  for (const auto r : ranks.doubled_ranks) {
    for (std::int64_t s = reach; s >= 0; --s) {
      if (counts[s] != 0.0) counts[s + r] += counts[s];
    }
    reach += r;
  }
  const std::int64_t observed = std::llabs(2 * doubled_w_plus(ranks) - total);
  double extreme = 0.0;
  for (std::int64_t s = 0; s <= total; ++s) {
    if (std::llabs(2 * s - total) >= observed) extreme += counts[s];
  }
  return std::min(1.0, extreme / std::ldexp(1.0, static_cast<int>(n)));
}

struct NormalApprox {
  double z;
  double p;
};

NormalApprox normal_p(const SignedRanks& ranks) {
  const double n = static_cast<double>(ranks.doubled_ranks.size());
  const double w_plus = static_cast<double>(doubled_w_plus(ranks)) / 2.0;
  const double mean = n * (n + 1.0) / 4.0;
  const double variance = n * (n + 1.0) * (2.0 * n + 1.0) / 24.0 - ranks.tie_term / 48.0;
  if (!(variance > 0.0)) return {0.0, 1.0};
  const double deviation = w_plus - mean;
  const double corrected = std::max(0.0, std::abs(deviation) - 0.5);
  const double z = std::copysign(corrected / std::sqrt(variance), deviation);
  return {z, std::min(1.0, std::erfc(std::abs(z) / std::sqrt(2.0)))};
}

}  // namespace

WilcoxonResult wilcoxon_signed_rank(std::span<const std::pair<double, double>> pairs, double alpha) {
  const auto ranks = signed_ranks(pairs);
  const int n = static_cast<int>(ranks.doubled_ranks.size());
  if (n < kWilcoxonMinPairs) {
    throw Error(ErrorKind::InsufficientData,
                fmt::format("fewer than {} usable pairs ({} nonzero differences)", kWilcoxonMinPairs, n));
  }
  WilcoxonResult result;
  result.n_effective = n;
  result.w_plus = static_cast<double>(doubled_w_plus(ranks)) / 2.0;
  const double total = n * (n + 1.0) / 2.0;
  result.w = std::min(result.w_plus, total - result.w_plus);
  const auto approx = normal_p(ranks);
  result.z = approx.z;
  result.exact = n <= kWilcoxonExactLimit;
  result.p_two_sided = result.exact ? exact_p(ranks) : approx.p;
  result.significant = result.p_two_sided < alpha;
  return result;
}

double wilcoxon_normal_p(std::span<const std::pair<double, double>> pairs) {
  return normal_p(signed_ranks(pairs)).p;
}

double wilcoxon_exact_p(std::span<const std::pair<double, double>> pairs) {
  const auto ranks = signed_ranks(pairs);
  if (ranks.doubled_ranks.empty()) return 1.0;
  if (ranks.doubled_ranks.size() > 30) throw Error(ErrorKind::OutOfRange, "exact Wilcoxon limited to n <= 30");
  return exact_p(ranks);
}

}  // namespace ccr
