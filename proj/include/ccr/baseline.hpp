#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "ccr/metrics.hpp"

namespace ccr {

/// Candidate indices in rank order for (seed, user, trial). Exposed so tests
/// can replay a single trial.
std::vector<std::size_t> baseline_permutation(std::uint64_t seed, std::size_t user, std::uint64_t trial,
                                              std::size_t n);

/// Random-ranking baseline. `users` holds each user's relevance flags in
/// candidate order; every user must have a relevant item and at least
/// max(ks) candidates. Metrics are averaged over `trials` permutations per
/// user, then over users. Users are processed in parallel; the result is
/// bit-identical to the serial version for any thread count.
std::map<int, MetricValues> monte_carlo_baseline(std::span<const std::vector<std::uint8_t>> users,
                                                 std::span<const int> ks, std::uint64_t trials, std::uint64_t seed);

std::map<int, MetricValues> monte_carlo_baseline_serial(std::span<const std::vector<std::uint8_t>> users,
                                                        std::span<const int> ks, std::uint64_t trials,
                                                        std::uint64_t seed);

}  // namespace ccr
