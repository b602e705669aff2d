#include "ccr/baseline.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "ccr/error.hpp"
#include "ccr/rng.hpp"

namespace ccr {

std::vector<std::size_t> baseline_permutation(std::uint64_t seed, std::size_t user, std::uint64_t trial,
                                              std::size_t n) {
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  SplitMix64 rng(derive_seed(seed, user, trial));
  for (std::size_t i = n; i > 1; --i) {
    const auto j = static_cast<std::size_t>(uniform_below(rng, i));
    std::swap(order[i - 1], order[j]);
  }
  // The shuffle fills slots from the back; the back slot is rank 1.
  std::reverse(order.begin(), order.end());
  return order;
}

namespace {

struct UserSums {
  std::vector<MetricValues> at;  // parallel to ks
};

UserSums simulate_user(const std::vector<std::uint8_t>& labels, std::size_t user, std::span<const int> ks,
                       std::uint64_t trials, std::uint64_t seed) {
  const std::size_t n = labels.size();
  const int relevant = total_relevant(labels);
  const int max_k = *std::max_element(ks.begin(), ks.end());
  if (relevant == 0) throw Error(ErrorKind::OutOfRange, "baseline user without relevant items");
  if (static_cast<std::size_t>(max_k) > n) throw Error(ErrorKind::OutOfRange, "K exceeds candidate count");

  std::vector<double> discount(static_cast<std::size_t>(max_k));
  for (int i = 0; i < max_k; ++i) discount[i] = 1.0 / std::log2(i + 2.0);
  std::vector<double> ideal(ks.size());
  for (std::size_t q = 0; q < ks.size(); ++q) {
    for (int i = 0; i < std::min(ks[q], relevant); ++i) ideal[q] += discount[i];
  }

  UserSums sums{std::vector<MetricValues>(ks.size())};
  std::vector<std::size_t> order(n);
  std::vector<int> hits(static_cast<std::size_t>(max_k) + 1);
  std::vector<double> dcg(static_cast<std::size_t>(max_k) + 1);
  for (std::uint64_t t = 0; t < trials; ++t) {
    std::iota(order.begin(), order.end(), std::size_t{0});
    SplitMix64 rng(derive_seed(seed, user, t));
    // Only the first max_k slots matter, so the shuffle stops there.
    for (std::size_t i = 0; i < static_cast<std::size_t>(max_k); ++i) {
      const auto j = static_cast<std::size_t>(uniform_below(rng, n - i));
      std::swap(order[n - 1 - i], order[j]);
    }
    // order[n-1], order[n-2], ... are ranks 1, 2, ...; baseline_permutation
    // consumes the same draws in the same order.
    for (int i = 0; i < max_k; ++i) {
      const bool rel = labels[order[n - 1 - static_cast<std::size_t>(i)]] != 0;
      hits[i + 1] = hits[i] + (rel ? 1 : 0);
      dcg[i + 1] = dcg[i] + (rel ? discount[i] : 0.0);
    }
    for (std::size_t q = 0; q < ks.size(); ++q) {
      const int k = ks[q];
      sums.at[q].precision += static_cast<double>(hits[k]) / k;
      sums.at[q].recall += static_cast<double>(hits[k]) / relevant;
      sums.at[q].ndcg += dcg[k] / ideal[q];
    }
  }
  for (auto& v : sums.at) {
    v.precision /= static_cast<double>(trials);
    v.recall /= static_cast<double>(trials);
    v.ndcg /= static_cast<double>(trials);
  }
  return sums;
}

std::map<int, MetricValues> run(std::span<const std::vector<std::uint8_t>> users, std::span<const int> ks,
                                std::uint64_t trials, std::uint64_t seed, bool parallel) {
  if (trials < 1) throw Error(ErrorKind::OutOfRange, "baseline needs at least one trial");
  if (ks.empty()) throw Error(ErrorKind::OutOfRange, "no K values given");
  const auto count = static_cast<std::ptrdiff_t>(users.size());
  std::vector<UserSums> per_user(users.size());
  std::vector<std::exception_ptr> errors(users.size());
#pragma omp parallel for schedule(dynamic) if (parallel)
  for (std::ptrdiff_t u = 0; u < count; ++u) {
    try {
      per_user[u] = simulate_user(users[u], static_cast<std::size_t>(u), ks, trials, seed);
    } catch (...) {
      errors[u] = std::current_exception();
    }
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }

  std::map<int, MetricValues> out;
  for (std::size_t q = 0; q < ks.size(); ++q) {
    MetricValues mean;
    for (const auto& user : per_user) {
      mean.precision += user.at[q].precision;
      mean.recall += user.at[q].recall;
      mean.ndcg += user.at[q].ndcg;
    }
    if (!per_user.empty()) {
      const double n = static_cast<double>(per_user.size());
      mean.precision /= n;
      mean.recall /= n;
      mean.ndcg /= n;
    }
    out[ks[q]] = mean;
  }
  return out;
}

}  // namespace

std::map<int, MetricValues> monte_carlo_baseline(std::span<const std::vector<std::uint8_t>> users,
                                                 std::span<const int> ks, std::uint64_t trials, std::uint64_t seed) {
  return run(users, ks, trials, seed, true);
}

std::map<int, MetricValues> monte_carlo_baseline_serial(std::span<const std::vector<std::uint8_t>> users,
                                                        std::span<const int> ks, std::uint64_t trials,
                                                        std::uint64_t seed) {
  return run(users, ks, trials, seed, false);
}

}  // namespace ccr
