#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "ccr/baseline.hpp"
#include "ccr/experiment.hpp"
#include "ccr/metrics.hpp"
#include "ccr/roc.hpp"
#include "ccr/wilcoxon.hpp"
#include "oracles.hpp"
#include "support.hpp"

using namespace ccr;

namespace {

using Flags = std::vector<std::uint8_t>;

Flags flags(std::initializer_list<int> values) {
  Flags out;
  for (const int v : values) out.push_back(static_cast<std::uint8_t>(v));
  return out;
}

std::vector<int> relevant_positions(const Flags& ranked) {
  std::vector<int> out;
  for (std::size_t i = 0; i < ranked.size(); ++i)
    if (ranked[i]) out.push_back(static_cast<int>(i) + 1);
  return out;
}

std::vector<std::pair<double, double>> as_pairs(const std::vector<double>& differences) {
  std::vector<std::pair<double, double>> out;
  for (const double d : differences) out.emplace_back(d, 0.0);
  return out;
}

RocCurve curve(std::vector<RocPoint> points) {
  RocCurve c;
  c.points = std::move(points);
  c.auc = trapezoid_auc(c.points);
  return c;
}

}  // namespace

TEST_CASE("precision and recall by counting") {
  const auto ranked = flags({1, 1, 1, 1, 0, 0, 0, 0, 0, 0});
  CHECK(precision_at_k(ranked, 5) == 0.8);
  CHECK(recall_at_k(ranked, 5) == 1.0);
  const auto none = flags({0, 0, 0, 1, 1});
  CHECK(precision_at_k(none, 3) == 0.0);
  CHECK(recall_at_k(none, 3) == 0.0);
  CHECK(ndcg_at_k(none, 3) == 0.0);
  CHECK(support::kind_of([&] { precision_at_k(ranked, 0); }) == ErrorKind::OutOfRange);
  CHECK(support::kind_of([&] { precision_at_k(ranked, 11); }) == ErrorKind::OutOfRange);
  const auto empty = flags({0, 0, 0});
  CHECK(support::kind_of([&] { recall_at_k(empty, 1); }) == ErrorKind::OutOfRange);
  CHECK(support::kind_of([&] { ndcg_at_k(empty, 1); }) == ErrorKind::OutOfRange);
}

TEST_CASE("ndcg closed forms") {
  CHECK(ndcg_at_k(flags({1, 0, 0}), 3) == 1.0);
  CHECK(ndcg_at_k(flags({0, 1}), 2) == doctest::Approx(1.0 / std::log2(3.0)).epsilon(1e-15));
  CHECK(ndcg_at_k(flags({0, 1}), 2) == doctest::Approx(0.63093).epsilon(1e-5));
}

TEST_CASE("metrics over every permutation of six items") {
  Flags items = flags({0, 0, 0, 0, 1, 1});
  int permutations = 0;
  do {
    ++permutations;
    const auto positions = relevant_positions(items);
    for (int k = 1; k <= 6; ++k) {
      const auto expected = oracle::metrics_from_positions(positions, k);
      const double ndcg = ndcg_at_k(items, k);
      CHECK(precision_at_k(items, k) == expected.precision);
      CHECK(recall_at_k(items, k) == expected.recall);
      CHECK(ndcg == expected.ndcg);
      CHECK(ndcg >= 0.0);
      CHECK(ndcg <= 1.0);
    }
  } while (std::next_permutation(items.begin(), items.end()));
  CHECK(permutations == 15);  // distinct arrangements of the flag multiset

  std::vector<int> order(6);
  std::iota(order.begin(), order.end(), 0);
  int full = 0;
  do {
    ++full;
    Flags ranked;
    for (const int i : order) ranked.push_back(i < 2);
    CHECK(ndcg_at_k(ranked, 3) == oracle::metrics_from_positions(relevant_positions(ranked), 3).ndcg);
  } while (std::next_permutation(order.begin(), order.end()));
  CHECK(full == 720);
}

TEST_CASE("metric invariants on random rankings") {
  std::mt19937_64 rng(109);
  for (int trial = 0; trial < 500; ++trial) {
    const int n = 1 + static_cast<int>(rng() % 12);
    Flags ranked(n);
    for (auto& f : ranked) f = rng() % 3 == 0;
    ranked[rng() % n] = 1;
    CHECK(precision_at_k(ranked, 1) == ndcg_at_k(ranked, 1));
    double previous = 0.0;
    for (int k = 1; k <= n; ++k) {
      const double recall = recall_at_k(ranked, k);
      CHECK(recall >= previous);
      previous = recall;
      for (const double v : {precision_at_k(ranked, k), recall, ndcg_at_k(ranked, k)}) {
        CHECK(v >= 0.0);
        CHECK(v <= 1.0);
      }
    }
    CHECK(previous == 1.0);
  }
}

TEST_CASE("metrics by food id") {
  RelevanceLabels labels;
  labels.labels = {{"A", false}, {"B", true}, {"C", true}};
  const std::vector<std::string> ranked{"B", "A", "C"};
  CHECK(relevance_in_order(ranked, labels) == flags({1, 0, 1}));
  CHECK(precision_at_k(ranked, labels, 2) == 0.5);
  CHECK(recall_at_k(ranked, labels, 1) == 0.5);
  CHECK(ndcg_at_k(ranked, labels, 1) == 1.0);
}

TEST_CASE("expected random metrics match exhaustive enumeration") {
  for (int n = 1; n <= 8; ++n) {
    for (int r = 1; r <= n; ++r) {
      Flags items(n, 0);
      std::fill(items.end() - r, items.end(), 1);
      for (int k = 1; k <= n; ++k) {
        double precision = 0.0, recall = 0.0;
        int count = 0;
        Flags perm = items;
        do {
          precision += precision_at_k(perm, k);
          recall += recall_at_k(perm, k);
          ++count;
        } while (std::next_permutation(perm.begin(), perm.end()));
        const auto expected = expected_random_metrics(n, r, k);
        CHECK(expected.precision == doctest::Approx(precision / count).epsilon(1e-12));
        CHECK(expected.recall == doctest::Approx(recall / count).epsilon(1e-12));
      }
    }
  }
  const auto e = expected_random_metrics(10, 4, 3);
  CHECK(e.precision == 0.4);
  CHECK(e.recall == doctest::Approx(0.3));
  CHECK(expected_random_metrics(9, 2, 5).recall == doctest::Approx(0.5555).epsilon(1e-4));
  CHECK(expected_random_metrics(6, 6, 2).precision == 1.0);
  CHECK(support::kind_of([] { expected_random_metrics(5, 0, 1); }) == ErrorKind::OutOfRange);
  CHECK(support::kind_of([] { expected_random_metrics(5, 6, 1); }) == ErrorKind::OutOfRange);
  CHECK(support::kind_of([] { expected_random_metrics(5, 2, 6); }) == ErrorKind::OutOfRange);
}

TEST_CASE("mean_metrics and combine_reports") {
  const std::vector<Flags> users{flags({1, 0, 0}), flags({0, 0, 1})};
  const std::vector<int> ks{1, 3};
  const auto means = mean_metrics(users, ks);
  CHECK(means.at(1).precision == 0.5);
  CHECK(means.at(3).recall == 1.0);

  MetricReport a, b;
  a.at_k[1] = {1.0, 1.0, 1.0};
  a.users_evaluated = 3;
  a.users_skipped = 1;
  b.at_k[1] = {0.0, 0.5, 0.0};
  b.users_evaluated = 1;
  b.users_skipped = 2;
  const std::vector<MetricReport> reports{a, b};
  const auto all = combine_reports(reports, "all");
  CHECK(all.region == "all");
  CHECK(all.at_k.at(1).precision == 0.75);
  CHECK(all.at_k.at(1).recall == 0.875);
  CHECK(all.users_evaluated == 4);
  CHECK(all.users_skipped == 3);
}

TEST_CASE("monte carlo baseline reaches the closed form") {
  const std::vector<Flags> users{flags({1, 1, 1, 1, 0, 0, 0, 0, 0, 0})};
  const std::vector<int> ks{1, 3, 5};
  const auto result = monte_carlo_baseline(users, ks, 100000, 12345);
  for (const int k : ks) {
    CHECK(std::abs(result.at(k).precision - 0.4) <= 0.005);
    CHECK(std::abs(result.at(k).recall - k / 10.0) <= 0.005);
  }
}

TEST_CASE("monte carlo baseline with one trial replays its permutation") {
  std::mt19937_64 rng(113);
  std::vector<Flags> users;
  for (int u = 0; u < 6; ++u) {
    Flags f(5 + u, 0);
    for (auto& x : f) x = rng() % 2;
    f[0] = 1;
    users.push_back(f);
  }
  const std::vector<int> ks{1, 3, 5};
  const auto result = monte_carlo_baseline(users, ks, 1, 99);
  for (const int k : ks) {
    double p = 0, r = 0, g = 0;
    for (std::size_t u = 0; u < users.size(); ++u) {
      const auto order = baseline_permutation(99, u, 0, users[u].size());
      Flags ranked;
      for (const auto i : order) ranked.push_back(users[u][i]);
      p += precision_at_k(ranked, k);
      r += recall_at_k(ranked, k);
      g += ndcg_at_k(ranked, k);
    }
    const double n = static_cast<double>(users.size());
    CHECK(result.at(k).precision == doctest::Approx(p / n).epsilon(1e-14));
    CHECK(result.at(k).recall == doctest::Approx(r / n).epsilon(1e-14));
    CHECK(result.at(k).ndcg == doctest::Approx(g / n).epsilon(1e-14));
  }
}

TEST_CASE("baseline_permutation is a permutation") {
  for (std::uint64_t trial = 0; trial < 50; ++trial) {
    auto order = baseline_permutation(7, 3, trial, 11);
    std::sort(order.begin(), order.end());
    for (std::size_t i = 0; i < order.size(); ++i) CHECK(order[i] == i);
  }
  CHECK(baseline_permutation(7, 3, 1, 11) == baseline_permutation(7, 3, 1, 11));
  CHECK(baseline_permutation(7, 3, 1, 11) != baseline_permutation(7, 3, 2, 11));
}

TEST_CASE("monte carlo baseline is deterministic and matches the serial reference") {
  std::mt19937_64 rng(127);
  std::vector<Flags> users;
  for (int u = 0; u < 20; ++u) {
    Flags f(6 + u % 5, 0);
    for (auto& x : f) x = rng() % 3 == 0;
    f[rng() % f.size()] = 1;
    users.push_back(f);
  }
  const std::vector<int> ks{1, 3, 5};
  const auto a = monte_carlo_baseline(users, ks, 2000, 5);
  const auto b = monte_carlo_baseline(users, ks, 2000, 5);
  const auto serial = monte_carlo_baseline_serial(users, ks, 2000, 5);
  for (const int k : ks) {
    CHECK(a.at(k).precision == b.at(k).precision);
    CHECK(a.at(k).ndcg == b.at(k).ndcg);
    CHECK(a.at(k).precision == serial.at(k).precision);
    CHECK(a.at(k).recall == serial.at(k).recall);
    CHECK(a.at(k).ndcg == serial.at(k).ndcg);
  }
  CHECK(monte_carlo_baseline(users, ks, 2000, 6).at(1).precision != a.at(1).precision);
}

TEST_CASE("monte carlo baseline converges within three standard errors") {
  const std::uint64_t trials = 20000;
  const std::vector<int> ks{1, 3, 5};
  for (const auto& [n, r] : std::vector<std::pair<int, int>>{{5, 1}, {8, 3}, {10, 4}, {14, 2}}) {
    Flags f(n, 0);
    std::fill(f.begin(), f.begin() + r, 1);
    const std::vector<Flags> users{f};
    const auto result = monte_carlo_baseline(users, ks, trials, 2024);
    for (const int k : ks) {
      // Hits at K are hypergeometric.
      const double p = static_cast<double>(r) / n;
      const double hits_var = k * p * (1 - p) * (n - k) / (n - 1.0);
      const double se_precision = std::sqrt(hits_var) / k / std::sqrt(static_cast<double>(trials));
      const double se_recall = std::sqrt(hits_var) / r / std::sqrt(static_cast<double>(trials));
      const auto expected = expected_random_metrics(n, r, k);
      CHECK(std::abs(result.at(k).precision - expected.precision) <= 3 * se_precision + 1e-12);
      CHECK(std::abs(result.at(k).recall - expected.recall) <= 3 * se_recall + 1e-12);
    }
  }
}

TEST_CASE("roc_points separation and symmetry") {
  const std::vector<double> scores{0.9, 0.8, 0.7, 0.3, 0.2};
  const auto labels = flags({1, 1, 1, 0, 0});
  const auto perfect = roc_points(scores, labels);
  CHECK(perfect.auc == 1.0);
  CHECK(perfect.points.front().fpr == 0.0);
  CHECK(perfect.points.front().tpr == 0.0);
  CHECK(perfect.points.back().fpr == 1.0);
  CHECK(perfect.points.back().tpr == 1.0);

  std::vector<double> negated;
  for (const double s : scores) negated.push_back(-s);
  CHECK(roc_points(negated, labels).auc == 0.0);

  const std::vector<double> one_class{1, 2};
  CHECK(support::kind_of([&] { roc_points(one_class, flags({1, 1})); }) == ErrorKind::InsufficientData);
}

TEST_CASE("roc_points on independent labels is near one half") {
  std::mt19937_64 rng(131);
  std::uniform_real_distribution<double> uniform;
  std::vector<double> scores;
  Flags labels;
  for (int i = 0; i < 10000; ++i) {
    scores.push_back(uniform(rng));
    labels.push_back(rng() % 2);
  }
  CHECK(std::abs(roc_points(scores, labels).auc - 0.5) <= 0.02);
}

TEST_CASE("roc_points agrees with Mann-Whitney") {
  std::mt19937_64 rng(137);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 2 + static_cast<int>(rng() % 60);
    const bool coarse = trial % 2 == 0;
    std::vector<double> scores;
    Flags labels;
    for (int i = 0; i < n; ++i) {
      const double s = coarse ? static_cast<double>(rng() % 5) : std::uniform_real_distribution<double>()(rng);
      labels.push_back(rng() % 2);
      scores.push_back(s + (labels.back() ? 0.3 : 0.0));
    }
    labels[0] = 1;
    labels[1] = 0;
    const auto roc = roc_points(scores, labels);
    CHECK(std::abs(roc.auc - oracle::mann_whitney_auc(scores, labels)) <= 1e-12);
    for (std::size_t i = 1; i < roc.points.size(); ++i) {
      CHECK(roc.points[i].fpr >= roc.points[i - 1].fpr);
      CHECK(roc.points[i].tpr >= roc.points[i - 1].tpr);
    }
    if (!coarse) {
      std::vector<double> negated;
      for (const double s : scores) negated.push_back(-s);
      CHECK(std::abs(roc_points(negated, labels).auc - (1.0 - roc.auc)) <= 1e-12);
    }
  }
}

TEST_CASE("average_roc") {
  const auto low = curve({{0, 0}, {0.4, 0.6}, {1, 1}});   // area 0.6
  const auto high = curve({{0, 0}, {0.2, 0.8}, {1, 1}});  // area 0.8
  CHECK(low.auc == doctest::Approx(0.6));
  CHECK(high.auc == doctest::Approx(0.8));

  const std::vector<RocCurve> both{low, high};
  CHECK(std::abs(average_roc(both).auc - 0.7) <= 0.005);

  const std::vector<RocCurve> same{low, low, low};
  const auto averaged = average_roc(same);
  const std::vector<RocCurve> single{low};
  const auto passthrough = average_roc(single);
  CHECK(averaged.points.size() == passthrough.points.size());
  for (std::size_t i = 0; i < averaged.points.size(); ++i) {
    CHECK(averaged.points[i].tpr == doctest::Approx(passthrough.points[i].tpr).epsilon(1e-14));
  }
  CHECK(std::abs(passthrough.auc - low.auc) <= 0.005);
  for (double x = 0.0; x <= 1.0; x += 0.05) CHECK(interpolate_tpr(passthrough, x) == doctest::Approx(interpolate_tpr(low, x)));

  const auto step = curve({{0, 0}, {0, 1}, {1, 1}});
  CHECK(interpolate_tpr(step, 0.0) == 1.0);
}

TEST_CASE("wilcoxon closed forms") {
  const auto positive = as_pairs({1, 2, 3, 4, 5});
  const auto result = wilcoxon_signed_rank(positive);
  CHECK(result.exact);
  CHECK(result.n_effective == 5);
  CHECK(result.w_plus == 15.0);
  CHECK(result.w == 0.0);
  CHECK(result.p_two_sided == doctest::Approx(0.0625).epsilon(1e-14));
  CHECK_FALSE(result.significant);

  const auto negative = as_pairs({-1, -2, -3, -4, -5});
  CHECK(wilcoxon_signed_rank(negative).p_two_sided == result.p_two_sided);

  const auto balanced = as_pairs({1, -1, 2, -2, 3, -3});
  CHECK(wilcoxon_signed_rank(balanced).p_two_sided == 1.0);

  const auto with_zeros = as_pairs({0, 0, 1, 2, 3, 4});
  CHECK(support::kind_of([&] { wilcoxon_signed_rank(with_zeros); }) == ErrorKind::InsufficientData);
  const auto significant = as_pairs({1, 2, 3, 4, 5, 6, 7});
  CHECK(wilcoxon_signed_rank(significant).significant);
}

TEST_CASE("wilcoxon exact p matches sign enumeration") {
  std::mt19937_64 rng(139);
  for (int trial = 0; trial < 300; ++trial) {
    const int n = 5 + trial % 8;
    std::vector<double> d;
    for (int i = 0; i < n; ++i) {
      // Small integers force tied magnitudes; the shift biases the signs.
      double v = static_cast<double>(static_cast<int>(rng() % 7) - 2);
      if (v == 0.0 && i < 5) v = 1.0;
      d.push_back(v);
    }
    const auto pairs = as_pairs(d);
    const auto expected = oracle::wilcoxon_enumeration_p(d);
    CHECK(std::abs(wilcoxon_exact_p(pairs) - expected) <= 1e-12);
    const auto result = wilcoxon_signed_rank(pairs);
    if (result.n_effective <= kWilcoxonExactLimit) CHECK(std::abs(result.p_two_sided - expected) <= 1e-12);
  }
}

TEST_CASE("wilcoxon normal approximation at n = 12") {
  std::mt19937_64 rng(149);
  std::normal_distribution<double> normal(0.3, 1.0);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<double> d;
    for (int i = 0; i < 12; ++i) d.push_back(normal(rng));
    const auto pairs = as_pairs(d);
    CHECK(std::abs(wilcoxon_normal_p(pairs) - wilcoxon_exact_p(pairs)) <= 0.02);
  }
  std::vector<double> large;
  for (int i = 0; i < 27; ++i) large.push_back(normal(rng));
  const auto result = wilcoxon_signed_rank(as_pairs(large));
  CHECK_FALSE(result.exact);
  CHECK(result.p_two_sided > 0.0);
  CHECK(result.p_two_sided <= 1.0);
}

TEST_CASE("experiment on the bundled fixture") {
  const auto& dataset = support::fixture_dataset();
  ExperimentConfig config;
  config.baseline_trials = 500;
  config.seed = 3;
  const auto a = run_experiment(dataset, Method::Mds, Experiment::Exp1ComfortTasteCuriosityIngredient, config);
  const auto b = run_experiment(dataset, Method::Mds, Experiment::Exp1ComfortTasteCuriosityIngredient, config);

  REQUIRE(a.regions.size() == 3);
  for (std::size_t i = 0; i < a.regions.size(); ++i) {
    const auto& report = a.regions[i].report;
    CHECK(report.users_evaluated + report.users_skipped == 100);
    for (const auto& [k, v] : report.at_k) {
      CHECK(v.precision == b.regions[i].report.at_k.at(k).precision);
      CHECK(v.ndcg == b.regions[i].report.at_k.at(k).ndcg);
      CHECK(a.baseline[i].at_k.at(k).recall == b.baseline[i].at_k.at(k).recall);
    }
    CHECK(a.regions[i].pooled_scores == b.regions[i].pooled_scores);
  }
  REQUIRE(a.wilcoxon.has_value());
  CHECK(a.wilcoxon->n_effective <= 27);
  CHECK(a.wilcoxon->p_two_sided == b.wilcoxon->p_two_sided);
  REQUIRE(a.pooled_roc.has_value());
  CHECK(a.pooled_roc->auc > 0.5);

  const auto pairs = wilcoxon_pairs(a.baseline, a.baseline);
  CHECK(pairs.size() == 27);
  CHECK(support::kind_of([&] { wilcoxon_signed_rank(pairs); }) == ErrorKind::InsufficientData);
}

TEST_CASE("evaluate_method parallel equals serial") {
  const auto& dataset = support::fixture_dataset();
  const std::vector<int> ks{1, 3, 5};
  const auto data = prepare_region(dataset, Region::Europe, Experiment::Exp2CuriosityTasteComfortIngredient, ks);
  CHECK(data.contexts.size() + data.skipped.size() == data.total_users);
  ExperimentConfig config;
  for (const Method method : {Method::Kds, Method::Mds}) {
    const auto parallel = evaluate_method(data, method, config, true);
    const auto serial = evaluate_method(data, method, config, false);
    CHECK(parallel.pooled_scores == serial.pooled_scores);
    CHECK(parallel.report.at_k.at(3).ndcg == serial.report.at_k.at(3).ndcg);
  }
  config.baseline_trials = 300;
  const auto base_parallel = evaluate_baseline(data, config, true);
  const auto base_serial = evaluate_baseline(data, config, false);
  CHECK(base_parallel.at_k.at(5).precision == base_serial.at_k.at(5).precision);
}
