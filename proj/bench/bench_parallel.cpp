// OpenMP kernels against their serial references.

#include <benchmark/benchmark.h>

#include <filesystem>
#include <random>

#include "ccr/baseline.hpp"
#include "ccr/experiment.hpp"
#include "ccr/scoring.hpp"

using namespace ccr;

namespace {

UserContext synthetic_context(int history, int candidates, int dim) {
  std::mt19937_64 rng(1);
  std::normal_distribution<double> normal;
  UserContext context;
  context.worker_id = "W";
  for (int i = 0; i < history + candidates; ++i) {
    EmbeddedFood food;
    food.food_id = "F" + std::to_string(1000 + i);
    food.taste = Eigen::VectorXd::NullaryExpr(dim, [&] { return normal(rng); });
    food.ingredient = Eigen::VectorXd::NullaryExpr(dim, [&] { return normal(rng); });
    (i < history ? context.history : context.candidates).push_back(std::move(food));
  }
  return context;
}

const Dataset& fixture() {
  static const Dataset dataset = [] {
    const std::filesystem::path dir = CCR_FIXTURE_DIR;
    return load_dataset({dir / "all_food.csv", dir / "extended_food.csv", dir / "interactions.csv",
                         dir / "extended_interactions.csv"});
  }();
  return dataset;
}

const RegionData& fixture_region() {
  static const RegionData data = [] {
    const std::vector<int> ks{1, 3, 5};
    return prepare_region(fixture(), Region::SoutheastAsia, Experiment::Exp1ComfortTasteCuriosityIngredient, ks);
  }();
  return data;
}

std::vector<std::vector<std::uint8_t>> baseline_users() {
  std::mt19937_64 rng(2);
  std::vector<std::vector<std::uint8_t>> users;
  for (int u = 0; u < 100; ++u) {
    std::vector<std::uint8_t> flags(10, 0);
    for (auto& f : flags) f = rng() % 3 == 0;
    flags[0] = 1;
    users.push_back(flags);
  }
  return users;
}

void BM_ScoreAxis(benchmark::State& state) {
  const auto context = synthetic_context(12, static_cast<int>(state.range(0)), 8);
  const auto method = static_cast<Method>(state.range(1));
  for (auto _ : state) benchmark::DoNotOptimize(score_axis(context, Axis::Taste, method));
}

void BM_ScoreAxisSerial(benchmark::State& state) {
  const auto context = synthetic_context(12, static_cast<int>(state.range(0)), 8);
  const auto method = static_cast<Method>(state.range(1));
  for (auto _ : state) benchmark::DoNotOptimize(score_axis_serial(context, Axis::Taste, method));
}

void BM_MonteCarloBaseline(benchmark::State& state) {
  const auto users = baseline_users();
  const std::vector<int> ks{1, 3, 5};
  for (auto _ : state) benchmark::DoNotOptimize(monte_carlo_baseline(users, ks, state.range(0), 7));
}

void BM_MonteCarloBaselineSerial(benchmark::State& state) {
  const auto users = baseline_users();
  const std::vector<int> ks{1, 3, 5};
  for (auto _ : state) benchmark::DoNotOptimize(monte_carlo_baseline_serial(users, ks, state.range(0), 7));
}

void BM_EvaluateMethod(benchmark::State& state) {
  const auto& data = fixture_region();
  const ExperimentConfig config;
  for (auto _ : state) benchmark::DoNotOptimize(evaluate_method(data, Method::Mds, config, true));
}

void BM_EvaluateMethodSerial(benchmark::State& state) {
  const auto& data = fixture_region();
  const ExperimentConfig config;
  for (auto _ : state) benchmark::DoNotOptimize(evaluate_method(data, Method::Mds, config, false));
}

}  // namespace

BENCHMARK(BM_ScoreAxis)->ArgsProduct({{16, 256}, {0, 1}})->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_ScoreAxisSerial)->ArgsProduct({{16, 256}, {0, 1}})->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_MonteCarloBaseline)->Arg(10000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_MonteCarloBaselineSerial)->Arg(10000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_EvaluateMethod)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_EvaluateMethodSerial)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
