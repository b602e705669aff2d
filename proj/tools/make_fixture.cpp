// Generates the bundled synthetic dataset: 40 survey foods (12 Japanese,
// 10 Southeast Asian, 9 Chinese, 9 European), 170 extended foods and 100
// workers per non-Japanese region.
//
// Each axis has a 2-D latent space embedded in 8-D by a fixed orthonormal map
// plus small isotropic noise. Every worker has a latent preference centre per
// axis; eaten foods are drawn near it, and survey answers follow latent
// distance: "suits" when close, "would like to try" when far. Experiment 1
// relevant items (taste suits, ingredient want-to-try) therefore sit at low
// taste scores and high ingredient scores.

#include <Eigen/Dense>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <set>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "ccr/data.hpp"

namespace {

constexpr int kDim = 8;

struct Latent {
  Eigen::Vector2d taste;
  Eigen::Vector2d ingredient;
};

class Generator {
 public:
  explicit Generator(std::uint64_t seed) : rng_(seed) {
    taste_map_ = orthonormal_map();
    ingredient_map_ = orthonormal_map();
  }

  Eigen::Vector2d normal2(const Eigen::Vector2d& mean, double sd) {
    return {mean.x() + sd * normal_(rng_), mean.y() + sd * normal_(rng_)};
  }

  double normal(double sd) { return sd * normal_(rng_); }
  double uniform() { return uniform_(rng_); }

  ccr::EmbeddedFood embed(std::string id, std::string name, ccr::Region region, const Latent& z) {
    ccr::EmbeddedFood food;
    food.food_id = std::move(id);
    food.name = std::move(name);
    food.region = region;
    food.taste = taste_map_ * z.taste;
    food.ingredient = ingredient_map_ * z.ingredient;
    for (int d = 0; d < kDim; ++d) {
      food.taste(d) = round6(food.taste(d) + normal(0.05));
      food.ingredient(d) = round6(food.ingredient(d) + normal(0.05));
    }
    return food;
  }

 private:
  static double round6(double x) { return std::round(x * 1e6) / 1e6; }

  Eigen::Matrix<double, kDim, 2> orthonormal_map() {
    Eigen::Matrix<double, kDim, 2> m;
    for (int i = 0; i < kDim; ++i) {
      for (int j = 0; j < 2; ++j) m(i, j) = normal_(rng_);
    }
    const Eigen::HouseholderQR<Eigen::Matrix<double, kDim, 2>> qr(m);
    return qr.householderQ() * Eigen::Matrix<double, kDim, 2>::Identity();
  }

  std::mt19937_64 rng_;
  std::normal_distribution<double> normal_{0.0, 1.0};
  std::uniform_real_distribution<double> uniform_{0.0, 1.0};
  Eigen::Matrix<double, kDim, 2> taste_map_;
  Eigen::Matrix<double, kDim, 2> ingredient_map_;
};

struct RegionSpec {
  ccr::Region region;
  const char* prefix;
  int foods;
  Eigen::Vector2d taste_offset;
  Eigen::Vector2d ingredient_offset;
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Generate the synthetic comfort/curiosity fixture"};
  std::filesystem::path out = "data/fixture";
  std::uint64_t seed = 20240601;
  int users_per_region = 100;
  app.add_option("--out", out, "Output directory");
  app.add_option("--seed", seed, "Generator seed");
  app.add_option("--users", users_per_region, "Workers per non-Japanese region")->check(CLI::PositiveNumber);
  CLI11_PARSE(app, argc, argv);

  Generator gen(seed);
  const Eigen::Vector2d origin = Eigen::Vector2d::Zero();

  std::vector<ccr::EmbeddedFood> all_food;
  std::vector<Latent> all_latent;
  auto add_food = [&](std::vector<ccr::EmbeddedFood>& table, std::vector<Latent>& latents, std::string id,
                      ccr::Region region, const Latent& z) {
    const auto name = fmt::format("{} dish {}", ccr::to_string(region), id);
    table.push_back(gen.embed(std::move(id), name, region, z));
    latents.push_back(z);
  };

  for (int i = 0; i < 12; ++i) {
    add_food(all_food, all_latent, fmt::format("J{:02d}", i + 1), ccr::Region::Japan,
             {gen.normal2(origin, 1.0), gen.normal2(origin, 1.0)});
  }
  const std::vector<RegionSpec> regions = {
      {ccr::Region::SoutheastAsia, "S", 10, {0.9, 0.4}, {0.3, 0.9}},
      {ccr::Region::China, "C", 9, {-0.3, 0.5}, {0.8, -0.3}},
      {ccr::Region::Europe, "E", 9, {0.5, -0.9}, {-0.8, -0.5}},
  };
  std::vector<std::vector<std::size_t>> region_foods;
  for (const auto& spec : regions) {
    region_foods.emplace_back();
    for (int i = 0; i < spec.foods; ++i) {
      region_foods.back().push_back(all_food.size());
      add_food(all_food, all_latent, fmt::format("{}{:02d}", spec.prefix, i + 1), spec.region,
               {gen.normal2(spec.taste_offset, 1.2), gen.normal2(spec.ingredient_offset, 1.2)});
    }
  }

  std::vector<ccr::EmbeddedFood> extended_food;
  std::vector<Latent> extended_latent;
  for (int i = 0; i < 170; ++i) {
    add_food(extended_food, extended_latent, fmt::format("X{:03d}", i + 1), ccr::Region::Japan,
             {gen.normal2(origin, 1.0), gen.normal2(origin, 1.0)});
  }

  auto affinity = [](const Latent& food, const Latent& centre) {
    const double d2 = (food.taste - centre.taste).squaredNorm() + (food.ingredient - centre.ingredient).squaredNorm();
    return std::exp(-d2 / 2.0);
  };
  auto answer = [&](const Eigen::Vector2d& food, const Eigen::Vector2d& centre) {
    const double d = (food - centre).norm();
    return ccr::Evaluation{d + gen.normal(0.3) < 1.3, d + gen.normal(0.3) > 1.1};
  };

  std::vector<ccr::InteractionRecord> interactions;
  std::vector<ccr::ExtendedInteractionRecord> extended;
  int worker_no = 0;
  for (std::size_t r = 0; r < regions.size(); ++r) {
    for (int u = 0; u < users_per_region; ++u) {
      const auto worker = fmt::format("W{:04d}", ++worker_no);
      const Latent centre{gen.normal2(origin, 0.8), gen.normal2(origin, 0.8)};

      auto record = [&](std::size_t food_index, bool eaten) {
        const auto& z = all_latent[food_index];
        interactions.push_back({worker, all_food[food_index].food_id, eaten, answer(z.taste, centre.taste),
                                answer(z.ingredient, centre.ingredient)});
      };
      for (std::size_t j = 0; j < 12; ++j) {
        record(j, gen.uniform() < std::min(0.95, 0.2 + 0.75 * affinity(all_latent[j], centre)));
      }
      int region_eaten = 0;
      for (const auto j : region_foods[r]) {
        const bool eaten = region_eaten < 2 && gen.uniform() < 0.08;
        region_eaten += eaten ? 1 : 0;
        record(j, eaten);
      }

      // Extended history: weighted sampling without replacement.
      const int picks = 4 + static_cast<int>(gen.uniform() * 5.0);
      std::set<std::size_t> chosen;
      while (static_cast<int>(chosen.size()) < picks) {
        double total = 0.0;
        for (std::size_t j = 0; j < extended_latent.size(); ++j) {
          if (!chosen.count(j)) total += affinity(extended_latent[j], centre);
        }
        double target = gen.uniform() * total;
        for (std::size_t j = 0; j < extended_latent.size(); ++j) {
          if (chosen.count(j)) continue;
          target -= affinity(extended_latent[j], centre);
          if (target <= 0.0) {
            chosen.insert(j);
            break;
          }
        }
      }
      for (const auto j : chosen) extended.push_back({worker, extended_food[j].food_id});
    }
  }

  std::filesystem::create_directories(out);
  auto write = [&](const char* name, auto&& fn) {
    std::ofstream file(out / name, std::ios::binary);
    fn(file);
    if (!file) {
      std::cerr << "failed to write " << (out / name) << "\n";
      std::exit(1);
    }
  };
  write("all_food.csv", [&](std::ostream& o) { ccr::write_embeddings_csv(o, ccr::FoodTable(all_food)); });
  write("extended_food.csv", [&](std::ostream& o) { ccr::write_embeddings_csv(o, ccr::FoodTable(extended_food)); });
  write("interactions.csv", [&](std::ostream& o) { ccr::write_interactions_csv(o, interactions); });
  write("extended_interactions.csv", [&](std::ostream& o) { ccr::write_extended_csv(o, extended); });
  std::cout << fmt::format("wrote {} foods, {} extended foods, {} interactions, {} extended interactions to {}\n",
                           all_food.size(), extended_food.size(), interactions.size(), extended.size(),
                           out.string());
  return 0;
}
