#pragma once

// Builders shared by the unit tests.

#include <Eigen/Core>
#include <Eigen/LU>
#include <Eigen/QR>
#include <doctest.h>
#include <filesystem>
#include <fstream>
#include <random>
#include <string>
#include <vector>

#include "ccr/data.hpp"
#include "ccr/error.hpp"

namespace support {

template <class Fn>
ccr::ErrorKind kind_of(Fn&& fn) {
  try {
    fn();
  } catch (const ccr::Error& e) {
    return e.kind();
  }
  FAIL("expected ccr::Error");
  return ccr::ErrorKind::Parse;
}

/// Random D×D orthogonal matrix from the QR factor of a Gaussian matrix.
inline Eigen::MatrixXd random_orthogonal(std::mt19937_64& rng, int dim) {
  std::normal_distribution<double> normal;
  const Eigen::MatrixXd g = Eigen::MatrixXd::NullaryExpr(dim, dim, [&] { return normal(rng); });
  return Eigen::HouseholderQR<Eigen::MatrixXd>(g).householderQ();
}

/// Embeds 2-D points into `dim` dimensions through the first two columns of
/// `basis`, plus `offset`.
inline Eigen::VectorXd embed(const Eigen::Vector2d& p, const Eigen::MatrixXd& basis, const Eigen::VectorXd& offset) {
  return offset + basis.leftCols(2) * p;
}

inline std::vector<Eigen::VectorXd> random_vectors(std::mt19937_64& rng, int count, int dim, double scale = 1.0) {
  std::normal_distribution<double> normal(0.0, scale);
  std::vector<Eigen::VectorXd> out;
  for (int i = 0; i < count; ++i) out.push_back(Eigen::VectorXd::NullaryExpr(dim, [&] { return normal(rng); }));
  return out;
}

inline ccr::EmbeddedFood food(std::string id, Eigen::VectorXd taste, Eigen::VectorXd ingredient) {
  ccr::EmbeddedFood f;
  f.food_id = std::move(id);
  f.name = f.food_id;
  f.taste = std::move(taste);
  f.ingredient = std::move(ingredient);
  return f;
}

/// Context with `history` and `candidates` random foods in `dim` dimensions.
inline ccr::UserContext random_context(std::mt19937_64& rng, int history, int candidates, int dim) {
  ccr::UserContext context;
  context.worker_id = "W";
  context.region = ccr::Region::Europe;
  const auto taste = random_vectors(rng, history + candidates, dim);
  const auto ingredient = random_vectors(rng, history + candidates, dim);
  for (int i = 0; i < history + candidates; ++i) {
    auto f = food((i < history ? "H" : "F") + std::to_string(100 + i), taste[i], ingredient[i]);
    (i < history ? context.history : context.candidates).push_back(std::move(f));
  }
  return context;
}

inline std::filesystem::path temp_dir(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / ("ccr_test_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

inline void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream(path, std::ios::binary) << text;
}

#ifdef CCR_FIXTURE_DIR
inline ccr::DatasetPaths fixture_paths() {
  const std::filesystem::path dir = CCR_FIXTURE_DIR;
  return {dir / "all_food.csv", dir / "extended_food.csv", dir / "interactions.csv",
          dir / "extended_interactions.csv"};
}

inline const ccr::Dataset& fixture_dataset() {
  static const ccr::Dataset dataset = ccr::load_dataset(fixture_paths());
  return dataset;
}
#endif

}  // namespace support
