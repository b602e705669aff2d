#pragma once

// Domain types for foods, survey interactions and per-user contexts, plus
// loaders for the four dataset files.

#include <Eigen/Core>
#include <filesystem>
#include <map>
#include <ostream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace ccr {

enum class Region { Japan, SoutheastAsia, China, Europe, Other };

std::string_view to_string(Region region);
/// Case-insensitive; separators ('_', '-', ' ') are ignored, so
/// "southeast_asia", "SoutheastAsia" and "Southeast Asia" are all accepted.
Region parse_region(std::string_view text);

enum class Axis { Taste, Ingredient };
std::string_view to_string(Axis axis);

/// Exp1 takes comfort from taste and curiosity from ingredients; Exp2 swaps them.
enum class Experiment { Exp1ComfortTasteCuriosityIngredient, Exp2CuriosityTasteComfortIngredient };
std::string_view to_string(Experiment experiment);
Experiment parse_experiment(std::string_view text);

struct AxisRoles {
  Axis comfort;
  Axis curiosity;
};
AxisRoles axis_roles(Experiment experiment);

struct EmbeddedFood {
  std::string food_id;
  std::string name;
  Region region = Region::Other;
  Eigen::VectorXd taste;
  Eigen::VectorXd ingredient;

  const Eigen::VectorXd& vector(Axis axis) const { return axis == Axis::Taste ? taste : ingredient; }
};

/// Validated, immutable table of foods sharing one taste and one ingredient
/// dimension.
class FoodTable {
 public:
  FoodTable() = default;
  /// Throws Validation on duplicate ids, inconsistent dimensions or
  /// non-finite entries. `source` prefixes error messages.
  explicit FoodTable(std::vector<EmbeddedFood> foods, std::string_view source = "embeddings");

  const std::vector<EmbeddedFood>& foods() const { return foods_; }
  std::size_t size() const { return foods_.size(); }
  bool empty() const { return foods_.empty(); }
  Eigen::Index taste_dim() const { return taste_dim_; }
  Eigen::Index ingredient_dim() const { return ingredient_dim_; }

  const EmbeddedFood* find(std::string_view food_id) const;
  const EmbeddedFood& at(std::string_view food_id) const;

 private:
  std::vector<EmbeddedFood> foods_;
  std::unordered_map<std::string, std::size_t> index_;
  Eigen::Index taste_dim_ = 0;
  Eigen::Index ingredient_dim_ = 0;
};

/// One answer to the taste or ingredient question.
struct Evaluation {
  bool suits = false;
  bool want_to_try = false;

  friend bool operator==(const Evaluation&, const Evaluation&) = default;
};

/// Survey option codes:
///   1 suitable + would like to try      2 suitable + would not like to try
///   3 unsuitable + would like to try    4 unsuitable + would not like to try
Evaluation decode_option(long long code);
int encode_option(Evaluation evaluation);

struct InteractionRecord {
  std::string worker_id;
  std::string food_id;
  bool eaten = false;
  Evaluation taste;
  Evaluation ingredient;
};

struct ExtendedInteractionRecord {
  std::string worker_id;
  std::string food_id;
};

/// CSV (header `food_id,name,region,taste_vec,ingredient_vec`) or JSON lines
/// when the extension is `.jsonl` / `.ndjson`.
FoodTable load_embeddings(const std::filesystem::path& path);
FoodTable parse_embeddings_csv(std::istream& in, std::string_view source);
FoodTable parse_embeddings_jsonl(std::istream& in, std::string_view source);
void write_embeddings_csv(std::ostream& out, const FoodTable& table);

/// `worker_id,food_id,eaten,taste_option,ingredient_option`; food ids must
/// resolve in `all_food`, (worker_id, food_id) must be unique.
std::vector<InteractionRecord> load_interactions(const std::filesystem::path& path, const FoodTable& all_food);
std::vector<InteractionRecord> parse_interactions_csv(std::istream& in, const FoodTable& all_food,
                                                      std::string_view source);
void write_interactions_csv(std::ostream& out, const std::vector<InteractionRecord>& records);

/// `worker_id,food_id`; duplicate pairs are collapsed to one record.
std::vector<ExtendedInteractionRecord> load_extended(const std::filesystem::path& path,
                                                     const FoodTable& extended_food);
std::vector<ExtendedInteractionRecord> parse_extended_csv(std::istream& in, const FoodTable& extended_food,
                                                          std::string_view source);
void write_extended_csv(std::ostream& out, const std::vector<ExtendedInteractionRecord>& records);

struct Dataset {
  FoodTable all_food;
  FoodTable extended_food;
  std::vector<InteractionRecord> interactions;
  std::vector<ExtendedInteractionRecord> extended;
};

struct DatasetPaths {
  std::filesystem::path embeddings;
  std::filesystem::path extended_embeddings;
  std::filesystem::path interactions;
  std::filesystem::path extended_interactions;
};

Dataset load_dataset(const DatasetPaths& paths);

/// History H and candidate set F of one worker for one region.
struct UserContext {
  std::string worker_id;
  Region region = Region::Other;
  std::vector<EmbeddedFood> history;
  std::vector<EmbeddedFood> candidates;
};

inline constexpr std::size_t kMinHistory = 3;

/// H = foods marked eaten ∪ the worker's extended foods; F = every food of
/// `region` in `all_food` that the worker has not eaten. Throws
/// InsufficientHistory when |H| < 3 and Validation when the worker has no
/// interaction records.
UserContext build_user_context(std::string_view worker_id, const std::vector<InteractionRecord>& interactions,
                               const std::vector<ExtendedInteractionRecord>& extended, const FoodTable& all_food,
                               const FoodTable& extended_food, Region region);
UserContext build_user_context(std::string_view worker_id, const Dataset& dataset, Region region);

struct RelevanceLabels {
  Experiment experiment = Experiment::Exp1ComfortTasteCuriosityIngredient;
  std::map<std::string, bool> labels;
};

/// Exp1: taste suits AND ingredient want-to-try.
/// Exp2: taste want-to-try AND ingredient suits.
bool is_relevant(const InteractionRecord& record, Experiment experiment);

/// Throws Validation when a candidate lacks an interaction record.
RelevanceLabels relevance_labels(const UserContext& context, const std::vector<InteractionRecord>& interactions,
                                 Experiment experiment);

/// Workers with at least one interaction on a food of `region`, sorted.
std::vector<std::string> workers_in_region(const Dataset& dataset, Region region);

/// Regions other than Japan that own at least one food in `all_food`, in
/// enum order.
std::vector<Region> target_regions(const FoodTable& all_food);

}  // namespace ccr
