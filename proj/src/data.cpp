#include "ccr/data.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <set>

#include <json.hpp>

#include "ccr/csv.hpp"
#include "ccr/error.hpp"

namespace ccr {

namespace {

std::string normalize_token(std::string_view text) {
  std::string out;
  for (const char c : csv::trim(text)) {
    if (c == '_' || c == '-' || c == ' ') continue;
    out.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  }
  return out;
}

std::string where(std::string_view source, std::size_t line) {
  return std::string(source) + ":" + std::to_string(line);
}

std::ifstream open_input(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::Io, "cannot open '" + path.string() + "'");
  return in;
}

Eigen::VectorXd to_eigen(const std::vector<double>& values) {
  return Eigen::Map<const Eigen::VectorXd>(values.data(), static_cast<Eigen::Index>(values.size()));
}

std::vector<double> to_std(const Eigen::VectorXd& v) { return {v.data(), v.data() + v.size()}; }

}  // namespace

std::string_view to_string(Region region) {
  switch (region) {
    case Region::Japan: return "Japan";
    case Region::SoutheastAsia: return "SoutheastAsia";
    case Region::China: return "China";
    case Region::Europe: return "Europe";
    case Region::Other: return "Other";
  }
  return "Other";
}

Region parse_region(std::string_view text) {
  const auto token = normalize_token(text);
  if (token == "japan") return Region::Japan;
  if (token == "southeastasia" || token == "sea") return Region::SoutheastAsia;
  if (token == "china") return Region::China;
  if (token == "europe") return Region::Europe;
  if (token == "other") return Region::Other;
  throw Error(ErrorKind::Parse, "unknown region '" + std::string(text) + "'");
}

std::string_view to_string(Axis axis) { return axis == Axis::Taste ? "taste" : "ingredient"; }

std::string_view to_string(Experiment experiment) {
  return experiment == Experiment::Exp1ComfortTasteCuriosityIngredient ? "exp1" : "exp2";
}

Experiment parse_experiment(std::string_view text) {
  const auto token = normalize_token(text);
  if (token == "exp1" || token == "1") return Experiment::Exp1ComfortTasteCuriosityIngredient;
  if (token == "exp2" || token == "2") return Experiment::Exp2CuriosityTasteComfortIngredient;
  throw Error(ErrorKind::Parse, "unknown experiment '" + std::string(text) + "' (expected exp1 or exp2)");
}

AxisRoles axis_roles(Experiment experiment) {
  if (experiment == Experiment::Exp1ComfortTasteCuriosityIngredient) return {Axis::Taste, Axis::Ingredient};
  return {Axis::Ingredient, Axis::Taste};
}

// ---------------------------------------------------------------------------
// FoodTable

FoodTable::FoodTable(std::vector<EmbeddedFood> foods, std::string_view source) : foods_(std::move(foods)) {
  for (std::size_t i = 0; i < foods_.size(); ++i) {
    const auto& food = foods_[i];
    const std::string label = std::string(source) + ": food '" + food.food_id + "'";
    if (food.food_id.empty()) throw Error(ErrorKind::Validation, std::string(source) + ": empty food_id");
    if (i == 0) {
      taste_dim_ = food.taste.size();
      ingredient_dim_ = food.ingredient.size();
    } else if (food.taste.size() != taste_dim_) {
      throw Error(ErrorKind::Validation, label + " has taste_vec dimension " + std::to_string(food.taste.size()) +
                                             ", expected " + std::to_string(taste_dim_));
    } else if (food.ingredient.size() != ingredient_dim_) {
      throw Error(ErrorKind::Validation, label + " has ingredient_vec dimension " +
                                             std::to_string(food.ingredient.size()) + ", expected " +
                                             std::to_string(ingredient_dim_));
    }
    if (food.taste.size() == 0 || food.ingredient.size() == 0) {
      throw Error(ErrorKind::Validation, label + " has an empty vector");
    }
    if (!food.taste.allFinite() || !food.ingredient.allFinite()) {
      throw Error(ErrorKind::Validation, label + " has a non-finite vector entry");
    }
    if (!index_.emplace(food.food_id, i).second) {
      throw Error(ErrorKind::Validation, std::string(source) + ": duplicate food_id '" + food.food_id + "'");
    }
  }
}

const EmbeddedFood* FoodTable::find(std::string_view food_id) const {
  const auto it = index_.find(std::string(food_id));
  return it == index_.end() ? nullptr : &foods_[it->second];
}

const EmbeddedFood& FoodTable::at(std::string_view food_id) const {
  if (const auto* food = find(food_id)) return *food;
  throw Error(ErrorKind::Validation, "unknown food_id '" + std::string(food_id) + "'");
}

// ---------------------------------------------------------------------------
// Option codes

Evaluation decode_option(long long code) {
  switch (code) {
    case 1: return {true, true};
    case 2: return {true, false};
    case 3: return {false, true};
    case 4: return {false, false};
    default: throw Error(ErrorKind::Parse, "unknown option code " + std::to_string(code) + " (expected 1-4)");
  }
}

int encode_option(Evaluation evaluation) {
  if (evaluation.suits) return evaluation.want_to_try ? 1 : 2;
  return evaluation.want_to_try ? 3 : 4;
}

// ---------------------------------------------------------------------------
// Embeddings

FoodTable parse_embeddings_csv(std::istream& in, std::string_view source) {
  const auto rows = csv::read_all(in);
  if (rows.empty()) throw Error(ErrorKind::Parse, std::string(source) + ": empty file");
  const auto cols =
      csv::require_columns(rows.front(), {"food_id", "name", "region", "taste_vec", "ingredient_vec"}, source);
  const auto width = *std::max_element(cols.begin(), cols.end()) + 1;

  std::vector<EmbeddedFood> foods;
  foods.reserve(rows.size() - 1);
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const auto& row = rows[r];
    const auto at = where(source, row.line);
    if (row.fields.size() < width) throw Error(ErrorKind::Parse, at + ": too few columns");
    EmbeddedFood food;
    food.food_id = std::string(csv::trim(row.fields[cols[0]]));
    food.name = row.fields[cols[1]];
    try {
      food.region = parse_region(row.fields[cols[2]]);
    } catch (const Error& e) {
      throw Error(ErrorKind::Parse, at + ": " + e.what());
    }
    const auto taste = csv::parse_real_list(row.fields[cols[3]]);
    const auto ingredient = csv::parse_real_list(row.fields[cols[4]]);
    if (!taste) throw Error(ErrorKind::Parse, at + ": food '" + food.food_id + "' has a malformed taste_vec");
    if (!ingredient) {
      throw Error(ErrorKind::Parse, at + ": food '" + food.food_id + "' has a malformed ingredient_vec");
    }
    food.taste = to_eigen(*taste);
    food.ingredient = to_eigen(*ingredient);
    foods.push_back(std::move(food));
  }
  return FoodTable(std::move(foods), source);
}

FoodTable parse_embeddings_jsonl(std::istream& in, std::string_view source) {
  std::vector<EmbeddedFood> foods;
  std::string line;
  std::size_t line_no = 0;
  auto read_vector = [&](const nlohmann::json& value, const std::string& at) {
    if (value.is_string()) {
      const auto parsed = csv::parse_real_list(value.get<std::string>());
      if (!parsed) throw Error(ErrorKind::Parse, at + ": malformed vector");
      return to_eigen(*parsed);
    }
    if (!value.is_array()) throw Error(ErrorKind::Parse, at + ": vector must be an array or a string");
    std::vector<double> values;
    for (const auto& x : value) {
      if (!x.is_number()) throw Error(ErrorKind::Parse, at + ": non-numeric vector entry");
      values.push_back(x.get<double>());
    }
    return to_eigen(values);
  };
  while (std::getline(in, line)) {
    ++line_no;
    if (csv::trim(line).empty()) continue;
    const auto at = where(source, line_no);
    nlohmann::json object;
    try {
      object = nlohmann::json::parse(line);
      EmbeddedFood food;
      food.food_id = object.at("food_id").get<std::string>();
      food.name = object.value("name", std::string{});
      food.region = parse_region(object.at("region").get<std::string>());
      food.taste = read_vector(object.at("taste_vec"), at);
      food.ingredient = read_vector(object.at("ingredient_vec"), at);
      foods.push_back(std::move(food));
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorKind::Parse, at + ": " + e.what());
    } catch (const Error& e) {
      if (e.kind() == ErrorKind::Parse && std::string_view(e.what()).find(at) != std::string_view::npos) throw;
      throw Error(ErrorKind::Parse, at + ": " + e.what());
    }
  }
  return FoodTable(std::move(foods), source);
}

FoodTable load_embeddings(const std::filesystem::path& path) {
  auto in = open_input(path);
  const auto ext = path.extension().string();
  if (ext == ".jsonl" || ext == ".ndjson") return parse_embeddings_jsonl(in, path.string());
  return parse_embeddings_csv(in, path.string());
}

void write_embeddings_csv(std::ostream& out, const FoodTable& table) {
  csv::write_row(out, {"food_id", "name", "region", "taste_vec", "ingredient_vec"});
  for (const auto& food : table.foods()) {
    csv::write_row(out, {food.food_id, food.name, std::string(to_string(food.region)),
                         csv::format_real_list(to_std(food.taste)), csv::format_real_list(to_std(food.ingredient))});
  }
}

// ---------------------------------------------------------------------------
// Interactions

std::vector<InteractionRecord> parse_interactions_csv(std::istream& in, const FoodTable& all_food,
                                                      std::string_view source) {
  const auto rows = csv::read_all(in);
  if (rows.empty()) throw Error(ErrorKind::Parse, std::string(source) + ": empty file");
  const auto cols = csv::require_columns(
      rows.front(), {"worker_id", "food_id", "eaten", "taste_option", "ingredient_option"}, source);
  const auto width = *std::max_element(cols.begin(), cols.end()) + 1;

  std::vector<InteractionRecord> records;
  std::set<std::pair<std::string, std::string>> seen;
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const auto& row = rows[r];
    const auto at = where(source, row.line);
    if (row.fields.size() < width) throw Error(ErrorKind::Parse, at + ": too few columns");
    InteractionRecord record;
    record.worker_id = std::string(csv::trim(row.fields[cols[0]]));
    record.food_id = std::string(csv::trim(row.fields[cols[1]]));
    if (record.worker_id.empty()) throw Error(ErrorKind::Parse, at + ": empty worker_id");
    const auto eaten = csv::parse_bool(row.fields[cols[2]]);
    if (!eaten) throw Error(ErrorKind::Parse, at + ": eaten must be yes/no, true/false or 1/0");
    record.eaten = *eaten;
    const auto taste = csv::parse_int(row.fields[cols[3]]);
    const auto ingredient = csv::parse_int(row.fields[cols[4]]);
    if (!taste || !ingredient) throw Error(ErrorKind::Parse, at + ": option codes must be integers");
    try {
      record.taste = decode_option(*taste);
      record.ingredient = decode_option(*ingredient);
    } catch (const Error& e) {
      throw Error(ErrorKind::Parse, at + ": " + e.what());
    }
    if (!all_food.find(record.food_id)) {
      throw Error(ErrorKind::Validation, at + ": food_id '" + record.food_id + "' not found in food table");
    }
    if (!seen.emplace(record.worker_id, record.food_id).second) {
      throw Error(ErrorKind::Validation,
                  at + ": duplicate interaction (" + record.worker_id + ", " + record.food_id + ")");
    }
    records.push_back(std::move(record));
  }
  return records;
}

std::vector<InteractionRecord> load_interactions(const std::filesystem::path& path, const FoodTable& all_food) {
  auto in = open_input(path);
  return parse_interactions_csv(in, all_food, path.string());
}

void write_interactions_csv(std::ostream& out, const std::vector<InteractionRecord>& records) {
  csv::write_row(out, {"worker_id", "food_id", "eaten", "taste_option", "ingredient_option"});
  for (const auto& r : records) {
    csv::write_row(out, {r.worker_id, r.food_id, r.eaten ? "yes" : "no", std::to_string(encode_option(r.taste)),
                         std::to_string(encode_option(r.ingredient))});
  }
}

std::vector<ExtendedInteractionRecord> parse_extended_csv(std::istream& in, const FoodTable& extended_food,
                                                          std::string_view source) {
  const auto rows = csv::read_all(in);
  if (rows.empty()) throw Error(ErrorKind::Parse, std::string(source) + ": empty file");
  const auto cols = csv::require_columns(rows.front(), {"worker_id", "food_id"}, source);
  const auto width = *std::max_element(cols.begin(), cols.end()) + 1;

  std::vector<ExtendedInteractionRecord> records;
  std::set<std::pair<std::string, std::string>> seen;
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const auto& row = rows[r];
    const auto at = where(source, row.line);
    if (row.fields.size() < width) throw Error(ErrorKind::Parse, at + ": too few columns");
    ExtendedInteractionRecord record{std::string(csv::trim(row.fields[cols[0]])),
                                     std::string(csv::trim(row.fields[cols[1]]))};
    if (record.worker_id.empty()) throw Error(ErrorKind::Parse, at + ": empty worker_id");
    if (!extended_food.find(record.food_id)) {
      throw Error(ErrorKind::Validation, at + ": food_id '" + record.food_id + "' not found in extended food table");
    }
    if (!seen.emplace(record.worker_id, record.food_id).second) continue;
    records.push_back(std::move(record));
  }
  return records;
}

std::vector<ExtendedInteractionRecord> load_extended(const std::filesystem::path& path,
                                                     const FoodTable& extended_food) {
  auto in = open_input(path);
  return parse_extended_csv(in, extended_food, path.string());
}

void write_extended_csv(std::ostream& out, const std::vector<ExtendedInteractionRecord>& records) {
  csv::write_row(out, {"worker_id", "food_id"});
  for (const auto& r : records) csv::write_row(out, {r.worker_id, r.food_id});
}

Dataset load_dataset(const DatasetPaths& paths) {
  Dataset dataset;
  dataset.all_food = load_embeddings(paths.embeddings);
  dataset.extended_food = load_embeddings(paths.extended_embeddings);
  dataset.interactions = load_interactions(paths.interactions, dataset.all_food);
  dataset.extended = load_extended(paths.extended_interactions, dataset.extended_food);
  return dataset;
}

// ---------------------------------------------------------------------------
// Contexts and labels

UserContext build_user_context(std::string_view worker_id, const std::vector<InteractionRecord>& interactions,
                               const std::vector<ExtendedInteractionRecord>& extended, const FoodTable& all_food,
                               const FoodTable& extended_food, Region region) {
  UserContext context;
  context.worker_id = std::string(worker_id);
  context.region = region;

  std::set<std::string> eaten;
  bool known = false;
  for (const auto& record : interactions) {
    if (record.worker_id != worker_id) continue;
    known = true;
    if (record.eaten) eaten.insert(record.food_id);
  }
  if (!known) throw Error(ErrorKind::Validation, "worker '" + context.worker_id + "' has no interaction records");

  // all_food order keeps H deterministic regardless of file row order.
  for (const auto& food : all_food.foods()) {
    if (eaten.count(food.food_id)) context.history.push_back(food);
  }
  std::set<std::string> extended_ids;
  for (const auto& record : extended) {
    if (record.worker_id == worker_id) extended_ids.insert(record.food_id);
  }
  for (const auto& food : extended_food.foods()) {
    if (extended_ids.count(food.food_id)) context.history.push_back(food);
  }
  for (const auto& food : all_food.foods()) {
    if (food.region == region && !eaten.count(food.food_id)) context.candidates.push_back(food);
  }

  if (context.history.size() < kMinHistory) {
    throw Error(ErrorKind::InsufficientHistory, "worker '" + context.worker_id + "' has " +
                                                    std::to_string(context.history.size()) +
                                                    " history foods, at least 3 required");
  }
  return context;
}

UserContext build_user_context(std::string_view worker_id, const Dataset& dataset, Region region) {
  return build_user_context(worker_id, dataset.interactions, dataset.extended, dataset.all_food,
                            dataset.extended_food, region);
}

bool is_relevant(const InteractionRecord& record, Experiment experiment) {
  if (experiment == Experiment::Exp1ComfortTasteCuriosityIngredient) {
    return record.taste.suits && record.ingredient.want_to_try;
  }
  return record.taste.want_to_try && record.ingredient.suits;
}

RelevanceLabels relevance_labels(const UserContext& context, const std::vector<InteractionRecord>& interactions,
                                 Experiment experiment) {
  std::map<std::string, const InteractionRecord*> by_food;
  for (const auto& record : interactions) {
    if (record.worker_id == context.worker_id) by_food.emplace(record.food_id, &record);
  }
  RelevanceLabels result;
  result.experiment = experiment;
  for (const auto& candidate : context.candidates) {
    const auto it = by_food.find(candidate.food_id);
    if (it == by_food.end()) {
      throw Error(ErrorKind::Validation, "worker '" + context.worker_id + "' has no interaction for candidate '" +
                                             candidate.food_id + "'");
    }
    result.labels.emplace(candidate.food_id, is_relevant(*it->second, experiment));
  }
  return result;
}

std::vector<std::string> workers_in_region(const Dataset& dataset, Region region) {
  std::set<std::string> workers;
  for (const auto& record : dataset.interactions) {
    if (dataset.all_food.at(record.food_id).region == region) workers.insert(record.worker_id);
  }
  return {workers.begin(), workers.end()};
}

std::vector<Region> target_regions(const FoodTable& all_food) {
  std::set<Region> present;
  for (const auto& food : all_food.foods()) {
    if (food.region != Region::Japan) present.insert(food.region);
  }
  return {present.begin(), present.end()};
}

}  // namespace ccr
