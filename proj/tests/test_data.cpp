#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "ccr/data.hpp"
#include "ccr/error.hpp"

using namespace ccr;

namespace {

std::string vec8(double base) {
  std::string out;
  for (int i = 0; i < 8; ++i) out += (i ? ";" : "") + std::to_string(base + 0.125 * i);
  return out;
}

FoodTable table_from(const std::string& text) {
  std::istringstream in(text);
  return parse_embeddings_csv(in, "test.csv");
}

ErrorKind kind_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("expected ccr::Error");
  return ErrorKind::Parse;
}

EmbeddedFood food(const std::string& id, Region region, double x) {
  EmbeddedFood f;
  f.food_id = id;
  f.name = id;
  f.region = region;
  f.taste = Eigen::VectorXd::Constant(3, x);
  f.taste(0) += x * x;
  f.ingredient = Eigen::VectorXd::Constant(3, -x);
  f.ingredient(1) += std::sin(x);
  return f;
}

InteractionRecord answer(const std::string& worker, const std::string& id, bool eaten, int taste = 1,
                         int ingredient = 1) {
  return {worker, id, eaten, decode_option(taste), decode_option(ingredient)};
}

}  // namespace

TEST_CASE("load_embeddings reads a three-food fixture") {
  const std::string text = "food_id,name,region,taste_vec,ingredient_vec\n"
                           "J01,Sushi,Japan," + vec8(0.1) + "," + vec8(0.2) + "\n"
                           "C01,\"Mapo tofu, spicy\",China," + vec8(0.3) + "," + vec8(0.4) + "\n"
                           "E01,Paella,Europe," + vec8(0.5) + "," + vec8(0.6) + "\n";
  const auto path = std::filesystem::temp_directory_path() / "ccr_test_embeddings.csv";
  std::ofstream(path) << text;
  const auto table = load_embeddings(path);
  CHECK(table.size() == 3);
  CHECK(table.taste_dim() == 8);
  CHECK(table.ingredient_dim() == 8);
  CHECK(table.at("C01").name == "Mapo tofu, spicy");
  CHECK(table.at("C01").region == Region::China);
  CHECK(table.at("E01").taste(7) == doctest::Approx(0.5 + 0.875));
  std::filesystem::remove(path);
}

TEST_CASE("embedding validation errors name the food") {
  SUBCASE("dimension mismatch") {
    std::string seven = vec8(0.1);
    seven = seven.substr(0, seven.rfind(';'));
    const std::string text = "food_id,name,region,taste_vec,ingredient_vec\n"
                             "J01,a,Japan," + vec8(0.1) + "," + vec8(0.1) + "\n"
                             "J02,b,Japan," + seven + "," + vec8(0.1) + "\n";
    try {
      table_from(text);
      FAIL("expected dimension error");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::Validation);
      CHECK(std::string(e.what()).find("J02") != std::string::npos);
      CHECK(std::string(e.what()).find("dimension") != std::string::npos);
    }
  }
  SUBCASE("duplicate food_id") {
    const std::string text = "food_id,name,region,taste_vec,ingredient_vec\n"
                             "J01,a,Japan," + vec8(0.1) + "," + vec8(0.1) + "\n"
                             "J01,b,Japan," + vec8(0.2) + "," + vec8(0.2) + "\n";
    try {
      table_from(text);
      FAIL("expected duplicate error");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::Validation);
      CHECK(std::string(e.what()).find("duplicate food_id 'J01'") != std::string::npos);
    }
  }
  SUBCASE("non-finite value") {
    const std::string text = "food_id,name,region,taste_vec,ingredient_vec\n"
                             "J01,a,Japan,1;nan;2,1;2;3\n";
    CHECK(kind_of([&] { table_from(text); }) == ErrorKind::Validation);
  }
  SUBCASE("malformed number carries the row") {
    const std::string text = "food_id,name,region,taste_vec,ingredient_vec\n"
                             "J01,a,Japan,1;x;2,1;2;3\n";
    try {
      table_from(text);
      FAIL("expected parse error");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::Parse);
      CHECK(std::string(e.what()).find("test.csv:2") != std::string::npos);
    }
  }
  SUBCASE("missing column") {
    CHECK(kind_of([] { table_from("food_id,name,taste_vec,ingredient_vec\n"); }) == ErrorKind::Parse);
  }
}

TEST_CASE("JSON lines embeddings match the CSV form") {
  const std::string csv_text = "food_id,name,region,taste_vec,ingredient_vec\n"
                               "S01,Pho,Southeast Asia,1;2;3,4;5;6\n";
  const std::string jsonl = R"({"food_id":"S01","name":"Pho","region":"SoutheastAsia","taste_vec":[1,2,3],"ingredient_vec":"4;5;6"})"
                            "\n";
  std::istringstream in(jsonl);
  const auto from_json = parse_embeddings_jsonl(in, "test.jsonl");
  const auto from_csv = table_from(csv_text);
  REQUIRE(from_json.size() == 1);
  CHECK(from_json.foods()[0].region == Region::SoutheastAsia);
  CHECK(from_json.foods()[0].taste == from_csv.foods()[0].taste);
  CHECK(from_json.foods()[0].ingredient == from_csv.foods()[0].ingredient);

  std::istringstream bad(R"({"food_id":"S01","region":"China","taste_vec":[1,"a"],"ingredient_vec":[1,2]})");
  CHECK(kind_of([&] { parse_embeddings_jsonl(bad, "bad.jsonl"); }) == ErrorKind::Parse);
}

TEST_CASE("embedding serialization round-trips") {
  std::mt19937_64 rng(7);
  std::normal_distribution<double> normal(0.0, 3.0);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<EmbeddedFood> foods;
    for (int i = 0; i < 5; ++i) {
      EmbeddedFood f;
      f.food_id = "F" + std::to_string(trial) + "_" + std::to_string(i);
      f.name = i % 2 ? "name, with comma" : "quote \"q\"";
      f.region = static_cast<Region>(i % 5);
      f.taste = Eigen::VectorXd::NullaryExpr(6, [&] { return normal(rng); });
      f.ingredient = Eigen::VectorXd::NullaryExpr(4, [&] { return normal(rng) * 1e-7; });
      foods.push_back(f);
    }
    const FoodTable original(foods);
    std::ostringstream once;
    write_embeddings_csv(once, original);
    const auto reloaded = table_from(once.str());
    std::ostringstream twice;
    write_embeddings_csv(twice, reloaded);
    CHECK(once.str() == twice.str());
    for (std::size_t i = 0; i < foods.size(); ++i) {
      CHECK(reloaded.foods()[i].taste == foods[i].taste);
      CHECK(reloaded.foods()[i].ingredient == foods[i].ingredient);
      CHECK(reloaded.foods()[i].name == foods[i].name);
    }
  }
}

TEST_CASE("option codes decode to (suits, want_to_try)") {
  CHECK(decode_option(1) == Evaluation{true, true});
  CHECK(decode_option(2) == Evaluation{true, false});
  CHECK(decode_option(3) == Evaluation{false, true});
  CHECK(decode_option(4) == Evaluation{false, false});
  CHECK(kind_of([] { decode_option(5); }) == ErrorKind::Parse);
  CHECK(kind_of([] { decode_option(0); }) == ErrorKind::Parse);
  for (int code = 1; code <= 4; ++code) CHECK(encode_option(decode_option(code)) == code);
}

TEST_CASE("interaction loading") {
  const FoodTable foods({food("J01", Region::Japan, 0.1), food("C01", Region::China, 0.2)});
  SUBCASE("valid rows") {
    std::istringstream in("worker_id,food_id,eaten,taste_option,ingredient_option\n"
                          "W1,J01,yes,1,4\nW1,C01,0,3,2\n");
    const auto records = parse_interactions_csv(in, foods, "i.csv");
    REQUIRE(records.size() == 2);
    CHECK(records[0].eaten);
    CHECK(records[0].taste == Evaluation{true, true});
    CHECK(records[0].ingredient == Evaluation{false, false});
    CHECK_FALSE(records[1].eaten);
  }
  SUBCASE("unknown option code") {
    std::istringstream in("worker_id,food_id,eaten,taste_option,ingredient_option\nW1,J01,yes,5,1\n");
    CHECK(kind_of([&] { parse_interactions_csv(in, foods, "i.csv"); }) == ErrorKind::Parse);
  }
  SUBCASE("unresolvable food") {
    std::istringstream in("worker_id,food_id,eaten,taste_option,ingredient_option\nW1,Z99,yes,1,1\n");
    CHECK(kind_of([&] { parse_interactions_csv(in, foods, "i.csv"); }) == ErrorKind::Validation);
  }
  SUBCASE("duplicate pair") {
    std::istringstream in("worker_id,food_id,eaten,taste_option,ingredient_option\nW1,J01,yes,1,1\nW1,J01,no,1,1\n");
    CHECK(kind_of([&] { parse_interactions_csv(in, foods, "i.csv"); }) == ErrorKind::Validation);
  }
  SUBCASE("extended interactions are deduplicated") {
    std::istringstream in("worker_id,food_id\nW1,J01\nW1,J01\nW2,J01\n");
    CHECK(parse_extended_csv(in, foods, "x.csv").size() == 2);
  }
}

TEST_CASE("build_user_context set arithmetic") {
  std::vector<EmbeddedFood> all;
  for (int i = 0; i < 12; ++i) all.push_back(food("J" + std::to_string(10 + i), Region::Japan, 0.1 * i));
  for (int i = 0; i < 9; ++i) all.push_back(food("C" + std::to_string(10 + i), Region::China, 1.0 + 0.1 * i));
  const FoodTable all_food(all);
  std::vector<EmbeddedFood> ext;
  for (int i = 0; i < 6; ++i) ext.push_back(food("X" + std::to_string(10 + i), Region::Japan, -0.2 * i));
  const FoodTable extended_food(ext);

  SUBCASE("5 eaten Japanese foods plus 4 extended, nothing Chinese eaten") {
    std::vector<InteractionRecord> interactions;
    for (int i = 0; i < 12; ++i) interactions.push_back(answer("W1", all[i].food_id, i < 5));
    for (int i = 0; i < 9; ++i) interactions.push_back(answer("W1", all[12 + i].food_id, false));
    std::vector<ExtendedInteractionRecord> extended;
    for (int i = 0; i < 4; ++i) extended.push_back({"W1", ext[i].food_id});
    const auto ctx = build_user_context("W1", interactions, extended, all_food, extended_food, Region::China);
    CHECK(ctx.history.size() == 9);
    CHECK(ctx.candidates.size() == 9);
  }
  SUBCASE("eaten Chinese foods move from F to H") {
    std::vector<InteractionRecord> interactions;
    for (int i = 0; i < 12; ++i) interactions.push_back(answer("W1", all[i].food_id, i < 5));
    for (int i = 0; i < 9; ++i) interactions.push_back(answer("W1", all[12 + i].food_id, i < 2));
    std::vector<ExtendedInteractionRecord> extended;
    for (int i = 0; i < 4; ++i) extended.push_back({"W1", ext[i].food_id});
    const auto ctx = build_user_context("W1", interactions, extended, all_food, extended_food, Region::China);
    CHECK(ctx.history.size() == 11);
    CHECK(ctx.candidates.size() == 7);
    for (const auto& c : ctx.candidates) {
      CHECK(c.food_id != "C10");
      CHECK(c.food_id != "C11");
    }
  }
  SUBCASE("two history foods is insufficient") {
    std::vector<InteractionRecord> interactions;
    for (int i = 0; i < 12; ++i) interactions.push_back(answer("W1", all[i].food_id, i < 1));
    const std::vector<ExtendedInteractionRecord> extended{{"W1", ext[0].food_id}};
    CHECK(kind_of([&] {
            build_user_context("W1", interactions, extended, all_food, extended_food, Region::China);
          }) == ErrorKind::InsufficientHistory);
  }
  SUBCASE("unknown worker") {
    CHECK(kind_of([&] { build_user_context("nobody", {}, {}, all_food, extended_food, Region::China); }) ==
          ErrorKind::Validation);
  }
}

TEST_CASE("relevance predicates from the survey quadrants") {
  const InteractionRecord green{"W", "F", false, {true, false}, {false, true}};
  CHECK(is_relevant(green, Experiment::Exp1ComfortTasteCuriosityIngredient));
  CHECK_FALSE(is_relevant(green, Experiment::Exp2CuriosityTasteComfortIngredient));
  const InteractionRecord red{"W", "F", false, {false, true}, {true, false}};
  CHECK(is_relevant(red, Experiment::Exp2CuriosityTasteComfortIngredient));
  CHECK_FALSE(is_relevant(red, Experiment::Exp1ComfortTasteCuriosityIngredient));
}

TEST_CASE("relevance truth table over all 16 answer combinations") {
  for (int mask = 0; mask < 16; ++mask) {
    const bool ts = mask & 1, tw = mask & 2, is = mask & 4, iw = mask & 8;
    const InteractionRecord r{"W", "F", false, {ts, tw}, {is, iw}};
    CHECK(is_relevant(r, Experiment::Exp1ComfortTasteCuriosityIngredient) == (ts && iw));
    CHECK(is_relevant(r, Experiment::Exp2CuriosityTasteComfortIngredient) == (tw && is));
    if (is_relevant(r, Experiment::Exp1ComfortTasteCuriosityIngredient) &&
        is_relevant(r, Experiment::Exp2CuriosityTasteComfortIngredient)) {
      // Relevant in both only when each axis has a flag from each predicate.
      CHECK((ts && tw && is && iw));
    }
  }
}

TEST_CASE("labels cover every candidate, missing interaction is an error") {
  std::vector<EmbeddedFood> all;
  for (int i = 0; i < 3; ++i) all.push_back(food("J" + std::to_string(i), Region::Japan, 0.3 * i));
  for (int i = 0; i < 4; ++i) all.push_back(food("E" + std::to_string(i), Region::Europe, 2.0 + i));
  const FoodTable all_food(all);
  const FoodTable extended_food({food("X0", Region::Japan, -1.0)});
  std::vector<InteractionRecord> interactions;
  for (int i = 0; i < 3; ++i) interactions.push_back(answer("W", all[i].food_id, true));
  for (int i = 0; i < 4; ++i) interactions.push_back(answer("W", all[3 + i].food_id, false, 1 + i, 4 - i));
  const auto ctx = build_user_context("W", interactions, {}, all_food, extended_food, Region::Europe);
  const auto labels = relevance_labels(ctx, interactions, Experiment::Exp1ComfortTasteCuriosityIngredient);
  CHECK(labels.labels.size() == ctx.candidates.size());
  // Exp1 needs a taste code of 1 or 2 and an ingredient code of 1 or 3.
  CHECK(labels.labels.at("E0") == false);  // taste 1, ingredient 4
  CHECK(labels.labels.at("E1") == true);   // taste 2, ingredient 3
  CHECK(labels.labels.at("E2") == false);  // taste 3
  CHECK(labels.labels.at("E3") == false);  // taste 4

  auto partial = interactions;
  partial.pop_back();
  CHECK(kind_of([&] { relevance_labels(ctx, partial, Experiment::Exp1ComfortTasteCuriosityIngredient); }) ==
        ErrorKind::Validation);
}

TEST_CASE("region parsing is separator and case insensitive") {
  CHECK(parse_region("southeast_asia") == Region::SoutheastAsia);
  CHECK(parse_region("Southeast Asia") == Region::SoutheastAsia);
  CHECK(parse_region("CHINA") == Region::China);
  CHECK(kind_of([] { parse_region("Atlantis"); }) == ErrorKind::Parse);
}

TEST_CASE("bundled fixture loads with the stated shape") {
  const std::filesystem::path dir = CCR_FIXTURE_DIR;
  const auto dataset = load_dataset({dir / "all_food.csv", dir / "extended_food.csv", dir / "interactions.csv",
                                     dir / "extended_interactions.csv"});
  CHECK(dataset.all_food.size() == 40);
  CHECK(dataset.extended_food.size() == 170);
  CHECK(dataset.all_food.taste_dim() == 8);
  const auto regions = target_regions(dataset.all_food);
  REQUIRE(regions.size() == 3);
  for (const auto region : regions) CHECK(workers_in_region(dataset, region).size() == 100);
}
