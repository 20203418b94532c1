#include <catch2/catch_amalgamated.hpp>

#include <array>
#include <fstream>

#include "cmx/tune.hpp"
#include "helpers.hpp"

using namespace cmx;
using cmxtest::quick_config;

namespace {

LabeledCorpus load_fixture(const std::string& name) {
  return load_tsv(cmxtest::fixture(name), Language::Tamil, true);
}

const LabeledCorpus& train_corpus() {
  static const LabeledCorpus c = load_fixture("cli_train.tsv");
  return c;
}

const LabeledCorpus& val_corpus() {
  static const LabeledCorpus c = load_fixture("cli_val.tsv");
  return c;
}

Resources resources() { return Resources::builtin(Language::Tamil); }

}  // namespace

TEST_CASE("grid_from_json reads axes in sorted key order") {
  const nlohmann::json j = {{"sgd.alpha", {1e-4, 1e-3}},
                            {"features.ngram_max", {1, 2, 3}}};
  const ParamGrid grid = grid_from_json(j);
  REQUIRE(grid.axes.size() == 2);
  CHECK(grid.axes[0].first == "features.ngram_max");
  CHECK(grid.axes[1].first == "sgd.alpha");
  CHECK(grid.combinations() == 6);
}

TEST_CASE("grid_from_json rejects malformed grids") {
  CHECK_THROWS_AS(grid_from_json({{"sgd.alpha", 3.0}}), UsageError);
  CHECK_THROWS_AS(grid_from_json({{"sgd.alpha", nlohmann::json::array()}}),
                  UsageError);
  CHECK_THROWS_AS(grid_from_json(nlohmann::json::object()), UsageError);
}

TEST_CASE("set_param addresses every documented path") {
  PipelineConfig config;
  set_param(config, "classifier", "logreg");
  CHECK(config.classifier == ClassifierKind::LogReg);
  set_param(config, "seed", 99);
  CHECK(config.seed == 99);
  set_param(config, "sgd.learning_rate", 0.5);
  CHECK(config.sgd.learning_rate == 0.5);
  set_param(config, "sgd.alpha", 0.25);
  CHECK(config.sgd.alpha == 0.25);
  set_param(config, "sgd.penalty", "elasticnet");
  CHECK(config.sgd.penalty == PenaltyKind::ElasticNet);
  set_param(config, "sgd.l1_ratio", 0.4);
  CHECK(config.sgd.l1_ratio == 0.4);
  set_param(config, "sgd.epochs", 7);
  CHECK(config.sgd.epochs == 7);
  set_param(config, "logreg.C", 3.0);
  CHECK(config.logreg.C == 3.0);
  set_param(config, "logreg.tol", 1e-3);
  CHECK(config.logreg.tol == 1e-3);
  set_param(config, "logreg.max_iter", 11);
  CHECK(config.logreg.max_iter == 11);
  set_param(config, "features.ngram_max", 2);
  CHECK(config.features.ngram_max == 2);
  set_param(config, "features.use_tfidf", false);
  CHECK(!config.features.use_tfidf);
  set_param(config, "features.min_df", 3);
  CHECK(config.features.min_df == 3);
  set_param(config, "features.group_weights.soundex", 0.5);
  CHECK(config.features.weight_of(FeatureGroup::Soundex) == 0.5);
  set_param(config, "features.group_weights.emoji", 2.0);
  CHECK(config.features.weight_of(FeatureGroup::Emoji) == 2.0);
  CHECK_THROWS_AS(set_param(config, "no.such.path", 1), UsageError);
}

TEST_CASE("expand_grid walks the last axis fastest") {
  ParamGrid grid;
  grid.axes = {{"sgd.epochs", {nlohmann::json(1), nlohmann::json(2)}},
               {"sgd.alpha", {nlohmann::json(0.1), nlohmann::json(0.2),
                              nlohmann::json(0.3)}}};
  const auto configs = detail::expand_grid(grid, PipelineConfig{});
  REQUIRE(configs.size() == 6);
  CHECK(configs[0].sgd.epochs == 1);
  CHECK(configs[0].sgd.alpha == 0.1);
  CHECK(configs[1].sgd.alpha == 0.2);
  CHECK(configs[2].sgd.alpha == 0.3);
  CHECK(configs[3].sgd.epochs == 2);
  CHECK(configs[3].sgd.alpha == 0.1);
  CHECK(configs[5].sgd.alpha == 0.3);
}

TEST_CASE("single-point grid search reproduces a plain training run") {
  ParamGrid grid;
  grid.axes = {{"sgd.epochs", {nlohmann::json(30)}}};
  const PipelineConfig base = quick_config();
  const GridSearchResult result =
      grid_search(grid, train_corpus(), &val_corpus(), base, resources());
  REQUIRE(result.report.size() == 1);
  CHECK(!result.report[0].failed);
  const double direct = train_pipeline(train_corpus(), result.report[0].config,
                                       resources())
                            .evaluate_corpus(val_corpus())
                            .weighted_f1;
  CHECK(result.report[0].score == direct);
}

TEST_CASE("grid search is exhaustive, deterministic, and picks the best") {
  ParamGrid grid;
  grid.axes = {{"sgd.epochs", {nlohmann::json(1), nlohmann::json(30)}},
               {"sgd.learning_rate",
                {nlohmann::json(1e-9), nlohmann::json(0.05),
                 nlohmann::json(0.1)}}};
  const PipelineConfig base = quick_config();
  const GridSearchResult a =
      grid_search(grid, train_corpus(), &val_corpus(), base, resources());
  REQUIRE(a.report.size() == 6);
  for (const GridPoint& p : a.report) CHECK(!p.failed);
  // the degenerate step size cannot beat a working configuration
  CHECK(a.best().config.sgd.learning_rate > 1e-9);
  for (const GridPoint& p : a.report) CHECK(p.score <= a.best().score);

  const GridSearchResult b =
      grid_search(grid, train_corpus(), &val_corpus(), base, resources());
  REQUIRE(b.report.size() == a.report.size());
  for (std::size_t i = 0; i < a.report.size(); ++i)
    CHECK(a.report[i].score == b.report[i].score);
  CHECK(a.best_index == b.best_index);
}

TEST_CASE("parallel grid search matches the serial report") {
  ParamGrid grid;
  grid.axes = {{"sgd.epochs", {nlohmann::json(5), nlohmann::json(30)}},
               {"features.ngram_max", {nlohmann::json(1), nlohmann::json(2)}}};
  const PipelineConfig base = quick_config();
  const GridSearchResult serial =
      grid_search(grid, train_corpus(), &val_corpus(), base, resources(), 1);
  const GridSearchResult parallel =
      grid_search(grid, train_corpus(), &val_corpus(), base, resources(), 4);
  REQUIRE(serial.report.size() == parallel.report.size());
  for (std::size_t i = 0; i < serial.report.size(); ++i)
    CHECK(serial.report[i].score == parallel.report[i].score);
  CHECK(serial.best_index == parallel.best_index);
}

TEST_CASE("failing combinations score -inf and the search continues") {
  ParamGrid grid;
  // epochs 0 fails validation; 30 succeeds
  grid.axes = {{"sgd.epochs", {nlohmann::json(0), nlohmann::json(30)}}};
  const GridSearchResult result = grid_search(
      grid, train_corpus(), &val_corpus(), quick_config(), resources());
  REQUIRE(result.report.size() == 2);
  CHECK(result.report[0].failed);
  CHECK(result.report[0].score ==
        -std::numeric_limits<double>::infinity());
  CHECK(!result.report[0].error.empty());
  CHECK(!result.report[1].failed);
  CHECK(result.best_index == 1);
}

TEST_CASE("k-fold scoring mode works without a validation set") {
  ParamGrid grid;
  grid.axes = {{"sgd.epochs", {nlohmann::json(30)}}};
  const GridSearchResult result = grid_search(
      grid, train_corpus(), nullptr, quick_config(), resources(), 1, 5);
  REQUIRE(result.report.size() == 1);
  CHECK(!result.report[0].failed);
  CHECK(result.report[0].score >= 0.0);
  CHECK(result.report[0].score <= 1.0);
  // deterministic
  const GridSearchResult again = grid_search(
      grid, train_corpus(), nullptr, quick_config(), resources(), 1, 5);
  CHECK(result.report[0].score == again.report[0].score);
}

TEST_CASE("stratified folds cover the corpus and balance labels") {
  const std::vector<int> fold = detail::stratified_folds(train_corpus(), 5, 7);
  REQUIRE(fold.size() == train_corpus().size());
  std::array<int, 5> sizes{};
  for (int f : fold) {
    REQUIRE(f >= 0);
    REQUIRE(f < 5);
    ++sizes[f];
  }
  for (int s : sizes) CHECK(s > 0);
}

TEST_CASE("grid result serializes with scores and failures") {
  ParamGrid grid;
  grid.axes = {{"sgd.epochs", {nlohmann::json(0), nlohmann::json(30)}}};
  const GridSearchResult result = grid_search(
      grid, train_corpus(), &val_corpus(), quick_config(), resources());
  const nlohmann::json j = to_json(result);
  REQUIRE(j["points"].size() == 2);
  CHECK(j["points"][0]["failed"] == true);
  CHECK(j["points"][0]["score"].is_null());
  CHECK(j["points"][1]["score"].is_number());
  CHECK(j["best_index"] == 1);
}
