#pragma once

#include <atomic>
#include <cmath>
#include <future>
#include <limits>
#include <map>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "cmx/corpus.hpp"
#include "cmx/errors.hpp"
#include "cmx/pipeline.hpp"
#include "cmx/serialize.hpp"

namespace cmx {

struct ParamGrid {
  // Ordered axes of (parameter path, candidate values).
  std::vector<std::pair<std::string, std::vector<nlohmann::json>>> axes;

  std::size_t combinations() const {
    std::size_t n = 1;
    for (const auto& [path, values] : axes) n *= values.size();
    return n;
  }

  void validate() const {
    if (axes.empty()) throw UsageError("grid: need at least one axis");
    for (const auto& [path, values] : axes)
      if (values.empty())
        throw UsageError("grid: axis '" + path + "' has no values");
  }
};

// Axes read in the (sorted) key order of the JSON object, so the walk order
// is reproducible.
inline ParamGrid grid_from_json(const nlohmann::json& j) {
  ParamGrid grid;
  for (const auto& [path, values] : j.items()) {
    if (!values.is_array())
      throw UsageError("grid: axis '" + path + "' must be a value list");
    grid.axes.emplace_back(path,
                           std::vector<nlohmann::json>(values.begin(), values.end()));
  }
  grid.validate();
  return grid;
}

// Addresses one field of the pipeline config by dotted path.
inline void set_param(PipelineConfig& config, const std::string& path,
                      const nlohmann::json& value) {
  auto group_weight = [&](FeatureGroup g) {
    config.features.set_weight(g, value.get<double>());
  };
  if (path == "classifier")
    config.classifier = parse_classifier(value.get<std::string>());
  else if (path == "seed") config.seed = value.get<std::uint64_t>();
  else if (path == "sgd.learning_rate")
    config.sgd.learning_rate = value.get<double>();
  else if (path == "sgd.alpha") config.sgd.alpha = value.get<double>();
  else if (path == "sgd.penalty")
    config.sgd.penalty = parse_penalty(value.get<std::string>());
  else if (path == "sgd.l1_ratio") config.sgd.l1_ratio = value.get<double>();
  else if (path == "sgd.epochs") config.sgd.epochs = value.get<int>();
  else if (path == "logreg.C") config.logreg.C = value.get<double>();
  else if (path == "logreg.tol") config.logreg.tol = value.get<double>();
  else if (path == "logreg.max_iter") config.logreg.max_iter = value.get<int>();
  else if (path == "features.ngram_max")
    config.features.ngram_max = value.get<int>();
  else if (path == "features.use_tfidf")
    config.features.use_tfidf = value.get<bool>();
  else if (path == "features.lowercase_latin")
    config.features.lowercase_latin = value.get<bool>();
  else if (path == "features.min_df") config.features.min_df = value.get<int>();
  else if (path == "features.emoji_threshold")
    config.features.emoji_threshold = value.get<double>();
  else if (path == "features.emoji_min_support")
    config.features.emoji_min_support = value.get<long>();
  else if (path == "features.group_weights.ngrams")
    group_weight(FeatureGroup::Ngrams);
  else if (path == "features.group_weights.soundex")
    group_weight(FeatureGroup::Soundex);
  else if (path == "features.group_weights.emoji")
    group_weight(FeatureGroup::Emoji);
  else if (path == "features.group_weights.lang")
    group_weight(FeatureGroup::Lang);
  else if (path == "features.group_weights.length")
    group_weight(FeatureGroup::Length);
  else
    throw UsageError("grid: unknown parameter path '" + path + "'");
}

struct GridPoint {
  PipelineConfig config;
  double score = -std::numeric_limits<double>::infinity();
  bool failed = false;
  std::string error;
};

struct GridSearchResult {
  std::vector<GridPoint> report;  // all combinations, walk order
  std::size_t best_index = 0;

  const GridPoint& best() const { return report[best_index]; }
};

namespace detail {

inline std::vector<PipelineConfig> expand_grid(const ParamGrid& grid,
                                               const PipelineConfig& base) {
  std::vector<PipelineConfig> configs;
  std::vector<std::size_t> cursor(grid.axes.size(), 0);
  const std::size_t total = grid.combinations();
  for (std::size_t i = 0; i < total; ++i) {
    PipelineConfig config = base;
    for (std::size_t a = 0; a < grid.axes.size(); ++a)
      set_param(config, grid.axes[a].first, grid.axes[a].second[cursor[a]]);
    configs.push_back(std::move(config));
    // odometer increment, last axis fastest
    for (std::size_t a = grid.axes.size(); a-- > 0;) {
      if (++cursor[a] < grid.axes[a].second.size()) break;
      cursor[a] = 0;
    }
  }
  return configs;
}

// Deterministic stratified fold assignment for the k-fold scoring mode.
inline std::vector<int> stratified_folds(const LabeledCorpus& corpus, int k,
                                         std::uint64_t seed) {
  std::map<int, std::vector<std::size_t>> by_label;
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    if (!corpus.records[i].label) throw DataError("k-fold: unlabeled record");
    by_label[static_cast<int>(*corpus.records[i].label)].push_back(i);
  }
  std::vector<int> fold(corpus.size(), 0);
  for (auto& [label, indices] : by_label) {
    std::mt19937_64 rng(seed ^ (0x9E3779B97F4A7C15ULL * (label + 1)));
    std::shuffle(indices.begin(), indices.end(), rng);
    for (std::size_t i = 0; i < indices.size(); ++i)
      fold[indices[i]] = static_cast<int>(i % k);
  }
  return fold;
}

inline double score_config(const PipelineConfig& config,
                           const LabeledCorpus& train,
                           const LabeledCorpus* val, const Resources& resources,
                           int cv_folds) {
  if (val) {
    return train_pipeline(train, config, resources).evaluate_corpus(*val)
        .weighted_f1;
  }
  // stratified k-fold over the training set
  const std::vector<int> fold = stratified_folds(train, cv_folds, config.seed);
  double sum = 0.0;
  for (int f = 0; f < cv_folds; ++f) {
    LabeledCorpus tr, va;
    tr.language = va.language = train.language;
    for (std::size_t i = 0; i < train.size(); ++i)
      (fold[i] == f ? va : tr).records.push_back(train.records[i]);
    if (tr.empty() || va.empty())
      throw DataError("k-fold: fold with no data (corpus too small)");
    sum += train_pipeline(tr, config, resources).evaluate_corpus(va).weighted_f1;
  }
  return sum / cv_folds;
}

}  // namespace detail

// Exhaustive search over the grid, scored by weighted F1 on `val` (or by
// stratified k-fold over `train` when val is null). A failing combination
// scores -inf and the search continues. `threads > 1` evaluates points in
// parallel; the report is index-assembled, identical to the serial one.
inline GridSearchResult grid_search(const ParamGrid& grid,
                                    const LabeledCorpus& train,
                                    const LabeledCorpus* val,
                                    const PipelineConfig& base,
                                    const Resources& resources,
                                    unsigned threads = 1, int cv_folds = 5) {
  grid.validate();
  if (train.empty()) throw UsageError("grid_search: empty training corpus");
  GridSearchResult result;
  const std::vector<PipelineConfig> configs = detail::expand_grid(grid, base);
  result.report.resize(configs.size());

  auto eval_point = [&](std::size_t i) {
    GridPoint& point = result.report[i];
    point.config = configs[i];
    try {
      point.score =
          detail::score_config(configs[i], train, val, resources, cv_folds);
    } catch (const std::exception& e) {
      point.failed = true;
      point.error = e.what();
      point.score = -std::numeric_limits<double>::infinity();
    }
  };

  if (threads <= 1) {
    for (std::size_t i = 0; i < configs.size(); ++i) eval_point(i);
  } else {
    std::vector<std::future<void>> futures;
    std::atomic<std::size_t> next{0};
    for (unsigned t = 0; t < threads; ++t)
      futures.push_back(std::async(std::launch::async, [&] {
        for (std::size_t i = next.fetch_add(1); i < configs.size();
             i = next.fetch_add(1))
          eval_point(i);
      }));
    for (auto& f : futures) f.get();
  }

  for (std::size_t i = 1; i < result.report.size(); ++i)
    if (result.report[i].score > result.report[result.best_index].score)
      result.best_index = i;  // ties keep the earliest combination
  return result;
}

inline nlohmann::json to_json(const GridSearchResult& result) {
  nlohmann::json points = nlohmann::json::array();
  for (const GridPoint& p : result.report) {
    nlohmann::json entry = {{"config", to_json(p.config)}};
    if (p.failed) {
      entry["failed"] = true;
      entry["error"] = p.error;
      entry["score"] = nullptr;
    } else {
      entry["score"] = p.score;
    }
    points.push_back(entry);
  }
  return {{"points", points},
          {"best_index", result.best_index},
          {"best_score", result.best().score}};
}

}  // namespace cmx
