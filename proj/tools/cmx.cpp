// cmx: train, tune, and run code-mixed sentiment models from TSV corpora.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "cmx/corpus.hpp"
#include "cmx/errors.hpp"
#include "cmx/pipeline.hpp"
#include "cmx/serialize.hpp"
#include "cmx/tune.hpp"

namespace {

namespace fs = std::filesystem;

struct ResourceFlags {
  std::string translit_table;
  std::string soundex_map;
  std::string emoji_lexicon;
};

void add_resource_flags(CLI::App* cmd, ResourceFlags& flags) {
  cmd->add_option("--translit-table", flags.translit_table,
                  "Override the builtin transliteration TSV");
  cmd->add_option("--soundex-map", flags.soundex_map,
                  "Override the builtin Soundex char map TSV");
  cmd->add_option("--emoji-lexicon", flags.emoji_lexicon,
                  "Base emoji sentiment lexicon CSV (emoji,score)");
}

// Builtin tables, overridden per file flag or from $CMX_RESOURCES.
cmx::Resources make_resources(const ResourceFlags& flags, cmx::Language lang) {
  ResourceFlags resolved = flags;
  if (const char* dir = std::getenv("CMX_RESOURCES")) {
    auto pick = [&](std::string& slot, const std::string& name) {
      const fs::path p = fs::path(dir) / name;
      if (slot.empty() && fs::exists(p)) slot = p.string();
    };
    pick(resolved.translit_table, "translit_" + cmx::to_string(lang) + ".tsv");
    pick(resolved.soundex_map, "soundex_map.tsv");
    pick(resolved.emoji_lexicon, "emoji_lexicon.csv");
  }
  cmx::Resources resources = cmx::Resources::builtin(lang);
  if (!resolved.translit_table.empty())
    resources.translit = std::make_shared<const cmx::TranslitTable>(
        cmx::load_translit_table(resolved.translit_table, lang));
  if (!resolved.soundex_map.empty())
    resources.char_map = cmx::load_indic_char_map(resolved.soundex_map);
  if (!resolved.emoji_lexicon.empty())
    resources.base_lexicon = cmx::load_base_lexicon(resolved.emoji_lexicon);
  return resources;
}

cmx::PipelineConfig load_config(const std::string& config_path,
                                const std::string& lang,
                                const std::string& classifier,
                                std::uint64_t seed, bool seed_set) {
  cmx::PipelineConfig config;
  if (!config_path.empty())
    config = cmx::pipeline_config_from_json(cmx::load_json_file(config_path));
  if (!lang.empty()) config.language = cmx::parse_language(lang);
  if (!classifier.empty()) config.classifier = cmx::parse_classifier(classifier);
  if (seed_set) config.seed = seed;
  return config;
}

int cmd_train(const std::string& config_path, const std::string& lang,
              const std::string& classifier, std::uint64_t seed, bool seed_set,
              const std::string& train_path, const std::string& val_path,
              const std::string& model_path, const ResourceFlags& flags) {
  const cmx::PipelineConfig config =
      load_config(config_path, lang, classifier, seed, seed_set);
  const cmx::Resources resources = make_resources(flags, config.language);
  const cmx::LabeledCorpus train =
      cmx::load_tsv(train_path, config.language, true);
  const cmx::TrainedPipeline pipe = cmx::train_pipeline(train, config, resources);
  cmx::save_model(model_path, pipe);
  std::cout << "trained " << cmx::to_string(config.classifier) << " on "
            << train.size() << " docs, " << pipe.vocab.n_columns
            << " features -> " << model_path << "\n";
  if (!pipe.model.converged)
    std::cerr << "warning: solver did not reach tolerance\n";
  if (!val_path.empty()) {
    const cmx::LabeledCorpus val =
        cmx::load_tsv(val_path, config.language, true);
    std::cout << cmx::format_report(pipe.evaluate_corpus(val), config.language);
  }
  return 0;
}

int cmd_tune(const std::string& config_path, const std::string& lang,
             const std::string& classifier, std::uint64_t seed, bool seed_set,
             const std::string& train_path, const std::string& val_path,
             const std::string& model_path, const std::string& report_path,
             unsigned threads, int cv_folds, const ResourceFlags& flags) {
  if (config_path.empty())
    throw cmx::UsageError("tune: --config with a 'grid' key is required");
  const nlohmann::json config_json = cmx::load_json_file(config_path);
  if (!config_json.contains("grid"))
    throw cmx::UsageError("tune: config file has no 'grid' key");
  const cmx::ParamGrid grid = cmx::grid_from_json(config_json["grid"]);
  const cmx::PipelineConfig base =
      load_config(config_path, lang, classifier, seed, seed_set);
  const cmx::Resources resources = make_resources(flags, base.language);
  const cmx::LabeledCorpus train = cmx::load_tsv(train_path, base.language, true);
  cmx::LabeledCorpus val;
  if (!val_path.empty()) val = cmx::load_tsv(val_path, base.language, true);

  const cmx::GridSearchResult result =
      cmx::grid_search(grid, train, val_path.empty() ? nullptr : &val, base,
                       resources, threads, cv_folds);
  const std::string report_out =
      report_path.empty() ? model_path + ".grid.json" : report_path;
  std::ofstream report_file(report_out, std::ios::binary);
  if (!report_file)
    throw cmx::DataError("cannot write grid report: " + report_out);
  report_file << cmx::to_json(result).dump(1) << "\n";

  if (result.best().failed)
    throw cmx::DataError("tune: every grid combination failed");
  const cmx::TrainedPipeline best =
      cmx::train_pipeline(train, result.best().config, resources);
  cmx::save_model(model_path, best);
  std::cout << "evaluated " << result.report.size() << " combinations; best "
            << "weighted F1 " << result.best().score << " -> " << model_path
            << " (report: " << report_out << ")\n";
  return 0;
}

int cmd_predict(const std::string& model_path, const std::string& input_path,
                const std::string& output_path) {
  const cmx::TrainedPipeline pipe = cmx::load_model(model_path);
  const cmx::LabeledCorpus input =
      cmx::load_tsv(input_path, pipe.config.language, false);
  std::ofstream out(output_path, std::ios::binary);
  if (!out) throw cmx::DataError("cannot open output file: " + output_path);
  for (const cmx::Record& record : input.records)
    out << record.text << '\t'
        << cmx::to_string(pipe.predict_text(record.text).label,
                          pipe.config.language)
        << '\n';
  std::cout << "labeled " << input.size() << " docs -> " << output_path << "\n";
  return 0;
}

int cmd_evaluate(const std::string& model_path, const std::string& input_path,
                 const std::string& lang, const std::string& format) {
  const cmx::TrainedPipeline pipe = cmx::load_model(model_path);
  if (!lang.empty() && cmx::parse_language(lang) != pipe.config.language)
    std::cerr << "warning: model language is "
              << cmx::to_string(pipe.config.language) << " but --lang says "
              << lang << "\n";
  const cmx::LabeledCorpus input =
      cmx::load_tsv(input_path, pipe.config.language, true);
  const cmx::EvalReport report = pipe.evaluate_corpus(input);
  if (format == "json") {
    nlohmann::json per_label = nlohmann::json::array();
    for (std::size_t k = 0; k < report.labels.size(); ++k)
      per_label.push_back(
          {{"label", cmx::to_string(report.labels[k], pipe.config.language)},
           {"precision", report.per_label[k].precision},
           {"recall", report.per_label[k].recall},
           {"f1", report.per_label[k].f1},
           {"support", report.per_label[k].support}});
    const nlohmann::json j = {{"per_label", per_label},
                              {"confusion", report.confusion},
                              {"weighted",
                               {{"precision", report.weighted_precision},
                                {"recall", report.weighted_recall},
                                {"f1", report.weighted_f1}}}};
    std::cout << j.dump(1) << "\n";
  } else {
    std::cout << cmx::format_report(report, pipe.config.language);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Code-mixed Tamil/Malayalam sentiment classifier"};
  app.require_subcommand(1);

  std::string lang, classifier, config_path, train_path, val_path, model_path,
      input_path, output_path, report_path, format = "text";
  std::uint64_t seed = 0;
  unsigned threads = 1;
  int cv_folds = 5;
  ResourceFlags flags;

  auto* train = app.add_subcommand("train", "Train a model from a labeled TSV");
  train->add_option("--lang", lang, "Target language (ta|ml)");
  train->add_option("--train", train_path, "Training TSV")->required();
  train->add_option("--val", val_path, "Validation TSV (report printed)");
  train->add_option("--config", config_path, "Pipeline config JSON");
  train->add_option("--model", model_path, "Output model path")->required();
  train->add_option("--classifier", classifier, "sgd|logreg");
  auto* train_seed = train->add_option("--seed", seed, "Training seed");
  add_resource_flags(train, flags);

  auto* tune = app.add_subcommand("tune", "Grid-search and train the best model");
  tune->add_option("--lang", lang, "Target language (ta|ml)");
  tune->add_option("--train", train_path, "Training TSV")->required();
  tune->add_option("--val", val_path,
                   "Validation TSV (omitted: stratified k-fold on train)");
  tune->add_option("--config", config_path, "Config JSON with a 'grid' key")
      ->required();
  tune->add_option("--model", model_path, "Output model path")->required();
  tune->add_option("--report", report_path,
                   "Grid report path (default: <model>.grid.json)");
  tune->add_option("--threads", threads, "Parallel grid evaluation threads");
  tune->add_option("--cv-folds", cv_folds, "Folds for the k-fold mode");
  tune->add_option("--classifier", classifier, "sgd|logreg");
  auto* tune_seed = tune->add_option("--seed", seed, "Training seed");
  add_resource_flags(tune, flags);

  auto* predict = app.add_subcommand("predict", "Label a text-only TSV");
  predict->add_option("--model", model_path, "Model path")->required();
  predict->add_option("--input", input_path, "Input TSV (one text per line)")
      ->required();
  predict->add_option("--output", output_path, "Output TSV")->required();

  auto* evaluate = app.add_subcommand("evaluate", "Score a labeled TSV");
  evaluate->add_option("--model", model_path, "Model path")->required();
  evaluate->add_option("--input", input_path, "Labeled TSV")->required();
  evaluate->add_option("--lang", lang, "Expected language (warn on mismatch)");
  evaluate->add_option("--format", format, "text|json");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 1;
  }

  try {
    if (train->parsed())
      return cmd_train(config_path, lang, classifier, seed,
                       train_seed->count() > 0, train_path, val_path,
                       model_path, flags);
    if (tune->parsed())
      return cmd_tune(config_path, lang, classifier, seed,
                      tune_seed->count() > 0, train_path, val_path, model_path,
                      report_path, threads, cv_folds, flags);
    if (predict->parsed()) return cmd_predict(model_path, input_path, output_path);
    if (evaluate->parsed())
      return cmd_evaluate(model_path, input_path, lang, format);
  } catch (const cmx::UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const cmx::DataError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 1;
}
