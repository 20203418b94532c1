#pragma once

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <memory>
#include <string>
#include <vector>

#include <json.hpp>

#include "cmx/errors.hpp"
#include "cmx/pipeline.hpp"

namespace cmx {

inline constexpr const char* kModelMagic = "CMXSENT1";
inline constexpr int kModelFormatVersion = 1;

namespace detail {

// Lossless float round-trip via hexadecimal float text.
inline std::string hexfloat(double v) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%a", v);
  return buf;
}

inline double parse_hexfloat(const std::string& s) {
  return std::strtod(s.c_str(), nullptr);
}

inline nlohmann::json doubles_to_json(const std::vector<double>& v) {
  nlohmann::json arr = nlohmann::json::array();
  for (double x : v) arr.push_back(hexfloat(x));
  return arr;
}

inline std::vector<double> doubles_from_json(const nlohmann::json& arr) {
  std::vector<double> v;
  v.reserve(arr.size());
  for (const auto& x : arr) v.push_back(parse_hexfloat(x.get<std::string>()));
  return v;
}

}  // namespace detail

// ---- feature config ----

inline nlohmann::json to_json(const FeatureConfig& c) {
  nlohmann::json weights;
  for (int g = 0; g < kNumFeatureGroups; ++g)
    weights[to_string(static_cast<FeatureGroup>(g))] = c.group_weights[g];
  return {
      {"ngram_max", c.ngram_max},
      {"group_weights", weights},
      {"use_tfidf", c.use_tfidf},
      {"lowercase_latin", c.lowercase_latin},
      {"min_df", c.min_df},
      {"emoji_threshold", c.emoji_threshold},
      {"emoji_min_support", c.emoji_min_support},
  };
}

inline FeatureConfig feature_config_from_json(const nlohmann::json& j) {
  FeatureConfig c;
  c.ngram_max = j.value("ngram_max", c.ngram_max);
  c.use_tfidf = j.value("use_tfidf", c.use_tfidf);
  c.lowercase_latin = j.value("lowercase_latin", c.lowercase_latin);
  c.min_df = j.value("min_df", c.min_df);
  c.emoji_threshold = j.value("emoji_threshold", c.emoji_threshold);
  c.emoji_min_support = j.value("emoji_min_support", c.emoji_min_support);
  if (j.contains("group_weights"))
    for (int g = 0; g < kNumFeatureGroups; ++g) {
      const std::string name = to_string(static_cast<FeatureGroup>(g));
      if (j["group_weights"].contains(name))
        c.group_weights[g] = j["group_weights"][name].get<double>();
    }
  c.validate();
  return c;
}

// ---- hyperparameters ----

inline nlohmann::json to_json(const SgdHyper& h) {
  return {{"learning_rate", h.learning_rate}, {"alpha", h.alpha},
          {"penalty", to_string(h.penalty)},  {"l1_ratio", h.l1_ratio},
          {"epochs", h.epochs}};
}

inline SgdHyper sgd_hyper_from_json(const nlohmann::json& j) {
  SgdHyper h;
  h.learning_rate = j.value("learning_rate", h.learning_rate);
  h.alpha = j.value("alpha", h.alpha);
  if (j.contains("penalty")) h.penalty = parse_penalty(j["penalty"].get<std::string>());
  h.l1_ratio = j.value("l1_ratio", h.l1_ratio);
  h.epochs = j.value("epochs", h.epochs);
  h.validate();
  return h;
}

inline nlohmann::json to_json(const LogRegHyper& h) {
  return {{"C", h.C}, {"tol", h.tol}, {"max_iter", h.max_iter}};
}

inline LogRegHyper logreg_hyper_from_json(const nlohmann::json& j) {
  LogRegHyper h;
  h.C = j.value("C", h.C);
  h.tol = j.value("tol", h.tol);
  h.max_iter = j.value("max_iter", h.max_iter);
  h.validate();
  return h;
}

inline nlohmann::json to_json(const PipelineConfig& c) {
  return {{"language", to_string(c.language)},
          {"classifier", to_string(c.classifier)},
          {"features", to_json(c.features)},
          {"sgd", to_json(c.sgd)},
          {"logreg", to_json(c.logreg)},
          {"seed", c.seed}};
}

inline PipelineConfig pipeline_config_from_json(const nlohmann::json& j) {
  PipelineConfig c;
  if (j.contains("language"))
    c.language = parse_language(j["language"].get<std::string>());
  if (j.contains("classifier"))
    c.classifier = parse_classifier(j["classifier"].get<std::string>());
  if (j.contains("features")) c.features = feature_config_from_json(j["features"]);
  if (j.contains("sgd")) c.sgd = sgd_hyper_from_json(j["sgd"]);
  if (j.contains("logreg")) c.logreg = logreg_hyper_from_json(j["logreg"]);
  c.seed = j.value("seed", c.seed);
  return c;
}

inline nlohmann::json load_json_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open file: " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw DataError(path + ": invalid JSON: " + e.what());
  }
  return j;
}

// ---- model bundle ----

inline nlohmann::json to_json(const EmojiLexicon& lex) {
  nlohmann::json entries = nlohmann::json::array();
  for (const auto& [emoji, e] : lex.entries) {
    nlohmann::json entry = {{"emoji", emoji},
                            {"pos", e.count_positive},
                            {"neg", e.count_negative},
                            {"total", e.count_total}};
    if (e.base_score) entry["base_score"] = detail::hexfloat(*e.base_score);
    if (e.inferred_polarity) entry["inferred"] = to_string(*e.inferred_polarity);
    entries.push_back(entry);
  }
  return {{"threshold", detail::hexfloat(lex.polarity_threshold)},
          {"min_support", lex.min_support},
          {"entries", entries}};
}

inline Polarity parse_polarity(const std::string& s) {
  if (s == "positive") return Polarity::Positive;
  if (s == "negative") return Polarity::Negative;
  if (s == "neutral") return Polarity::Neutral;
  throw DataError("unknown polarity '" + s + "'");
}

inline EmojiLexicon emoji_lexicon_from_json(const nlohmann::json& j) {
  EmojiLexicon lex;
  lex.polarity_threshold = detail::parse_hexfloat(j["threshold"].get<std::string>());
  lex.min_support = j["min_support"].get<long>();
  for (const auto& entry : j["entries"]) {
    EmojiEntry e;
    e.count_positive = entry["pos"].get<long>();
    e.count_negative = entry["neg"].get<long>();
    e.count_total = entry["total"].get<long>();
    if (entry.contains("base_score"))
      e.base_score = detail::parse_hexfloat(entry["base_score"].get<std::string>());
    if (entry.contains("inferred"))
      e.inferred_polarity = parse_polarity(entry["inferred"].get<std::string>());
    lex.entries.emplace(entry["emoji"].get<std::string>(), e);
  }
  return lex;
}

inline nlohmann::json to_json(const CharNgramLangModel& m) {
  nlohmann::json tags;
  for (LangTag tag : {LangTag::Ta, LangTag::Ml, LangTag::En}) {
    nlohmann::json counts = nlohmann::json::object();
    for (const auto& [gram, count] : m.counts_for(tag)) counts[gram] = count;
    tags[to_string(tag)] = {{"counts", counts}, {"total", m.total_for(tag)}};
  }
  nlohmann::json vocab = nlohmann::json::array();
  for (const std::string& g : m.vocab()) vocab.push_back(g);
  return {{"tags", tags}, {"vocab", vocab}};
}

inline CharNgramLangModel langid_from_json(const nlohmann::json& j) {
  CharNgramLangModel m;
  for (LangTag tag : {LangTag::Ta, LangTag::Ml, LangTag::En}) {
    const auto& tj = j["tags"][to_string(tag)];
    auto& counts = m.counts_for(tag);
    for (const auto& [gram, count] : tj["counts"].items())
      counts[gram] = count.get<long>();
    m.set_total(tag, tj["total"].get<long>());
  }
  for (const auto& g : j["vocab"]) m.add_vocab(g.get<std::string>());
  return m;
}

inline nlohmann::json to_json(const Vocabulary& vocab) {
  // feature strings in column order; groups are recoverable from prefixes
  std::vector<std::string> features(vocab.n_columns);
  for (const auto& [feature, col] : vocab.index) features[col] = feature;
  nlohmann::json j = {{"features", features}, {"n_columns", vocab.n_columns}};
  if (!vocab.idf.empty()) j["idf"] = detail::doubles_to_json(vocab.idf);
  return j;
}

inline Vocabulary vocabulary_from_json(const nlohmann::json& j) {
  Vocabulary vocab;
  vocab.n_columns = j["n_columns"].get<std::uint32_t>();
  std::uint32_t col = 0;
  for (const auto& f : j["features"]) {
    const std::string feature = f.get<std::string>();
    vocab.groups.push_back(group_of(feature));
    vocab.index.emplace(feature, col++);
  }
  if (j.contains("idf")) vocab.idf = detail::doubles_from_json(j["idf"]);
  if (col != vocab.n_columns) throw DataError("model file: vocabulary size mismatch");
  return vocab;
}

inline nlohmann::json to_json(const LinearModel& m, Language lang) {
  nlohmann::json labels = nlohmann::json::array();
  for (SentimentLabel l : m.labels) labels.push_back(to_string(l, lang));
  nlohmann::json weights = nlohmann::json::array();
  for (const auto& row : m.weights) weights.push_back(detail::doubles_to_json(row));
  return {{"kind", m.kind == ModelKind::SgdOvr ? "sgd_ovr" : "logreg_multinomial"},
          {"labels", labels},
          {"n_columns", m.n_columns},
          {"weights", weights},
          {"intercepts", detail::doubles_to_json(m.intercepts)},
          {"converged", m.converged}};
}

inline LinearModel linear_model_from_json(const nlohmann::json& j) {
  LinearModel m;
  const std::string kind = j["kind"].get<std::string>();
  if (kind == "sgd_ovr") m.kind = ModelKind::SgdOvr;
  else if (kind == "logreg_multinomial") m.kind = ModelKind::LogRegMultinomial;
  else throw DataError("model file: unknown model kind '" + kind + "'");
  for (const auto& l : j["labels"]) m.labels.push_back(parse_label(l.get<std::string>()));
  m.n_columns = j["n_columns"].get<std::uint32_t>();
  for (const auto& row : j["weights"])
    m.weights.push_back(detail::doubles_from_json(row));
  m.intercepts = detail::doubles_from_json(j["intercepts"]);
  m.converged = j.value("converged", true);
  if (m.weights.size() != m.labels.size() ||
      m.intercepts.size() != m.labels.size())
    throw DataError("model file: weight shape mismatch");
  for (const auto& row : m.weights)
    if (row.size() != m.n_columns)
      throw DataError("model file: weight row length mismatch");
  return m;
}

inline nlohmann::json to_json(const TranslitTable& t) {
  nlohmann::json rules = nlohmann::json::array();
  for (const auto& [roman, native] : t.rules())
    rules.push_back({{"roman", roman}, {"native", native}});
  return {{"script", to_string(t.script())},
          {"version", t.version()},
          {"rules", rules}};
}

inline TranslitTable translit_from_json(const nlohmann::json& j) {
  std::vector<std::pair<std::string, std::string>> rules;
  for (const auto& r : j["rules"])
    rules.emplace_back(r["roman"].get<std::string>(), r["native"].get<std::string>());
  return TranslitTable(parse_language(j["script"].get<std::string>()),
                       j["version"].get<std::string>(), std::move(rules));
}

inline nlohmann::json to_json(const IndicCharMap& m) {
  nlohmann::json codes = nlohmann::json::object();
  for (char32_t o = 0; o < 0x80; ++o)
    if (m.at_offset(o) != '0') {
      char hex[8];
      std::snprintf(hex, sizeof hex, "%02x", static_cast<unsigned>(o));
      codes[hex] = std::string(1, m.at_offset(o));
    }
  return {{"version", m.version()}, {"codes", codes}};
}

inline IndicCharMap char_map_from_json(const nlohmann::json& j) {
  IndicCharMap m;
  m.set_version(j["version"].get<std::string>());
  for (const auto& [hex, symbol] : j["codes"].items())
    m.set(static_cast<char32_t>(std::stoul(hex, nullptr, 16)),
          symbol.get<std::string>()[0]);
  return m;
}

inline void save_model(const std::string& path, const TrainedPipeline& pipe) {
  nlohmann::json j = {
      {"magic", kModelMagic},
      {"format_version", kModelFormatVersion},
      {"config", to_json(pipe.config)},
      {"lexicon", to_json(pipe.lexicon)},
      {"langid", to_json(pipe.langid)},
      {"translit", to_json(*pipe.translit)},
      {"char_map", to_json(pipe.char_map)},
      {"vocab", to_json(pipe.vocab)},
      {"model", to_json(pipe.model, pipe.config.language)},
  };
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot open model file for writing: " + path);
  out << j.dump(1) << "\n";
}

inline TrainedPipeline load_model(const std::string& path) {
  const nlohmann::json j = load_json_file(path);
  if (!j.contains("magic") || j["magic"].get<std::string>() != kModelMagic)
    throw DataError(path + ": not a model file (bad magic)");
  if (j["format_version"].get<int>() != kModelFormatVersion)
    throw DataError(path + ": unsupported model format version " +
                    std::to_string(j["format_version"].get<int>()));
  TrainedPipeline pipe;
  pipe.config = pipeline_config_from_json(j["config"]);
  pipe.lexicon = emoji_lexicon_from_json(j["lexicon"]);
  pipe.langid = langid_from_json(j["langid"]);
  pipe.translit = std::make_shared<const TranslitTable>(translit_from_json(j["translit"]));
  pipe.char_map = char_map_from_json(j["char_map"]);
  pipe.vocab = vocabulary_from_json(j["vocab"]);
  pipe.model = linear_model_from_json(j["model"]);
  return pipe;
}

}  // namespace cmx
