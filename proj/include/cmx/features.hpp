#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "cmx/corpus.hpp"
#include "cmx/emoji.hpp"
#include "cmx/errors.hpp"
#include "cmx/langid.hpp"
#include "cmx/normalize.hpp"
#include "cmx/soundex.hpp"
#include "cmx/translit.hpp"

namespace cmx {

enum class FeatureGroup { Ngrams, Soundex, Emoji, Lang, Length };

inline constexpr int kNumFeatureGroups = 5;

inline std::string to_string(FeatureGroup g) {
  switch (g) {
    case FeatureGroup::Ngrams: return "ngrams";
    case FeatureGroup::Soundex: return "soundex";
    case FeatureGroup::Emoji: return "emoji";
    case FeatureGroup::Lang: return "lang";
    case FeatureGroup::Length: return "length";
  }
  return "?";
}

// Every feature string carries its group in its namespace prefix, so the
// column space partitions cleanly into groups.
inline FeatureGroup group_of(std::string_view feature) {
  if (feature.starts_with("ng:")) return FeatureGroup::Ngrams;
  if (feature.starts_with("sx:")) return FeatureGroup::Soundex;
  if (feature.starts_with("em:") || feature.starts_with("ems:"))
    return FeatureGroup::Emoji;
  if (feature.starts_with("lang:")) return FeatureGroup::Lang;
  if (feature.starts_with("len:")) return FeatureGroup::Length;
  return FeatureGroup::Ngrams;
}

struct FeatureConfig {
  int ngram_max = 4;  // word n-grams 1..ngram_max
  std::array<double, kNumFeatureGroups> group_weights{1.0, 1.0, 1.0, 1.0, 1.0};
  bool use_tfidf = true;
  bool lowercase_latin = true;
  int min_df = 1;
  double emoji_threshold = 0.1;
  long emoji_min_support = 3;

  double weight_of(FeatureGroup g) const {
    return group_weights[static_cast<int>(g)];
  }
  void set_weight(FeatureGroup g, double w) {
    group_weights[static_cast<int>(g)] = w;
  }

  void validate() const {
    if (ngram_max < 1 || ngram_max > 4)
      throw UsageError("feature config: ngram_max must lie in [1,4]");
    for (double w : group_weights)
      if (w < 0.0) throw UsageError("feature config: negative group weight");
    if (min_df < 1) throw UsageError("feature config: min_df must be >= 1");
  }
};

struct Vocabulary {
  std::map<std::string, std::uint32_t> index;  // feature string -> column
  std::vector<double> idf;                     // empty unless tf-idf
  std::vector<FeatureGroup> groups;            // per column
  std::uint32_t n_columns = 0;
};

struct FeatureVector {
  // (column, value) pairs, strictly increasing columns, no zero values.
  std::vector<std::pair<std::uint32_t, double>> entries;
};

// Shared immutable context the feature extractors need.
struct FeatureExtractors {
  const EmojiLexicon* lexicon = nullptr;
  const CharNgramLangModel* langid = nullptr;
  const TranslitTable* translit = nullptr;
  const IndicCharMap* char_map = nullptr;
  Language language = Language::Tamil;
};

// All namespaced feature strings of one document, with multiplicity.
inline std::vector<std::string> featurize_doc(std::string_view raw_text,
                                              const FeatureConfig& config,
                                              const FeatureExtractors& ext) {
  const TokenizedDoc doc = tokenize_doc(raw_text);
  std::vector<std::string> features;

  // word n-grams over (optionally case-folded) tokens
  std::vector<std::string> gram_tokens;
  gram_tokens.reserve(doc.tokens.size());
  for (const std::string& tok : doc.tokens)
    gram_tokens.push_back(config.lowercase_latin ? ascii_lower(tok) : tok);
  for (int n = 1; n <= config.ngram_max; ++n) {
    if (gram_tokens.size() < static_cast<std::size_t>(n)) break;
    for (std::size_t i = 0; i + n <= gram_tokens.size(); ++i) {
      std::string gram = "ng:" + gram_tokens[i];
      for (int j = 1; j < n; ++j) gram += " " + gram_tokens[i + j];
      features.push_back(std::move(gram));
    }
  }

  // soundex-harmonized tokens (Soundex sees the original casing)
  for (const std::string& tok : doc.tokens) {
    std::string sx =
        harmonize_token(tok, ext.language, *ext.translit, *ext.char_map);
    if (sx.starts_with("sx:")) features.push_back(std::move(sx));
  }

  // emoji + polarity
  for (std::string& f : emoji_features(doc.normalized_text, *ext.lexicon))
    features.push_back(std::move(f));

  // language tag and length bucket
  features.push_back(
      "lang:" + to_string(predict_language(doc.normalized_text, *ext.langid).tag));
  features.push_back("len:" + std::to_string(doc.length_bucket));
  return features;
}

// Sorted union of training feature strings; idf_c = ln((1+N)/(1+df_c)) + 1.
inline Vocabulary build_vocab(const LabeledCorpus& train,
                              const FeatureConfig& config,
                              const FeatureExtractors& ext) {
  if (train.empty()) throw UsageError("build_vocab: empty corpus");
  config.validate();
  std::map<std::string, std::uint32_t> df;
  for (const Record& record : train.records) {
    std::vector<std::string> feats = featurize_doc(record.text, config, ext);
    std::sort(feats.begin(), feats.end());
    feats.erase(std::unique(feats.begin(), feats.end()), feats.end());
    for (const std::string& f : feats) ++df[f];
  }
  Vocabulary vocab;
  const double n_docs = static_cast<double>(train.size());
  for (const auto& [feature, count] : df) {
    if (count < static_cast<std::uint32_t>(config.min_df)) continue;
    vocab.index.emplace(feature, vocab.n_columns++);
    vocab.groups.push_back(group_of(feature));
    if (config.use_tfidf)
      vocab.idf.push_back(std::log((1.0 + n_docs) / (1.0 + count)) + 1.0);
  }
  return vocab;
}

// value(c) = count (x idf) x group weight; L2-normalized under tf-idf.
inline FeatureVector vectorize(const std::vector<std::string>& features,
                               const Vocabulary& vocab,
                               const FeatureConfig& config) {
  std::map<std::uint32_t, double> counts;
  for (const std::string& f : features) {
    auto it = vocab.index.find(f);
    if (it != vocab.index.end()) counts[it->second] += 1.0;
  }
  FeatureVector vec;
  vec.entries.reserve(counts.size());
  double norm_sq = 0.0;
  for (const auto& [col, count] : counts) {
    double value = count;
    if (config.use_tfidf) value *= vocab.idf[col];
    value *= config.weight_of(vocab.groups[col]);
    if (value == 0.0) continue;
    vec.entries.emplace_back(col, value);
    norm_sq += value * value;
  }
  if (config.use_tfidf && norm_sq > 0.0) {
    const double inv = 1.0 / std::sqrt(norm_sq);
    for (auto& [col, value] : vec.entries) value *= inv;
  }
  return vec;
}

inline FeatureVector vectorize_doc(std::string_view raw_text,
                                   const Vocabulary& vocab,
                                   const FeatureConfig& config,
                                   const FeatureExtractors& ext) {
  return vectorize(featurize_doc(raw_text, config, ext), vocab, config);
}

}  // namespace cmx
