#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "cmx/errors.hpp"
#include "cmx/normalize.hpp"
#include "cmx/utf8.hpp"

namespace cmx {

enum class LangTag { Ta, Ml, En, Other };

inline std::string to_string(LangTag t) {
  switch (t) {
    case LangTag::Ta: return "ta";
    case LangTag::Ml: return "ml";
    case LangTag::En: return "en";
    case LangTag::Other: return "other";
  }
  return "?";
}

struct LanguageTag {
  LangTag tag = LangTag::Other;
  double confidence = 0.0;
};

// Add-one-smoothed character 3-gram multinomial model over Romanized text.
// Counting is order-free, so training is deterministic.
class CharNgramLangModel {
 public:
  using Counts = std::map<std::string, long>;

  void add_sample(std::string_view text, LangTag tag) {
    Counts& counts = counts_for(tag);
    for (std::string& g : trigrams(text)) {
      ++counts[g];
      ++totals_[static_cast<int>(tag)];
      vocab_.insert(std::move(g));
    }
  }

  bool trained() const {
    int tags = 0;
    for (long t : totals_)
      if (t > 0) ++tags;
    return tags >= 2;
  }

  // Mean per-trigram log-likelihood of `text` under `tag`.
  double score(std::string_view text, LangTag tag) const {
    const std::vector<std::string> grams = trigrams(text);
    if (grams.empty()) return 0.0;
    const Counts& counts = counts_for(tag);
    const double total = static_cast<double>(totals_[static_cast<int>(tag)]);
    const double vocab = static_cast<double>(vocab_.size());
    double ll = 0.0;
    for (const std::string& g : grams) {
      auto it = counts.find(g);
      const double c = it == counts.end() ? 0.0 : static_cast<double>(it->second);
      ll += std::log((c + 1.0) / (total + vocab));
    }
    return ll / static_cast<double>(grams.size());
  }

  const Counts& counts_for(LangTag tag) const {
    return counts_[static_cast<int>(tag)];
  }
  Counts& counts_for(LangTag tag) { return counts_[static_cast<int>(tag)]; }
  long total_for(LangTag tag) const { return totals_[static_cast<int>(tag)]; }
  void set_total(LangTag tag, long n) { totals_[static_cast<int>(tag)] = n; }
  const std::set<std::string>& vocab() const { return vocab_; }
  void add_vocab(std::string g) { vocab_.insert(std::move(g)); }

  // Letters-and-spaces trigrams of the case-folded text, space padded.
  static std::vector<std::string> trigrams(std::string_view text) {
    std::u32string chars;
    chars.push_back(U' ');
    std::size_t pos = 0;
    bool prev_space = true;
    while (pos < text.size()) {
      char32_t cp = utf8::decode_next(text, pos);
      if (cp >= 'A' && cp <= 'Z') cp += 'a' - 'A';
      const bool keep = (cp >= 'a' && cp <= 'z');
      if (keep) {
        chars.push_back(cp);
        prev_space = false;
      } else if (!prev_space) {
        chars.push_back(U' ');
        prev_space = true;
      }
    }
    if (!prev_space) chars.push_back(U' ');
    std::vector<std::string> grams;
    if (chars.size() < 3) return grams;
    for (std::size_t i = 0; i + 3 <= chars.size(); ++i)
      grams.push_back(utf8::encode(chars.substr(i, 3)));
    return grams;
  }

 private:
  std::array<Counts, 3> counts_;  // ta, ml, en
  std::array<long, 3> totals_{};
  std::set<std::string> vocab_;
};

inline CharNgramLangModel train_langid(
    const std::vector<std::pair<std::string, LangTag>>& samples) {
  CharNgramLangModel model;
  for (const auto& [text, tag] : samples) {
    if (tag == LangTag::Other)
      throw UsageError("train_langid: cannot train on tag 'other'");
    model.add_sample(text, tag);
  }
  if (!model.trained())
    throw UsageError("train_langid: need samples from at least 2 tags");
  return model;
}

// Stage 1: script vote — >= 30% of letters in an Indic block decides.
// Stage 2: char-3-gram scoring over {ta, ml, en}; a top-two probability gap
// below 0.05 yields 'other'.
inline LanguageTag predict_language(std::string_view text,
                                    const CharNgramLangModel& model) {
  std::size_t tamil = 0, malayalam = 0, letters = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    const char32_t cp = utf8::decode_next(text, pos);
    const ScriptClass cls = classify_char(cp);
    if (cls == ScriptClass::Tamil) {
      ++tamil;
      ++letters;
    } else if (cls == ScriptClass::Malayalam) {
      ++malayalam;
      ++letters;
    } else if (cls == ScriptClass::Latin) {
      ++letters;
    }
  }
  if (letters > 0) {
    const double ta_frac = static_cast<double>(tamil) / letters;
    const double ml_frac = static_cast<double>(malayalam) / letters;
    if (ta_frac >= 0.3 && ta_frac >= ml_frac) return {LangTag::Ta, ta_frac};
    if (ml_frac >= 0.3) return {LangTag::Ml, ml_frac};
  }
  const std::vector<std::string> grams = CharNgramLangModel::trigrams(text);
  if (grams.empty()) return {LangTag::Other, 0.0};
  constexpr LangTag kTags[] = {LangTag::Ta, LangTag::Ml, LangTag::En};
  double scores[3];
  double max_score = -1e300;
  for (int i = 0; i < 3; ++i) {
    scores[i] = model.score(text, kTags[i]);
    max_score = std::max(max_score, scores[i]);
  }
  double z = 0.0;
  for (double& s : scores) {
    s = std::exp(s - max_score);
    z += s;
  }
  int best = 0, second = 1;
  for (int i = 1; i < 3; ++i)
    if (scores[i] > scores[best]) best = i;
  for (int i = 0; i < 3; ++i)
    if (i != best && (second == best || scores[i] > scores[second])) second = i;
  const double p_best = scores[best] / z;
  const double p_second = scores[second] / z;
  if (p_best - p_second < 0.05) return {LangTag::Other, p_best};
  return {kTags[best], p_best};
}

}  // namespace cmx
