#pragma once

#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "cmx/corpus.hpp"
#include "cmx/errors.hpp"
#include "cmx/normalize.hpp"
#include "cmx/utf8.hpp"

namespace cmx {

enum class Polarity { Positive, Negative, Neutral };

inline std::string to_string(Polarity p) {
  switch (p) {
    case Polarity::Positive: return "positive";
    case Polarity::Negative: return "negative";
    case Polarity::Neutral: return "neutral";
  }
  return "?";
}

struct EmojiEntry {
  std::optional<double> base_score;          // from the external lexicon
  std::optional<Polarity> inferred_polarity; // from training frequencies
  long count_positive = 0;
  long count_negative = 0;
  long count_total = 0;

  // Base lexicon wins over inference; inference fills gaps only.
  std::optional<Polarity> polarity(double threshold) const {
    if (base_score) {
      if (*base_score > threshold) return Polarity::Positive;
      if (*base_score < -threshold) return Polarity::Negative;
      return Polarity::Neutral;
    }
    return inferred_polarity;
  }
};

struct EmojiLexicon {
  std::map<std::string, EmojiEntry> entries;  // keyed by emoji (UTF-8)
  double polarity_threshold = 0.1;
  long min_support = 3;

  std::optional<Polarity> polarity_of(const std::string& emoji) const {
    auto it = entries.find(emoji);
    if (it == entries.end()) return std::nullopt;
    return it->second.polarity(polarity_threshold);
  }
};

// All emoji characters in order of appearance, duplicates preserved.
inline std::vector<std::string> extract_emoji(std::string_view text) {
  std::vector<std::string> out;
  std::size_t pos = 0;
  while (pos < text.size()) {
    const char32_t cp = utf8::decode_next(text, pos);
    if (is_emoji(cp)) out.push_back(utf8::encode_one(cp));
  }
  return out;
}

// CSV rows `emoji,score` with score in [-1,1].
inline EmojiLexicon load_base_lexicon(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open emoji lexicon: " + path);
  EmojiLexicon lexicon;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    const std::size_t comma = line.rfind(',');
    if (comma == std::string::npos || comma == 0)
      throw DataError(path + ": row " + std::to_string(lineno) +
                      ": expected emoji,score");
    const std::string emoji = line.substr(0, comma);
    double score;
    try {
      score = std::stod(line.substr(comma + 1));
    } catch (const std::exception&) {
      throw DataError(path + ": row " + std::to_string(lineno) +
                      ": unparseable score");
    }
    if (score < -1.0 || score > 1.0)
      throw DataError(path + ": row " + std::to_string(lineno) +
                      ": score outside [-1,1]");
    lexicon.entries[emoji].base_score = score;
  }
  return lexicon;
}

// Frequency-based polarity for emoji missing from the base lexicon:
// s = (pos - neg) / total over labeled training docs; docs with other labels
// count toward the total only, diluting confidence.
inline EmojiLexicon infer_lexicon(const LabeledCorpus& train,
                                  EmojiLexicon base, long min_support,
                                  double threshold) {
  EmojiLexicon lexicon = std::move(base);
  lexicon.min_support = min_support;
  lexicon.polarity_threshold = threshold;
  for (const Record& record : train.records) {
    if (!record.label) continue;
    for (const std::string& e : extract_emoji(record.text)) {
      EmojiEntry& entry = lexicon.entries[e];
      ++entry.count_total;
      if (*record.label == SentimentLabel::Positive) ++entry.count_positive;
      else if (*record.label == SentimentLabel::Negative)
        ++entry.count_negative;
    }
  }
  for (auto& [emoji, entry] : lexicon.entries) {
    if (entry.count_total < min_support) continue;
    const double s =
        static_cast<double>(entry.count_positive - entry.count_negative) /
        static_cast<double>(entry.count_total);
    if (s > threshold) entry.inferred_polarity = Polarity::Positive;
    else if (s < -threshold) entry.inferred_polarity = Polarity::Negative;
    else entry.inferred_polarity = Polarity::Neutral;
  }
  return lexicon;
}

// `em:<emoji>` per occurrence plus `ems:<polarity>` when the polarity is
// known; counts matter, so repeats are emitted repeatedly.
inline std::vector<std::string> emoji_features(std::string_view text,
                                               const EmojiLexicon& lexicon) {
  std::vector<std::string> features;
  for (const std::string& e : extract_emoji(text)) {
    features.push_back("em:" + e);
    if (auto p = lexicon.polarity_of(e))
      features.push_back("ems:" + to_string(*p));
  }
  return features;
}

}  // namespace cmx
