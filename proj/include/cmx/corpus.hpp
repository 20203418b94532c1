#pragma once

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <numeric>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "cmx/errors.hpp"

namespace cmx {

enum class Language { Tamil, Malayalam };

inline std::string to_string(Language lang) {
  return lang == Language::Tamil ? "ta" : "ml";
}

inline Language parse_language(std::string_view s) {
  if (s == "ta") return Language::Tamil;
  if (s == "ml") return Language::Malayalam;
  throw UsageError("unknown language tag '" + std::string(s) + "' (want ta|ml)");
}

// Five-way sentiment category of the shared-task corpora.
enum class SentimentLabel {
  Positive,
  Negative,
  MixedFeelings,
  UnknownState,
  NotTargetLanguage,
};

inline constexpr int kNumLabels = 5;

inline constexpr SentimentLabel kAllLabels[kNumLabels] = {
    SentimentLabel::Positive,       SentimentLabel::Negative,
    SentimentLabel::MixedFeelings,  SentimentLabel::UnknownState,
    SentimentLabel::NotTargetLanguage,
};

// NotTargetLanguage serializes per corpus language: not-tamil / not-malayalam.
inline std::string to_string(SentimentLabel label, Language lang) {
  switch (label) {
    case SentimentLabel::Positive: return "positive";
    case SentimentLabel::Negative: return "negative";
    case SentimentLabel::MixedFeelings: return "mixed_feelings";
    case SentimentLabel::UnknownState: return "unknown_state";
    case SentimentLabel::NotTargetLanguage:
      return lang == Language::Tamil ? "not-tamil" : "not-malayalam";
  }
  return "?";
}

inline std::string ascii_lower(std::string_view s) {
  std::string out(s);
  for (char& c : out)
    if (c >= 'A' && c <= 'Z') c += 'a' - 'A';
  return out;
}

// Case-insensitive; accepts both not-tamil and not-malayalam spellings.
inline std::optional<SentimentLabel> try_parse_label(std::string_view s) {
  const std::string t = ascii_lower(s);
  if (t == "positive") return SentimentLabel::Positive;
  if (t == "negative") return SentimentLabel::Negative;
  if (t == "mixed_feelings") return SentimentLabel::MixedFeelings;
  if (t == "unknown_state") return SentimentLabel::UnknownState;
  if (t == "not-tamil" || t == "not-malayalam" || t == "not_tamil" ||
      t == "not_malayalam")
    return SentimentLabel::NotTargetLanguage;
  return std::nullopt;
}

inline SentimentLabel parse_label(std::string_view s) {
  if (auto l = try_parse_label(s)) return *l;
  throw DataError("unknown label string '" + std::string(s) + "'");
}

struct Record {
  std::string text;
  std::optional<SentimentLabel> label;
};

struct LabeledCorpus {
  Language language = Language::Tamil;
  std::vector<Record> records;

  std::size_t size() const { return records.size(); }
  bool empty() const { return records.empty(); }
};

namespace detail {
inline std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' ||
                        s.front() == '\r' || s.front() == '\n'))
    s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' ||
                        s.back() == '\r' || s.back() == '\n'))
    s.remove_suffix(1);
  return s;
}
}  // namespace detail

// Parses `text<TAB>label` lines (or bare text when has_labels is false).
// Preserves file order. A leading `text<TAB>category` header is skipped.
inline LabeledCorpus parse_tsv(std::istream& in, Language language,
                               bool has_labels,
                               const std::string& source = "<stream>") {
  LabeledCorpus corpus;
  corpus.language = language;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string_view view = detail::trim(line);
    if (view.empty()) continue;
    const std::size_t tab1 = view.find('\t');
    if (has_labels) {
      if (tab1 == std::string_view::npos)
        throw DataError(source + ": line " + std::to_string(lineno) +
                        ": expected 2 columns");
      if (view.find('\t', tab1 + 1) != std::string_view::npos)
        throw DataError(source + ": line " + std::to_string(lineno) +
                        ": expected 2 columns, got more");
      std::string_view text = detail::trim(view.substr(0, tab1));
      std::string_view label = detail::trim(view.substr(tab1 + 1));
      if (lineno == 1 && ascii_lower(text) == "text" &&
          ascii_lower(label) == "category")
        continue;
      if (text.empty())
        throw DataError(source + ": line " + std::to_string(lineno) +
                        ": empty text field");
      corpus.records.push_back({std::string(text), parse_label(label)});
    } else {
      if (tab1 != std::string_view::npos)
        throw DataError(source + ": line " + std::to_string(lineno) +
                        ": expected 1 column");
      if (lineno == 1 && ascii_lower(view) == "text") continue;
      corpus.records.push_back({std::string(view), std::nullopt});
    }
  }
  return corpus;
}

inline LabeledCorpus load_tsv(const std::string& path, Language language,
                              bool has_labels) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open file: " + path);
  return parse_tsv(in, language, has_labels, path);
}

inline void write_tsv(std::ostream& out, const LabeledCorpus& corpus) {
  for (const Record& r : corpus.records) {
    out << r.text;
    if (r.label) out << '\t' << to_string(*r.label, corpus.language);
    out << '\n';
  }
}

inline void write_tsv(const std::string& path, const LabeledCorpus& corpus) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot open file for writing: " + path);
  write_tsv(out, corpus);
}

// Deterministic shuffle-and-split. First part gets round(fraction * N).
inline std::pair<LabeledCorpus, LabeledCorpus> split(const LabeledCorpus& corpus,
                                                     double fraction,
                                                     std::uint64_t seed) {
  if (corpus.empty()) throw UsageError("split: corpus is empty");
  if (!(fraction > 0.0 && fraction < 1.0))
    throw UsageError("split: fraction must lie in (0,1)");
  std::vector<std::size_t> order(corpus.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::mt19937_64 rng(seed);
  std::shuffle(order.begin(), order.end(), rng);
  const auto n_first = static_cast<std::size_t>(
      std::llround(fraction * static_cast<double>(corpus.size())));
  LabeledCorpus a, b;
  a.language = b.language = corpus.language;
  for (std::size_t i = 0; i < order.size(); ++i)
    (i < n_first ? a : b).records.push_back(corpus.records[order[i]]);
  return {std::move(a), std::move(b)};
}

}  // namespace cmx
