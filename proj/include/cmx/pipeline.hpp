#pragma once

#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "cmx/corpus.hpp"
#include "cmx/emoji.hpp"
#include "cmx/features.hpp"
#include "cmx/langid.hpp"
#include "cmx/metrics.hpp"
#include "cmx/model.hpp"
#include "cmx/normalize.hpp"
#include "cmx/soundex.hpp"
#include "cmx/translit.hpp"

namespace cmx {

enum class ClassifierKind { Sgd, LogReg };

inline std::string to_string(ClassifierKind k) {
  return k == ClassifierKind::Sgd ? "sgd" : "logreg";
}

inline ClassifierKind parse_classifier(std::string_view s) {
  if (s == "sgd") return ClassifierKind::Sgd;
  if (s == "logreg") return ClassifierKind::LogReg;
  throw UsageError("unknown classifier '" + std::string(s) + "' (want sgd|logreg)");
}

struct PipelineConfig {
  Language language = Language::Tamil;
  ClassifierKind classifier = ClassifierKind::Sgd;
  FeatureConfig features;
  SgdHyper sgd;
  LogRegHyper logreg;
  std::uint64_t seed = 0;
};

// Resource tables the pipeline trains and predicts with. Defaults are the
// builtin versioned tables; the CLI can override from files.
struct Resources {
  std::shared_ptr<const TranslitTable> translit;
  IndicCharMap char_map;
  std::optional<EmojiLexicon> base_lexicon;

  static Resources builtin(Language lang) {
    Resources r;
    r.translit =
        std::make_shared<const TranslitTable>(builtin_translit_table(lang));
    r.char_map = builtin_indic_char_map();
    return r;
  }
};

// Small embedded English sample for bootstrapping the language identifier.
inline const std::vector<std::string>& english_seed_phrases() {
  static const std::vector<std::string> phrases = {
      "the movie was really good",      "i love this song so much",
      "what a great performance",       "this is the best film ever",
      "waiting for the next part",      "who else is watching this",
      "the story line was very weak",   "amazing acting by everyone",
      "please like and subscribe",      "thanks for sharing this video",
      "cannot wait for the release",    "the music is simply beautiful",
      "such a waste of time",           "one of my favourite movies",
      "the trailer looks awesome",      "watching this again and again",
      "best wishes to the whole team",  "the direction was top class",
      "nobody can replace this actor",  "feeling proud of our industry",
      "absolutely loved every minute",  "the second half was boring",
      "my most awaited movie this year", "great work keep it up",
      "the songs are stuck in my head", "this deserves an award",
      "worst movie i have ever seen",   "full support from my side",
      "the visuals are stunning",       "everyone should watch this once",
  };
  return phrases;
}

// Langid bootstrap: Romanized in-language comments from the training corpus
// (anything not labeled not-target-language and written in Latin script)
// plus the embedded English seed list.
inline CharNgramLangModel bootstrap_langid(const LabeledCorpus& train) {
  std::vector<std::pair<std::string, LangTag>> samples;
  const LangTag own =
      train.language == Language::Tamil ? LangTag::Ta : LangTag::Ml;
  for (const Record& record : train.records) {
    if (record.label && *record.label == SentimentLabel::NotTargetLanguage)
      continue;
    const ScriptProfile profile = detect_script(record.text);
    if (profile.dominant == ScriptClass::Latin)
      samples.emplace_back(record.text, own);
  }
  for (const std::string& phrase : english_seed_phrases())
    samples.emplace_back(phrase, LangTag::En);
  return train_langid(samples);
}

struct TrainedPipeline {
  PipelineConfig config;
  EmojiLexicon lexicon;
  CharNgramLangModel langid;
  std::shared_ptr<const TranslitTable> translit;
  IndicCharMap char_map;
  Vocabulary vocab;
  LinearModel model;

  FeatureExtractors extractors() const {
    FeatureExtractors ext;
    ext.lexicon = &lexicon;
    ext.langid = &langid;
    ext.translit = translit.get();
    ext.char_map = &char_map;
    ext.language = config.language;
    return ext;
  }

  Prediction predict_text(std::string_view text) const {
    return predict(model,
                   vectorize_doc(text, vocab, config.features, extractors()));
  }

  EvalReport evaluate_corpus(const LabeledCorpus& corpus) const {
    std::vector<SentimentLabel> gold, pred;
    for (const Record& record : corpus.records) {
      if (!record.label) throw DataError("evaluate: corpus is unlabeled");
      gold.push_back(*record.label);
      pred.push_back(predict_text(record.text).label);
    }
    return evaluate(gold, pred);
  }
};

// Trains everything from the training corpus alone: emoji lexicon, language
// identifier, vocabulary, then the chosen classifier.
inline TrainedPipeline train_pipeline(const LabeledCorpus& train,
                                      const PipelineConfig& config,
                                      const Resources& resources) {
  if (train.empty()) throw UsageError("train_pipeline: empty training corpus");
  config.features.validate();

  TrainedPipeline pipe;
  pipe.config = config;
  pipe.translit = resources.translit
                      ? resources.translit
                      : std::make_shared<const TranslitTable>(
                            builtin_translit_table(config.language));
  pipe.char_map = resources.char_map;
  pipe.lexicon = infer_lexicon(
      train, resources.base_lexicon.value_or(EmojiLexicon{}),
      config.features.emoji_min_support, config.features.emoji_threshold);
  pipe.langid = bootstrap_langid(train);

  const FeatureExtractors ext = pipe.extractors();
  pipe.vocab = build_vocab(train, config.features, ext);

  std::vector<FeatureVector> X;
  std::vector<SentimentLabel> y;
  X.reserve(train.size());
  for (const Record& record : train.records) {
    if (!record.label) throw DataError("train_pipeline: unlabeled record");
    X.push_back(vectorize_doc(record.text, pipe.vocab, config.features, ext));
    y.push_back(*record.label);
  }

  if (config.classifier == ClassifierKind::Sgd) {
    SgdHyper hyper = config.sgd;
    hyper.shuffle_seed = config.seed;
    pipe.model = train_sgd(X, y, pipe.vocab.n_columns, hyper);
  } else {
    pipe.model = train_logreg(X, y, pipe.vocab.n_columns, config.logreg);
  }
  return pipe;
}

}  // namespace cmx
