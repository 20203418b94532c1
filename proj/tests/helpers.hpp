#pragma once

#include <sstream>
#include <string>

#include "cmx/corpus.hpp"
#include "cmx/pipeline.hpp"

namespace cmxtest {

inline std::string fixture(const std::string& name) {
  return std::string(CMX_FIXTURE_DIR) + "/" + name;
}

inline cmx::LabeledCorpus corpus_from_string(const std::string& tsv,
                                             cmx::Language lang = cmx::Language::Tamil,
                                             bool has_labels = true) {
  std::istringstream in(tsv);
  return cmx::parse_tsv(in, lang, has_labels);
}

inline cmx::PipelineConfig quick_config(
    cmx::ClassifierKind kind = cmx::ClassifierKind::Sgd) {
  cmx::PipelineConfig config;
  config.classifier = kind;
  // small fixture corpora train fine with a larger step than the default
  config.sgd.learning_rate = 0.05;
  config.sgd.alpha = 1e-5;
  config.sgd.epochs = 30;
  config.logreg.C = 1.0;
  config.logreg.tol = 1e-5;
  return config;
}

}  // namespace cmxtest
