#pragma once

#include <iomanip>
#include <sstream>
#include <string>
#include <vector>

#include "cmx/corpus.hpp"
#include "cmx/errors.hpp"

namespace cmx {

struct PerLabelMetrics {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  long support = 0;
};

struct EvalReport {
  std::vector<SentimentLabel> labels;            // canonical five-label order
  std::vector<std::vector<long>> confusion;      // rows gold, cols predicted
  std::vector<PerLabelMetrics> per_label;
  double weighted_precision = 0.0;
  double weighted_recall = 0.0;
  double weighted_f1 = 0.0;
};

// Confusion matrix plus support-weighted precision/recall/F1. Zero-division
// cells score 0, never NaN.
inline EvalReport evaluate(const std::vector<SentimentLabel>& gold,
                           const std::vector<SentimentLabel>& pred) {
  if (gold.size() != pred.size())
    throw UsageError("evaluate: gold/pred length mismatch");
  if (gold.empty()) throw UsageError("evaluate: empty input");
  EvalReport report;
  report.labels.assign(std::begin(kAllLabels), std::end(kAllLabels));
  const std::size_t K = report.labels.size();
  report.confusion.assign(K, std::vector<long>(K, 0));
  auto index_of = [&](SentimentLabel l) {
    for (std::size_t k = 0; k < K; ++k)
      if (report.labels[k] == l) return k;
    return K;
  };
  for (std::size_t i = 0; i < gold.size(); ++i)
    ++report.confusion[index_of(gold[i])][index_of(pred[i])];

  report.per_label.resize(K);
  double total_support = 0.0;
  for (std::size_t k = 0; k < K; ++k) {
    long tp = report.confusion[k][k], row = 0, col = 0;
    for (std::size_t j = 0; j < K; ++j) {
      row += report.confusion[k][j];
      col += report.confusion[j][k];
    }
    PerLabelMetrics& m = report.per_label[k];
    m.support = row;
    m.precision = col > 0 ? static_cast<double>(tp) / col : 0.0;
    m.recall = row > 0 ? static_cast<double>(tp) / row : 0.0;
    m.f1 = (m.precision + m.recall) > 0.0
               ? 2.0 * m.precision * m.recall / (m.precision + m.recall)
               : 0.0;
    total_support += static_cast<double>(row);
    report.weighted_precision += row * m.precision;
    report.weighted_recall += row * m.recall;
    report.weighted_f1 += row * m.f1;
  }
  report.weighted_precision /= total_support;
  report.weighted_recall /= total_support;
  report.weighted_f1 /= total_support;
  return report;
}

inline std::string format_report(const EvalReport& report, Language lang) {
  std::ostringstream out;
  out << std::fixed << std::setprecision(4);
  out << std::left << std::setw(18) << "label" << std::right << std::setw(10)
      << "precision" << std::setw(10) << "recall" << std::setw(10) << "f1"
      << std::setw(10) << "support" << "\n";
  for (std::size_t k = 0; k < report.labels.size(); ++k) {
    const PerLabelMetrics& m = report.per_label[k];
    out << std::left << std::setw(18) << to_string(report.labels[k], lang)
        << std::right << std::setw(10) << m.precision << std::setw(10)
        << m.recall << std::setw(10) << m.f1 << std::setw(10) << m.support
        << "\n";
  }
  out << std::left << std::setw(18) << "weighted" << std::right << std::setw(10)
      << report.weighted_precision << std::setw(10) << report.weighted_recall
      << std::setw(10) << report.weighted_f1 << "\n";
  return out.str();
}

}  // namespace cmx
