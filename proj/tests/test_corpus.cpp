#include <catch2/catch_amalgamated.hpp>

#include <map>
#include <sstream>

#include "cmx/corpus.hpp"
#include "helpers.hpp"

using namespace cmx;
using cmxtest::corpus_from_string;

TEST_CASE("label parsing is case-insensitive and five-way") {
  CHECK(parse_label("Positive") == SentimentLabel::Positive);
  CHECK(parse_label("positive") == SentimentLabel::Positive);
  CHECK(parse_label("NEGATIVE") == SentimentLabel::Negative);
  CHECK(parse_label("Mixed_feelings") == SentimentLabel::MixedFeelings);
  CHECK(parse_label("unknown_state") == SentimentLabel::UnknownState);
  CHECK(parse_label("not-Tamil") == SentimentLabel::NotTargetLanguage);
  CHECK(parse_label("not-malayalam") == SentimentLabel::NotTargetLanguage);
  CHECK_THROWS_AS(parse_label("neutral"), DataError);
}

TEST_CASE("not_target_language serializes per corpus language") {
  CHECK(to_string(SentimentLabel::NotTargetLanguage, Language::Tamil) ==
        "not-tamil");
  CHECK(to_string(SentimentLabel::NotTargetLanguage, Language::Malayalam) ==
        "not-malayalam");
}

TEST_CASE("parse_tsv reads text<TAB>label lines in order") {
  const auto corpus = corpus_from_string(
      "movie nalla irukku\tPositive\n"
      "mokka padam\tnegative\n");
  REQUIRE(corpus.size() == 2);
  CHECK(corpus.records[0].text == "movie nalla irukku");
  CHECK(corpus.records[0].label == SentimentLabel::Positive);
  CHECK(corpus.records[1].label == SentimentLabel::Negative);
}

TEST_CASE("parse_tsv skips a text/category header and handles CRLF") {
  const auto corpus = corpus_from_string(
      "Text\tCategory\r\n"
      "some comment\tPositive\r\n");
  REQUIRE(corpus.size() == 1);
  CHECK(corpus.records[0].text == "some comment");
}

TEST_CASE("parse_tsv rejects malformed lines with line numbers") {
  std::istringstream one_col("just text\n");
  CHECK_THROWS_WITH(parse_tsv(one_col, Language::Tamil, true),
                    Catch::Matchers::ContainsSubstring("line 1") &&
                        Catch::Matchers::ContainsSubstring("2 columns"));
  std::istringstream three_col("ok\tPositive\n"
                               "a\tb\tPositive\n");
  CHECK_THROWS_WITH(parse_tsv(three_col, Language::Tamil, true),
                    Catch::Matchers::ContainsSubstring("line 2"));
  std::istringstream bad_label("text\tmeh\n");
  CHECK_THROWS_WITH(parse_tsv(bad_label, Language::Tamil, true),
                    Catch::Matchers::ContainsSubstring("meh"));
}

TEST_CASE("load_tsv round-trips through write_tsv") {
  const auto corpus = corpus_from_string(
      "first comment\tPositive\n"
      "second one 🔥\tnegative\n"
      "மூன்றாவது\tunknown_state\n"
      "english only\tnot-tamil\n");
  std::ostringstream out;
  write_tsv(out, corpus);
  const auto again = corpus_from_string(out.str());
  REQUIRE(again.size() == corpus.size());
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    CHECK(again.records[i].text == corpus.records[i].text);
    CHECK(again.records[i].label == corpus.records[i].label);
  }
}

TEST_CASE("split partitions deterministically") {
  LabeledCorpus corpus;
  for (int i = 0; i < 10; ++i)
    corpus.records.push_back({"doc " + std::to_string(i), SentimentLabel::Positive});

  auto [a, b] = split(corpus, 0.8, 7);
  CHECK(a.size() == 8);
  CHECK(b.size() == 2);

  auto [a2, b2] = split(corpus, 0.8, 7);
  for (std::size_t i = 0; i < a.size(); ++i)
    CHECK(a.records[i].text == a2.records[i].text);
  for (std::size_t i = 0; i < b.size(); ++i)
    CHECK(b.records[i].text == b2.records[i].text);

  // partition: union of parts equals the input multiset
  std::map<std::string, int> seen;
  for (const auto& r : a.records) ++seen[r.text];
  for (const auto& r : b.records) ++seen[r.text];
  CHECK(seen.size() == 10);
  for (const auto& [text, count] : seen) CHECK(count == 1);
}

TEST_CASE("split rejects bad fractions and empty corpora") {
  LabeledCorpus corpus;
  corpus.records.push_back({"x", SentimentLabel::Positive});
  CHECK_THROWS_AS(split(corpus, 1.5, 0), UsageError);
  CHECK_THROWS_AS(split(corpus, 0.0, 0), UsageError);
  CHECK_THROWS_AS(split(LabeledCorpus{}, 0.5, 0), UsageError);
}
