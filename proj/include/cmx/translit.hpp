#pragma once

#include <algorithm>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "cmx/corpus.hpp"
#include "cmx/errors.hpp"
#include "cmx/normalize.hpp"
#include "cmx/utf8.hpp"

namespace cmx {

// Greedy longest-match Roman -> Tamil/Malayalam rule table. The builtin
// tables cover CV syllables, geminates and the common digraphs (zh, th,
// dr, ng, ...). Orthographic perfection is not the goal; downstream Soundex
// only needs spelling variants of one word to land on one code.
class TranslitTable {
 public:
  TranslitTable(Language script, std::string version,
                std::vector<std::pair<std::string, std::string>> rules)
      : script_(script), version_(std::move(version)) {
    for (auto& [roman, native] : rules) {
      if (lookup_.count(roman))
        throw DataError("translit table: duplicate roman sequence '" + roman +
                        "'");
      max_roman_len_ = std::max(max_roman_len_, roman.size());
      lookup_.emplace(roman, native);
      rules_.emplace_back(roman, native);
    }
    std::sort(rules_.begin(), rules_.end(), [](const auto& a, const auto& b) {
      if (a.first.size() != b.first.size())
        return a.first.size() > b.first.size();
      return a.first < b.first;
    });
  }

  Language script() const { return script_; }
  const std::string& version() const { return version_; }
  const std::vector<std::pair<std::string, std::string>>& rules() const {
    return rules_;
  }

  const std::string* find(std::string_view roman) const {
    auto it = lookup_.find(std::string(roman));
    return it == lookup_.end() ? nullptr : &it->second;
  }

  std::size_t max_roman_len() const { return max_roman_len_; }

  std::string to_tsv() const {
    std::ostringstream out;
    out << "# cmx translit table script=" << to_string(script_)
        << " version=" << version_ << "\n";
    for (const auto& [roman, native] : rules_)
      out << roman << '\t' << native << '\n';
    return out.str();
  }

 private:
  Language script_;
  std::string version_;
  std::vector<std::pair<std::string, std::string>> rules_;
  std::unordered_map<std::string, std::string> lookup_;
  std::size_t max_roman_len_ = 0;
};

// Greedy longest-match left to right; unmatched characters pass through.
inline std::string roman_to_indic(std::string_view token,
                                  const TranslitTable& table) {
  std::string out;
  std::size_t pos = 0;
  while (pos < token.size()) {
    bool matched = false;
    const std::size_t max_len =
        std::min(table.max_roman_len(), token.size() - pos);
    for (std::size_t len = max_len; len >= 1; --len) {
      if (const std::string* native = table.find(token.substr(pos, len))) {
        out += *native;
        pos += len;
        matched = true;
        break;
      }
    }
    if (!matched) {
      out.push_back(token[pos]);
      ++pos;
    }
  }
  return out;
}

namespace detail {

// Block-relative consonant offsets shared by the Tamil and Malayalam
// blocks (base U+0B80 / U+0D00).
struct ConsonantSpec {
  const char* roman;
  char32_t offset;
};

// dr -> offset 0x31 (rra) folds the common Roman cluster spelling of the
// n-r ligature (nandri vs nanri) onto one native consonant.
inline constexpr ConsonantSpec kConsonants[] = {
    {"k", 0x15},  {"g", 0x15},  {"ng", 0x19}, {"c", 0x1A},  {"ch", 0x1A},
    {"s", 0x1A},  {"j", 0x1C},  {"ny", 0x1E}, {"t", 0x1F},  {"d", 0x1F},
    {"th", 0x24}, {"dh", 0x24}, {"n", 0x28},  {"p", 0x2A},  {"b", 0x2A},
    {"f", 0x2A},  {"m", 0x2E},  {"y", 0x2F},  {"r", 0x31},  {"dr", 0x31},
    {"l", 0x32},  {"ll", 0x33}, {"zh", 0x34}, {"v", 0x35},  {"w", 0x35},
    {"sh", 0x37}, {"h", 0x39},
};

struct VowelSpec {
  const char* roman;
  char32_t independent_offset;  // standalone vowel letter
  char32_t sign_offset;         // dependent sign; 0 = inherent vowel
};

inline constexpr VowelSpec kVowels[] = {
    {"a", 0x05, 0},     {"aa", 0x06, 0x3E}, {"i", 0x07, 0x3F},
    {"ii", 0x08, 0x40}, {"ee", 0x08, 0x40}, {"u", 0x09, 0x41},
    {"uu", 0x0A, 0x42}, {"oo", 0x0A, 0x42}, {"e", 0x0E, 0x46},
    {"ae", 0x0F, 0x47}, {"ai", 0x10, 0x48}, {"o", 0x12, 0x4A},
    {"oa", 0x13, 0x4B}, {"au", 0x14, 0x4C},
};

inline constexpr char32_t kViramaOffset = 0x4D;
// Tamil word-final dental n is written with the alveolar letter.
inline constexpr char32_t kTamilFinalN = 0x29;

}  // namespace detail

inline TranslitTable builtin_translit_table(Language script) {
  const char32_t base = script == Language::Tamil ? 0x0B80 : 0x0D00;
  std::vector<std::pair<std::string, std::string>> rules;
  for (const auto& cons : detail::kConsonants) {
    char32_t bare_offset = cons.offset;
    if (script == Language::Tamil && std::string_view(cons.roman) == "n")
      bare_offset = detail::kTamilFinalN;
    // bare consonant: letter + virama
    std::string bare = utf8::encode_one(base + bare_offset);
    bare += utf8::encode_one(base + detail::kViramaOffset);
    rules.emplace_back(cons.roman, bare);
    for (const auto& vowel : detail::kVowels) {
      std::string native = utf8::encode_one(base + cons.offset);
      if (vowel.sign_offset != 0)
        native += utf8::encode_one(base + vowel.sign_offset);
      rules.emplace_back(std::string(cons.roman) + vowel.roman, native);
    }
  }
  for (const auto& vowel : detail::kVowels)
    rules.emplace_back(vowel.roman,
                       utf8::encode_one(base + vowel.independent_offset));
  return TranslitTable(script, "1", std::move(rules));
}

// Loads an override table from `roman<TAB>native` TSV ('#' lines ignored).
inline TranslitTable load_translit_table(const std::string& path,
                                         Language script) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open translit table: " + path);
  std::vector<std::pair<std::string, std::string>> rules;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const std::size_t tab = line.find('\t');
    if (tab == std::string::npos)
      throw DataError(path + ": line " + std::to_string(lineno) +
                      ": expected roman<TAB>native");
    const std::string native = line.substr(tab + 1);
    for (char32_t cp : utf8::decode(native)) {
      const bool ok = script == Language::Tamil ? is_tamil(cp) : is_malayalam(cp);
      if (!ok)
        throw DataError(path + ": line " + std::to_string(lineno) +
                        ": native sequence outside target script block");
    }
    rules.emplace_back(line.substr(0, tab), native);
  }
  return TranslitTable(script, "file:" + path, std::move(rules));
}

}  // namespace cmx
