#pragma once

#include <array>
#include <cctype>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>

#include "cmx/errors.hpp"
#include "cmx/normalize.hpp"
#include "cmx/translit.hpp"
#include "cmx/utf8.hpp"

namespace cmx {

inline constexpr int kSoundexIndicLength = 8;   // symbols, first char included
inline constexpr int kSoundexEnglishLength = 4;

// One code symbol per block-relative codepoint offset (0x00..0x7F), '0'
// meaning "ignore". The same array serves Tamil (base U+0B80) and Malayalam
// (base U+0D00), which is what makes cross-script codes agree.
class IndicCharMap {
 public:
  IndicCharMap() { codes_.fill('0'); }

  char code(char32_t cp) const {
    char32_t offset;
    if (is_tamil(cp)) offset = cp - 0x0B80;
    else if (is_malayalam(cp)) offset = cp - 0x0D00;
    else return '0';
    return codes_[offset];
  }

  void set(char32_t offset, char symbol) { codes_[offset] = symbol; }
  char at_offset(char32_t offset) const { return codes_[offset]; }

  std::string version() const { return version_; }
  void set_version(std::string v) { version_ = std::move(v); }

  std::string to_tsv() const {
    std::ostringstream out;
    out << "# cmx soundex char map version=" << version_ << "\n";
    for (std::size_t i = 0; i < codes_.size(); ++i) {
      if (codes_[i] == '0') continue;
      out << std::hex << i << '\t' << codes_[i] << '\n';
    }
    return out.str();
  }

 private:
  std::array<char, 0x80> codes_;
  std::string version_ = "1";
};

// Consonants grouped by place of articulation; vowels, signs and the virama
// are ignored ('0'). Geminates collapse because duplicate code symbols do.
inline IndicCharMap builtin_indic_char_map() {
  IndicCharMap map;
  auto fill = [&](char32_t lo, char32_t hi, char symbol) {
    for (char32_t o = lo; o <= hi; ++o) map.set(o, symbol);
  };
  fill(0x15, 0x19, 'K');  // velars (ka..nga; Malayalam aspirates included)
  fill(0x1A, 0x1E, 'C');  // palatals (ca..nya)
  fill(0x1F, 0x23, 'T');  // retroflex stops + nasal
  fill(0x24, 0x29, 'D');  // dentals + alveolar nasal (ta..nnna)
  fill(0x2A, 0x2E, 'P');  // labials (pa..ma)
  map.set(0x2F, 'Y');     // ya
  fill(0x30, 0x31, 'R');  // ra, rra
  fill(0x32, 0x34, 'L');  // la, lla, llla/zha
  map.set(0x35, 'V');     // va
  fill(0x36, 0x39, 'S');  // sha..ha
  return map;
}

// TSV `offset_hex<TAB>code_symbol`, '#' lines ignored; unlisted offsets '0'.
inline IndicCharMap load_indic_char_map(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open soundex char map: " + path);
  IndicCharMap map;
  map.set_version("file:" + path);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    if (line.back() == '\r') line.pop_back();
    const std::size_t tab = line.find('\t');
    if (tab == std::string::npos || tab + 2 != line.size())
      throw DataError(path + ": line " + std::to_string(lineno) +
                      ": expected offset_hex<TAB>code_symbol");
    const unsigned long offset = std::stoul(line.substr(0, tab), nullptr, 16);
    if (offset >= 0x80)
      throw DataError(path + ": line " + std::to_string(lineno) +
                      ": offset out of range");
    map.set(static_cast<char32_t>(offset), line[tab + 1]);
  }
  return map;
}

// First character kept verbatim; later characters map through the char map,
// '0' entries (vowels, vowel signs, virama) skipped and transparent to
// duplicate collapse — so geminate consonants code once even across a
// virama — padded with '0' to 8 symbols total.
inline std::string soundex_indic(std::string_view word,
                                 const IndicCharMap& map) {
  if (word.empty()) throw UsageError("soundex_indic: empty word");
  std::size_t pos = 0;
  const char32_t first = utf8::decode_next(word, pos);
  std::string code = utf8::encode_one(first);
  int symbols = 1;
  char prev = map.code(first);
  while (pos < word.size() && symbols < kSoundexIndicLength) {
    const char32_t cp = utf8::decode_next(word, pos);
    const char c = map.code(cp);
    if (c == '0') continue;  // transparent: does not break a duplicate run
    if (c != prev) {
      code.push_back(c);
      ++symbols;
    }
    prev = c;
  }
  while (symbols < kSoundexIndicLength) {
    code.push_back('0');
    ++symbols;
  }
  return code;
}

namespace detail {
inline char english_soundex_digit(char c) {
  switch (c) {
    case 'b': case 'f': case 'p': case 'v': return '1';
    case 'c': case 'g': case 'j': case 'k': case 'q': case 's': case 'x':
    case 'z': return '2';
    case 'd': case 't': return '3';
    case 'l': return '4';
    case 'm': case 'n': return '5';
    case 'r': return '6';
    default: return '0';  // vowels and h/w/y carry no digit
  }
}
}  // namespace detail

// Classic Russell Soundex padded to 4. Adjacent same-digit letters code
// once, including across h/w; a vowel between them codes them twice.
inline std::string soundex_english(std::string_view word) {
  std::string letters;
  for (char c : word)
    if (std::isalpha(static_cast<unsigned char>(c)))
      letters.push_back(
          static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  if (letters.empty()) throw UsageError("soundex_english: no letters in word");
  std::string code(1, letters[0]);
  char prev = detail::english_soundex_digit(letters[0]);
  for (std::size_t i = 1; i < letters.size() && code.size() < kSoundexEnglishLength;
       ++i) {
    const char c = letters[i];
    if (c == 'h' || c == 'w') continue;  // transparent to duplicate collapse
    const char d = detail::english_soundex_digit(c);
    if (d == '0') {
      prev = '0';
      continue;
    }
    if (d != prev) code.push_back(d);
    prev = d;
  }
  code.resize(kSoundexEnglishLength, '0');
  return code;
}

// Routes a token to the right Soundex: native-script tokens directly, Roman
// tokens via transliteration, anything else through English Soundex on its
// Latin letters. Output namespaced with `sx:`.
inline std::string harmonize_token(std::string_view token, Language target,
                                   const TranslitTable& translit,
                                   const IndicCharMap& char_map) {
  if (token.empty()) return std::string(token);
  bool all_target = true, all_latin = true, any_latin = false;
  std::size_t pos = 0;
  while (pos < token.size()) {
    const char32_t cp = utf8::decode_next(token, pos);
    const bool target_script =
        target == Language::Tamil ? is_tamil(cp) : is_malayalam(cp);
    if (!target_script) all_target = false;
    if (is_latin_letter(cp)) any_latin = true;
    else all_latin = false;
  }
  if (all_target) return "sx:" + soundex_indic(token, char_map);
  if (all_latin) {
    const std::string native = roman_to_indic(ascii_lower(token), translit);
    return "sx:" + soundex_indic(native, char_map);
  }
  if (any_latin) return "sx:" + soundex_english(token);
  return std::string(token);
}

}  // namespace cmx
