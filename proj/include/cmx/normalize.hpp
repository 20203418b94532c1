#pragma once

#include <array>
#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "cmx/utf8.hpp"

namespace cmx {

enum class ScriptClass { Tamil, Malayalam, Latin, Digit, Emoji, Other };

inline constexpr int kNumScriptClasses = 6;

inline bool is_tamil(char32_t cp) { return cp >= 0x0B80 && cp <= 0x0BFF; }
inline bool is_malayalam(char32_t cp) { return cp >= 0x0D00 && cp <= 0x0D7F; }
inline bool is_latin_letter(char32_t cp) {
  return (cp >= 'a' && cp <= 'z') || (cp >= 'A' && cp <= 'Z');
}
inline bool is_ascii_digit(char32_t cp) { return cp >= '0' && cp <= '9'; }

// Fixed emoji table: Misc Symbols & Dingbats, Emoticons, Misc Pictographs,
// Transport, Supplemental Symbols. ZWJ sequences are not joined.
inline bool is_emoji(char32_t cp) {
  return (cp >= 0x2600 && cp <= 0x27BF) || (cp >= 0x1F300 && cp <= 0x1F5FF) ||
         (cp >= 0x1F600 && cp <= 0x1F64F) || (cp >= 0x1F680 && cp <= 0x1F6FF) ||
         (cp >= 0x1F900 && cp <= 0x1F9FF);
}

inline bool is_whitespace(char32_t cp) {
  return cp == ' ' || cp == '\t' || cp == '\n' || cp == '\r' || cp == 0x00A0;
}

inline ScriptClass classify_char(char32_t cp) {
  if (is_tamil(cp)) return ScriptClass::Tamil;
  if (is_malayalam(cp)) return ScriptClass::Malayalam;
  if (is_latin_letter(cp)) return ScriptClass::Latin;
  if (is_ascii_digit(cp)) return ScriptClass::Digit;
  if (is_emoji(cp)) return ScriptClass::Emoji;
  return ScriptClass::Other;
}

struct ScriptProfile {
  std::array<double, kNumScriptClasses> fractions{};  // indexed by ScriptClass
  ScriptClass dominant = ScriptClass::Other;

  double of(ScriptClass c) const { return fractions[static_cast<int>(c)]; }
};

// Canonical composition restricted to the Tamil and Malayalam blocks: split
// two-part vowel signs compose to their single-codepoint forms, ZWJ/ZWNJ are
// removed, whitespace runs collapse to single spaces. Idempotent.
inline std::string normalize_unicode(std::string_view text) {
  const std::u32string cps = utf8::decode(text);
  std::u32string out;
  out.reserve(cps.size());
  bool pending_space = false;
  for (char32_t cp : cps) {
    if (cp == 0x200C || cp == 0x200D) continue;  // ZWNJ / ZWJ
    if (is_whitespace(cp)) {
      if (!out.empty()) pending_space = true;
      continue;
    }
    if (pending_space) {
      out.push_back(U' ');
      pending_space = false;
    }
    if (!out.empty()) {
      const char32_t prev = out.back();
      char32_t composed = 0;
      // Tamil: ெ+ா → ொ, ே+ா → ோ, ெ+ௗ → ௌ
      if (prev == 0x0BC6 && cp == 0x0BBE) composed = 0x0BCA;
      else if (prev == 0x0BC7 && cp == 0x0BBE) composed = 0x0BCB;
      else if (prev == 0x0BC6 && cp == 0x0BD7) composed = 0x0BCC;
      // Malayalam: െ+ാ → ൊ, േ+ാ → ോ, െ+ൗ → ൌ
      else if (prev == 0x0D46 && cp == 0x0D3E) composed = 0x0D4A;
      else if (prev == 0x0D47 && cp == 0x0D3E) composed = 0x0D4B;
      else if (prev == 0x0D46 && cp == 0x0D57) composed = 0x0D4C;
      if (composed != 0) {
        out.back() = composed;
        continue;
      }
    }
    out.push_back(cp);
  }
  return utf8::encode(out);
}

// Per-character script fractions over non-whitespace characters. Dominant is
// the argmax, ties broken by ScriptClass enumeration order.
inline ScriptProfile detect_script(std::string_view text) {
  ScriptProfile profile;
  std::array<std::size_t, kNumScriptClasses> counts{};
  std::size_t total = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    const char32_t cp = utf8::decode_next(text, pos);
    if (is_whitespace(cp)) continue;
    ++counts[static_cast<int>(classify_char(cp))];
    ++total;
  }
  if (total == 0) return profile;  // all-zero fractions, dominant Other
  int best = kNumScriptClasses - 1;
  std::size_t best_count = 0;
  for (int i = 0; i < kNumScriptClasses; ++i) {
    profile.fractions[i] =
        static_cast<double>(counts[i]) / static_cast<double>(total);
    if (counts[i] > best_count) {
      best_count = counts[i];
      best = i;
    }
  }
  // Re-scan in enumeration order for the tie-break.
  for (int i = 0; i < kNumScriptClasses; ++i)
    if (counts[i] == best_count) {
      best = i;
      break;
    }
  profile.dominant = static_cast<ScriptClass>(best);
  return profile;
}

// Whitespace split; maximal emoji runs become their own tokens; punctuation
// stays attached to its word.
inline std::vector<std::string> tokenize(std::string_view text) {
  std::vector<std::string> tokens;
  std::string current;
  bool current_is_emoji = false;
  auto flush = [&] {
    if (!current.empty()) tokens.push_back(std::move(current));
    current.clear();
  };
  std::size_t pos = 0;
  while (pos < text.size()) {
    const char32_t cp = utf8::decode_next(text, pos);
    if (is_whitespace(cp)) {
      flush();
      continue;
    }
    const bool emoji = is_emoji(cp);
    if (!current.empty() && emoji != current_is_emoji) flush();
    current_is_emoji = emoji;
    utf8::append(current, cp);
  }
  flush();
  return tokens;
}

// 21 ranges: 1-10 -> 0, 11-20 -> 1, ..., 191-200 -> 19, >200 -> 20.
inline int length_bucket_for(std::size_t length) {
  if (length == 0) return 0;
  const std::size_t bucket = (length - 1) / 10;
  return bucket > 20 ? 20 : static_cast<int>(bucket);
}

inline int length_bucket(std::string_view text) {
  return length_bucket_for(utf8::length(text));
}

struct TokenizedDoc {
  std::string normalized_text;
  std::vector<std::string> tokens;
  int length_bucket = 0;
};

inline TokenizedDoc tokenize_doc(std::string_view raw) {
  TokenizedDoc doc;
  doc.normalized_text = normalize_unicode(raw);
  doc.tokens = tokenize(doc.normalized_text);
  doc.length_bucket = length_bucket(doc.normalized_text);
  return doc;
}

}  // namespace cmx
