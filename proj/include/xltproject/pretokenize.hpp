#ifndef XLTPROJECT_PRETOKENIZE_HPP
#define XLTPROJECT_PRETOKENIZE_HPP

// Word-boundary induction for translated sentences.
//
//   Ws       split on maximal runs of Unicode whitespace.
//   Rule     Ws, then a Moses-like cascade inside every chunk:
//              1. detach . , ; : ! ? (a run of periods stays one token)
//              2. detach paired symbols " ' ( ) [ ] { }
//              3. apostrophe clitics become their own token: 's 'll 're 've 'm 'd
//                 after a letter, and n't ("don't" -> "do" "n't")
//              4. number/abbreviation guard: a period or comma between two digits
//                 stays inside ("3.5", "1,000"); a period after a single capital
//                 letter that starts the token or follows another such period
//                 stays attached ("J.", "U.S.")
//            The guard is checked first when a character is classified, so it
//            overrides steps 1-3. No character is added, dropped or rewritten.
//   External tokens are already separated by single spaces and are taken as is.
//
// CJK segmentation and other language-specific tokenizers are out of scope;
// feed their output through External.

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "xltproject/error.hpp"
#include "xltproject/types.hpp"

namespace xltproject {

enum class PretokenizerMode { Ws, Rule, External };

namespace detail {

struct CodeUnit {
  std::size_t offset;
  std::size_t length;
  char32_t cp;
};

/// Decodes UTF-8; an invalid byte becomes a one-byte unit with cp U+FFFD so
/// slicing by offset still reproduces the input bytes exactly.
inline std::vector<CodeUnit> decode_utf8(std::string_view s) {
  std::vector<CodeUnit> out;
  out.reserve(s.size());
  std::size_t i = 0;
  while (i < s.size()) {
    const auto b0 = static_cast<unsigned char>(s[i]);
    std::size_t len = 1;
    char32_t cp = 0xFFFD;
    if (b0 < 0x80) {
      cp = b0;
    } else if ((b0 & 0xE0) == 0xC0) {
      len = 2;
      cp = b0 & 0x1F;
    } else if ((b0 & 0xF0) == 0xE0) {
      len = 3;
      cp = b0 & 0x0F;
    } else if ((b0 & 0xF8) == 0xF0) {
      len = 4;
      cp = b0 & 0x07;
    } else {
      len = 0;
    }
    bool ok = len > 0 && i + len <= s.size();
    for (std::size_t k = 1; ok && k < len; ++k) {
      const auto b = static_cast<unsigned char>(s[i + k]);
      if ((b & 0xC0) != 0x80) ok = false;
      cp = (cp << 6) | (b & 0x3F);
    }
    if (!ok) {
      out.push_back({i, 1, 0xFFFD});
      ++i;
      continue;
    }
    out.push_back({i, len, cp});
    i += len;
  }
  return out;
}

inline bool is_unicode_space(char32_t c) {
  return (c >= 0x09 && c <= 0x0D) || c == 0x20 || c == 0x85 || c == 0xA0 || c == 0x1680 ||
         (c >= 0x2000 && c <= 0x200A) || c == 0x2028 || c == 0x2029 || c == 0x202F ||
         c == 0x205F || c == 0x3000;
}

inline bool is_digit(char32_t c) { return c >= '0' && c <= '9'; }
inline bool is_upper(char32_t c) { return c >= 'A' && c <= 'Z'; }

// Rough letter test: ASCII letters plus non-ASCII code points from Latin-1
// letters upward, minus General Punctuation. Good enough for the clitic rules.
inline bool is_letter(char32_t c) {
  return (c >= 'a' && c <= 'z') || is_upper(c) ||
         (c >= 0xC0 && c != 0xD7 && c != 0xF7 && !(c >= 0x2000 && c <= 0x206F) &&
          !is_unicode_space(c) && c != 0xFFFD);
}

inline char32_t lower(char32_t c) { return is_upper(c) ? c + ('a' - 'A') : c; }

inline bool is_clause_punct(char32_t c) {
  return c == '.' || c == ',' || c == ';' || c == ':' || c == '!' || c == '?';
}

inline bool is_paired_symbol(char32_t c) {
  return c == '"' || c == '\'' || c == '(' || c == ')' || c == '[' || c == ']' || c == '{' ||
         c == '}' || c == 0xAB || c == 0xBB || c == 0x201C || c == 0x201D || c == 0x201E;
}

inline std::vector<std::string_view> split_whitespace(std::string_view text) {
  std::vector<std::string_view> chunks;
  const auto units = decode_utf8(text);
  std::size_t begin = 0;
  bool open = false;
  for (const auto& u : units) {
    if (is_unicode_space(u.cp)) {
      if (open) chunks.push_back(text.substr(begin, u.offset - begin));
      open = false;
    } else if (!open) {
      begin = u.offset;
      open = true;
    }
  }
  if (open) chunks.push_back(text.substr(begin));
  return chunks;
}

class ChunkSplitter {
public:
  explicit ChunkSplitter(std::string_view chunk) : chunk_(chunk), u_(decode_utf8(chunk)) {}

  std::vector<std::string_view> run() {
    std::size_t i = 0;
    while (i < u_.size()) {
      const char32_t c = u_[i].cp;
      if (guarded(i)) {
        extend(i++);
      } else if (c == '.') {
        flush();
        std::size_t j = i;
        while (j < u_.size() && u_[j].cp == '.') ++j;
        emit(i, j);
        i = j;
      } else if (c == '\'') {
        i = apostrophe(i);
      } else if (is_clause_punct(c) || is_paired_symbol(c)) {
        flush();
        emit(i, i + 1);
        ++i;
      } else {
        extend(i++);
      }
    }
    flush();
    return out_;
  }

private:
  char32_t cp(std::ptrdiff_t i) const {
    return i >= 0 && static_cast<std::size_t>(i) < u_.size() ? u_[i].cp : 0;
  }

  bool guarded(std::size_t i) const {
    const auto at = static_cast<std::ptrdiff_t>(i);
    const char32_t c = u_[i].cp;
    if ((c == '.' || c == ',') && is_digit(cp(at - 1)) && is_digit(cp(at + 1))) return true;
    if (c == '.' && is_upper(cp(at - 1)) && word_open_ &&
        (i - 1 == word_begin_ || cp(at - 2) == '.'))
      return true;
    return false;
  }

  // Returns the index after whatever the apostrophe at `i` consumed.
  std::size_t apostrophe(std::size_t i) {
    const auto at = static_cast<std::ptrdiff_t>(i);
    auto ends_word = [&](std::ptrdiff_t k) { return !is_letter(cp(k)); };
    // n't after a letter, or starting the word (an already split "n't")
    if (word_open_ && i >= word_begin_ + 1 && lower(cp(at - 1)) == 'n' &&
        (i == word_begin_ + 1 || is_letter(cp(at - 2))) && lower(cp(at + 1)) == 't' &&
        ends_word(at + 2)) {
      emit_word_until(i - 1);
      emit(i - 1, i + 2);
      return i + 2;
    }
    if (!word_open_ || is_letter(cp(at - 1))) {
      for (std::u32string_view clitic : {U"s", U"ll", U"re", U"ve", U"m", U"d"}) {
        bool match = true;
        for (std::size_t k = 0; k < clitic.size(); ++k)
          if (lower(cp(at + 1 + static_cast<std::ptrdiff_t>(k))) != clitic[k]) match = false;
        const auto after = at + 1 + static_cast<std::ptrdiff_t>(clitic.size());
        if (match && ends_word(after)) {
          flush();
          emit(i, static_cast<std::size_t>(after));
          return static_cast<std::size_t>(after);
        }
      }
    }
    flush();
    emit(i, i + 1);
    return i + 1;
  }

  void extend(std::size_t i) {
    if (!word_open_) {
      word_open_ = true;
      word_begin_ = i;
    }
    word_end_ = i + 1;
  }

  void flush() {
    if (word_open_) emit(word_begin_, word_end_);
    word_open_ = false;
  }

  void emit_word_until(std::size_t stop) {
    if (word_open_ && stop > word_begin_) emit(word_begin_, stop);
    word_open_ = false;
  }

  void emit(std::size_t from, std::size_t to) {
    const auto begin = u_[from].offset;
    const auto end = to < u_.size() ? u_[to].offset : chunk_.size();
    out_.push_back(chunk_.substr(begin, end - begin));
  }

  std::string_view chunk_;
  std::vector<CodeUnit> u_;
  std::vector<std::string_view> out_;
  bool word_open_ = false;
  std::size_t word_begin_ = 0;
  std::size_t word_end_ = 0;
};

} // namespace detail

/// Throws ValidationError on empty or all-whitespace input, and in External
/// mode on empty tokens (leading, trailing or doubled spaces).
inline Sentence pretokenize(std::string_view raw_text, PretokenizerMode mode) {
  Sentence out;
  if (mode == PretokenizerMode::External) {
    if (raw_text.empty()) throw ValidationError("empty input");
    std::size_t pos = 0;
    while (true) {
      auto sp = raw_text.find(' ', pos);
      auto token = raw_text.substr(pos, sp == std::string_view::npos ? sp : sp - pos);
      if (token.empty())
        throw ValidationError("empty token at byte " + std::to_string(pos) +
                              " in pre-tokenized input");
      if (token.find_first_of("\t\n") != std::string_view::npos)
        throw ValidationError("token contains tab or newline");
      out.tokens.emplace_back(token);
      if (sp == std::string_view::npos) break;
      pos = sp + 1;
    }
    return out;
  }

  const auto chunks = detail::split_whitespace(raw_text);
  if (chunks.empty()) throw ValidationError("empty or all-whitespace input");
  for (auto chunk : chunks) {
    if (mode == PretokenizerMode::Ws) {
      out.tokens.emplace_back(chunk);
      continue;
    }
    for (auto piece : detail::ChunkSplitter(chunk).run()) out.tokens.emplace_back(piece);
  }
  return out;
}

/// Single-space join for human inspection. Lossy; not part of any data path.
inline std::string detokenize_preview(const Sentence& s) {
  std::string out;
  for (std::size_t i = 0; i < s.tokens.size(); ++i) {
    if (i) out += ' ';
    out += s.tokens[i];
  }
  return out;
}

} // namespace xltproject

#endif // XLTPROJECT_PRETOKENIZE_HPP
