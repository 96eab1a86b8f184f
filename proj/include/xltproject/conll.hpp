#ifndef XLTPROJECT_CONLL_HPP
#define XLTPROJECT_CONLL_HPP

// Two-column CoNLL reader/writer: "token<TAB>tag" per line, blank line after
// every sentence, "\n" line endings, UTF-8.

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "xltproject/bio.hpp"
#include "xltproject/error.hpp"
#include "xltproject/types.hpp"

namespace xltproject {

enum class ReadMode {
  Strict, // BIO violations are errors (gold data)
  Repair, // orphan I-X rewritten to B-X (model predictions)
};

enum class ConllColumns {
  TokenTag,  // exactly two tab-separated columns
  FirstLast, // CoNLL-2003 style: whitespace-separated, first and last column kept,
             // -DOCSTART- lines skipped
};

namespace detail {

inline std::vector<std::string_view> split_lines(std::string_view bytes) {
  std::vector<std::string_view> lines;
  std::size_t pos = 0;
  while (pos < bytes.size()) {
    auto nl = bytes.find('\n', pos);
    if (nl == std::string_view::npos) {
      lines.push_back(bytes.substr(pos));
      break;
    }
    lines.push_back(bytes.substr(pos, nl - pos));
    pos = nl + 1;
  }
  return lines;
}

inline std::vector<std::string_view> split_fields(std::string_view line, ConllColumns columns) {
  std::vector<std::string_view> fields;
  if (columns == ConllColumns::TokenTag) {
    std::size_t pos = 0;
    while (true) {
      auto tab = line.find('\t', pos);
      fields.push_back(line.substr(pos, tab == std::string_view::npos ? tab : tab - pos));
      if (tab == std::string_view::npos) break;
      pos = tab + 1;
    }
    return fields;
  }
  std::size_t pos = 0;
  while (pos < line.size()) {
    while (pos < line.size() && (line[pos] == ' ' || line[pos] == '\t')) ++pos;
    auto stop = pos;
    while (stop < line.size() && line[stop] != ' ' && line[stop] != '\t') ++stop;
    if (stop > pos) fields.push_back(line.substr(pos, stop - pos));
    pos = stop;
  }
  return fields;
}

inline bool is_valid_token(std::string_view token) {
  return !token.empty() && token.find_first_of("\t\n") == std::string_view::npos;
}

} // namespace detail

inline std::vector<LabeledSentence> read_conll(std::string_view bytes, ReadMode mode,
                                               ConllColumns columns = ConllColumns::TokenTag) {
  std::vector<LabeledSentence> out;
  LabeledSentence current;
  auto flush = [&] {
    if (current.sentence.tokens.empty()) return;
    const std::size_t index = out.size();
    if (mode == ReadMode::Strict) {
      if (auto bad = first_bio_violation(current.tags))
        throw ValidationError("BIO violation at token " + std::to_string(*bad) + " ('" +
                                  current.tags[*bad] + "')",
                              index);
    } else {
      current.tags = repair_bio(std::move(current.tags));
    }
    out.push_back(std::move(current));
    current = {};
  };

  const auto lines = detail::split_lines(bytes);
  for (std::size_t n = 0; n < lines.size(); ++n) {
    const auto line = lines[n];
    const std::size_t lineno = n + 1;
    if (line.empty()) {
      flush();
      continue;
    }
    auto fields = detail::split_fields(line, columns);
    if (columns == ConllColumns::FirstLast) {
      if (fields.empty()) {
        flush();
        continue;
      }
      if (fields.front() == "-DOCSTART-") continue;
      if (fields.size() < 2)
        throw ParseError("expected at least 2 columns, got " + std::to_string(fields.size()),
                         lineno);
      fields = {fields.front(), fields.back()};
    } else if (fields.size() != 2) {
      throw ParseError("expected 2 tab-separated columns, got " + std::to_string(fields.size()),
                       lineno);
    }
    if (fields[0].empty()) throw ParseError("empty token", lineno, 1);
    if (!is_valid_tag(fields[1]))
      throw ParseError("malformed tag '" + std::string(fields[1]) + "'", lineno,
                       fields[0].size() + 2);
    current.sentence.tokens.emplace_back(fields[0]);
    current.tags.emplace_back(fields[1]);
  }
  flush();
  return out;
}

inline void validate(const LabeledSentence& s, std::size_t index = ValidationError::npos) {
  if (s.sentence.tokens.empty()) throw ValidationError("empty sentence", index);
  if (s.tags.size() != s.sentence.tokens.size())
    throw ValidationError("tag count " + std::to_string(s.tags.size()) +
                              " != token count " + std::to_string(s.sentence.tokens.size()),
                          index);
  for (std::size_t i = 0; i < s.tags.size(); ++i) {
    if (!detail::is_valid_token(s.sentence.tokens[i]))
      throw ValidationError("invalid token at position " + std::to_string(i), index);
    if (!is_valid_tag(s.tags[i]))
      throw ValidationError("malformed tag '" + s.tags[i] + "'", index);
  }
}

inline std::string write_conll(const std::vector<LabeledSentence>& sentences) {
  std::string out;
  for (std::size_t k = 0; k < sentences.size(); ++k) {
    const auto& s = sentences[k];
    validate(s, k);
    for (std::size_t i = 0; i < s.tags.size(); ++i) {
      out += s.sentence.tokens[i];
      out += '\t';
      out += s.tags[i];
      out += '\n';
    }
    out += '\n';
  }
  return out;
}

} // namespace xltproject

#endif // XLTPROJECT_CONLL_HPP
