#ifndef XLTPROJECT_LOGITS_HPP
#define XLTPROJECT_LOGITS_HPP

// Logits JSON Lines. First line: {"labels":[...]}. Each following line:
// {"tokens":[...], "logits":[[...], ...]} with one vector per token, each of
// dimension |labels|. Blank lines are ignored.

#include <cmath>
#include <cstddef>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <json.hpp>

#include "xltproject/bio.hpp"
#include "xltproject/conll.hpp"
#include "xltproject/error.hpp"
#include "xltproject/types.hpp"

namespace xltproject {

struct LogitCorpus {
  LabelVocabulary vocabulary;
  std::vector<LogitSentence> sentences;

  bool operator==(const LogitCorpus&) const = default;
};

inline void validate(const LabelVocabulary& vocab) {
  std::set<std::string_view> seen;
  bool has_outside = false;
  for (const auto& label : vocab.labels) {
    if (!is_valid_tag(label)) throw ValidationError("malformed label '" + label + "'");
    if (!seen.insert(label).second) throw ValidationError("duplicate label '" + label + "'");
    has_outside |= label == "O";
  }
  if (!has_outside) throw ValidationError("label vocabulary lacks \"O\"");
}

inline void validate(const LogitSentence& s, const LabelVocabulary& vocab,
                     std::size_t record = ValidationError::npos) {
  if (s.sentence.tokens.empty()) throw ValidationError("empty sentence", record);
  if (s.logits.size() != s.sentence.tokens.size())
    throw ValidationError("logit vector count " + std::to_string(s.logits.size()) +
                              " != token count " + std::to_string(s.sentence.tokens.size()),
                          record);
  for (std::size_t i = 0; i < s.logits.size(); ++i) {
    if (!detail::is_valid_token(s.sentence.tokens[i]))
      throw ValidationError("invalid token at position " + std::to_string(i), record);
    if (s.logits[i].size() != vocab.size())
      throw ValidationError("token " + std::to_string(i) + " has " +
                                std::to_string(s.logits[i].size()) + " logits, expected " +
                                std::to_string(vocab.size()),
                            record);
    for (double v : s.logits[i])
      if (!std::isfinite(v))
        throw ValidationError("non-finite logit at token " + std::to_string(i), record);
  }
}

/// Throws ParseError for malformed JSON or a missing header, ValidationError
/// (with the 0-based record index) for dimensional or finiteness violations.
inline LogitCorpus read_logits(std::string_view bytes) {
  using nlohmann::json;
  LogitCorpus out;
  bool have_header = false;
  std::size_t record = 0;
  const auto lines = detail::split_lines(bytes);
  for (std::size_t n = 0; n < lines.size(); ++n) {
    const auto line = lines[n];
    if (line.find_first_not_of(" \t\r") == std::string_view::npos) continue;
    const std::size_t lineno = n + 1;
    const std::size_t rec = have_header ? record : ParseError::npos;
    json doc;
    try {
      doc = json::parse(line);
    } catch (const json::parse_error& e) {
      throw ParseError(std::string("invalid JSON: ") + e.what(), lineno, 0, rec);
    }
    try {
      if (!have_header) {
        if (!doc.is_object() || !doc.contains("labels"))
          throw ParseError("missing {\"labels\": [...]} header", lineno);
        out.vocabulary.labels = doc.at("labels").get<std::vector<std::string>>();
        validate(out.vocabulary);
        have_header = true;
        continue;
      }
      if (!doc.is_object() || !doc.contains("tokens") || !doc.contains("logits"))
        throw ParseError("record lacks \"tokens\" or \"logits\"", lineno, 0, rec);
      LogitSentence s;
      s.sentence.tokens = doc.at("tokens").get<std::vector<std::string>>();
      s.logits = doc.at("logits").get<std::vector<std::vector<double>>>();
      validate(s, out.vocabulary, record);
      out.sentences.push_back(std::move(s));
      ++record;
    } catch (const json::exception& e) {
      throw ParseError(std::string("unexpected JSON shape: ") + e.what(), lineno, 0, rec);
    }
  }
  if (!have_header) throw ParseError("missing {\"labels\": [...]} header", 1);
  return out;
}

inline std::string write_logits(const LogitCorpus& corpus) {
  using nlohmann::json;
  validate(corpus.vocabulary);
  std::string out = json{{"labels", corpus.vocabulary.labels}}.dump() + "\n";
  for (std::size_t k = 0; k < corpus.sentences.size(); ++k) {
    const auto& s = corpus.sentences[k];
    validate(s, corpus.vocabulary, k);
    json doc = json::object();
    doc["tokens"] = s.sentence.tokens;
    doc["logits"] = s.logits;
    out += doc.dump();
    out += '\n';
  }
  return out;
}

} // namespace xltproject

#endif // XLTPROJECT_LOGITS_HPP
