#ifndef XLTPROJECT_BIO_HPP
#define XLTPROJECT_BIO_HPP

#include <algorithm>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

#include "xltproject/error.hpp"
#include "xltproject/types.hpp"

namespace xltproject {

enum class TagKind { Outside, Begin, Inside };

struct ParsedTag {
  TagKind kind = TagKind::Outside;
  std::string_view type; // empty for Outside
};

/// Parses "O", "B-<type>" or "I-<type>"; the type must be non-empty and free of
/// whitespace. Returns nullopt on anything else.
inline std::optional<ParsedTag> parse_tag(std::string_view tag) {
  if (tag == "O") return ParsedTag{};
  if (tag.size() < 3 || tag[1] != '-') return std::nullopt;
  TagKind kind;
  if (tag[0] == 'B')
    kind = TagKind::Begin;
  else if (tag[0] == 'I')
    kind = TagKind::Inside;
  else
    return std::nullopt;
  std::string_view type = tag.substr(2);
  for (char c : type) {
    if (c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\v' || c == '\f')
      return std::nullopt;
  }
  return ParsedTag{kind, type};
}

inline bool is_valid_tag(std::string_view tag) { return parse_tag(tag).has_value(); }

inline Tag begin_tag(std::string_view type) { return "B-" + std::string(type); }
inline Tag inside_tag(std::string_view type) { return "I-" + std::string(type); }

/// Index of the first "I-X" not preceded by "B-X"/"I-X", or nullopt.
/// Tags must already satisfy the grammar.
inline std::optional<std::size_t> first_bio_violation(std::span<const Tag> tags) {
  std::string_view open; // type of the span currently open, empty if none
  bool in_span = false;
  for (std::size_t i = 0; i < tags.size(); ++i) {
    auto parsed = parse_tag(tags[i]);
    if (!parsed) return i;
    switch (parsed->kind) {
    case TagKind::Outside:
      in_span = false;
      break;
    case TagKind::Begin:
      in_span = true;
      open = parsed->type;
      break;
    case TagKind::Inside:
      if (!in_span || parsed->type != open) return i;
      break;
    }
  }
  return std::nullopt;
}

inline bool is_bio_valid(std::span<const Tag> tags) {
  return !first_bio_violation(tags).has_value();
}

/// Rewrites every orphan "I-X" to "B-X". Idempotent; a no-op on valid input.
inline std::vector<Tag> repair_bio(std::vector<Tag> tags) {
  std::string open;
  bool in_span = false;
  for (auto& tag : tags) {
    auto parsed = parse_tag(tag);
    if (!parsed) throw ValidationError("malformed tag '" + tag + "'");
    if (parsed->kind == TagKind::Outside) {
      in_span = false;
      continue;
    }
    if (parsed->kind == TagKind::Inside && in_span && parsed->type == open) continue;
    std::string type(parsed->type);
    if (parsed->kind == TagKind::Inside) tag = begin_tag(type);
    open = std::move(type);
    in_span = true;
  }
  return tags;
}

/// Decodes maximal spans: each "B-X" (or orphan "I-X", read as repaired) opens a
/// span that extends through consecutive "I-X". Output is sorted by start.
inline std::vector<LabeledSpan> extract_spans(std::span<const Tag> tags) {
  std::vector<LabeledSpan> spans;
  bool in_span = false;
  for (std::size_t i = 0; i < tags.size(); ++i) {
    auto parsed = parse_tag(tags[i]);
    if (!parsed) throw ValidationError("malformed tag '" + tags[i] + "'");
    if (parsed->kind == TagKind::Outside) {
      in_span = false;
      continue;
    }
    if (parsed->kind == TagKind::Inside && in_span && spans.back().type == parsed->type) {
      spans.back().end = i;
      continue;
    }
    spans.push_back({std::string(parsed->type), i, i});
    in_span = true;
  }
  return spans;
}

inline std::vector<LabeledSpan> extract_spans(const LabeledSentence& s) {
  return extract_spans(std::span<const Tag>(s.tags));
}

/// Inverse of extract_spans. Spans must lie in [0, length) and be pairwise
/// disjoint; input order does not matter.
inline std::vector<Tag> encode_spans(std::size_t length, std::span<const LabeledSpan> spans) {
  std::vector<Tag> tags(length, "O");
  std::vector<const LabeledSpan*> sorted;
  sorted.reserve(spans.size());
  for (const auto& s : spans) {
    if (s.start > s.end || s.end >= length)
      throw ValidationError("span " + s.type + "[" + std::to_string(s.start) + "," +
                            std::to_string(s.end) + "] out of bounds for length " +
                            std::to_string(length));
    if (s.type.empty() || !is_valid_tag(begin_tag(s.type)))
      throw ValidationError("invalid span type '" + s.type + "'");
    sorted.push_back(&s);
  }
  std::sort(sorted.begin(), sorted.end(),
            [](const LabeledSpan* a, const LabeledSpan* b) {
              return std::tie(a->start, a->end) < std::tie(b->start, b->end);
            });
  for (std::size_t k = 1; k < sorted.size(); ++k) {
    const auto& a = *sorted[k - 1];
    const auto& b = *sorted[k];
    if (b.start <= a.end)
      throw ValidationError("overlapping spans " + a.type + "[" + std::to_string(a.start) +
                            "," + std::to_string(a.end) + "] and " + b.type + "[" +
                            std::to_string(b.start) + "," + std::to_string(b.end) + "]");
  }
  for (const auto* s : sorted) {
    tags[s->start] = begin_tag(s->type);
    for (std::size_t i = s->start + 1; i <= s->end; ++i) tags[i] = inside_tag(s->type);
  }
  return tags;
}

} // namespace xltproject

#endif // XLTPROJECT_BIO_HPP
