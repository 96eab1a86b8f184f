#ifndef XLTPROJECT_TYPES_HPP
#define XLTPROJECT_TYPES_HPP

// Value types shared by every module. Indices are 0-based token positions.

#include <algorithm>
#include <compare>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

namespace xltproject {

using Tag = std::string;

struct Sentence {
  std::vector<std::string> tokens;

  std::size_t size() const noexcept { return tokens.size(); }
  bool operator==(const Sentence&) const = default;
};

struct LabeledSentence {
  Sentence sentence;
  std::vector<Tag> tags; // same length as sentence.tokens

  std::size_t size() const noexcept { return sentence.size(); }
  bool operator==(const LabeledSentence&) const = default;
};

/// Contiguous typed span, both ends inclusive.
struct LabeledSpan {
  std::string type;
  std::size_t start = 0;
  std::size_t end = 0;

  std::size_t length() const noexcept { return end - start + 1; }
  bool operator==(const LabeledSpan&) const = default;
  auto operator<=>(const LabeledSpan&) const = default;
};

struct Link {
  std::size_t src = 0;
  std::size_t tgt = 0;

  bool operator==(const Link&) const = default;
  auto operator<=>(const Link&) const = default;
};

/// Link set for one sentence pair, kept sorted by (src, tgt) and duplicate-free.
class Alignment {
public:
  Alignment() = default;
  explicit Alignment(std::vector<Link> links) : links_(std::move(links)) {
    std::sort(links_.begin(), links_.end());
    links_.erase(std::unique(links_.begin(), links_.end()), links_.end());
  }

  const std::vector<Link>& links() const noexcept { return links_; }
  bool empty() const noexcept { return links_.empty(); }
  std::size_t size() const noexcept { return links_.size(); }

  bool operator==(const Alignment&) const = default;

  static Alignment identity(std::size_t n) {
    std::vector<Link> links;
    links.reserve(n);
    for (std::size_t i = 0; i < n; ++i) links.push_back({i, i});
    return Alignment(std::move(links));
  }

private:
  std::vector<Link> links_;
};

/// Target-side index set induced by one source span. `indices` is non-empty,
/// ascending and duplicate-free.
struct CandidateSpan {
  std::vector<std::size_t> indices;

  std::size_t first() const { return indices.front(); }
  std::size_t last() const { return indices.back(); }
  bool operator==(const CandidateSpan&) const = default;
};

/// Ordered label set; position defines the logit dimension and the argmax
/// tie-break order.
struct LabelVocabulary {
  std::vector<Tag> labels;

  std::size_t size() const noexcept { return labels.size(); }
  bool operator==(const LabelVocabulary&) const = default;
};

struct LogitSentence {
  Sentence sentence;
  std::vector<std::vector<double>> logits; // one vector per token

  std::size_t size() const noexcept { return sentence.size(); }
  bool operator==(const LogitSentence&) const = default;
};

} // namespace xltproject

#endif // XLTPROJECT_TYPES_HPP
