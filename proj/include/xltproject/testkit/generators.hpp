#ifndef XLTPROJECT_TESTKIT_GENERATORS_HPP
#define XLTPROJECT_TESTKIT_GENERATORS_HPP

// Seeded corpus generators. Output depends only on the arguments: the engine
// is std::mt19937_64 (fully specified by the standard) and all draws go
// through the helpers below rather than <random> distributions, whose output
// varies between standard libraries.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "xltproject/logits.hpp"
#include "xltproject/types.hpp"

namespace xltproject::testkit {

class Rng {
public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform in [0, n); n > 0.
  std::size_t below(std::size_t n) { return static_cast<std::size_t>(engine_() % n); }
  /// Uniform in [lo, hi].
  std::size_t between(std::size_t lo, std::size_t hi) { return lo + below(hi - lo + 1); }
  /// Uniform in [0, 1).
  double unit() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  bool chance(double p) { return p >= 1.0 || unit() < p; }

private:
  std::mt19937_64 engine_;
};

struct ProjectionCorpus {
  std::vector<LabeledSentence> sources;
  std::vector<Sentence> targets;
  std::vector<Alignment> alignments;

  bool operator==(const ProjectionCorpus&) const = default;
};

struct GeneratorOptions {
  std::size_t max_len = 8;
  std::vector<std::string> tag_types{"PER", "LOC", "ORG"};
  double link_density = 0.3; // probability of each (i, j) link
  double span_rate = 0.3;    // probability that a span opens at a free position
  std::size_t max_span = 3;
};

namespace detail {

inline std::vector<Tag> random_bio(Rng& rng, std::size_t len, const GeneratorOptions& opt) {
  std::vector<Tag> tags(len, "O");
  std::size_t i = 0;
  while (i < len) {
    if (!opt.tag_types.empty() && rng.chance(opt.span_rate)) {
      const auto& type = opt.tag_types[rng.below(opt.tag_types.size())];
      const std::size_t n = std::min(rng.between(1, opt.max_span), len - i);
      tags[i] = "B-" + type;
      for (std::size_t k = 1; k < n; ++k) tags[i + k] = "I-" + type;
      i += n;
    } else {
      ++i;
    }
  }
  return tags;
}

inline Alignment random_alignment(Rng& rng, std::size_t src_len, std::size_t tgt_len,
                                  double density) {
  std::vector<Link> links;
  for (std::size_t i = 0; i < src_len; ++i)
    for (std::size_t j = 0; j < tgt_len; ++j)
      if (density > 0.0 && rng.chance(density)) links.push_back({i, j});
  return Alignment(std::move(links));
}

inline std::vector<std::string> random_tokens(Rng& rng, std::size_t len, char prefix) {
  std::vector<std::string> tokens;
  for (std::size_t i = 0; i < len; ++i)
    tokens.push_back(std::string(1, prefix) + std::to_string(rng.below(50)));
  return tokens;
}

} // namespace detail

inline ProjectionCorpus gen_random_corpus(std::uint64_t seed, std::size_t size,
                                          const GeneratorOptions& opt = {}) {
  Rng rng(seed);
  ProjectionCorpus c;
  for (std::size_t k = 0; k < size; ++k) {
    const std::size_t src_len = rng.between(1, opt.max_len);
    const std::size_t tgt_len = rng.between(1, opt.max_len);
    LabeledSentence src;
    src.sentence.tokens = detail::random_tokens(rng, src_len, 's');
    src.tags = detail::random_bio(rng, src_len, opt);
    c.sources.push_back(std::move(src));
    c.targets.push_back(Sentence{detail::random_tokens(rng, tgt_len, 't')});
    c.alignments.push_back(detail::random_alignment(rng, src_len, tgt_len, opt.link_density));
  }
  return c;
}

/// Targets are copies of the source tokens; alignments are identity links.
inline ProjectionCorpus make_identity_fixture(const std::vector<LabeledSentence>& corpus) {
  ProjectionCorpus c;
  for (const auto& s : corpus) {
    c.sources.push_back(s);
    c.targets.push_back(s.sentence);
    c.alignments.push_back(Alignment::identity(s.size()));
  }
  return c;
}

struct EnsembleCorpus {
  LogitCorpus train; // over T
  LogitCorpus test;  // over S^
  std::vector<Alignment> alignments;
};

/// Logits are multiples of 0.5 in [-4, 4] so that argmax ties occur.
inline EnsembleCorpus gen_random_logit_corpus(std::uint64_t seed, std::size_t size,
                                              const LabelVocabulary& vocab,
                                              const GeneratorOptions& opt = {}) {
  Rng rng(seed);
  auto draw = [&](std::size_t len, char prefix) {
    LogitSentence s;
    s.sentence.tokens = detail::random_tokens(rng, len, prefix);
    for (std::size_t i = 0; i < len; ++i) {
      std::vector<double> v(vocab.size());
      for (auto& x : v) x = static_cast<double>(rng.below(17)) * 0.5 - 4.0;
      s.logits.push_back(std::move(v));
    }
    return s;
  };
  EnsembleCorpus c;
  c.train.vocabulary = vocab;
  c.test.vocabulary = vocab;
  for (std::size_t k = 0; k < size; ++k) {
    const std::size_t tgt_len = rng.between(1, opt.max_len);
    const std::size_t src_len = rng.between(1, opt.max_len);
    c.train.sentences.push_back(draw(tgt_len, 't'));
    c.test.sentences.push_back(draw(src_len, 's'));
    c.alignments.push_back(detail::random_alignment(rng, src_len, tgt_len, opt.link_density));
  }
  return c;
}

} // namespace xltproject::testkit

#endif // XLTPROJECT_TESTKIT_GENERATORS_HPP
