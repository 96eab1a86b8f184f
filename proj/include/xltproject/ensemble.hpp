#ifndef XLTPROJECT_ENSEMBLE_HPP
#define XLTPROJECT_ENSEMBLE_HPP

// Ensemble of a translate-train tagger (logits over the original sentence T)
// and a translate-test tagger (logits over its translation S^). The test
// stream's predicted spans are projected onto T with TEST semantics and carry
// their logit vectors along: the first written position receives the vector of
// the span's first source token, every later written position the vector of
// its last source token. Covered tokens are decoded from the element-wise mean
// of both streams, uncovered tokens from the train stream alone. Argmax ties go
// to the lowest vocabulary index; the result is BIO-repaired.
//
// Averaging happens on raw logits by default, so the two streams' scales
// matter. EnsembleSpace::Probs averages softmax distributions instead.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "xltproject/bio.hpp"
#include "xltproject/detail/parallel.hpp"
#include "xltproject/error.hpp"
#include "xltproject/logits.hpp"
#include "xltproject/projection.hpp"
#include "xltproject/types.hpp"

namespace xltproject {

enum class EnsembleSpace { Logits, Probs };

using LogitMap = std::map<std::size_t, std::vector<double>>;

inline std::size_t argmax(std::span<const double> v) {
  std::size_t best = 0;
  for (std::size_t k = 1; k < v.size(); ++k)
    if (v[k] > v[best]) best = k;
  return best;
}

/// Per-token argmax labels, BIO-repaired.
inline std::vector<Tag> argmax_tags(const LogitSentence& s, const LabelVocabulary& vocab) {
  std::vector<Tag> tags;
  tags.reserve(s.size());
  for (const auto& v : s.logits) tags.push_back(vocab.labels.at(argmax(v)));
  return repair_bio(std::move(tags));
}

inline std::vector<double> softmax(std::span<const double> v) {
  std::vector<double> out(v.begin(), v.end());
  if (out.empty()) return out;
  const double peak = *std::max_element(out.begin(), out.end());
  double total = 0.0;
  for (auto& x : out) total += (x = std::exp(x - peak));
  for (auto& x : out) x /= total;
  return out;
}

/// Element-wise mean of two vectors; symmetric in its arguments bit for bit.
inline std::vector<double> average(std::span<const double> a, std::span<const double> b,
                                   EnsembleSpace space) {
  if (a.size() != b.size()) throw ValidationError("logit dimension mismatch");
  std::vector<double> pa, pb;
  if (space == EnsembleSpace::Probs) {
    pa = softmax(a);
    pb = softmax(b);
    a = pa;
    b = pb;
  }
  std::vector<double> out(a.size());
  for (std::size_t k = 0; k < a.size(); ++k) out[k] = (a[k] + b[k]) / 2.0;
  return out;
}

/// Projects the test stream's vectors onto target positions covered by its
/// predicted spans. `predicted` labels the translated sentence, normally
/// argmax_tags(test_logits). Filters must be TEST-legal.
inline LogitMap project_logits(const LogitSentence& test_logits, const LabeledSentence& predicted,
                               const Alignment& alignment, std::size_t tgt_len,
                               const FilterSet& filters) {
  check_filters(Direction::Test, filters);
  if (predicted.size() != test_logits.size() || predicted.tags.size() != predicted.size())
    throw ValidationError("predicted labels do not match the test stream length");
  check_alignment_bounds(alignment, test_logits.size(), tgt_len);

  LogitMap out;
  const auto mapping = map_spans(extract_spans(predicted), alignment, tgt_len, filters);
  for (const auto& r : mapping.reports) {
    if (r.status != SpanStatus::Projected) continue;
    out[r.written->first] = test_logits.logits[r.span.start];
    for (std::size_t j = r.written->first + 1; j <= r.written->last; ++j)
      out[j] = test_logits.logits[r.span.end];
  }
  return out;
}

/// Decodes the train stream, replacing covered tokens by the stream average.
inline std::vector<Tag> combine(const LogitSentence& train_logits, const LogitMap& projected,
                                const LabelVocabulary& vocab, EnsembleSpace space) {
  std::vector<Tag> tags;
  tags.reserve(train_logits.size());
  for (std::size_t t = 0; t < train_logits.size(); ++t) {
    const auto& own = train_logits.logits[t];
    auto it = projected.find(t);
    const std::size_t best =
        it == projected.end() ? argmax(own) : argmax(average(own, it->second, space));
    tags.push_back(vocab.labels.at(best));
  }
  return repair_bio(std::move(tags));
}

struct EnsembleInput {
  LabelVocabulary train_vocabulary;
  LabelVocabulary test_vocabulary;
  LogitSentence train_logits; // over the original sentence T
  LogitSentence test_logits;  // over the translation S^
  Alignment alignment;        // S^ -> T
};

inline void check_vocabularies(const LabelVocabulary& train, const LabelVocabulary& test) {
  if (train == test) return;
  auto show = [](const LabelVocabulary& v) {
    std::string s = "[";
    for (std::size_t i = 0; i < v.labels.size(); ++i) s += (i ? "," : "") + v.labels[i];
    return s + "]";
  };
  throw ValidationError("label vocabularies differ: train " + show(train) + " vs test " +
                        show(test));
}

inline LabeledSentence ensemble(const EnsembleInput& in, const FilterSet& filters,
                                EnsembleSpace space = EnsembleSpace::Logits) {
  check_vocabularies(in.train_vocabulary, in.test_vocabulary);
  const auto& vocab = in.train_vocabulary;
  validate(in.train_logits, vocab);
  validate(in.test_logits, vocab);
  const LabeledSentence predicted{in.test_logits.sentence, argmax_tags(in.test_logits, vocab)};
  const auto projected =
      project_logits(in.test_logits, predicted, in.alignment, in.train_logits.size(), filters);
  return {in.train_logits.sentence, combine(in.train_logits, projected, vocab, space)};
}

inline std::vector<LabeledSentence> ensemble_corpus(const LogitCorpus& train,
                                                    const LogitCorpus& test,
                                                    const std::vector<Alignment>& alignments,
                                                    const FilterSet& filters,
                                                    EnsembleSpace space = EnsembleSpace::Logits,
                                                    std::size_t parallelism = 1) {
  check_vocabularies(train.vocabulary, test.vocabulary);
  if (train.sentences.size() != test.sentences.size() ||
      train.sentences.size() != alignments.size())
    throw ValidationError("corpus length mismatch: " + std::to_string(train.sentences.size()) +
                          " train records, " + std::to_string(test.sentences.size()) +
                          " test records, " + std::to_string(alignments.size()) + " alignments");
  check_filters(Direction::Test, filters);
  return detail::ordered_map(train.sentences.size(), parallelism, [&](std::size_t i) {
    try {
      return ensemble({train.vocabulary, test.vocabulary, train.sentences[i], test.sentences[i],
                       alignments[i]},
                      filters, space);
    } catch (const ValidationError& e) {
      throw ValidationError(e.message(), i);
    }
  });
}

} // namespace xltproject

#endif // XLTPROJECT_ENSEMBLE_HPP
