#include <gtest/gtest.h>

#include "xltproject/ensemble.hpp"
#include "xltproject/pharaoh.hpp"
#include "xltproject/testkit/generators.hpp"

using namespace xltproject;

namespace {

const LabelVocabulary kVocab{{"O", "B-PER", "I-PER"}};

LogitSentence logits(std::vector<std::vector<double>> rows, char prefix) {
  LogitSentence s;
  for (std::size_t i = 0; i < rows.size(); ++i)
    s.sentence.tokens.push_back(std::string(1, prefix) + std::to_string(i));
  s.logits = std::move(rows);
  return s;
}

} // namespace

TEST(Ensemble, ArgmaxPrefersLowestIndexOnTies) {
  EXPECT_EQ(argmax(std::vector<double>{0.5, 0.5}), 0u);
  EXPECT_EQ(argmax(std::vector<double>{-1, 2, 2}), 1u);
}

TEST(Ensemble, AverageIsSymmetric) {
  testkit::Rng rng(1);
  for (int k = 0; k < 500; ++k) {
    std::vector<double> a(4), b(4);
    for (auto& x : a) x = rng.unit() * 20 - 10;
    for (auto& x : b) x = rng.unit() * 20 - 10;
    for (auto space : {EnsembleSpace::Logits, EnsembleSpace::Probs})
      EXPECT_EQ(average(a, b, space), average(b, a, space));
  }
}

TEST(Ensemble, SymmetricTieResolvesToIndexZero) {
  const LabelVocabulary vocab{{"O", "B-PER"}};
  for (auto space : {EnsembleSpace::Logits, EnsembleSpace::Probs}) {
    EnsembleInput in{vocab, vocab, logits({{1, 0}}, 't'), logits({{0, 1}}, 's'),
                     parse_alignment_line("0-0")};
    EXPECT_EQ(ensemble(in, FilterSet{}, space).tags, (std::vector<Tag>{"O"}));
  }
}

// Averaging raw logits is not invariant to rescaling one stream.
TEST(Ensemble, LogitSpaceIsScaleSensitive) {
  const LabelVocabulary vocab{{"O", "B-PER"}};
  EnsembleInput in{vocab, vocab, logits({{2, 0}}, 't'), logits({{0, 1.5}}, 's'),
                   parse_alignment_line("0-0")};
  EXPECT_EQ(ensemble(in, FilterSet{}).tags, (std::vector<Tag>{"O"}));
  in.test_logits.logits[0] = {0, 4.5};
  EXPECT_EQ(ensemble(in, FilterSet{}).tags, (std::vector<Tag>{"B-PER"}));
}

TEST(Ensemble, LogitMapUsesFirstAndLastSourceVectors) {
  // test stream predicts B-PER I-PER over s0 s1; both map onto t0..t2
  const auto test = logits({{0, 5, 0}, {0, 0, 7}}, 's');
  const LabeledSentence pred{test.sentence, argmax_tags(test, kVocab)};
  const auto map = project_logits(test, pred, parse_alignment_line("0-0 1-2"), 3, FilterSet{});
  ASSERT_EQ(map.size(), 3u);
  EXPECT_EQ(map.at(0), test.logits[0]);
  EXPECT_EQ(map.at(1), test.logits[1]);
  EXPECT_EQ(map.at(2), test.logits[1]);
}

TEST(Ensemble, FallsBackToTrainStreamWithoutProjection) {
  const auto c = testkit::gen_random_logit_corpus(4, 200, kVocab);
  const std::vector<Alignment> empty(200);
  const auto out = ensemble_corpus(c.train, c.test, empty, FilterSet{});
  for (std::size_t i = 0; i < out.size(); ++i)
    EXPECT_EQ(out[i].tags, argmax_tags(c.train.sentences[i], kVocab));
}

TEST(Ensemble, RejectsMismatchedVocabularies) {
  const LabelVocabulary other{{"O", "B-LOC", "I-LOC"}};
  try {
    check_vocabularies(kVocab, other);
    FAIL();
  } catch (const ValidationError& e) {
    EXPECT_NE(std::string(e.what()).find("B-LOC"), std::string::npos);
    EXPECT_NE(std::string(e.what()).find("B-PER"), std::string::npos);
  }
}

TEST(Ensemble, ParallelismDoesNotChangeOutput) {
  const auto c = testkit::gen_random_logit_corpus(8, 300, kVocab);
  for (auto space : {EnsembleSpace::Logits, EnsembleSpace::Probs})
    EXPECT_EQ(ensemble_corpus(c.train, c.test, c.alignments, FilterSet{}, space, 1),
              ensemble_corpus(c.train, c.test, c.alignments, FilterSet{}, space, 3));
}
