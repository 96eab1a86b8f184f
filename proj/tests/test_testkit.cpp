#include <gtest/gtest.h>

#include "xltproject/bio.hpp"
#include "xltproject/testkit/generators.hpp"
#include "xltproject/testkit/oracle.hpp"
#include "xltproject/testkit/sweep.hpp"

using namespace xltproject;

TEST(Testkit, GeneratorsAreDeterministic) {
  EXPECT_EQ(testkit::gen_random_corpus(42, 100), testkit::gen_random_corpus(42, 100));
  EXPECT_FALSE(testkit::gen_random_corpus(42, 100) == testkit::gen_random_corpus(43, 100));
  const LabelVocabulary v{{"O", "B-X", "I-X"}};
  EXPECT_EQ(testkit::gen_random_logit_corpus(1, 50, v).test.sentences,
            testkit::gen_random_logit_corpus(1, 50, v).test.sentences);
}

TEST(Testkit, GeneratedCorporaAreWellFormed) {
  const auto c = testkit::gen_random_corpus(3, 500);
  for (std::size_t i = 0; i < c.sources.size(); ++i) {
    EXPECT_TRUE(is_bio_valid(c.sources[i].tags));
    for (const auto& l : c.alignments[i].links()) {
      EXPECT_LT(l.src, c.sources[i].size());
      EXPECT_LT(l.tgt, c.targets[i].size());
    }
  }
}

TEST(Testkit, LinkDensityExtremes) {
  testkit::GeneratorOptions opt;
  opt.link_density = 0.0;
  for (const auto& a : testkit::gen_random_corpus(9, 100, opt).alignments) EXPECT_TRUE(a.empty());
  opt.link_density = 1.0;
  const auto full = testkit::gen_random_corpus(9, 100, opt);
  for (std::size_t i = 0; i < full.alignments.size(); ++i)
    EXPECT_EQ(full.alignments[i].size(), full.sources[i].size() * full.targets[i].size());
}

TEST(Testkit, SpanLayoutCounts) {
  // 1 + (one-span) for n = 1; n = 2: 3 single spans + 1 pair x 2 types
  EXPECT_EQ(testkit::span_layouts(1).size(), 1u);
  EXPECT_EQ(testkit::span_layouts(2).size(), 5u);
}

TEST(Testkit, OracleOnIdentity) {
  testkit::InstanceSpec spec{3, 3, {{"X", 0, 1}, {"Y", 2, 2}}, 0};
  for (std::size_t i = 0; i < 3; ++i) spec.alignment_bits |= std::uint64_t{1} << (i * 3 + i);
  const auto o = testkit::oracle_project(spec, Direction::Train, FilterSet{true, true, true, false});
  ASSERT_TRUE(o.projected);
  EXPECT_EQ(o.projected->tags, spec.source().tags);
}

TEST(Testkit, FuzzIsReproducible) {
  const auto a = testkit::fuzz_pipeline(17, 200, 1);
  const auto b = testkit::fuzz_pipeline(17, 200, 2);
  EXPECT_TRUE(a.ok());
  EXPECT_EQ(a.outputs, b.outputs);
  EXPECT_EQ(a.outputs.size(), 32u);
}
