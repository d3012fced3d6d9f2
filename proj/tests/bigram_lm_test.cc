// Copyright 2026 The labelnoise Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "lnsim/bigram_lm.h"

#include <map>

#include "gtest/gtest.h"
#include "lnsim/errors.h"
#include "test_util.h"

namespace lnsim {
namespace {

const Smoothing kPureMl{1.0, 1.0};

double ContextSum(const BigramModel &m, std::string_view context) {
  double s = 0.0;
  for (const Word &w : m.vocabulary()) s += m.CondProb(context, w);
  return s;
}

TEST(BigramTest, MaximumLikelihoodCases) {
  BigramModel m1 = BigramModel::Estimate(ParseCorpus("x\ta b\ny\ta b\n"), kPureMl);
  EXPECT_DOUBLE_EQ(m1.CondProb("a", "b"), 1.0);
  BigramModel m2 = BigramModel::Estimate(ParseCorpus("x\ta b\ny\ta c\n"), kPureMl);
  EXPECT_DOUBLE_EQ(m2.CondProb("a", "b"), 0.5);
  EXPECT_DOUBLE_EQ(m2.CondProb("a", "c"), 0.5);
  BigramModel m3 = BigramModel::Estimate(ParseCorpus("x\ta b\n"), kPureMl);
  EXPECT_DOUBLE_EQ(m3.CondProb("a", "b"), 1.0);
  EXPECT_DOUBLE_EQ(m3.CondProb(kSentenceStart, "a"), 1.0);
}

TEST(BigramTest, InterpolationFormula) {
  // Counts: a:2 b:1 c:1, N=4, V=3.  Unigram add-1: a 3/7, b 2/7, c 2/7.
  BigramModel m = BigramModel::Estimate(ParseCorpus("x\ta b\ny\ta c\n"));
  EXPECT_NEAR(m.UnigramProb("a"), 3.0 / 7.0, 1e-15);
  EXPECT_NEAR(m.CondProb("a", "b"), 0.9 * 0.5 + 0.1 * 2.0 / 7.0, 1e-15);
  EXPECT_NEAR(m.CondProb("a", "a"), 0.1 * 3.0 / 7.0, 1e-15);
  // "b" never has a successor: unigram fallback.
  EXPECT_NEAR(m.CondProb("b", "c"), 2.0 / 7.0, 1e-15);
  EXPECT_NEAR(m.CondProb(kSentenceStart, "a"), 0.9 + 0.1 * 3.0 / 7.0, 1e-15);
}

TEST(BigramTest, UnseenPairPositive) {
  BigramModel m = BigramModel::Estimate(ParseCorpus("x\ta b\n"));
  EXPECT_GT(m.CondProb("b", "a"), 0.0);
  EXPECT_GT(m.CondProb("a", "a"), 0.0);
}

TEST(BigramTest, NormalizedOnRandomCorpora) {
  for (uint64_t seed = 0; seed < 20; ++seed) {
    BigramModel m = BigramModel::Estimate(testing::RandomCorpus(50 + seed * 10, 3.5, seed));
    EXPECT_NEAR(ContextSum(m, kSentenceStart), 1.0, 1e-9);
    for (const Word &c : m.vocabulary()) EXPECT_NEAR(ContextSum(m, c), 1.0, 1e-9) << c;
  }
}

TEST(BigramTest, ExtraVocabularyCovered) {
  BigramModel m = BigramModel::Estimate(ParseCorpus("x\ta b\n"), {}, {"zebra"});
  EXPECT_TRUE(m.Contains("zebra"));
  EXPECT_GT(m.CondProb("a", "zebra"), 0.0);
  EXPECT_GT(m.CondProb("zebra", "a"), 0.0);
  EXPECT_NEAR(ContextSum(m, "a"), 1.0, 1e-12);
}

TEST(BigramTest, Errors) {
  BigramModel m = BigramModel::Estimate(ParseCorpus("x\ta b\n"));
  EXPECT_THROW(m.CondProb("a", "nope"), Error);
  EXPECT_THROW(m.CondProb("nope", "a"), Error);
  Rng rng(1);
  try {
    m.SampleFromSubset("a", {}, rng);
    FAIL();
  } catch (const Error &e) {
    EXPECT_EQ(e.kind(), ErrorKind::kEmptyCandidateSet);
  }
  try {
    BigramModel::Estimate(Corpus{});
    FAIL();
  } catch (const Error &e) {
    EXPECT_EQ(e.kind(), ErrorKind::kEmptyCorpus);
  }
  EXPECT_THROW(BigramModel::Estimate(ParseCorpus("x\t<s> a\n")), Error);
  EXPECT_THROW(BigramModel::Estimate(ParseCorpus("x\ta\n"), Smoothing{1.5, 1.0}), Error);
}

TEST(BigramTest, DegenerateSampling) {
  BigramModel m = BigramModel::Estimate(ParseCorpus("x\ta b\n"), Smoothing{1.0, 0.0});
  Rng rng(3);
  for (int i = 0; i < 100; ++i) EXPECT_EQ(m.SampleNext("a", rng), "b");
  EXPECT_EQ(m.SampleFromSubset("b", {"a"}, rng), "a");  // singleton
}

TEST(BigramTest, UniformTwoWordSampling) {
  BigramModel m = BigramModel::Estimate(ParseCorpus("x\ta b\ny\tb a\n"), Smoothing{0.0, 1.0});
  ASSERT_DOUBLE_EQ(m.CondProb("a", "a"), 0.5);
  Rng rng(17);
  uint64_t a = 0;
  const uint64_t trials = 10000;
  for (uint64_t i = 0; i < trials; ++i) a += m.SampleNext("a", rng) == "a";
  EXPECT_TRUE(testing::WithinSigma(a, trials, 0.5)) << a;
}

TEST(BigramTest, SubsetRenormalizationOracle) {
  BigramModel m = BigramModel::Estimate(testing::RandomCorpus(200, 4.0, 9));
  const std::set<Word> cand = {"play", "plea", "stop"};
  const double pb = m.CondProb("the", "play"), pc = m.CondProb("the", "plea"),
               pd = m.CondProb("the", "stop");
  std::vector<double> dist = m.SubsetDistribution("the", cand);
  ASSERT_EQ(dist.size(), 3u);
  EXPECT_NEAR(dist[0], pb / (pb + pc + pd), 1e-15);
  EXPECT_NEAR(dist[0] + dist[1] + dist[2], 1.0, 1e-12);

  Rng rng(5);
  std::map<Word, uint64_t> hits;
  const uint64_t trials = 10000;
  for (uint64_t i = 0; i < trials; ++i) ++hits[m.SampleFromSubset("the", cand, rng)];
  EXPECT_TRUE(testing::WithinSigma(hits["play"], trials, pb / (pb + pc + pd)));
  EXPECT_TRUE(testing::WithinSigma(hits["plea"], trials, pc / (pb + pc + pd)));
  EXPECT_TRUE(testing::WithinSigma(hits["stop"], trials, pd / (pb + pc + pd)));
}

TEST(BigramTest, SamplingDeterministic) {
  BigramModel m = BigramModel::Estimate(testing::RandomCorpus(100, 4.0, 2));
  Rng r1(8), r2(8);
  for (int i = 0; i < 200; ++i) EXPECT_EQ(m.SampleNext(kSentenceStart, r1), m.SampleNext(kSentenceStart, r2));
}

TEST(BigramTest, EstimateIsBitStable) {
  Corpus c = testing::RandomCorpus(300, 3.8, 4);
  EXPECT_EQ(BigramModel::Estimate(c).Dump(), BigramModel::Estimate(c).Dump());
}

TEST(BigramTest, MonotoneInBigramCount) {
  // Appending w to an utterance ending in c raises count(c, w) by one.
  for (uint64_t seed = 0; seed < 30; ++seed) {
    Corpus c = testing::RandomCorpus(40, 3.0, seed);
    std::vector<Utterance> utts = c.utterances();
    Rng rng(seed);
    Utterance &u = utts[rng.UniformInt(utts.size())];
    const Word ctx = u.words.back();
    const Word w = testing::TestVocabulary()[rng.UniformInt(testing::TestVocabulary().size())];
    const WordSeq extra = {w};
    const double before = BigramModel::Estimate(c, {}, extra).CondProb(ctx, w);
    u.words.push_back(w);
    const double after = BigramModel::Estimate(Corpus(utts), {}, extra).CondProb(ctx, w);
    EXPECT_GE(after, before) << seed;
  }
}

TEST(BigramTest, DumpFormat) {
  BigramModel m = BigramModel::Estimate(ParseCorpus("x\ta b\n"), kPureMl);
  EXPECT_EQ(m.Dump(), "<s>\ta\t1\n<s>\tb\t0\na\ta\t0\na\tb\t1\nb\ta\t0.5\nb\tb\t0.5\n");
}

}  // namespace
}  // namespace lnsim
