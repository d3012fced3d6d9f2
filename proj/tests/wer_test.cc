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

#include "lnsim/wer.h"

#include <algorithm>
#include <climits>
#include <functional>
#include <set>
#include <tuple>

#include "gtest/gtest.h"
#include "lnsim/errors.h"
#include "oracles.h"
#include "test_util.h"

namespace lnsim {
namespace {

using testing::AlignByEnumeration;
using testing::AlignByMemoSearch;
using testing::OptimalDecompositions;
using testing::SameCounts;

ErrorCounts Oracle(const std::vector<int> &r, const std::vector<int> &h) {
  return AlignByEnumeration(r, h);
}

WordSeq ToWords(const std::vector<int> &v) {
  WordSeq w;
  for (int x : v) w.push_back("w" + std::to_string(x));
  return w;
}

TEST(AlignTest, Identity) {
  WordSeq a = {"turn", "on"};
  AlignmentResult r = Align(a, a);
  EXPECT_EQ(r.counts.hits, 2u);
  EXPECT_EQ(r.counts.errors(), 0u);
}

TEST(AlignTest, SingleDeletion) {
  WordSeq ref = {"turn", "on", "the", "light"}, hyp = {"turn", "the", "light"};
  AlignmentResult r = Align(ref, hyp);
  EXPECT_EQ(r.counts.dels, 1u);
  EXPECT_EQ(r.counts.subs, 0u);
  EXPECT_EQ(r.counts.ins, 0u);
  ASSERT_EQ(r.ops.size(), 4u);
  EXPECT_EQ(r.ops[1].op, EditOp::kDeletion);
  EXPECT_EQ(r.ops[1].ref, "on");
  EXPECT_FALSE(r.ops[1].hyp.has_value());
}

TEST(AlignTest, EmptySides) {
  WordSeq none, one = {"hi"};
  EXPECT_EQ(Align(none, one).counts.ins, 1u);
  EXPECT_EQ(Align(one, none).counts.dels, 1u);
  EXPECT_EQ(Align(none, none).counts.errors(), 0u);
}

TEST(AlignTest, TieOrderPrefersSubstitution) {
  // "a b" vs "b c": distance 2 either as sub+sub or del+ins; the trace
  // prefers substitutions when walking back from the end.
  WordSeq ref = {"a", "b"}, hyp = {"b", "c"};
  AlignmentResult r = Align(ref, hyp);
  EXPECT_EQ(r.counts.errors(), 2u);
  EXPECT_TRUE(SameCounts(r.counts, Oracle({0, 1}, {1, 2})));
  EXPECT_EQ(r.counts.subs, 2u);
}

TEST(AlignTest, ExhaustiveSmallPairs) {
  // All pairs of length <= 4 over a 3-word vocabulary (the acceptance suite
  // covers length <= 6).
  std::vector<std::vector<int>> seqs = {{}};
  for (size_t len = 1; len <= 4; ++len) {
    std::vector<std::vector<int>> next;
    for (const auto &s : seqs)
      if (s.size() == len - 1)
        for (int w = 0; w < 3; ++w) {
          auto t = s;
          t.push_back(w);
          next.push_back(t);
        }
    seqs.insert(seqs.end(), next.begin(), next.end());
  }
  for (const auto &r : seqs)
    for (const auto &h : seqs) {
      ErrorCounts got = AlignCounts(r, h);
      ASSERT_TRUE(SameCounts(got, Oracle(r, h)));
      ASSERT_TRUE(SameCounts(AlignByMemoSearch(r, h), got));
      ASSERT_TRUE(SameCounts(Align(ToWords(r), ToWords(h)).counts, got));
    }
}

TEST(AlignTest, RandomPairsMatchOracle) {
  Rng rng(42);
  for (int k = 0; k < 300; ++k) {
    std::vector<int> r(rng.UniformInt(8)), h(rng.UniformInt(8));
    for (int &x : r) x = static_cast<int>(rng.UniformInt(5));
    for (int &x : h) x = static_cast<int>(rng.UniformInt(5));
    ASSERT_TRUE(SameCounts(AlignCounts(r, h), Oracle(r, h)));
  }
}

TEST(AlignTest, AlgebraicLaws) {
  Rng rng(7);
  for (int k = 0; k < 500; ++k) {
    std::vector<int> r(rng.UniformInt(12)), h(rng.UniformInt(12));
    for (int &x : r) x = static_cast<int>(rng.UniformInt(4));
    for (int &x : h) x = static_cast<int>(rng.UniformInt(4));
    ErrorCounts a = AlignCounts(r, h), b = AlignCounts(h, r);
    EXPECT_EQ(a.hits + a.subs + a.dels, r.size());
    EXPECT_EQ(a.hits + a.subs + a.ins, h.size());
    EXPECT_LE(a.errors(), r.size() + h.size());
    // Swapping sides preserves the distance.  The decomposition of a swap
    // mirrors exactly only when the optimal alignment is unique, so the
    // invariant checked is distance and sub+ins+del balance.
    EXPECT_EQ(a.errors(), b.errors());
    EXPECT_EQ(static_cast<int64_t>(a.ins) - static_cast<int64_t>(a.dels),
              static_cast<int64_t>(b.dels) - static_cast<int64_t>(b.ins));
  }
}

TEST(AlignTest, SwapMirrorsUniqueDecompositions) {
  // With a fixed tie order the swapped trace can pick a different optimal
  // decomposition; when only one exists, ins and dels must trade places.
  Rng rng(11);
  int unique = 0;
  for (int k = 0; k < 2000; ++k) {
    std::vector<int> r(rng.UniformInt(7)), h(rng.UniformInt(7));
    for (int &x : r) x = static_cast<int>(rng.UniformInt(3));
    for (int &x : h) x = static_cast<int>(rng.UniformInt(3));
    if (OptimalDecompositions(r, h).size() != 1) continue;
    ++unique;
    ErrorCounts a = AlignCounts(r, h), b = AlignCounts(h, r);
    EXPECT_EQ(a.subs, b.subs);
    EXPECT_EQ(a.ins, b.dels);
    EXPECT_EQ(a.dels, b.ins);
  }
  EXPECT_GT(unique, 500);
}

TEST(AlignTest, DeterministicTrace) {
  WordSeq ref = {"a", "b", "a", "c"}, hyp = {"b", "a", "a"};
  AlignmentResult x = Align(ref, hyp), y = Align(ref, hyp);
  ASSERT_EQ(x.ops.size(), y.ops.size());
  for (size_t i = 0; i < x.ops.size(); ++i) {
    EXPECT_EQ(x.ops[i].op, y.ops[i].op);
    EXPECT_EQ(x.ops[i].ref, y.ops[i].ref);
    EXPECT_EQ(x.ops[i].hyp, y.ops[i].hyp);
  }
}

TEST(CorpusRatesTest, IdenticalIsZero) {
  Corpus c = testing::RandomCorpus(30, 4, 1);
  ErrorRates r = CorpusRates(c, c);
  EXPECT_EQ(r.wer, 0.0);
  EXPECT_EQ(r.sub_rate + r.ins_rate + r.del_rate, 0.0);
}

TEST(CorpusRatesTest, SinglePair) {
  ErrorRates r = CorpusRates(ParseCorpus("u\tturn on the light\n"), ParseCorpus("u\tturn the light\n"));
  EXPECT_DOUBLE_EQ(r.wer, 0.25);
  EXPECT_DOUBLE_EQ(r.del_rate, 0.25);
}

TEST(CorpusRatesTest, IdsMustMatch) {
  for (const char *hyp : {"v\ta\n", "u\ta\nv\tb\n"}) {
    try {
      CorpusRates(ParseCorpus("u\ta\n"), ParseCorpus(hyp));
      FAIL();
    } catch (const Error &e) {
      EXPECT_EQ(e.kind(), ErrorKind::kIdMismatch);
    }
  }
}

TEST(CorpusRatesTest, IdentityOnRandomCorpora) {
  for (uint64_t s = 0; s < 10; ++s) {
    Corpus ref = testing::RandomCorpus(60, 4, s), hyp = testing::RandomCorpus(60, 4, s + 100);
    ErrorRates r = CorpusRates(ref, hyp);
    EXPECT_NEAR(r.wer, r.sub_rate + r.ins_rate + r.del_rate, 1e-15);
    EXPECT_EQ(r.counts.ref_words(), ref.word_count());
  }
}

TEST(RelativeReportTest, BaselineIsOne) {
  ErrorRates b;
  b.sub_rate = 0.0603;
  b.ins_rate = 0.0141;
  b.del_rate = 0.0256;
  b.wer = b.sub_rate + b.ins_rate + b.del_rate;
  RelativeReport r = MakeRelativeReport(b, b, "b0");
  EXPECT_EQ(r.r_wer, 1.0);
  EXPECT_NEAR(r.r_sub + r.r_ins + r.r_del, 1.0, 1e-12);
  EXPECT_NEAR(r.r_sub, 0.603 / 1.0, 1e-12);
  EXPECT_EQ(r.chg_wer_pct, 0.0);
}

TEST(RelativeReportTest, Homogeneous) {
  ErrorRates base = ErrorRates::FromCounts({90, 5, 2, 3});
  ErrorRates twice = ErrorRates::FromCounts({82, 10, 4, 6});
  RelativeReport a = MakeRelativeReport(base, base.wer, "b0");
  RelativeReport b = MakeRelativeReport(twice, base.wer, "b0");
  EXPECT_NEAR(b.r_wer, 2 * a.r_wer, 1e-12);
  EXPECT_NEAR(b.r_sub, 2 * a.r_sub, 1e-12);
  EXPECT_NEAR(b.r_ins, 2 * a.r_ins, 1e-12);
  EXPECT_NEAR(b.r_del, 2 * a.r_del, 1e-12);
  EXPECT_NEAR(b.r_wer, b.r_sub + b.r_ins + b.r_del, 1e-12);
}

TEST(RelativeReportTest, ZeroBaseline) {
  try {
    MakeRelativeReport(ErrorRates{}, 0.0, "b0");
    FAIL();
  } catch (const Error &e) {
    EXPECT_EQ(e.kind(), ErrorKind::kZeroBaseline);
  }
}

TEST(RelativeReportTest, JsonColumns) {
  ErrorRates rates = ErrorRates::FromCounts({90, 5, 2, 3});
  const std::string j = RelativeReportJson(MakeRelativeReport(rates, rates, "b0"), rates);
  for (const char *key : {"\"R_WER\"", "\"R_Sub\"", "\"R_Ins\"", "\"R_Del\"", "\"Chg_WER_pct\"", "\"baseline_id\""})
    EXPECT_NE(j.find(key), std::string::npos) << key;
}

}  // namespace
}  // namespace lnsim
