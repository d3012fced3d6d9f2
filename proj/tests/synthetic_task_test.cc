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

#include "lnsim/synthetic_task.h"

#include <set>
#include <vector>

#include "gtest/gtest.h"
#include "lnsim/errors.h"
#include "lnsim/soundex.h"

namespace lnsim {
namespace {

TEST(SyntheticTaskTest, MeanReferenceLength) {
  SyntheticTaskConfig c;
  const auto data = GenerateSyntheticTask(c, 10000, 1);
  double words = 0;
  for (const Example &ex : data) {
    ASSERT_GE(ex.labels.size(), 1u);
    ASSERT_LE(ex.labels.size(), static_cast<size_t>(c.max_length));
    words += static_cast<double>(ex.labels.size());
  }
  EXPECT_NEAR(words / 10000, 3.8, 0.1);
}

TEST(SyntheticTaskTest, FramesFollowLabels) {
  SyntheticTaskConfig c;
  c.noise_rate = 0.0;
  for (const Example &ex : GenerateSyntheticTask(c, 500, 2)) {
    // Collapsing runs cannot split a label, and every frame is a label.
    EXPECT_GE(ex.frames.size(), ex.labels.size());
    EXPECT_LE(ex.frames.size(), 3 * ex.labels.size());
    for (int s : ex.frames) {
      EXPECT_GE(s, 1);
      EXPECT_LE(s, c.num_labels());
    }
  }
}

TEST(SyntheticTaskTest, CopyTaskWithoutNoiseOrRepeats) {
  SyntheticTaskConfig c;
  c.noise_rate = 0.0;
  c.max_repeat = 1;
  for (const Example &ex : GenerateSyntheticTask(c, 200, 3)) EXPECT_EQ(ex.frames, ex.labels);
}

TEST(SyntheticTaskTest, DeterministicPerSeed) {
  SyntheticTaskConfig c;
  EXPECT_EQ(GenerateSyntheticTask(c, 100, 5), GenerateSyntheticTask(c, 100, 5));
  EXPECT_NE(GenerateSyntheticTask(c, 100, 5), GenerateSyntheticTask(c, 100, 6));
}

TEST(SyntheticTaskTest, LexiconHasSoundexPartners) {
  std::multiset<std::string> codes;
  for (const Word &w : ToyLexicon()) codes.insert(Soundex(w).str());
  int shared = 0;
  for (const Word &w : ToyLexicon()) shared += codes.count(Soundex(w).str()) > 1;
  EXPECT_EQ(shared, 10);
}

TEST(SyntheticTaskTest, WordsAndLabelsRoundTrip) {
  SyntheticTaskConfig c;
  const auto data = GenerateSyntheticTask(c, 50, 9);
  const Corpus corpus = LabelsToCorpus(data, "eval");
  ASSERT_EQ(corpus.utt_count(), 50u);
  EXPECT_EQ(corpus.utterances()[0].id, "eval000000");
  for (size_t i = 0; i < data.size(); ++i)
    EXPECT_EQ(WordsToLabels(corpus.utterances()[i].words), data[i].labels);
  try {
    WordsToLabels({"zebra"});
    FAIL();
  } catch (const Error &e) {
    EXPECT_EQ(e.kind(), ErrorKind::kOutOfVocabulary);
  }
}

TEST(SyntheticTaskTest, RejectsBadConfig) {
  SyntheticTaskConfig c;
  c.mean_length = 20;
  EXPECT_THROW(GenerateSyntheticTask(c, 1, 1), Error);
  c = {};
  c.max_repeat = 0;
  EXPECT_THROW(GenerateSyntheticTask(c, 1, 1), Error);
}

}  // namespace
}  // namespace lnsim
