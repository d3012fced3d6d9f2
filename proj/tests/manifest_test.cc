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

#include "gtest/gtest.h"
#include "lnsim/bigram_lm.h"
#include "lnsim/errors.h"
#include "lnsim/injector.h"
#include "lnsim/soundex.h"
#include "test_util.h"

namespace lnsim {
namespace {

TEST(ManifestTest, RoundTripsEveryField) {
  Corpus c = testing::RandomCorpus(400, 3.8, 31);
  BigramModel lm = BigramModel::Estimate(c);
  SoundexIndex index(Vocabulary(c));
  for (ErrorType t : {ErrorType::kDeletion, ErrorType::kInsertion, ErrorType::kSubstitution}) {
    InjectionConfig cfg;
    cfg.error_type = t;
    cfg.target_ler = Rational::Parse("0.06");
    cfg.seed = 4;
    InjectionResult r = InjectDataset(c, &lm, &index, cfg);
    const std::string text = SerializeManifest(r.manifest);
    InjectionManifest back = ParseManifest(text);
    EXPECT_EQ(back.records, r.manifest.records);
    EXPECT_EQ(back.skipped, r.manifest.skipped);
    EXPECT_EQ(back.num_utts, r.manifest.num_utts);
    EXPECT_EQ(back.num_words, r.manifest.num_words);
    EXPECT_EQ(back.corrupted_num_words, r.manifest.corrupted_num_words);
    EXPECT_EQ(back.visited, r.manifest.visited);
    EXPECT_EQ(back.prng_id, std::string(kPrngId));
    EXPECT_EQ(back.config.target_ler.ToString(), "3/50");
    EXPECT_EQ(back.config.preserved_deletion, r.manifest.config.preserved_deletion);
    EXPECT_EQ(SerializeManifest(back), text);
    // The round-tripped manifest still inverts the corruption.
    EXPECT_EQ(InvertInjection(r.corpus, back), c);
  }
}

TEST(ManifestTest, FileRoundTrip) {
  testing::TempDir dir("manifest");
  Corpus c = testing::RandomCorpus(100, 3.0, 1);
  InjectionConfig cfg;
  cfg.target_ler = Rational::Parse("0.02");
  InjectionResult r = InjectDataset(c, nullptr, nullptr, cfg);
  WriteManifest(r.manifest, dir.path() / "m.jsonl");
  EXPECT_EQ(SerializeManifest(LoadManifest(dir.path() / "m.jsonl")), SerializeManifest(r.manifest));
}

TEST(ManifestTest, HeaderCarriesRates) {
  Corpus c = testing::ExactSizeCorpus(10, 40, 2);
  InjectionConfig cfg;
  cfg.target_ler = Rational::Parse("0.05");
  cfg.preserved_deletion = std::set<Word>{};
  InjectionResult r = InjectDataset(c, nullptr, nullptr, cfg);
  const std::string header = SerializeManifest(r.manifest).substr(0, SerializeManifest(r.manifest).find('\n'));
  EXPECT_NE(header.find("\"achieved_ler_exact\":\"3/40\""), std::string::npos) << header;
  EXPECT_NE(header.find("\"achieved_ser_exact\":\"3/10\""), std::string::npos) << header;
  EXPECT_NE(header.find("\"prng_id\""), std::string::npos);
}

TEST(ManifestTest, RejectsMalformedInput) {
  EXPECT_THROW(ParseManifest(""), Error);
  EXPECT_THROW(ParseManifest("{\"kind\":\"record\"}\n"), Error);
  EXPECT_THROW(ParseManifest("not json\n"), Error);
  EXPECT_THROW(ParseManifest("{\"kind\":\"header\",\"format\":\"other\"}\n"), Error);
}

}  // namespace
}  // namespace lnsim
