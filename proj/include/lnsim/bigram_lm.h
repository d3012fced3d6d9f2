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

#ifndef LNSIM_BIGRAM_LM_H_
#define LNSIM_BIGRAM_LM_H_

#include <map>
#include <set>
#include <string>
#include <unordered_map>
#include <vector>

#include "lnsim/corpus.h"
#include "lnsim/rng.h"

namespace lnsim {

inline constexpr std::string_view kSentenceStart = "<s>";

// P(w|c) = lambda * P_ml(w|c) + (1 - lambda) * P_addk(w).
// A context that was never followed by a word falls back to P_addk alone.
struct Smoothing {
  double lambda = 0.9;
  double add_k = 1.0;
};

class BigramModel {
 public:
  // `extra_vocabulary` adds zero-count words so that a model estimated on a
  // separate matched-task corpus still covers the injection vocabulary.
  static BigramModel Estimate(const Corpus &corpus, Smoothing smoothing = {},
                              const WordSeq &extra_vocabulary = {});

  // `context` may be kSentenceStart.  Throws kOutOfVocabulary.
  double CondProb(std::string_view context, std::string_view word) const;
  double UnigramProb(std::string_view word) const;

  Word SampleNext(std::string_view context, Rng &rng) const;

  // Draws from P(.|context) renormalised over `candidates`.
  // Throws kEmptyCandidateSet / kOutOfVocabulary.
  Word SampleFromSubset(std::string_view context,
                        const std::set<Word> &candidates, Rng &rng) const;

  // Renormalised subset distribution, in candidate order.
  std::vector<double> SubsetDistribution(std::string_view context,
                                         const std::set<Word> &candidates) const;

  bool Contains(std::string_view word) const;
  const WordSeq &vocabulary() const { return vocab_; }
  const Smoothing &smoothing() const { return smoothing_; }

  // `context<TAB>word<TAB>prob` for every context (start first) and word.
  std::string Dump() const;

 private:
  int WordIndex(std::string_view word) const;
  int ContextIndex(std::string_view context) const;
  double Prob(int context, int word) const;

  WordSeq vocab_;
  std::unordered_map<std::string, int> index_;
  std::vector<uint64_t> unigram_;
  uint64_t total_ = 0;
  // Row per context; the last row is the sentence-start context.
  std::vector<std::unordered_map<int, uint64_t>> bigram_;
  std::vector<uint64_t> row_total_;
  Smoothing smoothing_;
};

}  // namespace lnsim

#endif  // LNSIM_BIGRAM_LM_H_
