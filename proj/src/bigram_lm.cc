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

#include <cstdio>

#include "lnsim/errors.h"

namespace lnsim {

BigramModel BigramModel::Estimate(const Corpus &corpus, Smoothing smoothing,
                                  const WordSeq &extra_vocabulary) {
  if (corpus.empty()) throw Error(ErrorKind::kEmptyCorpus, "bigram estimate");
  if (!(smoothing.lambda >= 0.0 && smoothing.lambda <= 1.0) ||
      !(smoothing.add_k >= 0.0))
    throw Error(ErrorKind::kInvalidConfig, "smoothing out of range");

  BigramModel m;
  m.smoothing_ = smoothing;
  std::set<Word> vocab(extra_vocabulary.begin(), extra_vocabulary.end());
  for (const Utterance &u : corpus.utterances())
    vocab.insert(u.words.begin(), u.words.end());
  if (vocab.count(std::string(kSentenceStart)))
    throw Error(ErrorKind::kInvalidConfig, "corpus uses the reserved token <s>");
  m.vocab_.assign(vocab.begin(), vocab.end());
  for (size_t i = 0; i < m.vocab_.size(); ++i)
    m.index_.emplace(m.vocab_[i], static_cast<int>(i));

  const size_t n = m.vocab_.size();
  m.unigram_.assign(n, 0);
  m.bigram_.assign(n + 1, {});
  m.row_total_.assign(n + 1, 0);
  const int start = static_cast<int>(n);
  for (const Utterance &u : corpus.utterances()) {
    int prev = start;
    for (const Word &w : u.words) {
      int id = m.index_.at(w);
      ++m.unigram_[id];
      ++m.total_;
      ++m.bigram_[prev][id];
      ++m.row_total_[prev];
      prev = id;
    }
  }
  return m;
}

int BigramModel::WordIndex(std::string_view word) const {
  auto it = index_.find(std::string(word));
  if (it == index_.end())
    throw Error(ErrorKind::kOutOfVocabulary, "'" + std::string(word) + "'");
  return it->second;
}

int BigramModel::ContextIndex(std::string_view context) const {
  if (context == kSentenceStart) return static_cast<int>(vocab_.size());
  return WordIndex(context);
}

bool BigramModel::Contains(std::string_view word) const {
  return index_.count(std::string(word)) > 0;
}

double BigramModel::Prob(int context, int word) const {
  const double denom = static_cast<double>(total_) +
                       smoothing_.add_k * static_cast<double>(vocab_.size());
  const double unigram =
      (static_cast<double>(unigram_[word]) + smoothing_.add_k) / denom;
  const uint64_t row = row_total_[context];
  if (row == 0) return unigram;
  const auto &counts = bigram_[context];
  auto it = counts.find(word);
  double ml = it == counts.end() ? 0.0
                                 : static_cast<double>(it->second) /
                                       static_cast<double>(row);
  return smoothing_.lambda * ml + (1.0 - smoothing_.lambda) * unigram;
}

double BigramModel::CondProb(std::string_view context, std::string_view word) const {
  return Prob(ContextIndex(context), WordIndex(word));
}

double BigramModel::UnigramProb(std::string_view word) const {
  const double denom = static_cast<double>(total_) +
                       smoothing_.add_k * static_cast<double>(vocab_.size());
  return (static_cast<double>(unigram_[WordIndex(word)]) + smoothing_.add_k) / denom;
}

Word BigramModel::SampleNext(std::string_view context, Rng &rng) const {
  const int c = ContextIndex(context);
  double u = rng.UniformDouble();
  double acc = 0.0;
  for (size_t w = 0; w < vocab_.size(); ++w) {
    acc += Prob(c, static_cast<int>(w));
    if (u < acc) return vocab_[w];
  }
  return vocab_.back();
}

std::vector<double> BigramModel::SubsetDistribution(
    std::string_view context, const std::set<Word> &candidates) const {
  if (candidates.empty())
    throw Error(ErrorKind::kEmptyCandidateSet, "sample_from_subset");
  const int c = ContextIndex(context);
  std::vector<double> p;
  p.reserve(candidates.size());
  double sum = 0.0;
  for (const Word &w : candidates) {
    p.push_back(Prob(c, WordIndex(w)));
    sum += p.back();
  }
  if (!(sum > 0.0))
    throw Error(ErrorKind::kEmptyCandidateSet, "candidates carry no probability mass");
  for (double &x : p) x /= sum;
  return p;
}

Word BigramModel::SampleFromSubset(std::string_view context,
                                   const std::set<Word> &candidates,
                                   Rng &rng) const {
  std::vector<double> p = SubsetDistribution(context, candidates);
  double u = rng.UniformDouble();
  double acc = 0.0;
  size_t i = 0;
  for (const Word &w : candidates) {
    acc += p[i++];
    if (u < acc) return w;
  }
  return *candidates.rbegin();
}

std::string BigramModel::Dump() const {
  std::string out;
  char buf[64];
  auto emit_row = [&](const std::string &name, int c) {
    for (size_t w = 0; w < vocab_.size(); ++w) {
      std::snprintf(buf, sizeof(buf), "%.17g", Prob(c, static_cast<int>(w)));
      out += name + '\t' + vocab_[w] + '\t' + buf + '\n';
    }
  };
  emit_row(std::string(kSentenceStart), static_cast<int>(vocab_.size()));
  for (size_t c = 0; c < vocab_.size(); ++c) emit_row(vocab_[c], static_cast<int>(c));
  return out;
}

}  // namespace lnsim
