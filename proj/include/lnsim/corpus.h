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

#ifndef LNSIM_CORPUS_H_
#define LNSIM_CORPUS_H_

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <unordered_map>
#include <vector>

namespace lnsim {

using Word = std::string;
using WordSeq = std::vector<Word>;

struct Utterance {
  std::string id;
  WordSeq words;

  bool operator==(const Utterance &) const = default;
};

// Ordered collection of transcripts with unique ids.  Construction validates
// the invariants (non-empty transcripts, whitespace-free tokens, unique ids);
// the object is immutable afterwards.
class Corpus {
 public:
  Corpus() = default;
  explicit Corpus(std::vector<Utterance> utterances);

  const std::vector<Utterance> &utterances() const { return utts_; }
  const Utterance &operator[](size_t i) const { return utts_[i]; }
  size_t utt_count() const { return utts_.size(); }
  uint64_t word_count() const { return word_count_; }
  bool empty() const { return utts_.empty(); }

  // Index of the utterance with this id, or -1.
  int64_t Find(const std::string &id) const;

  bool operator==(const Corpus &other) const { return utts_ == other.utts_; }

 private:
  std::vector<Utterance> utts_;
  uint64_t word_count_ = 0;
  std::unordered_map<std::string, size_t> index_;
};

class FrequencyTable {
 public:
  explicit FrequencyTable(std::map<Word, uint64_t> counts);

  const std::map<Word, uint64_t> &counts() const { return counts_; }
  uint64_t Count(const Word &w) const;
  uint64_t Total() const { return total_; }

  // The k most frequent words, ties broken lexicographically.
  WordSeq TopK(size_t k) const;

 private:
  std::map<Word, uint64_t> counts_;
  uint64_t total_ = 0;
};

// Splits on ASCII whitespace.
WordSeq Tokenize(std::string_view text);

// Reads `id<TAB>transcript` lines.  Only the "tsv" format is defined.
Corpus LoadCorpus(const std::filesystem::path &path,
                  std::string_view format = "tsv");
Corpus ParseCorpus(std::string_view text);
std::string SerializeCorpus(const Corpus &corpus);
void WriteCorpus(const Corpus &corpus, const std::filesystem::path &path);

// Fisher-Yates permutation of the utterance ids.  Depends only on the
// utterance count and the seed, so every error type visits the same order.
std::vector<std::string> SeededShuffle(const Corpus &corpus, uint64_t seed);
std::vector<size_t> SeededPermutation(size_t n, uint64_t seed);

FrequencyTable WordFrequencies(const Corpus &corpus);

// Sorted distinct words.
WordSeq Vocabulary(const Corpus &corpus);

}  // namespace lnsim

#endif  // LNSIM_CORPUS_H_
