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

#include "lnsim/corpus.h"

#include <algorithm>
#include <fstream>
#include <numeric>
#include <set>
#include <sstream>

#include "lnsim/errors.h"
#include "lnsim/rng.h"

namespace lnsim {
namespace {

bool IsSpace(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\v' ||
         c == '\f';
}

}  // namespace

Corpus::Corpus(std::vector<Utterance> utterances) : utts_(std::move(utterances)) {
  index_.reserve(utts_.size());
  for (size_t i = 0; i < utts_.size(); ++i) {
    const Utterance &u = utts_[i];
    if (u.words.empty())
      throw Error(ErrorKind::kEmptyTranscript, "utterance '" + u.id + "'");
    for (const Word &w : u.words) {
      if (w.empty() || std::any_of(w.begin(), w.end(), IsSpace))
        throw Error(ErrorKind::kMalformedRecord,
                    "bad token in utterance '" + u.id + "'");
    }
    if (!index_.emplace(u.id, i).second)
      throw Error(ErrorKind::kDuplicateId, "'" + u.id + "'");
    word_count_ += u.words.size();
  }
}

int64_t Corpus::Find(const std::string &id) const {
  auto it = index_.find(id);
  return it == index_.end() ? -1 : static_cast<int64_t>(it->second);
}

FrequencyTable::FrequencyTable(std::map<Word, uint64_t> counts)
    : counts_(std::move(counts)) {
  for (const auto &[w, c] : counts_) total_ += c;
}

uint64_t FrequencyTable::Count(const Word &w) const {
  auto it = counts_.find(w);
  return it == counts_.end() ? 0 : it->second;
}

WordSeq FrequencyTable::TopK(size_t k) const {
  std::vector<std::pair<Word, uint64_t>> items(counts_.begin(), counts_.end());
  std::stable_sort(items.begin(), items.end(),
                   [](const auto &a, const auto &b) {
                     if (a.second != b.second) return a.second > b.second;
                     return a.first < b.first;
                   });
  WordSeq out;
  for (size_t i = 0; i < items.size() && i < k; ++i) out.push_back(items[i].first);
  return out;
}

WordSeq Tokenize(std::string_view text) {
  WordSeq out;
  size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && IsSpace(text[i])) ++i;
    size_t j = i;
    while (j < text.size() && !IsSpace(text[j])) ++j;
    if (j > i) out.emplace_back(text.substr(i, j - i));
    i = j;
  }
  return out;
}

Corpus ParseCorpus(std::string_view text) {
  std::vector<Utterance> utts;
  size_t line_no = 0;
  size_t pos = 0;
  while (pos < text.size()) {
    size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    const size_t offset = pos;
    pos = end + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty()) continue;
    size_t tab = line.find('\t');
    if (tab == std::string_view::npos || tab == 0) {
      throw Error(ErrorKind::kMalformedRecord,
                  "line " + std::to_string(line_no) + " (byte " +
                      std::to_string(offset) + "): expected id<TAB>transcript");
    }
    Utterance u;
    u.id = std::string(line.substr(0, tab));
    u.words = Tokenize(line.substr(tab + 1));
    if (u.words.empty()) {
      throw Error(ErrorKind::kEmptyTranscript,
                  "line " + std::to_string(line_no) + " (byte " +
                      std::to_string(offset) + "), id '" + u.id + "'");
    }
    utts.push_back(std::move(u));
  }
  return Corpus(std::move(utts));
}

Corpus LoadCorpus(const std::filesystem::path &path, std::string_view format) {
  if (format != "tsv")
    throw Error(ErrorKind::kInvalidConfig, "unknown corpus format " + std::string(format));
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::kIoFailure, "cannot open " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return ParseCorpus(ss.str());
}

std::string SerializeCorpus(const Corpus &corpus) {
  std::string out;
  for (const Utterance &u : corpus.utterances()) {
    out += u.id;
    out += '\t';
    for (size_t i = 0; i < u.words.size(); ++i) {
      if (i) out += ' ';
      out += u.words[i];
    }
    out += '\n';
  }
  return out;
}

void WriteCorpus(const Corpus &corpus, const std::filesystem::path &path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorKind::kIoFailure, "cannot write " + path.string());
  out << SerializeCorpus(corpus);
  if (!out) throw Error(ErrorKind::kIoFailure, "write failed " + path.string());
}

std::vector<size_t> SeededPermutation(size_t n, uint64_t seed) {
  std::vector<size_t> perm(n);
  std::iota(perm.begin(), perm.end(), size_t{0});
  Rng rng(seed);
  for (size_t i = n; i > 1; --i) {
    size_t j = rng.UniformInt(i);
    std::swap(perm[i - 1], perm[j]);
  }
  return perm;
}

std::vector<std::string> SeededShuffle(const Corpus &corpus, uint64_t seed) {
  std::vector<std::string> ids;
  ids.reserve(corpus.utt_count());
  for (size_t i : SeededPermutation(corpus.utt_count(), seed))
    ids.push_back(corpus[i].id);
  return ids;
}

FrequencyTable WordFrequencies(const Corpus &corpus) {
  if (corpus.empty()) throw Error(ErrorKind::kEmptyCorpus, "word_frequencies");
  std::map<Word, uint64_t> counts;
  for (const Utterance &u : corpus.utterances())
    for (const Word &w : u.words) ++counts[w];
  return FrequencyTable(std::move(counts));
}

WordSeq Vocabulary(const Corpus &corpus) {
  std::set<Word> vocab;
  for (const Utterance &u : corpus.utterances())
    vocab.insert(u.words.begin(), u.words.end());
  return WordSeq(vocab.begin(), vocab.end());
}

}  // namespace lnsim
