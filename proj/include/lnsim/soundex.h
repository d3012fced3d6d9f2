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

#ifndef LNSIM_SOUNDEX_H_
#define LNSIM_SOUNDEX_H_

#include <map>
#include <set>
#include <string>
#include <string_view>

#include "lnsim/corpus.h"

namespace lnsim {

// Letter plus three digits, e.g. "R163".
class SoundexCode {
 public:
  explicit SoundexCode(std::string code);
  const std::string &str() const { return code_; }
  auto operator<=>(const SoundexCode &) const = default;

 private:
  std::string code_;
};

// American Soundex.  Case-insensitive; non-letters are stripped first.
// Throws Error(kUnencodable) when the word has no ASCII letter.
SoundexCode Soundex(std::string_view word);

class SoundexIndex {
 public:
  // Words without letters are skipped and counted in unencodable_count().
  explicit SoundexIndex(const WordSeq &vocabulary);

  // Vocabulary words sharing the code of `word`, minus `word` itself.
  // Throws kUnencodable for words without letters.
  std::set<Word> Lookup(std::string_view word) const;

  const std::map<SoundexCode, std::set<Word>> &table() const { return table_; }
  size_t unencodable_count() const { return unencodable_; }
  size_t encoded_count() const;

  // `CODE<TAB>w1 w2 ...`, sorted by code then word.
  std::string Dump() const;

 private:
  std::map<SoundexCode, std::set<Word>> table_;
  size_t unencodable_ = 0;
};

}  // namespace lnsim

#endif  // LNSIM_SOUNDEX_H_
