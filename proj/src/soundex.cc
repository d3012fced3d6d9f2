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

#include "lnsim/soundex.h"

#include "lnsim/errors.h"

namespace lnsim {
namespace {

// Digit class per letter A..Z; '0' for vowels and Y, '-' for H and W which
// are transparent (they neither code nor separate equal digits).
constexpr char kDigits[] = "01230120022455012623010202";
//                           ABCDEFGHIJKLMNOPQRSTUVWXYZ

char DigitOf(char upper) {
  if (upper == 'H' || upper == 'W') return '-';
  return kDigits[upper - 'A'];
}

}  // namespace

SoundexCode::SoundexCode(std::string code) : code_(std::move(code)) {
  bool ok = code_.size() == 4 && code_[0] >= 'A' && code_[0] <= 'Z';
  for (size_t i = 1; ok && i < 4; ++i) ok = code_[i] >= '0' && code_[i] <= '9';
  if (!ok) throw Error(ErrorKind::kInvalidConfig, "bad soundex code '" + code_ + "'");
}

SoundexCode Soundex(std::string_view word) {
  std::string letters;
  for (char c : word) {
    if (c >= 'a' && c <= 'z') letters += static_cast<char>(c - 'a' + 'A');
    else if (c >= 'A' && c <= 'Z') letters += c;
  }
  if (letters.empty())
    throw Error(ErrorKind::kUnencodable, "'" + std::string(word) + "'");

  std::string code(1, letters[0]);
  char prev = DigitOf(letters[0]);
  for (size_t i = 1; i < letters.size() && code.size() < 4; ++i) {
    char d = DigitOf(letters[i]);
    if (d == '-') continue;
    if (d == '0') {
      prev = '0';
      continue;
    }
    if (d != prev) code += d;
    prev = d;
  }
  code.resize(4, '0');
  return SoundexCode(std::move(code));
}

SoundexIndex::SoundexIndex(const WordSeq &vocabulary) {
  for (const Word &w : vocabulary) {
    try {
      table_[Soundex(w)].insert(w);
    } catch (const Error &e) {
      if (e.kind() != ErrorKind::kUnencodable) throw;
      ++unencodable_;
    }
  }
}

std::set<Word> SoundexIndex::Lookup(std::string_view word) const {
  auto it = table_.find(Soundex(word));
  if (it == table_.end()) return {};
  std::set<Word> out = it->second;
  out.erase(std::string(word));
  return out;
}

size_t SoundexIndex::encoded_count() const {
  size_t n = 0;
  for (const auto &[code, words] : table_) n += words.size();
  return n;
}

std::string SoundexIndex::Dump() const {
  std::string out;
  for (const auto &[code, words] : table_) {
    out += code.str();
    out += '\t';
    bool first = true;
    for (const Word &w : words) {
      if (!first) out += ' ';
      out += w;
      first = false;
    }
    out += '\n';
  }
  return out;
}

}  // namespace lnsim
