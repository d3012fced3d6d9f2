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

#ifndef LNSIM_INJECTOR_H_
#define LNSIM_INJECTOR_H_

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "lnsim/bigram_lm.h"
#include "lnsim/corpus.h"
#include "lnsim/rng.h"
#include "lnsim/soundex.h"

namespace lnsim {

// Exact non-negative fraction.  Rates are compared as rationals so that a
// state sitting exactly on the target (e.g. 6/100 vs "0.06") is never
// misclassified by binary rounding.
struct Rational {
  int64_t num = 0;
  int64_t den = 1;

  // Decimal literal such as "0.06" or "6e-2".
  static Rational Parse(std::string_view text);
  // Uses the shortest decimal that round-trips the double.
  static Rational FromDouble(double value);

  double value() const { return static_cast<double>(num) / static_cast<double>(den); }
  std::string ToString() const;
};

// a/b > r, exactly.
bool RatioExceeds(uint64_t a, uint64_t b, const Rational &r);

enum class ErrorType { kDeletion, kInsertion, kSubstitution };

std::string_view ErrorTypeName(ErrorType t);      // "deletion", ...
std::string_view ErrorTypeShortName(ErrorType t); // "del", ...
ErrorType ParseErrorType(std::string_view name);  // accepts either form

enum class SkipReason { kSingleWord, kAllPreserved, kNoCandidates };
std::string_view SkipReasonName(SkipReason r);
SkipReason ParseSkipReason(std::string_view name);

inline const std::set<Word> kDefaultWakewords = {"alexa", "amazon", "echo"};
inline constexpr size_t kDefaultPreservedTopK = 10;

struct InjectionConfig {
  ErrorType error_type = ErrorType::kDeletion;
  Rational target_ler{1, 100};
  uint64_t seed = 0;
  // Unset means "top-k frequent words of the injection corpus".
  std::optional<std::set<Word>> preserved_deletion;
  size_t preserved_top_k = kDefaultPreservedTopK;
  std::set<Word> preserved_substitution = kDefaultWakewords;
  int max_resample = 3;

  void Validate() const;
};

struct InjectionRecord {
  std::string utt_id;
  ErrorType error_type = ErrorType::kDeletion;
  // Index into the original transcript; for insertion, the slot 0..L.
  size_t position = 0;
  std::optional<Word> original_word;
  std::optional<Word> injected_word;

  bool operator==(const InjectionRecord &) const = default;
};

// Skip is a value, not an error.
using InjectOutcome = std::variant<InjectionRecord, SkipReason>;

struct InjectionManifest {
  std::vector<InjectionRecord> records;
  // Config with the preserved sets resolved.
  InjectionConfig config;
  std::string prng_id;
  uint64_t num_utts = 0;
  uint64_t num_words = 0;
  uint64_t corrupted_num_words = 0;
  uint64_t visited = 0;
  bool target_reached = false;
  std::vector<std::pair<std::string, SkipReason>> skipped;

  Rational AchievedLer() const;
  Rational AchievedSer() const;
};

struct InjectionResult {
  Corpus corpus;
  InjectionManifest manifest;
};

// The per-utterance simulators.  `rng` is advanced deterministically.
InjectOutcome InjectDeletion(const Utterance &utt, const std::set<Word> &preserved,
                             Rng &rng);
InjectionRecord InjectInsertion(const Utterance &utt, const BigramModel &lm,
                                Rng &rng);
InjectOutcome InjectSubstitution(const Utterance &utt, const SoundexIndex &index,
                                 const BigramModel &lm,
                                 const std::set<Word> &preserved,
                                 int max_resample, Rng &rng);

// Visits utterances in SeededShuffle order, one injection attempt each, and
// stops at the first state with C/N > target.  When every utterance has been
// visited without crossing the target, `manifest.target_reached` is false.
// `lm` / `index` may be null when the error type does not need them.
InjectionResult RunInjection(const Corpus &corpus, const BigramModel *lm,
                             const SoundexIndex *index,
                             const InjectionConfig &config);

// As RunInjection, but throws kTargetUnreachable instead of returning a
// result that missed the target.
InjectionResult InjectDataset(const Corpus &corpus, const BigramModel *lm,
                              const SoundexIndex *index,
                              const InjectionConfig &config);

void ApplyRecord(WordSeq &words, const InjectionRecord &rec);
void InvertRecord(WordSeq &words, const InjectionRecord &rec);

// Restores the original corpus from a corrupted one.
Corpus InvertInjection(const Corpus &corrupted, const InjectionManifest &manifest);

struct AchievedRates {
  uint64_t errors = 0;
  uint64_t words = 0;
  uint64_t utts = 0;
  Rational ler() const { return {static_cast<int64_t>(errors), static_cast<int64_t>(words)}; }
  Rational ser() const { return {static_cast<int64_t>(errors), static_cast<int64_t>(utts)}; }
};

// `corpus` must be the original (uncorrupted) corpus the manifest came from.
AchievedRates ComputeAchievedRates(const InjectionManifest &manifest,
                                   const Corpus &corpus);

// Oracle removal of every utterance named in the manifest.  Accepts the
// original or the corrupted corpus.
Corpus FilterErrors(const Corpus &corpus, const InjectionManifest &manifest);

// JSON-lines: one header object, then records, then skips.
std::string SerializeManifest(const InjectionManifest &manifest);
InjectionManifest ParseManifest(std::string_view text);
void WriteManifest(const InjectionManifest &manifest,
                   const std::filesystem::path &path);
InjectionManifest LoadManifest(const std::filesystem::path &path);

}  // namespace lnsim

#endif  // LNSIM_INJECTOR_H_
