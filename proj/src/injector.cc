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

#include "lnsim/injector.h"

#include <charconv>
#include <numeric>
#include <unordered_set>

#include "lnsim/errors.h"

namespace lnsim {

// ---------------------------------------------------------------------------
// Rational

Rational Rational::Parse(std::string_view text) {
  auto bad = [&]() {
    return Error(ErrorKind::kInvalidConfig, "not a decimal rate: '" + std::string(text) + "'");
  };
  size_t i = 0;
  __int128 num = 0;
  int64_t scale = 0;  // power of ten dividing num
  int digits = 0;
  bool seen_point = false;
  for (; i < text.size(); ++i) {
    char c = text[i];
    if (c == '.') {
      if (seen_point) throw bad();
      seen_point = true;
    } else if (c >= '0' && c <= '9') {
      if (++digits > 18) throw bad();
      num = num * 10 + (c - '0');
      if (seen_point) ++scale;
    } else {
      break;
    }
  }
  if (digits == 0) throw bad();
  if (i < text.size()) {
    if (text[i] != 'e' && text[i] != 'E') throw bad();
    int exp = 0;
    auto res = std::from_chars(text.data() + i + 1, text.data() + text.size(), exp);
    if (res.ec != std::errc() || res.ptr != text.data() + text.size()) throw bad();
    scale -= exp;
  }
  __int128 den = 1;
  while (scale > 0) {
    den *= 10;
    --scale;
    if (den > (__int128)INT64_MAX) throw bad();
  }
  while (scale < 0) {
    num *= 10;
    ++scale;
    if (num > (__int128)INT64_MAX) throw bad();
  }
  __int128 a = num, b = den;
  while (b != 0) {
    __int128 t = a % b;
    a = b;
    b = t;
  }
  if (a > 1) {
    num /= a;
    den /= a;
  }
  return {static_cast<int64_t>(num), static_cast<int64_t>(den)};
}

Rational Rational::FromDouble(double value) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), value);
  return Parse(std::string_view(buf, res.ptr - buf));
}

std::string Rational::ToString() const {
  return std::to_string(num) + "/" + std::to_string(den);
}

bool RatioExceeds(uint64_t a, uint64_t b, const Rational &r) {
  return static_cast<unsigned __int128>(a) * static_cast<uint64_t>(r.den) >
         static_cast<unsigned __int128>(r.num) * b;
}

// ---------------------------------------------------------------------------
// Names

std::string_view ErrorTypeName(ErrorType t) {
  switch (t) {
    case ErrorType::kDeletion: return "deletion";
    case ErrorType::kInsertion: return "insertion";
    case ErrorType::kSubstitution: return "substitution";
  }
  return "?";
}

std::string_view ErrorTypeShortName(ErrorType t) {
  switch (t) {
    case ErrorType::kDeletion: return "del";
    case ErrorType::kInsertion: return "ins";
    case ErrorType::kSubstitution: return "sub";
  }
  return "?";
}

ErrorType ParseErrorType(std::string_view name) {
  for (ErrorType t : {ErrorType::kDeletion, ErrorType::kInsertion, ErrorType::kSubstitution}) {
    if (name == ErrorTypeName(t) || name == ErrorTypeShortName(t)) return t;
  }
  throw Error(ErrorKind::kInvalidConfig, "unknown error type '" + std::string(name) + "'");
}

std::string_view SkipReasonName(SkipReason r) {
  switch (r) {
    case SkipReason::kSingleWord: return "single_word";
    case SkipReason::kAllPreserved: return "all_preserved";
    case SkipReason::kNoCandidates: return "no_candidates";
  }
  return "?";
}

SkipReason ParseSkipReason(std::string_view name) {
  for (SkipReason r : {SkipReason::kSingleWord, SkipReason::kAllPreserved,
                       SkipReason::kNoCandidates}) {
    if (name == SkipReasonName(r)) return r;
  }
  throw Error(ErrorKind::kManifestMismatch, "unknown skip reason '" + std::string(name) + "'");
}

void InjectionConfig::Validate() const {
  if (target_ler.den <= 0 || target_ler.num <= 0 || target_ler.num >= target_ler.den)
    throw Error(ErrorKind::kInvalidConfig,
                "target LER must lie in (0,1), got " + target_ler.ToString());
  if (max_resample < 0) throw Error(ErrorKind::kInvalidConfig, "max_resample < 0");
}

Rational InjectionManifest::AchievedLer() const {
  return {static_cast<int64_t>(records.size()), static_cast<int64_t>(num_words)};
}

Rational InjectionManifest::AchievedSer() const {
  return {static_cast<int64_t>(records.size()), static_cast<int64_t>(num_utts)};
}

// ---------------------------------------------------------------------------
// Per-utterance simulators

InjectOutcome InjectDeletion(const Utterance &utt, const std::set<Word> &preserved,
                             Rng &rng) {
  if (utt.words.size() <= 1) return SkipReason::kSingleWord;
  std::vector<size_t> eligible;
  for (size_t i = 0; i < utt.words.size(); ++i)
    if (!preserved.count(utt.words[i])) eligible.push_back(i);
  if (eligible.empty()) return SkipReason::kAllPreserved;
  const size_t pos = eligible[rng.UniformInt(eligible.size())];
  InjectionRecord rec;
  rec.utt_id = utt.id;
  rec.error_type = ErrorType::kDeletion;
  rec.position = pos;
  rec.original_word = utt.words[pos];
  return rec;
}

InjectionRecord InjectInsertion(const Utterance &utt, const BigramModel &lm, Rng &rng) {
  const size_t slot = rng.UniformInt(utt.words.size() + 1);
  std::string_view context = slot == 0 ? kSentenceStart : std::string_view(utt.words[slot - 1]);
  InjectionRecord rec;
  rec.utt_id = utt.id;
  rec.error_type = ErrorType::kInsertion;
  rec.position = slot;
  rec.injected_word = lm.SampleNext(context, rng);
  return rec;
}

InjectOutcome InjectSubstitution(const Utterance &utt, const SoundexIndex &index,
                                 const BigramModel &lm,
                                 const std::set<Word> &preserved,
                                 int max_resample, Rng &rng) {
  const size_t len = utt.words.size();
  // Each round is one pass through "pick a word" including its preserved-word
  // redraws; a round that finds no soundex candidates starts over.
  const size_t budget = 2 * len;
  for (size_t round = 0; round < budget; ++round) {
    size_t pos = rng.UniformInt(len);
    for (int r = 0; r < max_resample && preserved.count(utt.words[pos]); ++r)
      pos = rng.UniformInt(len);

    std::set<Word> candidates;
    try {
      candidates = index.Lookup(utt.words[pos]);
    } catch (const Error &e) {
      if (e.kind() != ErrorKind::kUnencodable) throw;
    }
    std::erase_if(candidates, [&](const Word &w) { return !lm.Contains(w); });
    if (candidates.empty()) continue;

    std::string_view context = pos == 0 ? kSentenceStart : std::string_view(utt.words[pos - 1]);
    InjectionRecord rec;
    rec.utt_id = utt.id;
    rec.error_type = ErrorType::kSubstitution;
    rec.position = pos;
    rec.original_word = utt.words[pos];
    rec.injected_word = lm.SampleFromSubset(context, candidates, rng);
    return rec;
  }
  return SkipReason::kNoCandidates;
}

// ---------------------------------------------------------------------------
// Record application

void ApplyRecord(WordSeq &words, const InjectionRecord &rec) {
  auto mismatch = [&]() {
    return Error(ErrorKind::kManifestMismatch, "record does not fit utterance '" + rec.utt_id + "'");
  };
  switch (rec.error_type) {
    case ErrorType::kDeletion:
      if (rec.position >= words.size() || !rec.original_word ||
          words[rec.position] != *rec.original_word)
        throw mismatch();
      words.erase(words.begin() + static_cast<std::ptrdiff_t>(rec.position));
      break;
    case ErrorType::kInsertion:
      if (rec.position > words.size() || !rec.injected_word) throw mismatch();
      words.insert(words.begin() + static_cast<std::ptrdiff_t>(rec.position), *rec.injected_word);
      break;
    case ErrorType::kSubstitution:
      if (rec.position >= words.size() || !rec.original_word || !rec.injected_word ||
          words[rec.position] != *rec.original_word)
        throw mismatch();
      words[rec.position] = *rec.injected_word;
      break;
  }
}

void InvertRecord(WordSeq &words, const InjectionRecord &rec) {
  auto mismatch = [&]() {
    return Error(ErrorKind::kManifestMismatch, "record does not fit utterance '" + rec.utt_id + "'");
  };
  switch (rec.error_type) {
    case ErrorType::kDeletion:
      if (rec.position > words.size() || !rec.original_word) throw mismatch();
      words.insert(words.begin() + static_cast<std::ptrdiff_t>(rec.position), *rec.original_word);
      break;
    case ErrorType::kInsertion:
      if (rec.position >= words.size() || !rec.injected_word ||
          words[rec.position] != *rec.injected_word)
        throw mismatch();
      words.erase(words.begin() + static_cast<std::ptrdiff_t>(rec.position));
      break;
    case ErrorType::kSubstitution:
      if (rec.position >= words.size() || !rec.original_word || !rec.injected_word ||
          words[rec.position] != *rec.injected_word)
        throw mismatch();
      words[rec.position] = *rec.original_word;
      break;
  }
}

// ---------------------------------------------------------------------------
// Dataset loop

InjectionResult RunInjection(const Corpus &corpus, const BigramModel *lm,
                             const SoundexIndex *index,
                             const InjectionConfig &config) {
  config.Validate();
  if (corpus.empty()) throw Error(ErrorKind::kEmptyCorpus, "inject_dataset");
  const ErrorType type = config.error_type;
  if ((type == ErrorType::kInsertion || type == ErrorType::kSubstitution) && !lm)
    throw Error(ErrorKind::kMissingModel, "bigram LM required for " + std::string(ErrorTypeName(type)));
  if (type == ErrorType::kSubstitution && !index)
    throw Error(ErrorKind::kMissingModel, "soundex index required for substitution");

  InjectionManifest manifest;
  manifest.config = config;
  if (!manifest.config.preserved_deletion) {
    WordSeq top = WordFrequencies(corpus).TopK(config.preserved_top_k);
    manifest.config.preserved_deletion = std::set<Word>(top.begin(), top.end());
  }
  manifest.prng_id = std::string(kPrngId);
  manifest.num_utts = corpus.utt_count();
  manifest.num_words = corpus.word_count();

  std::vector<Utterance> utts = corpus.utterances();
  const uint64_t n = corpus.word_count();
  uint64_t injected = 0;
  // The visiting order comes from the shuffle stream; the per-utterance
  // draws come from a second stream so they never perturb the order.
  Rng rng(DeriveSeed(config.seed, 1));
  for (size_t idx : SeededPermutation(corpus.utt_count(), config.seed)) {
    const Utterance &utt = corpus[idx];
    ++manifest.visited;
    InjectOutcome outcome;
    switch (type) {
      case ErrorType::kDeletion:
        outcome = InjectDeletion(utt, *manifest.config.preserved_deletion, rng);
        break;
      case ErrorType::kInsertion:
        outcome = InjectInsertion(utt, *lm, rng);
        break;
      case ErrorType::kSubstitution:
        outcome = InjectSubstitution(utt, *index, *lm, config.preserved_substitution,
                                     config.max_resample, rng);
        break;
    }
    if (auto *reason = std::get_if<SkipReason>(&outcome)) {
      manifest.skipped.emplace_back(utt.id, *reason);
      continue;
    }
    auto &rec = std::get<InjectionRecord>(outcome);
    ApplyRecord(utts[idx].words, rec);
    manifest.records.push_back(std::move(rec));
    ++injected;
    if (RatioExceeds(injected, n, config.target_ler)) {
      manifest.target_reached = true;
      break;
    }
  }

  InjectionResult result{Corpus(std::move(utts)), std::move(manifest)};
  result.manifest.corrupted_num_words = result.corpus.word_count();
  return result;
}

InjectionResult InjectDataset(const Corpus &corpus, const BigramModel *lm,
                              const SoundexIndex *index,
                              const InjectionConfig &config) {
  InjectionResult result = RunInjection(corpus, lm, index, config);
  if (!result.manifest.target_reached) {
    const Rational ler = result.manifest.AchievedLer();
    throw Error(ErrorKind::kTargetUnreachable,
                "all utterances visited; achieved LER " + ler.ToString() + " = " +
                    std::to_string(ler.value()) + " <= target " +
                    config.target_ler.ToString());
  }
  return result;
}

Corpus InvertInjection(const Corpus &corrupted, const InjectionManifest &manifest) {
  if (corrupted.utt_count() != manifest.num_utts ||
      corrupted.word_count() != manifest.corrupted_num_words)
    throw Error(ErrorKind::kManifestMismatch, "corpus size differs from manifest");
  std::vector<Utterance> utts = corrupted.utterances();
  for (auto it = manifest.records.rbegin(); it != manifest.records.rend(); ++it) {
    int64_t i = corrupted.Find(it->utt_id);
    if (i < 0) throw Error(ErrorKind::kManifestMismatch, "unknown id '" + it->utt_id + "'");
    InvertRecord(utts[static_cast<size_t>(i)].words, *it);
  }
  return Corpus(std::move(utts));
}

namespace {

void CheckIds(const Corpus &corpus, const InjectionManifest &manifest) {
  std::unordered_set<std::string> seen;
  for (const InjectionRecord &rec : manifest.records) {
    if (corpus.Find(rec.utt_id) < 0)
      throw Error(ErrorKind::kManifestMismatch, "id '" + rec.utt_id + "' not in corpus");
    if (!seen.insert(rec.utt_id).second)
      throw Error(ErrorKind::kManifestMismatch, "id '" + rec.utt_id + "' repeated");
  }
}

}  // namespace

AchievedRates ComputeAchievedRates(const InjectionManifest &manifest, const Corpus &corpus) {
  if (manifest.num_utts != corpus.utt_count() || manifest.num_words != corpus.word_count())
    throw Error(ErrorKind::kManifestMismatch, "manifest was not produced from this corpus");
  CheckIds(corpus, manifest);
  return {manifest.records.size(), corpus.word_count(), corpus.utt_count()};
}

Corpus FilterErrors(const Corpus &corpus, const InjectionManifest &manifest) {
  if (manifest.num_utts != corpus.utt_count() ||
      (corpus.word_count() != manifest.num_words &&
       corpus.word_count() != manifest.corrupted_num_words))
    throw Error(ErrorKind::kManifestMismatch, "manifest does not match corpus");
  CheckIds(corpus, manifest);
  std::unordered_set<std::string> drop;
  for (const InjectionRecord &rec : manifest.records) drop.insert(rec.utt_id);
  std::vector<Utterance> kept;
  kept.reserve(corpus.utt_count() - drop.size());
  for (const Utterance &u : corpus.utterances())
    if (!drop.count(u.id)) kept.push_back(u);
  return Corpus(std::move(kept));
}

}  // namespace lnsim
