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

#ifndef LNSIM_WER_H_
#define LNSIM_WER_H_

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "lnsim/corpus.h"

namespace lnsim {

enum class EditOp { kMatch, kSubstitution, kInsertion, kDeletion };

struct AlignedPair {
  EditOp op;
  std::optional<Word> ref;  // absent for insertions
  std::optional<Word> hyp;  // absent for deletions
};

struct ErrorCounts {
  uint64_t hits = 0;
  uint64_t subs = 0;
  uint64_t ins = 0;
  uint64_t dels = 0;

  uint64_t errors() const { return subs + ins + dels; }
  uint64_t ref_words() const { return hits + subs + dels; }
  ErrorCounts &operator+=(const ErrorCounts &o) {
    hits += o.hits;
    subs += o.subs;
    ins += o.ins;
    dels += o.dels;
    return *this;
  }
};

struct AlignmentResult {
  ErrorCounts counts;
  std::vector<AlignedPair> ops;
};

// Unit-cost Levenshtein alignment.  When several alignments reach the minimum
// distance the backtrace prefers, at each cell: match, substitution,
// deletion, insertion.
AlignmentResult Align(std::span<const Word> ref, std::span<const Word> hyp);

// Integer-sequence variant used by the transducer lab (labels rather than
// words); same costs and tie order, counts only.
ErrorCounts AlignCounts(std::span<const int> ref, std::span<const int> hyp);

struct ErrorRates {
  double wer = 0.0;
  double sub_rate = 0.0;
  double ins_rate = 0.0;
  double del_rate = 0.0;
  ErrorCounts counts;

  static ErrorRates FromCounts(const ErrorCounts &c);
};

// Both corpora must carry the same id set; throws kIdMismatch otherwise.
ErrorRates CorpusRates(const Corpus &refs, const Corpus &hyps);

struct RelativeReport {
  std::string baseline_id;
  double baseline_wer = 0.0;
  double r_wer = 0.0;
  double r_sub = 0.0;
  double r_ins = 0.0;
  double r_del = 0.0;
  // Percent change against the baseline's own relative values, when the
  // baseline decomposition is known.
  double chg_wer_pct = 0.0;
  std::optional<double> chg_sub_pct, chg_ins_pct, chg_del_pct;
};

// Throws kZeroBaseline when baseline_wer <= 0.
RelativeReport MakeRelativeReport(const ErrorRates &rates, double baseline_wer,
                                  const std::string &baseline_id);
RelativeReport MakeRelativeReport(const ErrorRates &rates, const ErrorRates &baseline,
                                  const std::string &baseline_id);

// Table-shaped JSON object (R_WER, R_Sub, R_Ins, R_Del and the change
// columns) serialized with a trailing newline.
std::string RelativeReportJson(const RelativeReport &report, const ErrorRates &rates);

}  // namespace lnsim

#endif  // LNSIM_WER_H_
