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

#include "lnsim/wer.h"

#include <algorithm>

#include "json.hpp"
#include "lnsim/errors.h"

namespace lnsim {
namespace {

// Fills the (|ref|+1) x (|hyp|+1) distance table and walks it back.  `emit`
// receives ops from the end of the sequences towards the start.
template <typename T, typename Emit>
void AlignImpl(std::span<const T> ref, std::span<const T> hyp, Emit &&emit) {
  const size_t n = ref.size(), m = hyp.size();
  std::vector<uint32_t> d((n + 1) * (m + 1));
  auto at = [&](size_t i, size_t j) -> uint32_t & { return d[i * (m + 1) + j]; };
  for (size_t i = 0; i <= n; ++i) at(i, 0) = static_cast<uint32_t>(i);
  for (size_t j = 0; j <= m; ++j) at(0, j) = static_cast<uint32_t>(j);
  for (size_t i = 1; i <= n; ++i) {
    for (size_t j = 1; j <= m; ++j) {
      uint32_t diag = at(i - 1, j - 1) + (ref[i - 1] == hyp[j - 1] ? 0 : 1);
      at(i, j) = std::min({diag, at(i - 1, j) + 1, at(i, j - 1) + 1});
    }
  }
  size_t i = n, j = m;
  while (i > 0 || j > 0) {
    const uint32_t cur = at(i, j);
    if (i > 0 && j > 0 && ref[i - 1] == hyp[j - 1] && cur == at(i - 1, j - 1)) {
      emit(EditOp::kMatch, i - 1, j - 1);
      --i, --j;
    } else if (i > 0 && j > 0 && cur == at(i - 1, j - 1) + 1) {
      emit(EditOp::kSubstitution, i - 1, j - 1);
      --i, --j;
    } else if (i > 0 && cur == at(i - 1, j) + 1) {
      emit(EditOp::kDeletion, i - 1, j);
      --i;
    } else {
      emit(EditOp::kInsertion, i, j - 1);
      --j;
    }
  }
}

void Tally(ErrorCounts &c, EditOp op) {
  switch (op) {
    case EditOp::kMatch: ++c.hits; break;
    case EditOp::kSubstitution: ++c.subs; break;
    case EditOp::kInsertion: ++c.ins; break;
    case EditOp::kDeletion: ++c.dels; break;
  }
}

}  // namespace

AlignmentResult Align(std::span<const Word> ref, std::span<const Word> hyp) {
  AlignmentResult out;
  AlignImpl<Word>(ref, hyp, [&](EditOp op, size_t i, size_t j) {
    Tally(out.counts, op);
    AlignedPair p{op, std::nullopt, std::nullopt};
    if (op != EditOp::kInsertion) p.ref = ref[i];
    if (op != EditOp::kDeletion) p.hyp = hyp[j];
    out.ops.push_back(std::move(p));
  });
  std::reverse(out.ops.begin(), out.ops.end());
  return out;
}

ErrorCounts AlignCounts(std::span<const int> ref, std::span<const int> hyp) {
  ErrorCounts c;
  AlignImpl<int>(ref, hyp, [&](EditOp op, size_t, size_t) { Tally(c, op); });
  return c;
}

ErrorRates ErrorRates::FromCounts(const ErrorCounts &c) {
  ErrorRates r;
  r.counts = c;
  const double n = static_cast<double>(c.ref_words());
  if (n > 0) {
    r.sub_rate = static_cast<double>(c.subs) / n;
    r.ins_rate = static_cast<double>(c.ins) / n;
    r.del_rate = static_cast<double>(c.dels) / n;
  }
  r.wer = r.sub_rate + r.ins_rate + r.del_rate;
  return r;
}

ErrorRates CorpusRates(const Corpus &refs, const Corpus &hyps) {
  if (refs.utt_count() != hyps.utt_count())
    throw Error(ErrorKind::kIdMismatch, "reference and hypothesis utterance counts differ");
  ErrorCounts total;
  for (const Utterance &r : refs.utterances()) {
    int64_t h = hyps.Find(r.id);
    if (h < 0) throw Error(ErrorKind::kIdMismatch, "no hypothesis for '" + r.id + "'");
    total += Align(r.words, hyps[static_cast<size_t>(h)].words).counts;
  }
  return ErrorRates::FromCounts(total);
}

RelativeReport MakeRelativeReport(const ErrorRates &rates, double baseline_wer,
                                  const std::string &baseline_id) {
  if (!(baseline_wer > 0.0))
    throw Error(ErrorKind::kZeroBaseline, "baseline WER must be positive");
  RelativeReport r;
  r.baseline_id = baseline_id;
  r.baseline_wer = baseline_wer;
  r.r_wer = rates.wer / baseline_wer;
  r.r_sub = rates.sub_rate / baseline_wer;
  r.r_ins = rates.ins_rate / baseline_wer;
  r.r_del = rates.del_rate / baseline_wer;
  r.chg_wer_pct = (r.r_wer - 1.0) * 100.0;
  return r;
}

RelativeReport MakeRelativeReport(const ErrorRates &rates, const ErrorRates &baseline,
                                  const std::string &baseline_id) {
  RelativeReport r = MakeRelativeReport(rates, baseline.wer, baseline_id);
  auto chg = [](double mine, double base) -> std::optional<double> {
    if (base <= 0.0) return std::nullopt;
    return (mine / base - 1.0) * 100.0;
  };
  r.chg_sub_pct = chg(rates.sub_rate, baseline.sub_rate);
  r.chg_ins_pct = chg(rates.ins_rate, baseline.ins_rate);
  r.chg_del_pct = chg(rates.del_rate, baseline.del_rate);
  return r;
}

std::string RelativeReportJson(const RelativeReport &report, const ErrorRates &rates) {
  nlohmann::json j;
  j["baseline_id"] = report.baseline_id;
  j["baseline_wer"] = report.baseline_wer;
  j["R_WER"] = report.r_wer;
  j["R_Sub"] = report.r_sub;
  j["R_Ins"] = report.r_ins;
  j["R_Del"] = report.r_del;
  j["Chg_WER_pct"] = report.chg_wer_pct;
  if (report.chg_sub_pct) j["Chg_Sub_pct"] = *report.chg_sub_pct;
  if (report.chg_ins_pct) j["Chg_Ins_pct"] = *report.chg_ins_pct;
  if (report.chg_del_pct) j["Chg_Del_pct"] = *report.chg_del_pct;
  j["absolute"] = {{"wer", rates.wer},
                   {"sub", rates.sub_rate},
                   {"ins", rates.ins_rate},
                   {"del", rates.del_rate},
                   {"hits", rates.counts.hits},
                   {"subs", rates.counts.subs},
                   {"insertions", rates.counts.ins},
                   {"deletions", rates.counts.dels},
                   {"ref_words", rates.counts.ref_words()}};
  return j.dump(2) + "\n";
}

}  // namespace lnsim
