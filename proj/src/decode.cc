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

#include "lnsim/decode.h"

#include <algorithm>
#include <cmath>

#include "lnsim/errors.h"

namespace lnsim {

void DecodeConfig::Validate() const {
  if (beam_size < 1 || max_nonblank_expansions < 1)
    throw Error(ErrorKind::kInvalidConfig, "beam_size and max_nonblank_expansions must be >= 1");
}

GreedyTrace GreedyDecode(const ToyTransducer &model, std::span<const int> frames,
                         int max_nonblank_expansions) {
  const std::vector<double> enc = model.EncodeFrames(frames);
  const int T = static_cast<int>(frames.size());
  const int J = model.config().joint_width;
  const int K = model.config().output_vocab + 1;
  GreedyTrace out;
  ToyTransducer::PredState state = model.InitialPredState();
  std::vector<double> lp(K);
  int t = 0, emitted = 0;
  while (t < T) {
    model.JointLogProbs(enc.data() + static_cast<size_t>(t) * J, state, lp);
    out.blank_probs.push_back(std::exp(lp[kBlank]));
    const int k = static_cast<int>(std::max_element(lp.begin(), lp.end()) - lp.begin());
    if (k == kBlank || emitted >= max_nonblank_expansions) {
      ++t;
      emitted = 0;
    } else {
      out.labels.push_back(k);
      state = model.AdvancePred(state, k);
      ++emitted;
    }
  }
  return out;
}

namespace {

struct Hyp {
  std::vector<int> labels;
  double score = 0.0;
  ToyTransducer::PredState state;
  int emitted = 0;  // labels emitted in the current frame
};

struct Candidate {
  double score;
  int source;  // index into the open list, or -1 for an already-closed hyp
  int label;   // kBlank closes the frame
  int closed_index;
};

// Adds `h` to `list`, merging with an existing hypothesis of the same labels.
void MergeInto(std::vector<Hyp> &list, Hyp h) {
  for (Hyp &o : list) {
    if (o.labels == h.labels) {
      o.score = LogSumExp(o.score, h.score);
      return;
    }
  }
  list.push_back(std::move(h));
}

}  // namespace

std::vector<int> BeamDecode(const ToyTransducer &model, std::span<const int> frames,
                            const DecodeConfig &config) {
  config.Validate();
  const std::vector<double> enc = model.EncodeFrames(frames);
  const int T = static_cast<int>(frames.size());
  const int J = model.config().joint_width;
  const int K = model.config().output_vocab + 1;
  const size_t beam = static_cast<size_t>(config.beam_size);

  std::vector<Hyp> frame_start(1);
  frame_start[0].state = model.InitialPredState();
  std::vector<double> lp(K);

  for (int t = 0; t < T; ++t) {
    const double *ft = enc.data() + static_cast<size_t>(t) * J;
    std::vector<Hyp> open = std::move(frame_start);
    for (Hyp &h : open) h.emitted = 0;
    std::vector<Hyp> closed;
    while (!open.empty()) {
      std::vector<Candidate> pool;
      for (size_t i = 0; i < closed.size(); ++i)
        pool.push_back({closed[i].score, -1, kBlank, static_cast<int>(i)});
      for (size_t i = 0; i < open.size(); ++i) {
        model.JointLogProbs(ft, open[i].state, lp);
        pool.push_back({open[i].score + lp[kBlank], static_cast<int>(i), kBlank, -1});
        if (open[i].emitted < config.max_nonblank_expansions)
          for (int k = 1; k < K; ++k)
            pool.push_back({open[i].score + lp[k], static_cast<int>(i), k, -1});
      }
      // Closed hypotheses sort ahead of open ones on equal score, then by
      // source order and label index.
      std::stable_sort(pool.begin(), pool.end(), [](const Candidate &a, const Candidate &b) {
        if (a.score != b.score) return a.score > b.score;
        if (a.source != b.source) return a.source < b.source;
        return a.label < b.label;
      });
      if (pool.size() > beam) pool.resize(beam);

      std::vector<Hyp> next_closed, next_open;
      for (const Candidate &c : pool) {
        if (c.source < 0) {
          MergeInto(next_closed, closed[c.closed_index]);
          continue;
        }
        const Hyp &src = open[c.source];
        Hyp h;
        h.labels = src.labels;
        h.score = c.score;
        if (c.label == kBlank) {
          h.state = src.state;
          MergeInto(next_closed, std::move(h));
        } else {
          h.labels.push_back(c.label);
          h.state = model.AdvancePred(src.state, c.label);
          h.emitted = src.emitted + 1;
          MergeInto(next_open, std::move(h));
        }
      }
      closed = std::move(next_closed);
      open = std::move(next_open);
    }
    frame_start = std::move(closed);
  }

  auto final_score = [&](const Hyp &h) {
    return config.length_normalization ? h.score / static_cast<double>(h.labels.size() + 1)
                                       : h.score;
  };
  const Hyp *best = &frame_start.front();
  for (const Hyp &h : frame_start)
    if (final_score(h) > final_score(*best)) best = &h;
  return best->labels;
}

std::vector<int> Decode(const ToyTransducer &model, std::span<const int> frames,
                        const DecodeConfig &config) {
  config.Validate();
  if (config.mode == DecodeMode::kGreedy)
    return GreedyDecode(model, frames, config.max_nonblank_expansions).labels;
  return BeamDecode(model, frames, config);
}

}  // namespace lnsim
