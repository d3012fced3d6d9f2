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

#ifndef LNSIM_DECODE_H_
#define LNSIM_DECODE_H_

#include <span>
#include <vector>

#include "lnsim/transducer.h"

namespace lnsim {

enum class DecodeMode { kGreedy, kBeam };

struct DecodeConfig {
  DecodeMode mode = DecodeMode::kGreedy;
  int beam_size = 16;
  int max_nonblank_expansions = 10;
  bool length_normalization = true;

  // The beam constants used for the full-scale systems.
  static DecodeConfig PaperBeam() { return {DecodeMode::kBeam, 16, 10, true}; }
  void Validate() const;
};

struct GreedyTrace {
  std::vector<int> labels;
  // Blank probability at every lattice node the greedy search visited.
  std::vector<double> blank_probs;
};

// Argmax per node (ties to the lowest output index, i.e. blank); blank or an
// exhausted expansion budget advances the frame.
GreedyTrace GreedyDecode(const ToyTransducer &model, std::span<const int> frames,
                         int max_nonblank_expansions);

// Frame-synchronous beam search.  Within a frame, hypotheses either close the
// frame with a blank or extend by one label (at most max_nonblank_expansions
// times); every round keeps the best beam_size items among closed and open
// candidates, so beam_size == 1 reproduces GreedyDecode.  Identical label
// sequences are merged by log-sum-exp.
std::vector<int> BeamDecode(const ToyTransducer &model, std::span<const int> frames,
                            const DecodeConfig &config);

std::vector<int> Decode(const ToyTransducer &model, std::span<const int> frames,
                        const DecodeConfig &config);

}  // namespace lnsim

#endif  // LNSIM_DECODE_H_
