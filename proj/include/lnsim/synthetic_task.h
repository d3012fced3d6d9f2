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

#ifndef LNSIM_SYNTHETIC_TASK_H_
#define LNSIM_SYNTHETIC_TASK_H_

#include <cstdint>
#include <string>
#include <vector>

#include "lnsim/corpus.h"

namespace lnsim {

// The toy label inventory.  Label i (1-based) is word ToyLexicon()[i-1];
// several words share a soundex code so substitution has candidates.
const WordSeq &ToyLexicon();

struct SyntheticTaskConfig {
  double mean_length = 3.8;  // mean reference length in labels
  int max_length = 12;
  double noise_rate = 0.05;  // per-frame symbol flip probability
  int min_repeat = 1;        // frames per label, uniform in [min, max]
  int max_repeat = 3;
  double self_repeat = 0.25; // P(next label == previous label)
  uint64_t lexicon_lm_seed = 7;

  int num_labels() const { return static_cast<int>(ToyLexicon().size()); }
  // Input symbols reuse label ids; symbol 0 is never produced.
  int input_vocab() const { return num_labels() + 1; }
  void Validate() const;
};

struct Example {
  std::vector<int> frames;
  std::vector<int> labels;
  bool operator==(const Example &) const = default;
};

// Labels are drawn from a fixed random bigram chain over the lexicon
// (seeded by lexicon_lm_seed); each label becomes 1..3 frames of its own
// symbol, and each frame is flipped to another symbol with noise_rate.
std::vector<Example> GenerateSyntheticTask(const SyntheticTaskConfig &config, size_t count,
                                           uint64_t seed);

// Labels <-> words through the lexicon; ids are `<prefix><index>`.
Corpus LabelsToCorpus(const std::vector<Example> &examples, const std::string &id_prefix);
std::vector<int> WordsToLabels(const WordSeq &words);

}  // namespace lnsim

#endif  // LNSIM_SYNTHETIC_TASK_H_
