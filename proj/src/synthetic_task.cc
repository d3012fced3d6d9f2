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

#include "lnsim/synthetic_task.h"

#include <cmath>
#include <cstdio>
#include <unordered_map>

#include "lnsim/errors.h"
#include "lnsim/rng.h"

namespace lnsim {

const WordSeq &ToyLexicon() {
  // Soundex buckets: P400 play/plea, S310 stop/step, M220 music/magic,
  // L510 lamp/limp, T500 tim/tom; alexa and sun have no partner.
  static const WordSeq lexicon = {"alexa", "play", "plea", "stop", "step", "music",
                                  "magic", "lamp", "limp", "tim",  "tom",  "sun"};
  return lexicon;
}

void SyntheticTaskConfig::Validate() const {
  if (!(mean_length >= 1.0) || max_length < 1 || mean_length > max_length ||
      !(noise_rate >= 0.0 && noise_rate < 1.0) || min_repeat < 1 || max_repeat < min_repeat ||
      !(self_repeat >= 0.0 && self_repeat < 1.0))
    throw Error(ErrorKind::kInvalidConfig, "invalid synthetic task config");
}

namespace {

// Row c (c = 0 is the start context, c >= 1 a label) of the lexicon chain.
std::vector<std::vector<double>> LexiconChain(const SyntheticTaskConfig &config) {
  const int V = config.num_labels();
  Rng rng(config.lexicon_lm_seed);
  std::vector<std::vector<double>> rows(V + 1, std::vector<double>(V + 1, 0.0));
  for (int c = 0; c <= V; ++c) {
    double sum = 0.0;
    for (int w = 1; w <= V; ++w) {
      if (w == c) continue;
      rows[c][w] = std::exp(1.2 * rng.Normal());
      sum += rows[c][w];
    }
    const double rest = c == 0 ? 1.0 : 1.0 - config.self_repeat;
    for (int w = 1; w <= V; ++w) rows[c][w] *= rest / sum;
    if (c > 0) rows[c][c] = config.self_repeat;
  }
  return rows;
}

int Draw(const std::vector<double> &p, Rng &rng) {
  const double u = rng.UniformDouble();
  double acc = 0.0;
  for (size_t i = 1; i < p.size(); ++i) {
    acc += p[i];
    if (u < acc) return static_cast<int>(i);
  }
  return static_cast<int>(p.size()) - 1;
}

}  // namespace

std::vector<Example> GenerateSyntheticTask(const SyntheticTaskConfig &config, size_t count,
                                           uint64_t seed) {
  config.Validate();
  const auto chain = LexiconChain(config);
  const int V = config.num_labels();
  Rng rng(seed);
  std::vector<Example> out(count);
  for (Example &ex : out) {
    int len;
    do {
      len = 1 + rng.Poisson(config.mean_length - 1.0);
    } while (len > config.max_length);
    int prev = 0;
    for (int i = 0; i < len; ++i) {
      const int y = Draw(chain[prev], rng);
      ex.labels.push_back(y);
      const int reps = config.min_repeat +
                       static_cast<int>(rng.UniformInt(config.max_repeat - config.min_repeat + 1));
      for (int r = 0; r < reps; ++r) {
        int s = y;
        if (config.noise_rate > 0.0 && rng.Bernoulli(config.noise_rate)) {
          s = 1 + static_cast<int>(rng.UniformInt(V - 1));
          if (s >= y) ++s;
        }
        ex.frames.push_back(s);
      }
      prev = y;
    }
  }
  return out;
}

Corpus LabelsToCorpus(const std::vector<Example> &examples, const std::string &id_prefix) {
  const WordSeq &lex = ToyLexicon();
  std::vector<Utterance> utts;
  utts.reserve(examples.size());
  char buf[32];
  for (size_t i = 0; i < examples.size(); ++i) {
    std::snprintf(buf, sizeof(buf), "%06zu", i);
    Utterance u;
    u.id = id_prefix + buf;
    for (int y : examples[i].labels) u.words.push_back(lex.at(static_cast<size_t>(y - 1)));
    utts.push_back(std::move(u));
  }
  return Corpus(std::move(utts));
}

std::vector<int> WordsToLabels(const WordSeq &words) {
  static const std::unordered_map<std::string, int> index = [] {
    std::unordered_map<std::string, int> m;
    const WordSeq &lex = ToyLexicon();
    for (size_t i = 0; i < lex.size(); ++i) m.emplace(lex[i], static_cast<int>(i) + 1);
    return m;
  }();
  std::vector<int> labels;
  labels.reserve(words.size());
  for (const Word &w : words) {
    auto it = index.find(w);
    if (it == index.end()) throw Error(ErrorKind::kOutOfVocabulary, "'" + w + "' not in lexicon");
    labels.push_back(it->second);
  }
  return labels;
}

}  // namespace lnsim
