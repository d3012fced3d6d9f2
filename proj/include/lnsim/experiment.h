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

#ifndef LNSIM_EXPERIMENT_H_
#define LNSIM_EXPERIMENT_H_

#include <cstdint>
#include <functional>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "json.hpp"
#include "lnsim/decode.h"
#include "lnsim/injector.h"
#include "lnsim/synthetic_task.h"
#include "lnsim/trainer.h"
#include "lnsim/wer.h"

namespace lnsim {

struct BlankStats {
  double mean_blank_prob = 0.0;
  std::vector<uint64_t> histogram;  // 10 equal-width bins over [0,1]
  uint64_t nodes = 0;
};

// Mean blank probability over the lattice nodes visited by greedy decoding.
BlankStats BlankPosteriorStats(const ToyTransducer &model, const std::vector<Example> &data,
                               int max_nonblank_expansions = 10);

// One row of the system matrix.
struct SystemConfig {
  std::string system_id;
  std::optional<ErrorType> error_type;  // unset: clean labels
  Rational target_ler{6, 100};
  double data_multiplier = 1.0;
  int size_multiplier = 1;
  bool dropout = false;
  bool input_masking = false;  // time-masking analog, not SpecAugment
  bool oracle_filter = false;
};

// Settings shared by every system in a matrix.
struct LabConfig {
  SyntheticTaskConfig task;
  int train_utts = 1500;      // before data_multiplier; includes the dev split
  double dev_fraction = 0.1;  // clean held-out set used for early stopping
  int eval_utts = 400;
  TrainingHyper hyper;
  double dropout_rate = 0.2;
  DecodeConfig decode;        // greedy unless overridden
  // Deletion preserves the top-k frequent labels; substitution soft-avoids
  // the wakeword list.
  size_t preserved_top_k = 1;
  std::set<Word> wakewords = {"alexa"};
  int max_resample = 3;
  std::vector<uint64_t> seeds = {1, 2, 3, 4, 5};
};

struct ExperimentMatrix {
  LabConfig lab;
  std::vector<SystemConfig> systems;
  std::string baseline_id = "b0";
};

struct RunRow {
  std::string system_id;
  uint64_t seed = 0;
  ErrorRates rates;
  RelativeReport relative;
  double mean_blank_prob = 0.0;
  size_t params = 0;
  size_t data_size = 0;  // training utterances actually used
  uint64_t injected = 0;
  double achieved_ler = 0.0;
  int steps_run = 0;
  int best_step = 0;
};

struct SystemSummary {
  std::string system_id;
  size_t seeds = 0;
  double median_r_wer = 0.0, median_r_sub = 0.0, median_r_ins = 0.0, median_r_del = 0.0;
  double min_r_wer = 0.0, max_r_wer = 0.0;
  double median_blank_prob = 0.0;
};

struct ExperimentReport {
  std::vector<RunRow> rows;  // ordered by system (matrix order) then seed
  std::vector<SystemSummary> summary;
  nlohmann::json header;

  const SystemSummary *Find(const std::string &system_id) const;
};

// The data every system sees for one seed.
struct SeedData {
  std::vector<Example> train;  // clean labels
  std::vector<Example> dev;
  std::vector<Example> eval;
};
SeedData MakeSeedData(const LabConfig &lab, double data_multiplier, uint64_t seed);

// Corrupts, optionally filters, trains and scores a single (system, seed).
// Relative fields are left empty; RunMatrix fills them.
RunRow RunSystem(const LabConfig &lab, const SystemConfig &system, uint64_t seed,
                 ToyTransducer *trained = nullptr);

// Runs every (system, seed) job on up to `threads` workers and normalises
// each row by the same-seed baseline WER.  `on_row` is called (serialised)
// as rows complete.
ExperimentReport RunMatrix(const ExperimentMatrix &matrix, int threads = 0,
                           const std::function<void(const RunRow &)> &on_row = {});

// Clean baseline plus {sub, ins, del} x the given rates, and optionally the
// oracle-filtered variants at `filter_rate`.
ExperimentMatrix ErrorImpactMatrix(const LabConfig &lab, const std::vector<Rational> &rates,
                                   bool with_filter, const Rational &filter_rate = {6, 100});

std::string SystemIdFor(ErrorType type, const Rational &rate, bool filtered);

double Median(std::vector<double> values);

nlohmann::json ToJson(const LabConfig &lab);
LabConfig LabConfigFromJson(const nlohmann::json &j);
nlohmann::json ToJson(const SystemConfig &s);
SystemConfig SystemConfigFromJson(const nlohmann::json &j);
nlohmann::json ToJson(const ExperimentMatrix &m);
ExperimentMatrix MatrixFromJson(const nlohmann::json &j);
nlohmann::json ToJson(const ExperimentReport &report);

}  // namespace lnsim

#endif  // LNSIM_EXPERIMENT_H_
