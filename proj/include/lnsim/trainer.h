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

#ifndef LNSIM_TRAINER_H_
#define LNSIM_TRAINER_H_

#include <cstdint>
#include <vector>

#include "lnsim/synthetic_task.h"
#include "lnsim/transducer.h"

namespace lnsim {

// Linear warm-up from lr_init to lr_peak, hold, then exponential decay that
// reaches lr_final at the last step.
struct LearningRateSchedule {
  double lr_init = 1e-4;
  double lr_peak = 3e-3;
  double lr_final = 3e-4;
  int warmup_steps = 100;
  int hold_until = 600;

  double At(int step, int total_steps) const;
};

struct TrainingHyper {
  int steps = 2000;
  int batch_size = 8;
  LearningRateSchedule schedule;
  double adam_beta1 = 0.9;
  double adam_beta2 = 0.999;
  double adam_eps = 1e-8;
  double grad_clip = 5.0;  // global norm
  // Early stopping on the dev set: evaluated every eval_interval steps,
  // training stops after `patience` evaluations without improvement and the
  // best checkpoint is returned.
  int eval_interval = 100;
  int patience = 5;
  // Input-masking analog of time masking: with probability mask_prob an
  // utterance gets one contiguous span of 1..mask_max_span frames hidden.
  bool input_masking = false;
  double mask_prob = 0.5;
  int mask_max_span = 2;

  void Validate() const;
};

struct TrainingLogEntry {
  int step = 0;
  double lr = 0.0;
  double train_loss = 0.0;  // mean over the batches since the last entry
  double dev_loss = 0.0;    // mean per-utterance NLL
};

struct TrainingLog {
  std::vector<TrainingLogEntry> entries;
  int steps_run = 0;
  int best_step = 0;
  double best_dev_loss = 0.0;
  bool stopped_early = false;
};

struct TrainResult {
  ToyTransducer model;
  TrainingLog log;
};

// Adam over mini-batches; deterministic for a given seed.  Throws
// kDivergenceDetected on a non-finite loss and kEmptyCorpus on an empty
// training set.
TrainResult Train(const TransducerConfig &model_config, const std::vector<Example> &train,
                  const std::vector<Example> &dev, const TrainingHyper &hyper, uint64_t seed);

// The parameters Train() starts from for this seed.
ToyTransducer InitialModel(const TransducerConfig &model_config, uint64_t seed);

double MeanLoss(const ToyTransducer &model, const std::vector<Example> &data);

}  // namespace lnsim

#endif  // LNSIM_TRAINER_H_
