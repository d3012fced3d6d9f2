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

#include "lnsim/trainer.h"

#include <cmath>
#include <limits>

#include "lnsim/corpus.h"
#include "lnsim/errors.h"
#include "lnsim/rng.h"

namespace lnsim {

double LearningRateSchedule::At(int step, int total_steps) const {
  if (step < warmup_steps)
    return lr_init + (lr_peak - lr_init) * static_cast<double>(step) / warmup_steps;
  if (step < hold_until || total_steps <= hold_until) return lr_peak;
  const double frac = static_cast<double>(step - hold_until) / (total_steps - hold_until);
  return lr_peak * std::pow(lr_final / lr_peak, std::min(frac, 1.0));
}

void TrainingHyper::Validate() const {
  if (steps < 0 || batch_size < 1 || eval_interval < 1 || patience < 1 ||
      !(schedule.lr_peak > 0.0) || !(schedule.lr_final > 0.0) || schedule.warmup_steps < 0 ||
      mask_max_span < 1 || !(mask_prob >= 0.0 && mask_prob <= 1.0))
    throw Error(ErrorKind::kInvalidConfig, "invalid training hyperparameters");
}

ToyTransducer InitialModel(const TransducerConfig &model_config, uint64_t seed) {
  return ToyTransducer(model_config, DeriveSeed(seed, 0));
}

double MeanLoss(const ToyTransducer &model, const std::vector<Example> &data) {
  if (data.empty()) return 0.0;
  double total = 0.0;
  for (const Example &ex : data) total += model.Loss(ex.frames, ex.labels, {}).neg_log_likelihood;
  return total / static_cast<double>(data.size());
}

namespace {

std::vector<int> MaskFrames(const std::vector<int> &frames, const TrainingHyper &hyper, Rng &rng) {
  std::vector<int> out = frames;
  if (!rng.Bernoulli(hyper.mask_prob)) return out;
  const int T = static_cast<int>(frames.size());
  const int span = std::min(T, 1 + static_cast<int>(rng.UniformInt(hyper.mask_max_span)));
  const int start = static_cast<int>(rng.UniformInt(T - span + 1));
  for (int t = start; t < start + span; ++t) out[t] = kMaskedFrame;
  return out;
}

}  // namespace

TrainResult Train(const TransducerConfig &model_config, const std::vector<Example> &train,
                  const std::vector<Example> &dev, const TrainingHyper &hyper, uint64_t seed) {
  hyper.Validate();
  if (train.empty()) throw Error(ErrorKind::kEmptyCorpus, "empty training set");

  TrainResult result{InitialModel(model_config, seed), {}};
  ToyTransducer &model = result.model;
  TrainingLog &log = result.log;
  if (hyper.steps == 0) return result;

  Rng order_rng(DeriveSeed(seed, 1));
  Rng dropout_rng(DeriveSeed(seed, 2));
  Rng mask_rng(DeriveSeed(seed, 3));

  const size_t P = model.num_params();
  std::vector<double> grad(P), m(P, 0.0), v(P, 0.0);
  std::vector<double> best = std::vector<double>(model.params().begin(), model.params().end());
  log.best_dev_loss = std::numeric_limits<double>::infinity();
  int since_best = 0;

  std::vector<size_t> order;
  size_t cursor = 0;
  double loss_acc = 0.0;
  int loss_batches = 0;

  for (int step = 0; step < hyper.steps; ++step) {
    std::fill(grad.begin(), grad.end(), 0.0);
    double batch_loss = 0.0;
    for (int b = 0; b < hyper.batch_size; ++b) {
      if (cursor == order.size()) {
        order = SeededPermutation(train.size(), order_rng.NextU64());
        cursor = 0;
      }
      const Example &ex = train[order[cursor++]];
      LossResult r;
      if (hyper.input_masking) {
        std::vector<int> frames = MaskFrames(ex.frames, hyper, mask_rng);
        r = model.Loss(frames, ex.labels, grad, &dropout_rng);
      } else {
        r = model.Loss(ex.frames, ex.labels, grad, &dropout_rng);
      }
      if (!std::isfinite(r.neg_log_likelihood))
        throw Error(ErrorKind::kDivergenceDetected, "non-finite loss at step " + std::to_string(step));
      batch_loss += r.neg_log_likelihood;
    }
    const double scale = 1.0 / hyper.batch_size;
    double norm2 = 0.0;
    for (double &g : grad) {
      g *= scale;
      norm2 += g * g;
    }
    const double norm = std::sqrt(norm2);
    if (!std::isfinite(norm))
      throw Error(ErrorKind::kDivergenceDetected, "non-finite gradient at step " + std::to_string(step));
    const double clip = norm > hyper.grad_clip ? hyper.grad_clip / norm : 1.0;

    const double lr = hyper.schedule.At(step, hyper.steps);
    const double bc1 = 1.0 - std::pow(hyper.adam_beta1, step + 1);
    const double bc2 = 1.0 - std::pow(hyper.adam_beta2, step + 1);
    std::span<double> params = model.params();
    for (size_t i = 0; i < P; ++i) {
      const double g = grad[i] * clip;
      m[i] = hyper.adam_beta1 * m[i] + (1.0 - hyper.adam_beta1) * g;
      v[i] = hyper.adam_beta2 * v[i] + (1.0 - hyper.adam_beta2) * g * g;
      params[i] -= lr * (m[i] / bc1) / (std::sqrt(v[i] / bc2) + hyper.adam_eps);
    }
    loss_acc += batch_loss * scale;
    ++loss_batches;
    log.steps_run = step + 1;

    if ((step + 1) % hyper.eval_interval == 0 || step + 1 == hyper.steps) {
      TrainingLogEntry e;
      e.step = step + 1;
      e.lr = lr;
      e.train_loss = loss_acc / loss_batches;
      loss_acc = 0.0;
      loss_batches = 0;
      if (dev.empty()) {
        log.entries.push_back(e);
        continue;
      }
      e.dev_loss = MeanLoss(model, dev);
      log.entries.push_back(e);
      if (e.dev_loss < log.best_dev_loss) {
        log.best_dev_loss = e.dev_loss;
        log.best_step = e.step;
        best.assign(params.begin(), params.end());
        since_best = 0;
      } else if (++since_best >= hyper.patience) {
        log.stopped_early = true;
        break;
      }
    }
  }
  if (!dev.empty() && log.best_step > 0)
    std::copy(best.begin(), best.end(), model.params().begin());
  return result;
}

}  // namespace lnsim
