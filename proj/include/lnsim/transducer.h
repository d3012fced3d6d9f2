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

#ifndef LNSIM_TRANSDUCER_H_
#define LNSIM_TRANSDUCER_H_

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "lnsim/rng.h"

namespace lnsim {

inline constexpr int kBlank = 0;

// Frame value marking an input position hidden by input masking; it encodes
// as an all-zero symbol vector.
inline constexpr int kMaskedFrame = -1;

// T x (U+1) x (V+1) grid of log output probabilities; output 0 is blank,
// outputs 1..V are labels.
struct Lattice {
  int T = 0;
  int U = 0;
  int num_outputs = 0;  // V + 1
  std::vector<double> log_probs;

  Lattice() = default;
  Lattice(int t, int u, int outputs)
      : T(t), U(u), num_outputs(outputs),
        log_probs(static_cast<size_t>(t) * (u + 1) * outputs, 0.0) {}

  double *node(int t, int u) {
    return log_probs.data() + (static_cast<size_t>(t) * (U + 1) + u) * num_outputs;
  }
  const double *node(int t, int u) const {
    return log_probs.data() + (static_cast<size_t>(t) * (U + 1) + u) * num_outputs;
  }
};

struct ForwardBackwardResult {
  double log_likelihood = 0.0;
  // T x (U+1), row-major by t.
  std::vector<double> alpha;
  std::vector<double> beta;
};

double LogSumExp(double a, double b);

// Exact transducer forward-backward in log space.
// Throws kZeroFrames for T == 0 and kInvalidLabel for labels outside 1..V.
ForwardBackwardResult ForwardBackward(const Lattice &lattice, std::span<const int> target);

struct LossResult {
  double neg_log_likelihood = 0.0;
  // d(-log P)/d(log_probs): minus the posterior occupancy of each outgoing
  // transition.  Zero for unreachable nodes and unused outputs.
  std::vector<double> grad_log_probs;
};

// Loss and occupancy gradient for a given lattice.
LossResult LatticeLoss(const Lattice &lattice, std::span<const int> target);

struct TransducerConfig {
  int input_vocab = 12;
  int output_vocab = 12;  // labels, blank excluded
  int enc_width = 32;
  int enc_depth = 2;
  int pred_width = 32;
  int pred_depth = 1;
  int joint_width = 32;
  double dropout = 0.0;

  void Validate() const;
  bool operator==(const TransducerConfig &) const = default;
};

// Size presets mirroring the x1 / x2 / x6 structure scaling.
TransducerConfig SizePreset(int size_multiplier, int input_vocab, int output_vocab);

// Per-lattice forward activations, kept for the backward pass.
struct ForwardCache;

// Recurrent encoder over frames (one-hot symbol plus relative position),
// recurrent predictor over the label prefix, additive joint with tanh and a
// projection to V+1 logits.  All parameters live in one flat vector so that
// optimisers, finite-difference checks and equality tests can treat the
// model uniformly.
class ToyTransducer {
 public:
  ToyTransducer() = default;
  ToyTransducer(const TransducerConfig &config, uint64_t init_seed);

  const TransducerConfig &config() const { return config_; }
  std::span<double> params() { return params_; }
  std::span<const double> params() const { return params_; }
  size_t num_params() const { return params_.size(); }
  static size_t CountParams(const TransducerConfig &config);

  // Zeroes the output projection so every node predicts a uniform softmax.
  void MakeUniformOutput();

  // Lattice for (frames, target) in evaluation mode.
  Lattice ComputeLattice(std::span<const int> frames, std::span<const int> target) const;

  // Loss, with the analytic parameter gradient accumulated into `grad`
  // (sized num_params) when non-empty.  When `dropout_rng` is non-null the
  // configured dropout is applied (training mode).
  LossResult Loss(std::span<const int> frames, std::span<const int> target,
                  std::span<double> grad, Rng *dropout_rng = nullptr) const;

  // --- incremental interface for decoding ---
  struct PredState {
    std::vector<double> hidden;  // pred_depth * pred_width
    std::vector<double> joint;   // projected predictor output, joint_width
  };
  // Encoder joint contributions, T x joint_width.
  std::vector<double> EncodeFrames(std::span<const int> frames) const;
  PredState InitialPredState() const;
  PredState AdvancePred(const PredState &state, int label) const;
  // Log-softmax over V+1 outputs at one lattice node.
  void JointLogProbs(const double *enc_joint, const PredState &state,
                     std::span<double> out) const;

  bool operator==(const ToyTransducer &o) const {
    return config_ == o.config_ && params_ == o.params_;
  }

  // Parameter layout; exposed for the stack helpers in the implementation.
  struct RnnBlock {
    size_t W = 0, R = 0, b = 0;
    int in = 0, width = 0;
  };
  // Offsets of every parameter block inside the flat vector.
  struct Layout {
    std::vector<RnnBlock> enc, pred;
    size_t Wf = 0, bf = 0, Wg = 0, Wo = 0, bo = 0;
    size_t total = 0;
    int enc_in = 0, pred_in = 0;
  };

 private:
  static Layout MakeLayout(const TransducerConfig &config);
  const Layout &layout() const { return layout_; }
  void Forward(std::span<const int> frames, std::span<const int> target,
               Rng *dropout_rng, ForwardCache &cache, Lattice &lattice) const;
  void Backward(const ForwardCache &cache, const Lattice &lattice,
                std::span<const double> grad_log_probs, std::span<double> grad) const;

  TransducerConfig config_;
  Layout layout_;
  std::vector<double> params_;
};

}  // namespace lnsim

#endif  // LNSIM_TRANSDUCER_H_
