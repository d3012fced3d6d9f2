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

#include <algorithm>
#include <cmath>

#include "lnsim/errors.h"
#include "lnsim/transducer.h"

namespace lnsim {
namespace {

// y[r] += sum_c A[r, c] x[c]
void MatVecAdd(const double *A, int rows, int cols, const double *x, double *y) {
  for (int r = 0; r < rows; ++r) {
    const double *row = A + static_cast<size_t>(r) * cols;
    double acc = 0.0;
    for (int c = 0; c < cols; ++c) acc += row[c] * x[c];
    y[r] += acc;
  }
}

// dx[c] += sum_r A[r, c] dy[r]
void MatTVecAdd(const double *A, int rows, int cols, const double *dy, double *dx) {
  for (int r = 0; r < rows; ++r) {
    const double *row = A + static_cast<size_t>(r) * cols;
    const double d = dy[r];
    if (d == 0.0) continue;
    for (int c = 0; c < cols; ++c) dx[c] += row[c] * d;
  }
}

// dA[r, c] += dy[r] x[c]
void OuterAdd(double *dA, int rows, int cols, const double *dy, const double *x) {
  for (int r = 0; r < rows; ++r) {
    const double d = dy[r];
    if (d == 0.0) continue;
    double *row = dA + static_cast<size_t>(r) * cols;
    for (int c = 0; c < cols; ++c) row[c] += d * x[c];
  }
}

void LogSoftmax(std::span<double> v) {
  double mx = *std::max_element(v.begin(), v.end());
  double sum = 0.0;
  for (double x : v) sum += std::exp(x - mx);
  const double lse = mx + std::log(sum);
  for (double &x : v) x -= lse;
}

}  // namespace

using RnnBlock = ToyTransducer::RnnBlock;

struct ForwardCache {
  int T = 0, U = 0;
  std::vector<double> enc_in;                // T x enc_in
  std::vector<std::vector<double>> enc_h;    // per layer, T x width
  std::vector<double> enc_mask;              // T x width, empty when off
  std::vector<double> enc_top;               // T x width (after dropout)
  std::vector<double> f;                     // T x J
  std::vector<double> pred_in;               // (U+1) x pred_in
  std::vector<std::vector<double>> pred_h;   // per layer, (U+1) x width
  std::vector<double> pred_mask;
  std::vector<double> pred_top;
  std::vector<double> g;                     // (U+1) x J
  std::vector<double> z;                     // T x (U+1) x J
};

namespace {

void StackForward(const double *P, const std::vector<RnnBlock> &blocks, int steps,
                  const std::vector<double> &inputs, std::vector<std::vector<double>> &hs) {
  hs.assign(blocks.size(), {});
  const std::vector<double> *x = &inputs;
  for (size_t l = 0; l < blocks.size(); ++l) {
    const RnnBlock &b = blocks[l];
    std::vector<double> &h = hs[l];
    h.assign(static_cast<size_t>(steps) * b.width, 0.0);
    for (int t = 0; t < steps; ++t) {
      double *ht = h.data() + static_cast<size_t>(t) * b.width;
      std::copy(P + b.b, P + b.b + b.width, ht);
      MatVecAdd(P + b.W, b.width, b.in, x->data() + static_cast<size_t>(t) * b.in, ht);
      if (t > 0) MatVecAdd(P + b.R, b.width, b.width, ht - b.width, ht);
      for (int i = 0; i < b.width; ++i) ht[i] = std::tanh(ht[i]);
    }
    x = &h;
  }
}

// `dtop` holds d(loss)/d(top layer output) per step and is consumed.
void StackBackward(const double *P, double *G, const std::vector<RnnBlock> &blocks, int steps,
                   const std::vector<double> &inputs,
                   const std::vector<std::vector<double>> &hs, std::vector<double> dtop) {
  std::vector<double> dbelow, dnext, dpre;
  for (size_t li = blocks.size(); li-- > 0;) {
    const RnnBlock &b = blocks[li];
    const std::vector<double> &x = li == 0 ? inputs : hs[li - 1];
    const std::vector<double> &h = hs[li];
    if (li > 0) dbelow.assign(static_cast<size_t>(steps) * b.in, 0.0);
    dnext.assign(b.width, 0.0);
    dpre.assign(b.width, 0.0);
    for (int t = steps - 1; t >= 0; --t) {
      const double *ht = h.data() + static_cast<size_t>(t) * b.width;
      const double *dt = dtop.data() + static_cast<size_t>(t) * b.width;
      for (int i = 0; i < b.width; ++i) dpre[i] = (dt[i] + dnext[i]) * (1.0 - ht[i] * ht[i]);
      OuterAdd(G + b.W, b.width, b.in, dpre.data(), x.data() + static_cast<size_t>(t) * b.in);
      for (int i = 0; i < b.width; ++i) G[b.b + i] += dpre[i];
      std::fill(dnext.begin(), dnext.end(), 0.0);
      if (t > 0) {
        OuterAdd(G + b.R, b.width, b.width, dpre.data(), ht - b.width);
        MatTVecAdd(P + b.R, b.width, b.width, dpre.data(), dnext.data());
      }
      if (li > 0)
        MatTVecAdd(P + b.W, b.width, b.in, dpre.data(),
                   dbelow.data() + static_cast<size_t>(t) * b.in);
    }
    if (li > 0) dtop.swap(dbelow);
  }
}

void FillDropoutMask(Rng &rng, double rate, size_t n, std::vector<double> &mask) {
  mask.resize(n);
  const double keep = 1.0 / (1.0 - rate);
  for (double &m : mask) m = rng.Bernoulli(rate) ? 0.0 : keep;
}

}  // namespace

void TransducerConfig::Validate() const {
  if (input_vocab < 1 || output_vocab < 1 || enc_width < 1 || enc_depth < 1 ||
      pred_width < 1 || pred_depth < 1 || joint_width < 1 || !(dropout >= 0.0 && dropout < 1.0))
    throw Error(ErrorKind::kInvalidConfig, "invalid transducer config");
}

TransducerConfig SizePreset(int size_multiplier, int input_vocab, int output_vocab) {
  TransducerConfig c;
  c.input_vocab = input_vocab;
  c.output_vocab = output_vocab;
  switch (size_multiplier) {
    case 1:
      c.enc_depth = 2, c.enc_width = 32, c.pred_depth = 1, c.pred_width = 32, c.joint_width = 32;
      break;
    case 2:
      c.enc_depth = 5, c.enc_width = 32, c.pred_depth = 2, c.pred_width = 32, c.joint_width = 32;
      break;
    case 6:
      c.enc_depth = 5, c.enc_width = 64, c.pred_depth = 2, c.pred_width = 64, c.joint_width = 64;
      break;
    default:
      throw Error(ErrorKind::kInvalidConfig,
                  "size multiplier must be 1, 2 or 6, got " + std::to_string(size_multiplier));
  }
  return c;
}

ToyTransducer::Layout ToyTransducer::MakeLayout(const TransducerConfig &c) {
  Layout L;
  L.enc_in = c.input_vocab + 1;  // one-hot symbol + relative position
  L.pred_in = c.output_vocab + 1;
  size_t off = 0;
  auto take = [&](size_t n) {
    size_t o = off;
    off += n;
    return o;
  };
  auto rnn = [&](int in, int width) {
    RnnBlock b;
    b.in = in;
    b.width = width;
    b.W = take(static_cast<size_t>(width) * in);
    b.R = take(static_cast<size_t>(width) * width);
    b.b = take(width);
    return b;
  };
  for (int l = 0; l < c.enc_depth; ++l)
    L.enc.push_back(rnn(l == 0 ? L.enc_in : c.enc_width, c.enc_width));
  L.Wf = take(static_cast<size_t>(c.joint_width) * c.enc_width);
  L.bf = take(c.joint_width);
  for (int l = 0; l < c.pred_depth; ++l)
    L.pred.push_back(rnn(l == 0 ? L.pred_in : c.pred_width, c.pred_width));
  L.Wg = take(static_cast<size_t>(c.joint_width) * c.pred_width);
  L.Wo = take(static_cast<size_t>(c.output_vocab + 1) * c.joint_width);
  L.bo = take(c.output_vocab + 1);
  L.total = off;
  return L;
}

size_t ToyTransducer::CountParams(const TransducerConfig &config) {
  return MakeLayout(config).total;
}

ToyTransducer::ToyTransducer(const TransducerConfig &config, uint64_t init_seed)
    : config_(config), layout_(MakeLayout(config)) {
  config_.Validate();
  const Layout &L = layout_;
  params_.assign(L.total, 0.0);
  Rng rng(init_seed);
  auto init = [&](size_t off, size_t n, int fan_in) {
    const double s = 1.0 / std::sqrt(static_cast<double>(fan_in));
    for (size_t i = 0; i < n; ++i) params_[off + i] = (2.0 * rng.UniformDouble() - 1.0) * s;
  };
  for (const auto *blocks : {&L.enc, &L.pred}) {
    for (const RnnBlock &b : *blocks) {
      init(b.W, static_cast<size_t>(b.width) * b.in, b.in);
      init(b.R, static_cast<size_t>(b.width) * b.width, b.width);
    }
  }
  const TransducerConfig &c = config_;
  init(L.Wf, static_cast<size_t>(c.joint_width) * c.enc_width, c.enc_width);
  init(L.Wg, static_cast<size_t>(c.joint_width) * c.pred_width, c.pred_width);
  init(L.Wo, static_cast<size_t>(c.output_vocab + 1) * c.joint_width, c.joint_width);
}

void ToyTransducer::MakeUniformOutput() {
  const Layout &L = layout_;
  std::fill(params_.begin() + static_cast<std::ptrdiff_t>(L.Wo),
            params_.begin() + static_cast<std::ptrdiff_t>(L.bo + config_.output_vocab + 1), 0.0);
}

namespace {

void EncoderInputs(std::span<const int> frames, int input_vocab, std::vector<double> &out) {
  const int T = static_cast<int>(frames.size());
  const int in = input_vocab + 1;
  out.assign(static_cast<size_t>(T) * in, 0.0);
  for (int t = 0; t < T; ++t) {
    double *x = out.data() + static_cast<size_t>(t) * in;
    const int s = frames[t];
    if (s != kMaskedFrame) {
      if (s < 0 || s >= input_vocab)
        throw Error(ErrorKind::kInvalidLabel, "input symbol " + std::to_string(s) + " out of range");
      x[s] = 1.0;
    }
    x[input_vocab] = T > 1 ? static_cast<double>(t) / (T - 1) : 0.0;
  }
}

}  // namespace

void ToyTransducer::Forward(std::span<const int> frames, std::span<const int> target,
                            Rng *dropout_rng, ForwardCache &c, Lattice &lattice) const {
  const Layout &L = layout_;
  const double *P = params_.data();
  const int T = static_cast<int>(frames.size());
  const int U = static_cast<int>(target.size());
  const int J = config_.joint_width;
  const int K = config_.output_vocab + 1;
  if (T == 0) throw Error(ErrorKind::kZeroFrames, "empty frame sequence");
  for (int y : target)
    if (y < 1 || y > config_.output_vocab)
      throw Error(ErrorKind::kInvalidLabel, "label " + std::to_string(y) + " out of range");
  const bool drop = dropout_rng && config_.dropout > 0.0;
  c.T = T;
  c.U = U;

  // Encoder.
  EncoderInputs(frames, config_.input_vocab, c.enc_in);
  StackForward(P, L.enc, T, c.enc_in, c.enc_h);
  const int He = config_.enc_width;
  c.enc_top = c.enc_h.back();
  c.enc_mask.clear();
  if (drop) {
    FillDropoutMask(*dropout_rng, config_.dropout, c.enc_top.size(), c.enc_mask);
    for (size_t i = 0; i < c.enc_top.size(); ++i) c.enc_top[i] *= c.enc_mask[i];
  }
  c.f.assign(static_cast<size_t>(T) * J, 0.0);
  for (int t = 0; t < T; ++t) {
    double *ft = c.f.data() + static_cast<size_t>(t) * J;
    std::copy(P + L.bf, P + L.bf + J, ft);
    MatVecAdd(P + L.Wf, J, He, c.enc_top.data() + static_cast<size_t>(t) * He, ft);
  }

  // Predictor over [start, y_1 .. y_U]; the start symbol reuses index 0.
  c.pred_in.assign(static_cast<size_t>(U + 1) * L.pred_in, 0.0);
  for (int u = 0; u <= U; ++u)
    c.pred_in[static_cast<size_t>(u) * L.pred_in + (u == 0 ? 0 : target[u - 1])] = 1.0;
  StackForward(P, L.pred, U + 1, c.pred_in, c.pred_h);
  const int Hp = config_.pred_width;
  c.pred_top = c.pred_h.back();
  c.pred_mask.clear();
  if (drop) {
    FillDropoutMask(*dropout_rng, config_.dropout, c.pred_top.size(), c.pred_mask);
    for (size_t i = 0; i < c.pred_top.size(); ++i) c.pred_top[i] *= c.pred_mask[i];
  }
  c.g.assign(static_cast<size_t>(U + 1) * J, 0.0);
  for (int u = 0; u <= U; ++u)
    MatVecAdd(P + L.Wg, J, Hp, c.pred_top.data() + static_cast<size_t>(u) * Hp,
              c.g.data() + static_cast<size_t>(u) * J);

  // Joint.
  lattice = Lattice(T, U, K);
  c.z.assign(static_cast<size_t>(T) * (U + 1) * J, 0.0);
  for (int t = 0; t < T; ++t) {
    for (int u = 0; u <= U; ++u) {
      double *z = c.z.data() + (static_cast<size_t>(t) * (U + 1) + u) * J;
      const double *ft = c.f.data() + static_cast<size_t>(t) * J;
      const double *gu = c.g.data() + static_cast<size_t>(u) * J;
      for (int j = 0; j < J; ++j) z[j] = std::tanh(ft[j] + gu[j]);
      double *lp = lattice.node(t, u);
      std::copy(P + L.bo, P + L.bo + K, lp);
      MatVecAdd(P + L.Wo, K, J, z, lp);
      LogSoftmax(std::span<double>(lp, K));
    }
  }
}

void ToyTransducer::Backward(const ForwardCache &c, const Lattice &lattice,
                             std::span<const double> grad_lp, std::span<double> grad) const {
  const Layout &L = layout_;
  const double *P = params_.data();
  double *G = grad.data();
  const int T = c.T, U = c.U;
  const int J = config_.joint_width;
  const int K = config_.output_vocab + 1;
  const int He = config_.enc_width, Hp = config_.pred_width;

  std::vector<double> df(static_cast<size_t>(T) * J, 0.0);
  std::vector<double> dg(static_cast<size_t>(U + 1) * J, 0.0);
  std::vector<double> dlogit(K), dz(J);
  for (int t = 0; t < T; ++t) {
    for (int u = 0; u <= U; ++u) {
      const size_t node = static_cast<size_t>(t) * (U + 1) + u;
      const double *g = grad_lp.data() + node * K;
      double s = 0.0;
      for (int k = 0; k < K; ++k) s += g[k];
      if (s == 0.0) continue;
      const double *lp = lattice.node(t, u);
      for (int k = 0; k < K; ++k) dlogit[k] = g[k] - std::exp(lp[k]) * s;
      const double *z = c.z.data() + node * J;
      OuterAdd(G + L.Wo, K, J, dlogit.data(), z);
      for (int k = 0; k < K; ++k) G[L.bo + k] += dlogit[k];
      std::fill(dz.begin(), dz.end(), 0.0);
      MatTVecAdd(P + L.Wo, K, J, dlogit.data(), dz.data());
      double *dft = df.data() + static_cast<size_t>(t) * J;
      double *dgu = dg.data() + static_cast<size_t>(u) * J;
      for (int j = 0; j < J; ++j) {
        const double da = dz[j] * (1.0 - z[j] * z[j]);
        dft[j] += da;
        dgu[j] += da;
      }
    }
  }

  std::vector<double> dtop(static_cast<size_t>(T) * He, 0.0);
  for (int t = 0; t < T; ++t) {
    const double *dft = df.data() + static_cast<size_t>(t) * J;
    OuterAdd(G + L.Wf, J, He, dft, c.enc_top.data() + static_cast<size_t>(t) * He);
    for (int j = 0; j < J; ++j) G[L.bf + j] += dft[j];
    MatTVecAdd(P + L.Wf, J, He, dft, dtop.data() + static_cast<size_t>(t) * He);
  }
  if (!c.enc_mask.empty())
    for (size_t i = 0; i < dtop.size(); ++i) dtop[i] *= c.enc_mask[i];
  StackBackward(P, G, L.enc, T, c.enc_in, c.enc_h, std::move(dtop));

  std::vector<double> ptop(static_cast<size_t>(U + 1) * Hp, 0.0);
  for (int u = 0; u <= U; ++u) {
    const double *dgu = dg.data() + static_cast<size_t>(u) * J;
    OuterAdd(G + L.Wg, J, Hp, dgu, c.pred_top.data() + static_cast<size_t>(u) * Hp);
    MatTVecAdd(P + L.Wg, J, Hp, dgu, ptop.data() + static_cast<size_t>(u) * Hp);
  }
  if (!c.pred_mask.empty())
    for (size_t i = 0; i < ptop.size(); ++i) ptop[i] *= c.pred_mask[i];
  StackBackward(P, G, L.pred, U + 1, c.pred_in, c.pred_h, std::move(ptop));
}

Lattice ToyTransducer::ComputeLattice(std::span<const int> frames,
                                      std::span<const int> target) const {
  ForwardCache cache;
  Lattice lattice;
  Forward(frames, target, nullptr, cache, lattice);
  return lattice;
}

LossResult ToyTransducer::Loss(std::span<const int> frames, std::span<const int> target,
                               std::span<double> grad, Rng *dropout_rng) const {
  ForwardCache cache;
  Lattice lattice;
  Forward(frames, target, dropout_rng, cache, lattice);
  LossResult result = LatticeLoss(lattice, target);
  if (!grad.empty()) {
    if (grad.size() != params_.size())
      throw Error(ErrorKind::kInvalidConfig, "gradient buffer has wrong size");
    Backward(cache, lattice, result.grad_log_probs, grad);
  }
  return result;
}

std::vector<double> ToyTransducer::EncodeFrames(std::span<const int> frames) const {
  if (frames.empty()) throw Error(ErrorKind::kZeroFrames, "empty frame sequence");
  const Layout &L = layout_;
  const double *P = params_.data();
  const int T = static_cast<int>(frames.size());
  const int J = config_.joint_width, He = config_.enc_width;
  std::vector<double> in;
  std::vector<std::vector<double>> hs;
  EncoderInputs(frames, config_.input_vocab, in);
  StackForward(P, L.enc, T, in, hs);
  std::vector<double> f(static_cast<size_t>(T) * J, 0.0);
  for (int t = 0; t < T; ++t) {
    double *ft = f.data() + static_cast<size_t>(t) * J;
    std::copy(P + L.bf, P + L.bf + J, ft);
    MatVecAdd(P + L.Wf, J, He, hs.back().data() + static_cast<size_t>(t) * He, ft);
  }
  return f;
}

ToyTransducer::PredState ToyTransducer::AdvancePred(const PredState &state, int label) const {
  const Layout &L = layout_;
  const double *P = params_.data();
  const int Hp = config_.pred_width;
  PredState next;
  next.hidden.assign(state.hidden.size(), 0.0);
  std::vector<double> x(L.pred_in, 0.0);
  x[label] = 1.0;
  for (size_t l = 0; l < L.pred.size(); ++l) {
    const RnnBlock &b = L.pred[l];
    double *h = next.hidden.data() + l * Hp;
    std::copy(P + b.b, P + b.b + Hp, h);
    MatVecAdd(P + b.W, Hp, b.in, x.data(), h);
    MatVecAdd(P + b.R, Hp, Hp, state.hidden.data() + l * Hp, h);
    for (int i = 0; i < Hp; ++i) h[i] = std::tanh(h[i]);
    x.assign(h, h + Hp);
  }
  next.joint.assign(config_.joint_width, 0.0);
  MatVecAdd(P + L.Wg, config_.joint_width, Hp, x.data(), next.joint.data());
  return next;
}

ToyTransducer::PredState ToyTransducer::InitialPredState() const {
  PredState zero;
  zero.hidden.assign(static_cast<size_t>(config_.pred_depth) * config_.pred_width, 0.0);
  return AdvancePred(zero, kBlank);
}

void ToyTransducer::JointLogProbs(const double *enc_joint, const PredState &state,
                                  std::span<double> out) const {
  const Layout &L = layout_;
  const double *P = params_.data();
  const int J = config_.joint_width, K = config_.output_vocab + 1;
  std::vector<double> z(J);
  for (int j = 0; j < J; ++j) z[j] = std::tanh(enc_joint[j] + state.joint[j]);
  std::copy(P + L.bo, P + L.bo + K, out.begin());
  MatVecAdd(P + L.Wo, K, J, z.data(), out.data());
  LogSoftmax(out.first(K));
}

}  // namespace lnsim
