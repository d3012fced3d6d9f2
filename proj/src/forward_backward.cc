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

#include <cmath>
#include <limits>

#include "lnsim/errors.h"
#include "lnsim/transducer.h"

namespace lnsim {
namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

void CheckInputs(const Lattice &lattice, std::span<const int> target) {
  if (lattice.T <= 0) throw Error(ErrorKind::kZeroFrames, "lattice has no frames");
  if (static_cast<int>(target.size()) != lattice.U)
    throw Error(ErrorKind::kInvalidLabel, "target length does not match lattice");
  for (int y : target) {
    if (y < 1 || y >= lattice.num_outputs)
      throw Error(ErrorKind::kInvalidLabel, "label " + std::to_string(y) + " out of range");
  }
}

}  // namespace

double LogSumExp(double a, double b) {
  if (a == kNegInf) return b;
  if (b == kNegInf) return a;
  if (a < b) std::swap(a, b);
  return a + std::log1p(std::exp(b - a));
}

ForwardBackwardResult ForwardBackward(const Lattice &lattice, std::span<const int> target) {
  CheckInputs(lattice, target);
  const int T = lattice.T, U = lattice.U;
  auto idx = [U](int t, int u) { return static_cast<size_t>(t) * (U + 1) + u; };

  ForwardBackwardResult r;
  r.alpha.assign(static_cast<size_t>(T) * (U + 1), kNegInf);
  r.beta.assign(static_cast<size_t>(T) * (U + 1), kNegInf);

  // alpha(t,u): log-prob of reaching node (t,u) having emitted y_1..y_u.
  for (int t = 0; t < T; ++t) {
    for (int u = 0; u <= U; ++u) {
      if (t == 0 && u == 0) {
        r.alpha[idx(0, 0)] = 0.0;
        continue;
      }
      double a = kNegInf;
      if (t > 0) a = r.alpha[idx(t - 1, u)] + lattice.node(t - 1, u)[kBlank];
      if (u > 0) a = LogSumExp(a, r.alpha[idx(t, u - 1)] + lattice.node(t, u - 1)[target[u - 1]]);
      r.alpha[idx(t, u)] = a;
    }
  }

  // beta(t,u): log-prob of completing the target from node (t,u).
  for (int t = T - 1; t >= 0; --t) {
    for (int u = U; u >= 0; --u) {
      const double *lp = lattice.node(t, u);
      if (t == T - 1 && u == U) {
        r.beta[idx(t, u)] = lp[kBlank];
        continue;
      }
      double b = kNegInf;
      if (t + 1 < T) b = r.beta[idx(t + 1, u)] + lp[kBlank];
      if (u < U) b = LogSumExp(b, r.beta[idx(t, u + 1)] + lp[target[u]]);
      r.beta[idx(t, u)] = b;
    }
  }

  r.log_likelihood = r.alpha[idx(T - 1, U)] + lattice.node(T - 1, U)[kBlank];
  return r;
}

LossResult LatticeLoss(const Lattice &lattice, std::span<const int> target) {
  ForwardBackwardResult fb = ForwardBackward(lattice, target);
  const int T = lattice.T, U = lattice.U, K = lattice.num_outputs;
  auto idx = [U](int t, int u) { return static_cast<size_t>(t) * (U + 1) + u; };
  const double log_p = fb.log_likelihood;

  LossResult out;
  out.neg_log_likelihood = -log_p;
  out.grad_log_probs.assign(lattice.log_probs.size(), 0.0);
  if (!std::isfinite(log_p)) return out;

  for (int t = 0; t < T; ++t) {
    for (int u = 0; u <= U; ++u) {
      const double a = fb.alpha[idx(t, u)];
      if (a == kNegInf) continue;
      const double *lp = lattice.node(t, u);
      double *g = out.grad_log_probs.data() + idx(t, u) * K;
      if (t + 1 < T) {
        g[kBlank] = -std::exp(a + lp[kBlank] + fb.beta[idx(t + 1, u)] - log_p);
      } else if (u == U) {
        g[kBlank] = -std::exp(a + lp[kBlank] - log_p);
      }
      if (u < U) {
        g[target[u]] = -std::exp(a + lp[target[u]] + fb.beta[idx(t, u + 1)] - log_p);
      }
    }
  }
  return out;
}

}  // namespace lnsim
