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
#include <functional>
#include <vector>

#include "gtest/gtest.h"
#include "lnsim/errors.h"
#include "lnsim/rng.h"
#include "lnsim/transducer.h"
#include "oracles.h"

namespace lnsim {
namespace {

using testing::PathSumOracle;
using testing::RandomLattice;
using testing::RandomTarget;

long Binomial(int n, int k) {
  long r = 1;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

TEST(ForwardBackwardTest, SingleFrameNoLabels) {
  Lattice lat(1, 0, 3);
  lat.node(0, 0)[kBlank] = std::log(0.25);
  const auto r = ForwardBackward(lat, {});
  EXPECT_NEAR(r.log_likelihood, std::log(0.25), 1e-12);
}

TEST(ForwardBackwardTest, TwoFramesOneLabelByHand) {
  // Paths: y@(0,0) b@(0,1) b@(1,1)  and  b@(0,0) y@(1,0) b@(1,1).
  Lattice lat(2, 1, 3);
  auto set = [&](int t, int u, double blank, double y) {
    lat.node(t, u)[kBlank] = std::log(blank);
    lat.node(t, u)[2] = std::log(y);
    lat.node(t, u)[1] = std::log(1.0 - blank - y);
  };
  set(0, 0, 0.5, 0.3);
  set(0, 1, 0.6, 0.1);
  set(1, 0, 0.2, 0.7);
  set(1, 1, 0.9, 0.05);
  const std::vector<int> y = {2};
  const double expected = 0.3 * 0.6 * 0.9 + 0.5 * 0.7 * 0.9;
  EXPECT_NEAR(ForwardBackward(lat, y).log_likelihood, std::log(expected), 1e-12);
}

TEST(ForwardBackwardTest, MatchesPathEnumeration) {
  Rng rng(17);
  for (int trial = 0; trial < 200; ++trial) {
    const int T = 1 + static_cast<int>(rng.UniformInt(5));
    const int U = static_cast<int>(rng.UniformInt(5));
    const int V = 1 + static_cast<int>(rng.UniformInt(4));
    Lattice lat = RandomLattice(T, U, V, rng);
    const auto y = RandomTarget(U, V, rng);
    long paths = 0;
    const double oracle = PathSumOracle(lat, y, &paths);
    EXPECT_EQ(paths, Binomial(T - 1 + U, U));
    const auto r = ForwardBackward(lat, y);
    EXPECT_NEAR(r.log_likelihood, oracle, 1e-9 * std::max(1.0, std::abs(oracle)));
  }
}

TEST(ForwardBackwardTest, AlphaBetaConsistentOnEveryDiagonal) {
  // Every path crosses each "t + u = const" cut exactly through one node,
  // and the node leaves it via one transition; logsumexp over alpha*beta
  // along any anti-diagonal therefore equals log P.
  Rng rng(3);
  for (int trial = 0; trial < 50; ++trial) {
    const int T = 1 + static_cast<int>(rng.UniformInt(6));
    const int U = static_cast<int>(rng.UniformInt(6));
    Lattice lat = RandomLattice(T, U, 4, rng);
    const auto y = RandomTarget(U, 4, rng);
    const auto r = ForwardBackward(lat, y);
    EXPECT_EQ(r.alpha[0], 0.0);
    EXPECT_NEAR(r.beta[0], r.log_likelihood, 1e-9);
    for (int n = 0; n <= T - 1 + U; ++n) {
      double s = -INFINITY;
      for (int t = 0; t < T; ++t) {
        const int u = n - t;
        if (u < 0 || u > U) continue;
        s = LogSumExp(s, r.alpha[t * (U + 1) + u] + r.beta[t * (U + 1) + u]);
      }
      EXPECT_NEAR(s, r.log_likelihood, 1e-9) << "diagonal " << n;
    }
  }
}

TEST(ForwardBackwardTest, GradientMatchesFiniteDifferences) {
  Rng rng(29);
  for (int trial = 0; trial < 30; ++trial) {
    const int T = 1 + static_cast<int>(rng.UniformInt(4));
    const int U = static_cast<int>(rng.UniformInt(4));
    Lattice lat = RandomLattice(T, U, 3, rng);
    const auto y = RandomTarget(U, 3, rng);
    const LossResult loss = LatticeLoss(lat, y);
    const double h = 1e-6;
    for (size_t i = 0; i < lat.log_probs.size(); ++i) {
      Lattice plus = lat, minus = lat;
      plus.log_probs[i] += h;
      minus.log_probs[i] -= h;
      const double fd = (LatticeLoss(plus, y).neg_log_likelihood -
                         LatticeLoss(minus, y).neg_log_likelihood) / (2 * h);
      EXPECT_NEAR(loss.grad_log_probs[i], fd, 1e-6) << "entry " << i;
    }
  }
}

TEST(ForwardBackwardTest, OccupancyConservation) {
  // Every path emits T blanks and each label exactly once.
  Rng rng(5);
  for (int trial = 0; trial < 50; ++trial) {
    const int T = 1 + static_cast<int>(rng.UniformInt(7));
    const int U = static_cast<int>(rng.UniformInt(7));
    const int V = 5;
    Lattice lat = RandomLattice(T, U, V, rng);
    const auto y = RandomTarget(U, V, rng);
    const LossResult loss = LatticeLoss(lat, y);
    double blanks = 0.0;
    std::vector<double> per_label(U, 0.0);
    for (int t = 0; t < T; ++t) {
      for (int u = 0; u <= U; ++u) {
        const double *g = loss.grad_log_probs.data() + (t * (U + 1) + u) * (V + 1);
        blanks -= g[kBlank];
        for (int k = 1; k <= V; ++k) {
          if (g[k] == 0.0) continue;
          ASSERT_LT(u, U);
          EXPECT_EQ(k, y[u]);
          per_label[u] -= g[k];
        }
      }
    }
    EXPECT_NEAR(blanks, T, 1e-9);
    for (double p : per_label) EXPECT_NEAR(p, 1.0, 1e-9);
  }
}

TEST(ForwardBackwardTest, UnreachableNodesHaveZeroGradient) {
  // A zero-probability label at (0,0) blocks every path through (0,1) when
  // T == 1; the lattice is then infeasible and the gradient is all zeros.
  Lattice lat(1, 1, 3);
  lat.node(0, 0)[kBlank] = std::log(0.5);
  lat.node(0, 0)[1] = -INFINITY;
  lat.node(0, 0)[2] = std::log(0.5);
  lat.node(0, 1)[kBlank] = 0.0;
  const std::vector<int> y = {1};
  const LossResult loss = LatticeLoss(lat, y);
  EXPECT_TRUE(std::isinf(loss.neg_log_likelihood));
  for (double g : loss.grad_log_probs) EXPECT_EQ(g, 0.0);

  // Partially reachable: with U > T-1 allowed, nodes past a dead label
  // column receive no occupancy.
  Rng rng(8);
  Lattice lat2 = RandomLattice(3, 2, 3, rng);
  const std::vector<int> y2 = {1, 2};
  for (int t = 0; t < 3; ++t) lat2.node(t, 0)[kBlank] = t == 0 ? lat2.node(t, 0)[kBlank] : -INFINITY;
  // From (1,0) and (2,0) no blank can be taken, but (1,0) is itself only
  // reachable via a blank from (0,0); it stays reachable, (2,0) does not.
  const LossResult l2 = LatticeLoss(lat2, y2);
  ASSERT_TRUE(std::isfinite(l2.neg_log_likelihood));
  const double *g20 = l2.grad_log_probs.data() + (2 * 3 + 0) * 4;
  for (int k = 0; k < 4; ++k) EXPECT_EQ(g20[k], 0.0);
}

TEST(ForwardBackwardTest, RejectsBadInputs) {
  Lattice empty(0, 0, 3);
  try {
    ForwardBackward(empty, {});
    FAIL();
  } catch (const Error &e) {
    EXPECT_EQ(e.kind(), ErrorKind::kZeroFrames);
  }
  Lattice lat(2, 1, 3);
  for (int bad : {0, 3, -1}) {
    const std::vector<int> y = {bad};
    try {
      ForwardBackward(lat, y);
      FAIL() << bad;
    } catch (const Error &e) {
      EXPECT_EQ(e.kind(), ErrorKind::kInvalidLabel);
    }
  }
}

}  // namespace
}  // namespace lnsim
