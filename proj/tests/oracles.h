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

// Brute-force reference implementations shared by the unit and acceptance
// tests.  None of these reuse library code beyond plain data types.

#ifndef LNSIM_TESTS_ORACLES_H_
#define LNSIM_TESTS_ORACLES_H_

#include <algorithm>
#include <climits>
#include <cmath>
#include <functional>
#include <set>
#include <tuple>
#include <vector>

#include "lnsim/rng.h"
#include "lnsim/transducer.h"
#include "lnsim/wer.h"

namespace lnsim::testing {

// --- alignment ---
// The reference tie-break: among minimum-cost paths, take the one whose op
// sequence read backwards from the end is lexicographically greatest under
// match(3) > sub(2) > del(1) > ins(0).

struct AlignPath {
  int cost = INT_MAX;
  std::vector<int> ranks;
  ErrorCounts counts;
};

inline bool BetterPath(const AlignPath &a, const AlignPath &b) {
  if (a.cost != b.cost) return a.cost < b.cost;
  return a.ranks > b.ranks;
}

// Walks every alignment path explicitly.
inline ErrorCounts AlignByEnumeration(const std::vector<int> &r, const std::vector<int> &h) {
  AlignPath cur, best;
  cur.cost = 0;
  std::function<void(size_t, size_t)> walk = [&](size_t i, size_t j) {
    if (i == 0 && j == 0) {
      if (BetterPath(cur, best)) best = cur;
      return;
    }
    auto step = [&](int rank, int add, uint64_t ErrorCounts::*field, size_t ni, size_t nj) {
      cur.ranks.push_back(rank);
      cur.cost += add;
      ++(cur.counts.*field);
      walk(ni, nj);
      --(cur.counts.*field);
      cur.cost -= add;
      cur.ranks.pop_back();
    };
    if (i > 0 && j > 0) {
      if (r[i - 1] == h[j - 1])
        step(3, 0, &ErrorCounts::hits, i - 1, j - 1);
      else
        step(2, 1, &ErrorCounts::subs, i - 1, j - 1);
    }
    if (i > 0) step(1, 1, &ErrorCounts::dels, i - 1, j);
    if (j > 0) step(0, 1, &ErrorCounts::ins, i, j - 1);
  };
  walk(r.size(), h.size());
  return best.counts;
}

// Same ordering, but each prefix pair keeps its best complete path; the
// comparison is on whole rank sequences, so it checks the backtrace's
// greedy step choice rather than repeating it.
inline ErrorCounts AlignByMemoSearch(const std::vector<int> &r, const std::vector<int> &h) {
  const size_t I = r.size(), J = h.size();
  std::vector<AlignPath> best((I + 1) * (J + 1));
  auto at = [&](size_t i, size_t j) -> AlignPath & { return best[i * (J + 1) + j]; };
  at(0, 0).cost = 0;
  for (size_t i = 0; i <= I; ++i) {
    for (size_t j = 0; j <= J; ++j) {
      if (i == 0 && j == 0) continue;
      AlignPath &out = at(i, j);
      auto consider = [&](const AlignPath &rest, int rank, int add, uint64_t ErrorCounts::*field) {
        AlignPath p;
        p.cost = rest.cost + add;
        p.ranks.reserve(rest.ranks.size() + 1);
        p.ranks.push_back(rank);
        p.ranks.insert(p.ranks.end(), rest.ranks.begin(), rest.ranks.end());
        p.counts = rest.counts;
        ++(p.counts.*field);
        if (BetterPath(p, out)) out = std::move(p);
      };
      if (i > 0 && j > 0) {
        if (r[i - 1] == h[j - 1])
          consider(at(i - 1, j - 1), 3, 0, &ErrorCounts::hits);
        else
          consider(at(i - 1, j - 1), 2, 1, &ErrorCounts::subs);
      }
      if (i > 0) consider(at(i - 1, j), 1, 1, &ErrorCounts::dels);
      if (j > 0) consider(at(i, j - 1), 0, 1, &ErrorCounts::ins);
    }
  }
  return at(I, J).counts;
}

// Every (subs, ins, dels) triple reachable by a minimum-cost alignment.
inline std::set<std::tuple<uint64_t, uint64_t, uint64_t>> OptimalDecompositions(
    const std::vector<int> &r, const std::vector<int> &h) {
  std::set<std::tuple<uint64_t, uint64_t, uint64_t>> out;
  int best = INT_MAX;
  std::function<void(size_t, size_t, ErrorCounts, int)> go = [&](size_t i, size_t j, ErrorCounts c,
                                                                 int cost) {
    if (cost > best) return;
    if (i == 0 && j == 0) {
      if (cost < best) out.clear(), best = cost;
      out.insert({c.subs, c.ins, c.dels});
      return;
    }
    if (i > 0 && j > 0) {
      ErrorCounts d = c;
      const bool same = r[i - 1] == h[j - 1];
      (same ? d.hits : d.subs) += 1;
      go(i - 1, j - 1, d, cost + (same ? 0 : 1));
    }
    if (i > 0) {
      ErrorCounts d = c;
      ++d.dels;
      go(i - 1, j, d, cost + 1);
    }
    if (j > 0) {
      ErrorCounts d = c;
      ++d.ins;
      go(i, j - 1, d, cost + 1);
    }
  };
  go(r.size(), h.size(), {}, 0);
  return out;
}

inline bool SameCounts(const ErrorCounts &a, const ErrorCounts &b) {
  return a.hits == b.hits && a.subs == b.subs && a.ins == b.ins && a.dels == b.dels;
}

// --- transducer lattices ---

// Random lattice with a proper log-softmax at every node.
inline Lattice RandomLattice(int T, int U, int V, Rng &rng, double scale = 2.0) {
  Lattice lat(T, U, V + 1);
  for (int t = 0; t < T; ++t) {
    for (int u = 0; u <= U; ++u) {
      double *lp = lat.node(t, u);
      double z = -INFINITY;
      for (int k = 0; k <= V; ++k) {
        lp[k] = scale * rng.Normal();
        z = LogSumExp(z, lp[k]);
      }
      for (int k = 0; k <= V; ++k) lp[k] -= z;
    }
  }
  return lat;
}

inline std::vector<int> RandomTarget(int U, int V, Rng &rng) {
  std::vector<int> y(U);
  for (int &x : y) x = 1 + static_cast<int>(rng.UniformInt(V));
  return y;
}

// Log of the summed probability of every monotone path, listed one by one.
inline double PathSumOracle(const Lattice &lat, const std::vector<int> &y, long *paths = nullptr) {
  const int T = lat.T, U = lat.U;
  std::vector<double> terms;
  std::function<void(int, int, double)> walk = [&](int t, int u, double acc) {
    const double *lp = lat.node(t, u);
    if (t == T - 1 && u == U) {
      terms.push_back(acc + lp[kBlank]);
      return;
    }
    if (t + 1 < T) walk(t + 1, u, acc + lp[kBlank]);
    if (u < U) walk(t, u + 1, acc + lp[y[u]]);
  };
  walk(0, 0, 0.0);
  if (paths) *paths = static_cast<long>(terms.size());
  double m = -INFINITY;
  for (double x : terms) m = std::max(m, x);
  if (m == -INFINITY) return m;
  double s = 0.0;
  for (double x : terms) s += std::exp(x - m);
  return m + std::log(s);
}

// --- model gradients ---

// Central differences against the analytic gradient on every parameter.
// Relative error uses a small absolute floor so that near-zero gradients do
// not turn rounding noise into huge ratios.
inline double MaxRelativeGradError(const ToyTransducer &model, const std::vector<int> &frames,
                                   const std::vector<int> &target, uint64_t dropout_seed,
                                   bool dropout) {
  constexpr double kStep = 1e-5;
  constexpr double kFloor = 1e-6;
  std::vector<double> grad(model.num_params(), 0.0);
  {
    Rng rng(dropout_seed);
    model.Loss(frames, target, grad, dropout ? &rng : nullptr);
  }
  ToyTransducer probe = model;
  auto loss_at = [&]() {
    Rng rng(dropout_seed);
    return probe.Loss(frames, target, {}, dropout ? &rng : nullptr).neg_log_likelihood;
  };
  double worst = 0.0;
  for (size_t i = 0; i < model.num_params(); ++i) {
    const double x = probe.params()[i];
    probe.params()[i] = x + kStep;
    const double up = loss_at();
    probe.params()[i] = x - kStep;
    const double down = loss_at();
    probe.params()[i] = x;
    const double fd = (up - down) / (2 * kStep);
    const double denom = std::max({std::abs(fd), std::abs(grad[i]), kFloor});
    worst = std::max(worst, std::abs(fd - grad[i]) / denom);
  }
  return worst;
}

}  // namespace lnsim::testing

#endif  // LNSIM_TESTS_ORACLES_H_
