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

#ifndef LNSIM_RNG_H_
#define LNSIM_RNG_H_

#include <cstdint>
#include <random>
#include <string_view>

namespace lnsim {

// Identifier written into every manifest and report.  Bump the suffix if any
// of the derivation helpers below change their output for a given seed.
inline constexpr std::string_view kPrngId = "mt19937_64+lnsim-draws/v1";

// Deterministic random source.  The engine is std::mt19937_64, whose output
// sequence is fixed by the standard; the std:: distributions are not, so all
// draws go through the helpers here to keep results identical across
// standard library implementations.
class Rng {
 public:
  explicit Rng(uint64_t seed) : engine_(seed) {}

  uint64_t NextU64() { return engine_(); }

  // Uniform integer in [0, n).  n must be > 0.  Rejection sampling, unbiased.
  uint64_t UniformInt(uint64_t n);

  // Uniform double in [0, 1) with 53 random bits.
  double UniformDouble();

  bool Bernoulli(double p) { return UniformDouble() < p; }

  // Standard normal via Box-Muller (consumes two doubles per call).
  double Normal();

  // Poisson(mean) by inversion; intended for small means.
  int Poisson(double mean);

 private:
  std::mt19937_64 engine_;
};

// Derives an independent stream seed from a base seed and a stream tag, so
// that e.g. the shuffle and the per-utterance draws never share a sequence.
uint64_t DeriveSeed(uint64_t base, uint64_t stream);

}  // namespace lnsim

#endif  // LNSIM_RNG_H_
