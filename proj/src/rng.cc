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

#include "lnsim/rng.h"

#include <cmath>
#include <limits>
#include <numbers>

#include "lnsim/errors.h"

namespace lnsim {

std::string_view ErrorKindName(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kMalformedRecord: return "MalformedRecord";
    case ErrorKind::kDuplicateId: return "DuplicateId";
    case ErrorKind::kEmptyTranscript: return "EmptyTranscript";
    case ErrorKind::kEmptyCorpus: return "EmptyCorpus";
    case ErrorKind::kIoFailure: return "IoFailure";
    case ErrorKind::kUnencodable: return "Unencodable";
    case ErrorKind::kOutOfVocabulary: return "OutOfVocabulary";
    case ErrorKind::kEmptyCandidateSet: return "EmptyCandidateSet";
    case ErrorKind::kMissingModel: return "MissingModel";
    case ErrorKind::kTargetUnreachable: return "TargetUnreachable";
    case ErrorKind::kManifestMismatch: return "ManifestMismatch";
    case ErrorKind::kIdMismatch: return "IdMismatch";
    case ErrorKind::kZeroBaseline: return "ZeroBaseline";
    case ErrorKind::kInvalidLabel: return "InvalidLabel";
    case ErrorKind::kZeroFrames: return "ZeroFrames";
    case ErrorKind::kDivergenceDetected: return "DivergenceDetected";
    case ErrorKind::kInvalidConfig: return "InvalidConfig";
  }
  return "Unknown";
}

uint64_t Rng::UniformInt(uint64_t n) {
  if (n == 0) throw Error(ErrorKind::kInvalidConfig, "UniformInt(0)");
  // Largest multiple of n that fits; values at or above it are rejected.
  const uint64_t limit = std::numeric_limits<uint64_t>::max() -
                         std::numeric_limits<uint64_t>::max() % n;
  uint64_t x;
  do {
    x = engine_();
  } while (x >= limit);
  return x % n;
}

double Rng::UniformDouble() {
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double Rng::Normal() {
  double u1 = UniformDouble();
  double u2 = UniformDouble();
  if (u1 < 1e-300) u1 = 1e-300;
  return std::sqrt(-2.0 * std::log(u1)) *
         std::cos(2.0 * std::numbers::pi * u2);
}

int Rng::Poisson(double mean) {
  if (mean <= 0.0) return 0;
  double u = UniformDouble();
  double p = std::exp(-mean);
  double cdf = p;
  int k = 0;
  while (u >= cdf && k < 1000) {
    ++k;
    p *= mean / k;
    cdf += p;
  }
  return k;
}

uint64_t DeriveSeed(uint64_t base, uint64_t stream) {
  // splitmix64 finalizer over the combined words.
  uint64_t z = base + 0x9e3779b97f4a7c15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace lnsim
