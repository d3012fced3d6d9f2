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

#ifndef LNSIM_ERRORS_H_
#define LNSIM_ERRORS_H_

#include <stdexcept>
#include <string>
#include <string_view>

namespace lnsim {

enum class ErrorKind {
  kMalformedRecord,
  kDuplicateId,
  kEmptyTranscript,
  kEmptyCorpus,
  kIoFailure,
  kUnencodable,
  kOutOfVocabulary,
  kEmptyCandidateSet,
  kMissingModel,
  kTargetUnreachable,
  kManifestMismatch,
  kIdMismatch,
  kZeroBaseline,
  kInvalidLabel,
  kZeroFrames,
  kDivergenceDetected,
  kInvalidConfig,
};

std::string_view ErrorKindName(ErrorKind kind);

// Every failure surfaced by the toolkit carries a kind so that callers (and
// the CLI exit-code mapping) can dispatch without parsing messages.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string &message)
      : std::runtime_error(std::string(ErrorKindName(kind)) + ": " + message),
        kind_(kind) {}

  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace lnsim

#endif  // LNSIM_ERRORS_H_
