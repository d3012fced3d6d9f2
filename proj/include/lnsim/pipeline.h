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

// Subcommand implementations behind the labelnoise binary.  Each command
// takes its effective configuration as JSON (defaults, then the --config
// file, then explicit flags) and returns a process exit code.

#ifndef LNSIM_PIPELINE_H_
#define LNSIM_PIPELINE_H_

#include <filesystem>
#include <optional>
#include <ostream>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "lnsim/synthetic_task.h"
#include "lnsim/transducer.h"

namespace lnsim {

inline constexpr std::string_view kToolkitVersion = "labelnoise 1.0.0";

inline constexpr int kExitOk = 0;
inline constexpr int kExitError = 1;
inline constexpr int kExitTargetUnreachable = 2;

// defaults <- config file <- CLI overrides, merged key by key (objects
// recursively).  Null override values are ignored.
nlohmann::json ResolveConfig(const nlohmann::json &defaults,
                             const std::optional<std::filesystem::path> &config_file,
                             const nlohmann::json &overrides);

// Run directory: config.json, corpus/, manifests/, models/, reports/.
struct RunDir {
  std::filesystem::path root;

  std::filesystem::path config() const { return root / "config.json"; }
  std::filesystem::path corpus() const { return root / "corpus"; }
  std::filesystem::path manifests() const { return root / "manifests"; }
  std::filesystem::path models() const { return root / "models"; }
  std::filesystem::path reports() const { return root / "reports"; }

  // Creates the layout and writes the frozen config (with version and PRNG
  // identifiers added).
  static RunDir Create(const std::filesystem::path &root, const nlohmann::json &config);
};

nlohmann::json FrozenConfig(const nlohmann::json &config, std::string_view command);

void WriteText(const std::filesystem::path &path, std::string_view text);
std::string ReadText(const std::filesystem::path &path);

// Model files: JSON with the architecture and every parameter at full
// double precision.
nlohmann::json ModelToJson(const ToyTransducer &model);
ToyTransducer ModelFromJson(const nlohmann::json &j);
void SaveModel(const ToyTransducer &model, const std::filesystem::path &path);
ToyTransducer LoadModel(const std::filesystem::path &path);

// Paired data: one {"frames": [...], "labels": [...]} object per line.
std::string SerializeExamples(const std::vector<Example> &examples);
std::vector<Example> ParseExamples(std::string_view text);

// Defaults per command; also the schema documented by --help.
nlohmann::json InjectDefaults();
nlohmann::json ScoreDefaults();
nlohmann::json ReproduceDefaults();

int CmdInject(const nlohmann::json &config, std::ostream &out, std::ostream &err);
int CmdScore(const nlohmann::json &config, std::ostream &out, std::ostream &err);
int CmdFilter(const nlohmann::json &config, std::ostream &out, std::ostream &err);
int CmdInvert(const nlohmann::json &config, std::ostream &out, std::ostream &err);
int CmdReproduce(const nlohmann::json &config, std::ostream &out, std::ostream &err);
int CmdLabTrain(const nlohmann::json &config, std::ostream &out, std::ostream &err);
int CmdLabSweep(const nlohmann::json &config, std::ostream &out, std::ostream &err);
int CmdLabBlankStats(const nlohmann::json &config, std::ostream &out, std::ostream &err);
int CmdSoundex(const nlohmann::json &config, std::ostream &out, std::ostream &err);
int CmdLmDump(const nlohmann::json &config, std::ostream &out, std::ostream &err);

}  // namespace lnsim

#endif  // LNSIM_PIPELINE_H_
