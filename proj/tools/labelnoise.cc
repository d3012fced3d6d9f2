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

// labelnoise: label-error injection, scoring and the toy transducer lab.

#include <functional>
#include <iostream>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "lnsim/errors.h"
#include "lnsim/pipeline.h"
#include "lnsim/rng.h"

using nlohmann::json;

namespace {

// Collects only the flags the user actually passed, keyed by JSON pointer,
// so they can be layered over the config file.
class Overrides {
 public:
  template <typename T>
  CLI::Option *Add(CLI::App *app, const std::string &name, const std::string &pointer,
                   const std::string &help) {
    auto value = std::make_shared<T>();
    CLI::Option *opt = app->add_option(name, *value, help);
    apply_.push_back([opt, value, pointer](json &j) {
      if (opt->count()) j[json::json_pointer(pointer)] = *value;
    });
    return opt;
  }

  CLI::Option *Flag(CLI::App *app, const std::string &name, const std::string &pointer,
                    const std::string &help) {
    auto value = std::make_shared<bool>(false);
    CLI::Option *opt = app->add_flag(name, *value, help);
    apply_.push_back([opt, value, pointer](json &j) {
      if (opt->count()) j[json::json_pointer(pointer)] = *value;
    });
    return opt;
  }

  json Collect() const {
    json j = json::object();
    for (const auto &f : apply_) f(j);
    return j;
  }

 private:
  std::vector<std::function<void(json &)>> apply_;
};

struct Command {
  CLI::App *app = nullptr;
  Overrides overrides;
  std::string config_file;
  std::function<json()> defaults = [] { return json::object(); };
  std::function<int(const json &)> run;
};

}  // namespace

int main(int argc, char **argv) {
  CLI::App app{"Simulate training-label errors, score their impact and run the toy transducer lab."};
  app.require_subcommand(0, 1);
  bool version = false;
  app.add_flag("--version", version, "Print toolkit and PRNG identifiers");

  std::vector<std::unique_ptr<Command>> commands;
  auto add = [&](CLI::App *parent, const std::string &name, const std::string &help) {
    auto cmd = std::make_unique<Command>();
    cmd->app = parent->add_subcommand(name, help);
    cmd->app->add_option("--config", cmd->config_file, "JSON config; flags override it");
    commands.push_back(std::move(cmd));
    return commands.back().get();
  };

  // inject
  Command *inject = add(&app, "inject", "Corrupt a corpus to a target label error rate");
  {
    Overrides &o = inject->overrides;
    CLI::App *a = inject->app;
    o.Add<std::string>(a, "--corpus", "/corpus", "Input corpus (id<TAB>transcript)");
    o.Add<std::string>(a, "--type", "/type", "sub|ins|del (or substitution|insertion|deletion)");
    o.Add<std::string>(a, "--target-ler", "/target_ler", "Target LER as a decimal, e.g. 0.06");
    o.Add<uint64_t>(a, "--seed", "/seed", "Injection seed");
    o.Add<std::string>(a, "--lm-corpus", "/lm_corpus", "Corpus for the bigram LM (default: --corpus)");
    o.Add<std::vector<std::string>>(a, "--preserved-sub", "/preserved_substitution",
                                    "Words substitution avoids (wakewords)")
        ->delimiter(',');
    o.Add<std::vector<std::string>>(a, "--preserved-del", "/preserved_deletion",
                                    "Explicit words deletion never removes")
        ->delimiter(',');
    o.Add<size_t>(a, "--preserved-top-k", "/preserved_top_k", "Most frequent words deletion keeps");
    o.Add<int>(a, "--max-resample", "/max_resample", "Substitution redraws on a preserved word");
    o.Add<std::string>(a, "--out", "/out", "Run directory");
    o.Add<std::string>(a, "--out-corpus", "/out_corpus", "Corrupted corpus path");
    o.Add<std::string>(a, "--out-manifest", "/out_manifest", "Manifest path");
    inject->defaults = lnsim::InjectDefaults;
    inject->run = [](const json &c) { return lnsim::CmdInject(c, std::cout, std::cerr); };
  }

  Command *score = add(&app, "score", "Score hypotheses and normalise by a baseline WER");
  {
    Overrides &o = score->overrides;
    CLI::App *a = score->app;
    o.Add<std::string>(a, "--ref", "/ref", "Reference corpus");
    o.Add<std::string>(a, "--hyp", "/hyp", "Hypothesis corpus");
    o.Add<double>(a, "--baseline-wer", "/baseline_wer", "Baseline absolute WER");
    o.Add<std::string>(a, "--baseline-hyp", "/baseline_hyp", "Baseline hypotheses (scored against --ref)");
    o.Add<std::string>(a, "--baseline-id", "/baseline_id", "Baseline system id");
    o.Add<std::string>(a, "--report", "/report", "Write the JSON report here (default stdout)");
    score->defaults = lnsim::ScoreDefaults;
    score->run = [](const json &c) { return lnsim::CmdScore(c, std::cout, std::cerr); };
  }

  Command *filter = add(&app, "filter", "Remove every utterance named in a manifest");
  {
    Overrides &o = filter->overrides;
    o.Add<std::string>(filter->app, "--corpus", "/corpus", "Original or corrupted corpus");
    o.Add<std::string>(filter->app, "--manifest", "/manifest", "Injection manifest");
    o.Add<std::string>(filter->app, "--out-corpus", "/out_corpus", "Filtered corpus path");
    filter->run = [](const json &c) { return lnsim::CmdFilter(c, std::cout, std::cerr); };
  }

  Command *invert = add(&app, "invert", "Restore the original corpus from a manifest");
  {
    Overrides &o = invert->overrides;
    o.Add<std::string>(invert->app, "--corpus", "/corpus", "Corrupted corpus");
    o.Add<std::string>(invert->app, "--manifest", "/manifest", "Injection manifest");
    o.Add<std::string>(invert->app, "--out-corpus", "/out_corpus", "Restored corpus path");
    invert->run = [](const json &c) { return lnsim::CmdInvert(c, std::cout, std::cerr); };
  }

  Command *reproduce = add(&app, "reproduce", "Run the toy error-impact matrix and oracle-filter comparison");
  {
    Overrides &o = reproduce->overrides;
    CLI::App *a = reproduce->app;
    o.Add<std::string>(a, "--out", "/out", "Run directory");
    o.Add<std::vector<uint64_t>>(a, "--seeds", "/seeds", "Seeds");
    o.Add<std::vector<std::string>>(a, "--rates", "/rates", "Target LERs");
    o.Add<int>(a, "--steps", "/hyper/steps", "Training steps per run");
    o.Add<int>(a, "--train-utts", "/train_utts", "Training utterances (dev split included)");
    o.Add<int>(a, "--eval-utts", "/eval_utts", "Evaluation utterances");
    o.Add<int>(a, "--threads", "/threads", "Worker threads (0 = all cores)");
    o.Add<std::string>(a, "--decode", "/decode/mode", "greedy|beam");
    o.Flag(a, "--dry-run", "/dry_run", "Print the planned jobs and exit");
    auto seed = std::make_shared<std::optional<uint64_t>>();
    a->add_option("--seed", *seed, "Run a single seed");
    reproduce->defaults = lnsim::ReproduceDefaults;
    reproduce->run = [seed](const json &c) {
      json cfg = c;
      if (*seed) cfg["seeds"] = {**seed};
      return lnsim::CmdReproduce(cfg, std::cout, std::cerr);
    };
  }

  CLI::App *lab = app.add_subcommand("lab", "Toy transducer lab");
  lab->require_subcommand(1);
  Command *train = add(lab, "train", "Train one system and write a run directory");
  {
    // --config here is the experiment file itself.
    Overrides &o = train->overrides;
    o.Add<std::string>(train->app, "--out", "/out", "Run directory");
    o.Add<uint64_t>(train->app, "--seed", "/seed", "Seed (overrides the experiment file)");
    train->run = [train](const json &c) {
      json cfg = c;
      cfg["config"] = train->config_file;
      return lnsim::CmdLabTrain(cfg, std::cout, std::cerr);
    };
  }
  Command *sweep = add(lab, "sweep", "Run an experiment matrix");
  {
    Overrides &o = sweep->overrides;
    o.Add<std::string>(sweep->app, "--matrix", "/matrix", "Matrix JSON");
    o.Add<std::string>(sweep->app, "--out", "/out", "Report JSON");
    o.Add<int>(sweep->app, "--threads", "/threads", "Worker threads (0 = all cores)");
    o.Add<uint64_t>(sweep->app, "--seed", "/seed", "Run a single seed");
    sweep->run = [](const json &c) { return lnsim::CmdLabSweep(c, std::cout, std::cerr); };
  }
  Command *blank = add(lab, "blank-stats", "Mean blank posterior of a model on paired data");
  {
    Overrides &o = blank->overrides;
    o.Add<std::string>(blank->app, "--model", "/model", "Model file");
    o.Add<std::string>(blank->app, "--data", "/data", "Paired data (JSON lines)");
    o.Add<int>(blank->app, "--max-nonblank", "/max_nonblank", "Expansion cap");
    blank->run = [](const json &c) { return lnsim::CmdLabBlankStats(c, std::cout, std::cerr); };
  }

  Command *soundex = add(&app, "soundex", "Print Soundex codes or a corpus index");
  {
    Overrides &o = soundex->overrides;
    o.Add<std::vector<std::string>>(soundex->app, "words", "/words", "Words to encode");
    o.Add<std::string>(soundex->app, "--corpus", "/corpus", "Dump the index of this corpus");
    soundex->defaults = [] { return json{{"words", json::array()}}; };
    soundex->run = [](const json &c) { return lnsim::CmdSoundex(c, std::cout, std::cerr); };
  }
  Command *lm = add(&app, "lm-dump", "Print the smoothed bigram table of a corpus");
  {
    lm->overrides.Add<std::string>(lm->app, "--corpus", "/corpus", "Corpus");
    lm->run = [](const json &c) { return lnsim::CmdLmDump(c, std::cout, std::cerr); };
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    const int code = app.exit(e);
    return code == 0 ? lnsim::kExitOk : lnsim::kExitError;
  }

  if (version) {
    std::cout << lnsim::kToolkitVersion << "\nprng " << lnsim::kPrngId << "\n";
    return lnsim::kExitOk;
  }
  for (const auto &cmd : commands) {
    if (!cmd->app->parsed()) continue;
    try {
      std::optional<std::filesystem::path> file;
      // lab train reads its --config as the experiment definition.
      if (!cmd->config_file.empty() && cmd.get() != train) file = cmd->config_file;
      const json cfg = lnsim::ResolveConfig(cmd->defaults(), file, cmd->overrides.Collect());
      return cmd->run(cfg);
    } catch (const std::exception &e) {
      std::cerr << "error: " << e.what() << "\n";
      return lnsim::kExitError;
    }
  }
  std::cout << app.help();
  return lnsim::kExitOk;
}
