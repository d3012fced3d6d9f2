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

#include "lnsim/pipeline.h"

#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "lnsim/bigram_lm.h"
#include "lnsim/corpus.h"
#include "lnsim/errors.h"
#include "lnsim/experiment.h"
#include "lnsim/injector.h"
#include "lnsim/rng.h"
#include "lnsim/soundex.h"
#include "lnsim/wer.h"

namespace lnsim {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

void MergeInto(json &base, const json &over) {
  if (!over.is_object()) return;
  for (auto it = over.begin(); it != over.end(); ++it) {
    if (it->is_null()) continue;
    if (it->is_object() && base.contains(it.key()) && base[it.key()].is_object())
      MergeInto(base[it.key()], *it);
    else
      base[it.key()] = *it;
  }
}

Rational RationalFromJson(const json &j) {
  if (j.is_number()) return Rational::FromDouble(j.get<double>());
  const std::string text = j.get<std::string>();
  const size_t slash = text.find('/');
  if (slash == std::string::npos) return Rational::Parse(text);
  try {
    return {std::stoll(text.substr(0, slash)), std::stoll(text.substr(slash + 1))};
  } catch (const std::exception &) {
    throw Error(ErrorKind::kInvalidConfig, "bad rational '" + text + "'");
  }
}

std::string Need(const json &c, const char *key) {
  if (!c.contains(key) || c[key].is_null() || c[key].get<std::string>().empty())
    throw Error(ErrorKind::kInvalidConfig, std::string("missing required option '") + key + "'");
  return c[key].get<std::string>();
}

bool Has(const json &c, const char *key) {
  return c.contains(key) && !c[key].is_null() &&
         !(c[key].is_string() && c[key].get<std::string>().empty());
}

std::string Fixed(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", digits, v);
  return buf;
}

// Runs `body`, mapping toolkit errors to exit codes.
template <typename F>
int Guard(std::ostream &err, F &&body) {
  try {
    return body();
  } catch (const Error &e) {
    err << "error: " << e.what() << "\n";
    return e.kind() == ErrorKind::kTargetUnreachable ? kExitTargetUnreachable : kExitError;
  } catch (const std::exception &e) {
    err << "error: " << e.what() << "\n";
    return kExitError;
  }
}

}  // namespace

json ResolveConfig(const json &defaults, const std::optional<fs::path> &config_file,
                   const json &overrides) {
  json cfg = defaults.is_null() ? json::object() : defaults;
  if (config_file) {
    json file;
    try {
      file = json::parse(ReadText(*config_file));
    } catch (const json::exception &e) {
      throw Error(ErrorKind::kInvalidConfig, config_file->string() + ": " + e.what());
    }
    MergeInto(cfg, file);
  }
  MergeInto(cfg, overrides);
  return cfg;
}

json FrozenConfig(const json &config, std::string_view command) {
  json frozen = config;
  frozen["command"] = std::string(command);
  frozen["version"] = std::string(kToolkitVersion);
  frozen["prng_id"] = std::string(kPrngId);
  return frozen;
}

RunDir RunDir::Create(const fs::path &root, const json &config) {
  RunDir d{root};
  std::error_code ec;
  for (const fs::path &p : {d.root, d.corpus(), d.manifests(), d.models(), d.reports()}) {
    fs::create_directories(p, ec);
    if (ec) throw Error(ErrorKind::kIoFailure, "cannot create " + p.string() + ": " + ec.message());
  }
  WriteText(d.config(), config.dump(2) + "\n");
  return d;
}

void WriteText(const fs::path &path, std::string_view text) {
  if (path.has_parent_path()) {
    std::error_code ec;
    fs::create_directories(path.parent_path(), ec);
  }
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw Error(ErrorKind::kIoFailure, "cannot open " + path.string() + " for writing");
  f.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!f) throw Error(ErrorKind::kIoFailure, "write failed: " + path.string());
}

std::string ReadText(const fs::path &path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw Error(ErrorKind::kIoFailure, "cannot open " + path.string());
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

// ---------------------------------------------------------------------------
// Models and paired data

json ModelToJson(const ToyTransducer &model) {
  const TransducerConfig &c = model.config();
  return {{"format", "lnsim-model/1"},
          {"config",
           {{"input_vocab", c.input_vocab},
            {"output_vocab", c.output_vocab},
            {"enc_width", c.enc_width},
            {"enc_depth", c.enc_depth},
            {"pred_width", c.pred_width},
            {"pred_depth", c.pred_depth},
            {"joint_width", c.joint_width},
            {"dropout", c.dropout}}},
          {"params", std::vector<double>(model.params().begin(), model.params().end())}};
}

ToyTransducer ModelFromJson(const json &j) {
  try {
    if (j.value("format", "") != "lnsim-model/1")
      throw Error(ErrorKind::kMalformedRecord, "not a model file");
    const json &c = j.at("config");
    TransducerConfig cfg;
    cfg.input_vocab = c.at("input_vocab");
    cfg.output_vocab = c.at("output_vocab");
    cfg.enc_width = c.at("enc_width");
    cfg.enc_depth = c.at("enc_depth");
    cfg.pred_width = c.at("pred_width");
    cfg.pred_depth = c.at("pred_depth");
    cfg.joint_width = c.at("joint_width");
    cfg.dropout = c.at("dropout");
    ToyTransducer model(cfg, 0);
    const std::vector<double> params = j.at("params").get<std::vector<double>>();
    if (params.size() != model.num_params())
      throw Error(ErrorKind::kMalformedRecord, "parameter count does not match the architecture");
    std::copy(params.begin(), params.end(), model.params().begin());
    return model;
  } catch (const json::exception &e) {
    throw Error(ErrorKind::kMalformedRecord, std::string("model: ") + e.what());
  }
}

void SaveModel(const ToyTransducer &model, const fs::path &path) {
  WriteText(path, ModelToJson(model).dump() + "\n");
}

ToyTransducer LoadModel(const fs::path &path) {
  json j;
  try {
    j = json::parse(ReadText(path));
  } catch (const json::exception &e) {
    throw Error(ErrorKind::kMalformedRecord, path.string() + ": " + e.what());
  }
  return ModelFromJson(j);
}

std::string SerializeExamples(const std::vector<Example> &examples) {
  std::string out;
  for (const Example &ex : examples)
    out += json{{"frames", ex.frames}, {"labels", ex.labels}}.dump() + "\n";
  return out;
}

std::vector<Example> ParseExamples(std::string_view text) {
  std::vector<Example> out;
  size_t line_no = 0, pos = 0;
  while (pos < text.size()) {
    size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string_view::npos) continue;
    try {
      json j = json::parse(line);
      out.push_back({j.at("frames").get<std::vector<int>>(), j.at("labels").get<std::vector<int>>()});
    } catch (const json::exception &e) {
      throw Error(ErrorKind::kMalformedRecord, "line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// inject / filter / invert

json InjectDefaults() {
  return {{"corpus", ""},
          {"type", "deletion"},
          {"target_ler", "0.01"},
          {"seed", 0},
          {"lm_corpus", ""},
          {"preserved_substitution", std::vector<std::string>(kDefaultWakewords.begin(),
                                                              kDefaultWakewords.end())},
          {"preserved_deletion", nullptr},
          {"preserved_top_k", kDefaultPreservedTopK},
          {"max_resample", 3},
          {"out", ""},
          {"out_corpus", ""},
          {"out_manifest", ""}};
}

int CmdInject(const json &c, std::ostream &out, std::ostream &err) {
  return Guard(err, [&] {
    const Corpus corpus = LoadCorpus(Need(c, "corpus"));
    InjectionConfig cfg;
    cfg.error_type = ParseErrorType(c.at("type").get<std::string>());
    cfg.target_ler = RationalFromJson(c.at("target_ler"));
    cfg.seed = c.at("seed").get<uint64_t>();
    cfg.preserved_substitution = c.at("preserved_substitution").get<std::set<Word>>();
    if (Has(c, "preserved_deletion"))
      cfg.preserved_deletion = c["preserved_deletion"].get<std::set<Word>>();
    cfg.preserved_top_k = c.at("preserved_top_k").get<size_t>();
    cfg.max_resample = c.at("max_resample").get<int>();
    cfg.Validate();

    std::optional<BigramModel> lm;
    std::optional<SoundexIndex> index;
    if (cfg.error_type != ErrorType::kDeletion) {
      // The LM may come from a separate matched-task corpus; the injection
      // corpus vocabulary is always covered.
      const Corpus lm_source = Has(c, "lm_corpus") ? LoadCorpus(c["lm_corpus"].get<std::string>())
                                                   : corpus;
      lm = BigramModel::Estimate(lm_source, {}, Vocabulary(corpus));
    }
    if (cfg.error_type == ErrorType::kSubstitution) index.emplace(Vocabulary(corpus));

    InjectionResult r = InjectDataset(corpus, lm ? &*lm : nullptr, index ? &*index : nullptr, cfg);

    fs::path corpus_path, manifest_path;
    if (Has(c, "out")) {
      RunDir dir = RunDir::Create(c["out"].get<std::string>(), FrozenConfig(c, "inject"));
      const std::string stem = std::string(ErrorTypeShortName(cfg.error_type));
      corpus_path = dir.corpus() / ("corrupted." + stem + ".tsv");
      manifest_path = dir.manifests() / ("manifest." + stem + ".jsonl");
    }
    if (Has(c, "out_corpus")) corpus_path = c["out_corpus"].get<std::string>();
    if (Has(c, "out_manifest")) manifest_path = c["out_manifest"].get<std::string>();
    if (corpus_path.empty() || manifest_path.empty())
      throw Error(ErrorKind::kInvalidConfig, "need --out or both --out-corpus and --out-manifest");
    WriteCorpus(r.corpus, corpus_path);
    WriteManifest(r.manifest, manifest_path);

    const Rational ler = r.manifest.AchievedLer(), ser = r.manifest.AchievedSer();
    out << "injected " << r.manifest.records.size() << " " << ErrorTypeName(cfg.error_type)
        << " errors into " << r.manifest.visited << "/" << r.manifest.num_utts << " visited utterances\n"
        << "achieved LER " << Fixed(100.0 * ler.value(), 4) << "% (" << ler.ToString() << ")\n"
        << "achieved SER " << Fixed(100.0 * ser.value(), 4) << "% (" << ser.ToString() << ")\n"
        << "skipped " << r.manifest.skipped.size() << "\n";
    return kExitOk;
  });
}

int CmdFilter(const json &c, std::ostream &out, std::ostream &err) {
  return Guard(err, [&] {
    const Corpus corpus = LoadCorpus(Need(c, "corpus"));
    const InjectionManifest m = LoadManifest(Need(c, "manifest"));
    const Corpus kept = FilterErrors(corpus, m);
    WriteCorpus(kept, Need(c, "out_corpus"));
    out << "kept " << kept.utt_count() << "/" << corpus.utt_count() << " utterances\n";
    return kExitOk;
  });
}

int CmdInvert(const json &c, std::ostream &out, std::ostream &err) {
  return Guard(err, [&] {
    const Corpus corrupted = LoadCorpus(Need(c, "corpus"));
    const InjectionManifest m = LoadManifest(Need(c, "manifest"));
    const Corpus restored = InvertInjection(corrupted, m);
    WriteCorpus(restored, Need(c, "out_corpus"));
    out << "restored " << m.records.size() << " records\n";
    return kExitOk;
  });
}

// ---------------------------------------------------------------------------
// score

json ScoreDefaults() {
  return {{"ref", ""}, {"hyp", ""},        {"baseline_wer", nullptr},
          {"baseline_hyp", ""}, {"baseline_id", "b0"}, {"report", ""}};
}

int CmdScore(const json &c, std::ostream &out, std::ostream &err) {
  return Guard(err, [&] {
    const Corpus ref = LoadCorpus(Need(c, "ref"));
    const Corpus hyp = LoadCorpus(Need(c, "hyp"));
    const ErrorRates rates = CorpusRates(ref, hyp);
    double baseline_wer;
    if (Has(c, "baseline_hyp")) {
      baseline_wer = CorpusRates(ref, LoadCorpus(c["baseline_hyp"].get<std::string>())).wer;
    } else if (Has(c, "baseline_wer")) {
      baseline_wer = c["baseline_wer"].get<double>();
    } else {
      throw Error(ErrorKind::kInvalidConfig, "need --baseline-wer or --baseline-hyp");
    }
    const RelativeReport rep = MakeRelativeReport(rates, baseline_wer, c.at("baseline_id"));
    const std::string text = RelativeReportJson(rep, rates);
    if (Has(c, "report"))
      WriteText(c["report"].get<std::string>(), text + "\n");
    else
      out << text << "\n";
    return kExitOk;
  });
}

// ---------------------------------------------------------------------------
// reproduce

json ReproduceDefaults() {
  LabConfig lab;
  json j = ToJson(lab);
  j["rates"] = {"0.01", "0.02", "0.06"};
  j["filter_rate"] = "0.06";
  j["threads"] = 0;
  j["out"] = "";
  j["dry_run"] = false;
  return j;
}

namespace {

std::string Table3Text(const ExperimentReport &rep) {
  std::ostringstream s;
  s << "system        R_WER  R_Sub  R_Ins  R_Del   Chg%   min    max    blank\n";
  for (const SystemSummary &x : rep.summary) {
    char buf[160];
    std::snprintf(buf, sizeof(buf), "%-12s %6.3f %6.3f %6.3f %6.3f %6.1f %6.3f %6.3f %7.4f\n",
                  x.system_id.c_str(), x.median_r_wer, x.median_r_sub, x.median_r_ins,
                  x.median_r_del, (x.median_r_wer - 1.0) * 100.0, x.min_r_wer, x.max_r_wer,
                  x.median_blank_prob);
    s << buf;
  }
  return s.str();
}

json Table6(const ExperimentReport &rep, const Rational &rate) {
  json rows = json::array();
  for (ErrorType t : {ErrorType::kSubstitution, ErrorType::kInsertion, ErrorType::kDeletion}) {
    const SystemSummary *raw = rep.Find(SystemIdFor(t, rate, false));
    const SystemSummary *filt = rep.Find(SystemIdFor(t, rate, true));
    if (!raw || !filt) continue;
    rows.push_back({{"error_type", ErrorTypeName(t)},
                    {"unfiltered_id", raw->system_id},
                    {"filtered_id", filt->system_id},
                    {"unfiltered_r_wer", raw->median_r_wer},
                    {"filtered_r_wer", filt->median_r_wer},
                    {"chg_pct", (filt->median_r_wer / raw->median_r_wer - 1.0) * 100.0},
                    {"filter_helps", filt->median_r_wer < raw->median_r_wer}});
  }
  return rows;
}

}  // namespace

int CmdReproduce(const json &c, std::ostream &out, std::ostream &err) {
  return Guard(err, [&] {
    const LabConfig lab = LabConfigFromJson(c);
    std::vector<Rational> rates;
    for (const json &r : c.at("rates")) rates.push_back(RationalFromJson(r));
    if (rates.empty()) throw Error(ErrorKind::kInvalidConfig, "no rates");
    const Rational filter_rate = RationalFromJson(c.at("filter_rate"));
    const ExperimentMatrix matrix = ErrorImpactMatrix(lab, rates, true, filter_rate);

    if (c.value("dry_run", false)) {
      size_t n = 0;
      for (const SystemConfig &s : matrix.systems)
        for (uint64_t seed : lab.seeds) {
          out << "plan " << s.system_id << " seed " << seed << "\n";
          ++n;
        }
      out << n << " jobs (" << matrix.systems.size() << " systems x " << lab.seeds.size()
          << " seeds); nothing written\n";
      return kExitOk;
    }

    RunDir dir = RunDir::Create(Need(c, "out"), FrozenConfig(c, "reproduce"));
    const fs::path partial = dir.reports() / "rows.partial.jsonl";
    WriteText(partial, "");
    std::ofstream rows_out(partial, std::ios::app);
    auto on_row = [&](const RunRow &r) {
      rows_out << json{{"system_id", r.system_id}, {"seed", r.seed}, {"wer", r.rates.wer},
                       {"sub", r.rates.sub_rate},  {"ins", r.rates.ins_rate}, {"del", r.rates.del_rate},
                       {"mean_blank_prob", r.mean_blank_prob}, {"params", r.params},
                       {"data_size", r.data_size}, {"injected", r.injected}}
                      .dump()
               << "\n"
               << std::flush;
      err << "done " << r.system_id << " seed " << r.seed << " wer " << Fixed(r.rates.wer, 4) << "\n";
    };
    const ExperimentReport rep = RunMatrix(matrix, c.value("threads", 0), on_row);

    // Table 3 lists the baseline and the unfiltered systems; the filtered
    // ones only appear in the Table 6 comparison.
    ExperimentReport t3 = rep;
    std::set<std::string> filtered;
    for (const SystemConfig &s : matrix.systems)
      if (s.oracle_filter) filtered.insert(s.system_id);
    std::erase_if(t3.rows, [&](const RunRow &r) { return filtered.count(r.system_id) > 0; });
    std::erase_if(t3.summary, [&](const SystemSummary &x) { return filtered.count(x.system_id) > 0; });
    json table3 = ToJson(t3);
    Rational top = rates.front();
    for (const Rational &r : rates)
      if (r.value() > top.value()) top = r;
    const SystemSummary *del = rep.Find(SystemIdFor(ErrorType::kDeletion, top, false));
    const SystemSummary *sub = rep.Find(SystemIdFor(ErrorType::kSubstitution, top, false));
    const bool del_gt_sub = del && sub && del->median_r_wer > sub->median_r_wer;
    table3["checks"] = {{"del_gt_sub_at_" + top.ToString(), del_gt_sub}};
    WriteText(dir.reports() / "table3.json", table3.dump(2) + "\n");
    const json table6 = Table6(rep, filter_rate);
    WriteText(dir.reports() / "table6.json", table6.dump(2) + "\n");

    std::string text = Table3Text(t3);
    text += std::string("check median r_wer(") + (del ? del->system_id : "del") + ") > median r_wer(" +
            (sub ? sub->system_id : "sub") + "): " + (del_gt_sub ? "yes" : "NO (flagged)") + "\n";
    text += "oracle filter at " + filter_rate.ToString() + ":\n";
    for (const json &r : table6)
      text += "  " + r["error_type"].get<std::string>() + ": " +
              Fixed(r["unfiltered_r_wer"].get<double>(), 3) + " -> " +
              Fixed(r["filtered_r_wer"].get<double>(), 3) + "\n";
    WriteText(dir.reports() / "summary.txt", text);
    out << text;
    return kExitOk;
  });
}

// ---------------------------------------------------------------------------
// lab

int CmdLabTrain(const json &c, std::ostream &out, std::ostream &err) {
  return Guard(err, [&] {
    const json exp = json::parse(ReadText(Need(c, "config")));
    const LabConfig lab = LabConfigFromJson(exp.value("lab", json::object()));
    SystemConfig system = exp.contains("system") ? SystemConfigFromJson(exp["system"]) : SystemConfig{};
    if (system.system_id.empty()) system.system_id = "run";
    uint64_t seed = exp.value("seed", uint64_t{1});
    if (Has(c, "seed")) seed = c["seed"].get<uint64_t>();

    json frozen = exp;
    frozen["seed"] = seed;
    frozen["lab"] = ToJson(lab);
    frozen["system"] = ToJson(system);
    RunDir dir = RunDir::Create(Need(c, "out"), FrozenConfig(frozen, "lab train"));

    ToyTransducer model;
    const RunRow row = RunSystem(lab, system, seed, &model);
    SaveModel(model, dir.models() / "model.json");
    const SeedData data = MakeSeedData(lab, system.data_multiplier, seed);
    WriteText(dir.corpus() / "eval.jsonl", SerializeExamples(data.eval));
    const json row_json = {{"system_id", row.system_id},   {"seed", row.seed},
                           {"wer", row.rates.wer},         {"sub", row.rates.sub_rate},
                           {"ins", row.rates.ins_rate},    {"del", row.rates.del_rate},
                           {"mean_blank_prob", row.mean_blank_prob},
                           {"params", row.params},         {"data_size", row.data_size},
                           {"injected", row.injected},     {"achieved_ler", row.achieved_ler},
                           {"steps_run", row.steps_run},   {"best_step", row.best_step}};
    WriteText(dir.reports() / "row.json", row_json.dump(2) + "\n");
    out << row_json.dump() << "\n";
    return kExitOk;
  });
}

int CmdLabSweep(const json &c, std::ostream &out, std::ostream &err) {
  return Guard(err, [&] {
    ExperimentMatrix matrix = MatrixFromJson(json::parse(ReadText(Need(c, "matrix"))));
    if (Has(c, "seed")) matrix.lab.seeds = {c["seed"].get<uint64_t>()};
    const ExperimentReport rep = RunMatrix(matrix, c.value("threads", 0), [&](const RunRow &r) {
      err << "done " << r.system_id << " seed " << r.seed << "\n";
    });
    json j = ToJson(rep);
    j["header"]["version"] = std::string(kToolkitVersion);
    j["header"]["matrix"] = ToJson(matrix);
    WriteText(Need(c, "out"), j.dump(2) + "\n");
    out << Table3Text(rep);
    return kExitOk;
  });
}

int CmdLabBlankStats(const json &c, std::ostream &out, std::ostream &err) {
  return Guard(err, [&] {
    const ToyTransducer model = LoadModel(Need(c, "model"));
    const std::vector<Example> data = ParseExamples(ReadText(Need(c, "data")));
    if (data.empty()) throw Error(ErrorKind::kEmptyCorpus, "no examples");
    const BlankStats s = BlankPosteriorStats(model, data, c.value("max_nonblank", 10));
    out << json{{"mean_blank_prob", s.mean_blank_prob}, {"histogram", s.histogram}, {"nodes", s.nodes}}
               .dump()
        << "\n";
    return kExitOk;
  });
}

// ---------------------------------------------------------------------------
// inspection helpers

int CmdSoundex(const json &c, std::ostream &out, std::ostream &err) {
  return Guard(err, [&] {
    if (Has(c, "corpus")) {
      out << SoundexIndex(Vocabulary(LoadCorpus(c["corpus"].get<std::string>()))).Dump();
      return kExitOk;
    }
    for (const json &w : c.at("words")) out << w.get<std::string>() << "\t" << Soundex(w.get<std::string>()).str() << "\n";
    return kExitOk;
  });
}

int CmdLmDump(const json &c, std::ostream &out, std::ostream &err) {
  return Guard(err, [&] {
    out << BigramModel::Estimate(LoadCorpus(Need(c, "corpus"))).Dump();
    return kExitOk;
  });
}

}  // namespace lnsim
