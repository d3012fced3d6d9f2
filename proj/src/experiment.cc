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

#include "lnsim/experiment.h"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <map>
#include <mutex>
#include <thread>

#include "lnsim/bigram_lm.h"
#include "lnsim/errors.h"
#include "lnsim/soundex.h"

namespace lnsim {

using nlohmann::json;

BlankStats BlankPosteriorStats(const ToyTransducer &model, const std::vector<Example> &data,
                               int max_nonblank_expansions) {
  BlankStats s;
  s.histogram.assign(10, 0);
  double sum = 0.0;
  for (const Example &ex : data) {
    GreedyTrace trace = GreedyDecode(model, ex.frames, max_nonblank_expansions);
    for (double p : trace.blank_probs) {
      sum += p;
      ++s.nodes;
      ++s.histogram[std::min<size_t>(9, static_cast<size_t>(p * 10.0))];
    }
  }
  if (s.nodes) s.mean_blank_prob = sum / static_cast<double>(s.nodes);
  return s;
}

SeedData MakeSeedData(const LabConfig &lab, double data_multiplier, uint64_t seed) {
  if (!(data_multiplier > 0.0) || lab.train_utts < 1 || lab.eval_utts < 1 ||
      !(lab.dev_fraction >= 0.0 && lab.dev_fraction < 1.0))
    throw Error(ErrorKind::kInvalidConfig, "invalid data sizes");
  const size_t total = static_cast<size_t>(std::llround(lab.train_utts * data_multiplier));
  const size_t dev = static_cast<size_t>(std::llround(static_cast<double>(total) * lab.dev_fraction));
  SeedData d;
  d.train = GenerateSyntheticTask(lab.task, total - dev, DeriveSeed(seed, 100));
  d.dev = GenerateSyntheticTask(lab.task, dev, DeriveSeed(seed, 101));
  d.eval = GenerateSyntheticTask(lab.task, static_cast<size_t>(lab.eval_utts), DeriveSeed(seed, 200));
  return d;
}

RunRow RunSystem(const LabConfig &lab, const SystemConfig &system, uint64_t seed,
                 ToyTransducer *trained) {
  SeedData data = MakeSeedData(lab, system.data_multiplier, seed);
  RunRow row;
  row.system_id = system.system_id;
  row.seed = seed;

  std::vector<Example> train = data.train;
  if (system.error_type) {
    const Corpus refs = LabelsToCorpus(data.train, "tr");
    const BigramModel lm = BigramModel::Estimate(refs);
    const SoundexIndex index(ToyLexicon());
    InjectionConfig cfg;
    cfg.error_type = *system.error_type;
    cfg.target_ler = system.target_ler;
    cfg.seed = DeriveSeed(seed, 300);
    cfg.preserved_top_k = lab.preserved_top_k;
    cfg.preserved_substitution = lab.wakewords;
    cfg.max_resample = lab.max_resample;
    InjectionResult injected = InjectDataset(refs, &lm, &index, cfg);
    row.injected = injected.manifest.records.size();
    row.achieved_ler = injected.manifest.AchievedLer().value();
    Corpus corpus = system.oracle_filter ? FilterErrors(injected.corpus, injected.manifest)
                                         : std::move(injected.corpus);
    train.clear();
    for (const Utterance &u : corpus.utterances()) {
      const int64_t i = refs.Find(u.id);
      train.push_back({data.train[static_cast<size_t>(i)].frames, WordsToLabels(u.words)});
    }
  }
  row.data_size = train.size();

  TransducerConfig mc = SizePreset(system.size_multiplier, lab.task.input_vocab(),
                                   lab.task.num_labels());
  mc.dropout = system.dropout ? lab.dropout_rate : 0.0;
  TrainingHyper hyper = lab.hyper;
  hyper.input_masking = system.input_masking;
  TrainResult tr = Train(mc, train, data.dev, hyper, DeriveSeed(seed, 500));
  row.params = tr.model.num_params();
  row.steps_run = tr.log.steps_run;
  row.best_step = tr.log.best_step;

  ErrorCounts counts;
  for (const Example &ex : data.eval) {
    std::vector<int> hyp = Decode(tr.model, ex.frames, lab.decode);
    counts += AlignCounts(ex.labels, hyp);
  }
  row.rates = ErrorRates::FromCounts(counts);
  row.mean_blank_prob =
      BlankPosteriorStats(tr.model, data.eval, lab.decode.max_nonblank_expansions).mean_blank_prob;
  if (trained) *trained = std::move(tr.model);
  return row;
}

double Median(std::vector<double> values) {
  if (values.empty()) return 0.0;
  std::sort(values.begin(), values.end());
  const size_t n = values.size();
  return n % 2 ? values[n / 2] : 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

const SystemSummary *ExperimentReport::Find(const std::string &system_id) const {
  for (const SystemSummary &s : summary)
    if (s.system_id == system_id) return &s;
  return nullptr;
}

ExperimentReport RunMatrix(const ExperimentMatrix &matrix, int threads,
                           const std::function<void(const RunRow &)> &on_row) {
  const LabConfig &lab = matrix.lab;
  if (lab.seeds.empty()) throw Error(ErrorKind::kInvalidConfig, "no seeds");
  bool has_baseline = false;
  for (const SystemConfig &s : matrix.systems) has_baseline |= s.system_id == matrix.baseline_id;
  if (!has_baseline)
    throw Error(ErrorKind::kInvalidConfig, "baseline system '" + matrix.baseline_id + "' missing");

  struct Job {
    size_t system;
    uint64_t seed;
  };
  std::vector<Job> jobs;
  for (size_t s = 0; s < matrix.systems.size(); ++s)
    for (uint64_t seed : lab.seeds) jobs.push_back({s, seed});
  std::vector<RunRow> rows(jobs.size());

  if (threads <= 0) threads = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  threads = std::min<int>(threads, static_cast<int>(jobs.size()));
  std::atomic<size_t> next{0};
  std::mutex mu;
  std::exception_ptr failure;
  auto worker = [&]() {
    for (;;) {
      const size_t j = next.fetch_add(1);
      if (j >= jobs.size()) return;
      try {
        RunRow row = RunSystem(lab, matrix.systems[jobs[j].system], jobs[j].seed);
        std::lock_guard<std::mutex> lock(mu);
        rows[j] = std::move(row);
        if (on_row) on_row(rows[j]);
      } catch (...) {
        std::lock_guard<std::mutex> lock(mu);
        if (!failure) failure = std::current_exception();
        next.store(jobs.size());
        return;
      }
    }
  };
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (int i = 0; i < threads; ++i) pool.emplace_back(worker);
  }
  if (failure) std::rethrow_exception(failure);

  std::map<uint64_t, ErrorRates> baseline;
  for (const RunRow &r : rows)
    if (r.system_id == matrix.baseline_id) baseline[r.seed] = r.rates;
  for (RunRow &r : rows)
    r.relative = MakeRelativeReport(r.rates, baseline.at(r.seed), matrix.baseline_id);

  ExperimentReport report;
  report.rows = std::move(rows);
  for (const SystemConfig &s : matrix.systems) {
    std::vector<double> wer, sub, ins, del, blank;
    for (const RunRow &r : report.rows) {
      if (r.system_id != s.system_id) continue;
      wer.push_back(r.relative.r_wer);
      sub.push_back(r.relative.r_sub);
      ins.push_back(r.relative.r_ins);
      del.push_back(r.relative.r_del);
      blank.push_back(r.mean_blank_prob);
    }
    SystemSummary sum;
    sum.system_id = s.system_id;
    sum.seeds = wer.size();
    sum.median_r_wer = Median(wer);
    sum.median_r_sub = Median(sub);
    sum.median_r_ins = Median(ins);
    sum.median_r_del = Median(del);
    sum.min_r_wer = *std::min_element(wer.begin(), wer.end());
    sum.max_r_wer = *std::max_element(wer.begin(), wer.end());
    sum.median_blank_prob = Median(blank);
    report.summary.push_back(sum);
  }
  report.header = {
      {"prng_id", kPrngId},
      {"baseline_id", matrix.baseline_id},
      {"dev_fraction", lab.dev_fraction},
      {"early_stopping_patience", lab.hyper.patience},
      {"early_stopping_eval_interval", lab.hyper.eval_interval},
      {"input_masking", "analog: contiguous input-frame masking, not SpecAugment"},
      {"decode", lab.decode.mode == DecodeMode::kGreedy ? "greedy" : "beam"},
      {"lab", ToJson(lab)},
  };
  return report;
}

std::string SystemIdFor(ErrorType type, const Rational &rate, bool filtered) {
  const double pct = rate.value() * 100.0;
  char buf[32];
  if (std::abs(pct - std::round(pct)) < 1e-9)
    std::snprintf(buf, sizeof(buf), "%lld", static_cast<long long>(std::llround(pct)));
  else
    std::snprintf(buf, sizeof(buf), "%g", pct);
  return std::string(filtered ? "e4." : "e0.") + std::string(ErrorTypeShortName(type)) + buf;
}

ExperimentMatrix ErrorImpactMatrix(const LabConfig &lab, const std::vector<Rational> &rates,
                                   bool with_filter, const Rational &filter_rate) {
  ExperimentMatrix m;
  m.lab = lab;
  SystemConfig base;
  base.system_id = "b0";
  m.systems.push_back(base);
  for (ErrorType t : {ErrorType::kSubstitution, ErrorType::kInsertion, ErrorType::kDeletion}) {
    for (const Rational &r : rates) {
      SystemConfig s;
      s.system_id = SystemIdFor(t, r, false);
      s.error_type = t;
      s.target_ler = r;
      m.systems.push_back(s);
    }
  }
  if (with_filter) {
    for (ErrorType t : {ErrorType::kSubstitution, ErrorType::kInsertion, ErrorType::kDeletion}) {
      SystemConfig s;
      s.system_id = SystemIdFor(t, filter_rate, true);
      s.error_type = t;
      s.target_ler = filter_rate;
      s.oracle_filter = true;
      m.systems.push_back(s);
    }
  }
  return m;
}

// ---------------------------------------------------------------------------
// JSON

namespace {

template <typename T>
void Get(const json &j, const char *key, T &out) {
  if (j.contains(key)) out = j.at(key).get<T>();
}

}  // namespace

json ToJson(const LabConfig &lab) {
  const auto &t = lab.task;
  const auto &h = lab.hyper;
  return {
      {"task",
       {{"mean_length", t.mean_length},
        {"max_length", t.max_length},
        {"noise_rate", t.noise_rate},
        {"min_repeat", t.min_repeat},
        {"max_repeat", t.max_repeat},
        {"self_repeat", t.self_repeat},
        {"lexicon_lm_seed", t.lexicon_lm_seed}}},
      {"train_utts", lab.train_utts},
      {"dev_fraction", lab.dev_fraction},
      {"eval_utts", lab.eval_utts},
      {"hyper",
       {{"steps", h.steps},
        {"batch_size", h.batch_size},
        {"lr_init", h.schedule.lr_init},
        {"lr_peak", h.schedule.lr_peak},
        {"lr_final", h.schedule.lr_final},
        {"warmup_steps", h.schedule.warmup_steps},
        {"hold_until", h.schedule.hold_until},
        {"grad_clip", h.grad_clip},
        {"eval_interval", h.eval_interval},
        {"patience", h.patience},
        {"mask_prob", h.mask_prob},
        {"mask_max_span", h.mask_max_span}}},
      {"dropout_rate", lab.dropout_rate},
      {"decode",
       {{"mode", lab.decode.mode == DecodeMode::kGreedy ? "greedy" : "beam"},
        {"beam_size", lab.decode.beam_size},
        {"max_nonblank_expansions", lab.decode.max_nonblank_expansions},
        {"length_normalization", lab.decode.length_normalization}}},
      {"preserved_top_k", lab.preserved_top_k},
      {"wakewords", lab.wakewords},
      {"max_resample", lab.max_resample},
      {"seeds", lab.seeds},
  };
}

LabConfig LabConfigFromJson(const json &j) {
  LabConfig lab;
  if (j.contains("task")) {
    const json &t = j["task"];
    Get(t, "mean_length", lab.task.mean_length);
    Get(t, "max_length", lab.task.max_length);
    Get(t, "noise_rate", lab.task.noise_rate);
    Get(t, "min_repeat", lab.task.min_repeat);
    Get(t, "max_repeat", lab.task.max_repeat);
    Get(t, "self_repeat", lab.task.self_repeat);
    Get(t, "lexicon_lm_seed", lab.task.lexicon_lm_seed);
  }
  Get(j, "train_utts", lab.train_utts);
  Get(j, "dev_fraction", lab.dev_fraction);
  Get(j, "eval_utts", lab.eval_utts);
  if (j.contains("hyper")) {
    const json &h = j["hyper"];
    Get(h, "steps", lab.hyper.steps);
    Get(h, "batch_size", lab.hyper.batch_size);
    Get(h, "lr_init", lab.hyper.schedule.lr_init);
    Get(h, "lr_peak", lab.hyper.schedule.lr_peak);
    Get(h, "lr_final", lab.hyper.schedule.lr_final);
    Get(h, "warmup_steps", lab.hyper.schedule.warmup_steps);
    Get(h, "hold_until", lab.hyper.schedule.hold_until);
    Get(h, "grad_clip", lab.hyper.grad_clip);
    Get(h, "eval_interval", lab.hyper.eval_interval);
    Get(h, "patience", lab.hyper.patience);
    Get(h, "mask_prob", lab.hyper.mask_prob);
    Get(h, "mask_max_span", lab.hyper.mask_max_span);
  }
  Get(j, "dropout_rate", lab.dropout_rate);
  if (j.contains("decode")) {
    const json &d = j["decode"];
    std::string mode = d.value("mode", "greedy");
    if (mode != "greedy" && mode != "beam")
      throw Error(ErrorKind::kInvalidConfig, "decode mode must be greedy or beam");
    lab.decode.mode = mode == "beam" ? DecodeMode::kBeam : DecodeMode::kGreedy;
    Get(d, "beam_size", lab.decode.beam_size);
    Get(d, "max_nonblank_expansions", lab.decode.max_nonblank_expansions);
    Get(d, "length_normalization", lab.decode.length_normalization);
  }
  Get(j, "preserved_top_k", lab.preserved_top_k);
  Get(j, "wakewords", lab.wakewords);
  Get(j, "max_resample", lab.max_resample);
  Get(j, "seeds", lab.seeds);
  return lab;
}

json ToJson(const SystemConfig &s) {
  json j = {{"system_id", s.system_id},
            {"target_ler", s.target_ler.ToString()},
            {"data_multiplier", s.data_multiplier},
            {"size_multiplier", s.size_multiplier},
            {"dropout", s.dropout},
            {"input_masking", s.input_masking},
            {"oracle_filter", s.oracle_filter}};
  j["error_type"] = s.error_type ? json(ErrorTypeName(*s.error_type)) : json(nullptr);
  return j;
}

SystemConfig SystemConfigFromJson(const json &j) {
  SystemConfig s;
  s.system_id = j.at("system_id").get<std::string>();
  if (j.contains("error_type") && !j["error_type"].is_null())
    s.error_type = ParseErrorType(j["error_type"].get<std::string>());
  if (j.contains("target_ler")) {
    const json &t = j["target_ler"];
    if (t.is_number()) {
      s.target_ler = Rational::FromDouble(t.get<double>());
    } else {
      std::string text = t.get<std::string>();
      size_t slash = text.find('/');
      s.target_ler = slash == std::string::npos
                         ? Rational::Parse(text)
                         : Rational{std::stoll(text.substr(0, slash)), std::stoll(text.substr(slash + 1))};
    }
  }
  Get(j, "data_multiplier", s.data_multiplier);
  Get(j, "size_multiplier", s.size_multiplier);
  Get(j, "dropout", s.dropout);
  Get(j, "input_masking", s.input_masking);
  Get(j, "oracle_filter", s.oracle_filter);
  return s;
}

json ToJson(const ExperimentMatrix &m) {
  json systems = json::array();
  for (const SystemConfig &s : m.systems) systems.push_back(ToJson(s));
  return {{"lab", ToJson(m.lab)}, {"systems", systems}, {"baseline_id", m.baseline_id}};
}

ExperimentMatrix MatrixFromJson(const json &j) {
  ExperimentMatrix m;
  if (j.contains("lab")) m.lab = LabConfigFromJson(j["lab"]);
  Get(j, "baseline_id", m.baseline_id);
  if (j.contains("systems")) {
    for (const json &s : j["systems"]) m.systems.push_back(SystemConfigFromJson(s));
  } else {
    std::vector<Rational> rates;
    for (const json &r : j.value("rates", json::array({0.01, 0.02, 0.06})))
      rates.push_back(Rational::FromDouble(r.get<double>()));
    ExperimentMatrix gen = ErrorImpactMatrix(m.lab, rates, j.value("oracle_filter", true));
    m.systems = gen.systems;
  }
  return m;
}

json ToJson(const ExperimentReport &report) {
  json rows = json::array();
  for (const RunRow &r : report.rows) {
    rows.push_back({{"system_id", r.system_id},
                    {"seed", r.seed},
                    {"r_wer", r.relative.r_wer},
                    {"r_sub", r.relative.r_sub},
                    {"r_ins", r.relative.r_ins},
                    {"r_del", r.relative.r_del},
                    {"wer", r.rates.wer},
                    {"sub", r.rates.sub_rate},
                    {"ins", r.rates.ins_rate},
                    {"del", r.rates.del_rate},
                    {"mean_blank_prob", r.mean_blank_prob},
                    {"params", r.params},
                    {"data_size", r.data_size},
                    {"injected", r.injected},
                    {"achieved_ler", r.achieved_ler},
                    {"steps_run", r.steps_run},
                    {"best_step", r.best_step}});
  }
  json summary = json::array();
  for (const SystemSummary &s : report.summary) {
    summary.push_back({{"system_id", s.system_id},
                       {"seeds", s.seeds},
                       {"median_r_wer", s.median_r_wer},
                       {"median_r_sub", s.median_r_sub},
                       {"median_r_ins", s.median_r_ins},
                       {"median_r_del", s.median_r_del},
                       {"min_r_wer", s.min_r_wer},
                       {"max_r_wer", s.max_r_wer},
                       {"median_mean_blank_prob", s.median_blank_prob},
                       {"chg_rel_to_baseline_pct", (s.median_r_wer - 1.0) * 100.0}});
  }
  return {{"header", report.header}, {"rows", rows}, {"summary", summary}};
}

}  // namespace lnsim
