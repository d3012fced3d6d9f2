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

// Manifest JSON-lines codec.

#include <fstream>
#include <sstream>

#include "json.hpp"
#include "lnsim/errors.h"
#include "lnsim/injector.h"

namespace lnsim {
namespace {

using nlohmann::json;

constexpr std::string_view kManifestFormat = "lnsim-manifest/1";

json WordSet(const std::set<Word> &words) {
  json arr = json::array();
  for (const Word &w : words) arr.push_back(w);
  return arr;
}

std::set<Word> ReadWordSet(const json &arr) {
  std::set<Word> out;
  for (const auto &w : arr) out.insert(w.get<std::string>());
  return out;
}

}  // namespace

std::string SerializeManifest(const InjectionManifest &m) {
  const InjectionConfig &c = m.config;
  json header;
  header["kind"] = "header";
  header["format"] = kManifestFormat;
  header["prng_id"] = m.prng_id;
  header["config"] = {
      {"error_type", ErrorTypeName(c.error_type)},
      {"target_ler", c.target_ler.ToString()},
      {"seed", c.seed},
      {"preserved_deletion", WordSet(c.preserved_deletion.value_or(std::set<Word>{}))},
      {"preserved_top_k", c.preserved_top_k},
      {"preserved_substitution", WordSet(c.preserved_substitution)},
      {"max_resample", c.max_resample},
  };
  header["num_utts"] = m.num_utts;
  header["num_words"] = m.num_words;
  header["corrupted_num_words"] = m.corrupted_num_words;
  header["visited"] = m.visited;
  header["target_reached"] = m.target_reached;
  header["injected"] = m.records.size();
  header["skipped"] = m.skipped.size();
  header["achieved_ler"] = m.AchievedLer().value();
  header["achieved_ser"] = m.AchievedSer().value();
  header["achieved_ler_exact"] = m.AchievedLer().ToString();
  header["achieved_ser_exact"] = m.AchievedSer().ToString();

  std::string out = header.dump();
  out += '\n';
  for (const InjectionRecord &r : m.records) {
    json j;
    j["kind"] = "record";
    j["utt_id"] = r.utt_id;
    j["error_type"] = ErrorTypeName(r.error_type);
    j["position"] = r.position;
    if (r.original_word) j["original_word"] = *r.original_word;
    if (r.injected_word) j["injected_word"] = *r.injected_word;
    out += j.dump();
    out += '\n';
  }
  for (const auto &[id, reason] : m.skipped) {
    json j = {{"kind", "skip"}, {"utt_id", id}, {"reason", SkipReasonName(reason)}};
    out += j.dump();
    out += '\n';
  }
  return out;
}

InjectionManifest ParseManifest(std::string_view text) {
  InjectionManifest m;
  bool have_header = false;
  size_t line_no = 0;
  size_t pos = 0;
  try {
    while (pos < text.size()) {
      size_t end = text.find('\n', pos);
      if (end == std::string_view::npos) end = text.size();
      std::string_view line = text.substr(pos, end - pos);
      pos = end + 1;
      ++line_no;
      if (line.empty()) continue;
      json j = json::parse(line);
      const std::string kind = j.at("kind").get<std::string>();
      if (kind == "header") {
        if (have_header || j.at("format").get<std::string>() != kManifestFormat)
          throw Error(ErrorKind::kManifestMismatch, "bad header");
        have_header = true;
        const json &c = j.at("config");
        m.config.error_type = ParseErrorType(c.at("error_type").get<std::string>());
        std::string target = c.at("target_ler").get<std::string>();
        size_t slash = target.find('/');
        m.config.target_ler = {std::stoll(target.substr(0, slash)),
                               std::stoll(target.substr(slash + 1))};
        m.config.seed = c.at("seed").get<uint64_t>();
        m.config.preserved_deletion = ReadWordSet(c.at("preserved_deletion"));
        m.config.preserved_top_k = c.at("preserved_top_k").get<size_t>();
        m.config.preserved_substitution = ReadWordSet(c.at("preserved_substitution"));
        m.config.max_resample = c.at("max_resample").get<int>();
        m.prng_id = j.at("prng_id").get<std::string>();
        m.num_utts = j.at("num_utts").get<uint64_t>();
        m.num_words = j.at("num_words").get<uint64_t>();
        m.corrupted_num_words = j.at("corrupted_num_words").get<uint64_t>();
        m.visited = j.at("visited").get<uint64_t>();
        m.target_reached = j.at("target_reached").get<bool>();
      } else if (!have_header) {
        throw Error(ErrorKind::kManifestMismatch, "header must come first");
      } else if (kind == "record") {
        InjectionRecord r;
        r.utt_id = j.at("utt_id").get<std::string>();
        r.error_type = ParseErrorType(j.at("error_type").get<std::string>());
        r.position = j.at("position").get<size_t>();
        if (j.contains("original_word")) r.original_word = j["original_word"].get<std::string>();
        if (j.contains("injected_word")) r.injected_word = j["injected_word"].get<std::string>();
        m.records.push_back(std::move(r));
      } else if (kind == "skip") {
        m.skipped.emplace_back(j.at("utt_id").get<std::string>(),
                               ParseSkipReason(j.at("reason").get<std::string>()));
      } else {
        throw Error(ErrorKind::kManifestMismatch, "unknown line kind '" + kind + "'");
      }
    }
  } catch (const json::exception &e) {
    throw Error(ErrorKind::kManifestMismatch,
                "line " + std::to_string(line_no) + ": " + e.what());
  }
  if (!have_header) throw Error(ErrorKind::kManifestMismatch, "missing header");
  return m;
}

void WriteManifest(const InjectionManifest &manifest, const std::filesystem::path &path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorKind::kIoFailure, "cannot write " + path.string());
  out << SerializeManifest(manifest);
  if (!out) throw Error(ErrorKind::kIoFailure, "write failed " + path.string());
}

InjectionManifest LoadManifest(const std::filesystem::path &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::kIoFailure, "cannot open " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return ParseManifest(ss.str());
}

}  // namespace lnsim
