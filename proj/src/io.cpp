// Copyright 2026 The coldkit Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "coldkit/io.hpp"

#include <algorithm>
#include <fstream>

#include "coldkit/errors.hpp"

namespace coldkit {

ordered_json to_json(const Instruction& ins) {
  ordered_json j;
  j["scene_id"] = ins.scene_id;
  j["target_id"] = ins.target_id;
  j["text"] = ins.text;
  if (ins.relation) {
    ordered_json r;
    r["kind"] = std::string(to_string(ins.relation->kind));
    r["anchor_ids"] = ins.relation->anchor_ids;
    j["relation"] = std::move(r);
  } else {
    j["relation"] = nullptr;
  }
  j["status"] = std::string(to_string(ins.status));
  return j;
}

Instruction instruction_from_json(const nlohmann::json& j) {
  Instruction ins;
  try {
    ins.scene_id = j.at("scene_id").get<std::string>();
    ins.target_id = j.at("target_id").get<int>();
    ins.text = j.at("text").get<std::string>();
    if (j.contains("relation") && !j["relation"].is_null()) {
      const auto& r = j["relation"];
      const auto kind = relation_from_string(r.at("kind").get<std::string>());
      if (!kind) throw MalformedFile("unknown relation kind " + r.at("kind").dump());
      ins.relation = SpatialRelation{*kind, r.at("anchor_ids").get<std::vector<int>>()};
    }
    const auto status = status_from_string(j.value("status", std::string("failed")));
    if (!status) throw MalformedFile("unknown status " + j.at("status").dump());
    ins.status = *status;
  } catch (const nlohmann::json::exception& e) {
    throw MalformedFile(std::string("bad instruction record: ") + e.what());
  }
  return ins;
}

ordered_json to_json(const TokenSequenceRecord& rec) {
  ordered_json j;
  j["scene_id"] = rec.scene_id;
  j["target_id"] = rec.target_id;
  j["seed"] = rec.seed;
  j["serialized"] = rec.serialized;
  j["ambiguous_anchor_ids"] = rec.ambiguous_anchor_ids;
  return j;
}

ordered_json to_json(const EvaluationReport& report) {
  ordered_json j;
  j["overall_acc"] = report.overall_acc();
  ordered_json strata;
  for (const char* key : {"0", "1", "2", "3", "4+"}) {
    const auto it = report.by_distractors.find(key);
    const bool fixed = std::string_view(key) == "1" || std::string_view(key) == "2" ||
                       std::string_view(key) == "4+";
    if (it != report.by_distractors.end()) {
      strata[key] = it->second.accuracy();
    } else if (fixed) {
      strata[key] = nullptr;
    }
  }
  j["by_distractors"] = std::move(strata);
  ordered_json errors;
  for (ErrorMode m : kAllErrorModes) {
    const auto it = report.errors.find(m);
    errors[std::string(to_string(m))] = it == report.errors.end() ? 0 : it->second;
  }
  j["errors"] = std::move(errors);
  j["instructions"] = report.overall.total;
  ordered_json counts;
  for (const auto& [key, c] : report.by_distractors) counts[key] = c.total;
  j["stratum_sizes"] = std::move(counts);
  j["parse_failures"] = report.parse_failures;
  return j;
}

ordered_json to_json(const MetricReport& report) {
  ordered_json j;
  j["bleu"] = report.bleu;
  j["rouge_l"] = report.rouge_l;
  j["cider"] = report.cider;
  if (report.empty_hypotheses) j["empty_hypotheses"] = report.empty_hypotheses;
  return j;
}

ordered_json to_json(const PerturbationStudy& study) {
  ordered_json j;
  j["mode"] = std::string(to_string(study.mode));
  j["original"] = to_json(study.original);
  j["perturbed"] = to_json(study.perturbed);
  j["grounding_acc_original"] = study.grounding_acc_original;
  j["grounding_acc_perturbed"] = study.grounding_acc_perturbed;
  ordered_json d;
  d["bleu"] = {study.bleu_delta(1), study.bleu_delta(2), study.bleu_delta(3), study.bleu_delta(4)};
  d["rouge_l"] = study.rouge_l_delta();
  d["cider"] = study.cider_delta();
  d["grounding_acc"] = study.grounding_delta();
  j["relative_delta"] = std::move(d);
  return j;
}

ordered_json to_json(const RelationThresholds& th) {
  ordered_json j;
  j["near_max"] = th.near_max;
  j["far_min"] = th.far_min;
  j["support_gap"] = th.support_gap;
  j["between_perp"] = th.between_perp;
  j["between_t_lo"] = th.between_t_lo;
  j["between_t_hi"] = th.between_t_hi;
  return j;
}

std::vector<nlohmann::json> read_jsonl(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw MalformedFile("cannot open " + path.string());
  std::vector<nlohmann::json> rows;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      rows.push_back(nlohmann::json::parse(line));
    } catch (const nlohmann::json::parse_error& e) {
      throw MalformedFile(path.string() + ":" + std::to_string(line_no) + ": " + e.what());
    }
  }
  return rows;
}

void write_jsonl(const std::filesystem::path& path, const std::vector<ordered_json>& rows) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw MalformedFile("cannot write " + path.string());
  for (const auto& r : rows) out << r.dump() << '\n';
}

void write_json(const std::filesystem::path& path, const ordered_json& value) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw MalformedFile("cannot write " + path.string());
  out << value.dump(2) << '\n';
}

std::vector<Instruction> read_instructions(const std::filesystem::path& path) {
  std::vector<Instruction> out;
  for (const auto& j : read_jsonl(path)) out.push_back(instruction_from_json(j));
  return out;
}

void write_instructions(const std::filesystem::path& path, const std::vector<Instruction>& rows) {
  std::vector<ordered_json> js;
  js.reserve(rows.size());
  for (const auto& r : rows) js.push_back(to_json(r));
  write_jsonl(path, js);
}

SceneStore load_scene_store(const std::filesystem::path& path) {
  std::vector<std::filesystem::path> files;
  if (std::filesystem::is_directory(path)) {
    for (const auto& e : std::filesystem::directory_iterator(path)) {
      if (e.is_regular_file() && e.path().extension() == ".json") files.push_back(e.path());
    }
    std::sort(files.begin(), files.end());
  } else if (std::filesystem::exists(path)) {
    files.push_back(path);
  } else {
    throw MissingScene("scene path " + path.string() + " does not exist");
  }
  SceneStore store;
  for (const auto& f : files) {
    Scene s = load_scene(f);
    const std::string id = s.scene_id;
    if (!store.emplace(id, std::move(s)).second) {
      throw InvariantViolation("scene id '" + id + "' appears twice under " + path.string());
    }
  }
  return store;
}

}  // namespace coldkit
