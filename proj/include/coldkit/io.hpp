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

#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "coldkit/grounding.hpp"
#include "coldkit/instruction.hpp"
#include "coldkit/metrics.hpp"
#include "coldkit/perturb.hpp"
#include "coldkit/spatial_encoding.hpp"
#include "json.hpp"

namespace coldkit {

using ordered_json = nlohmann::ordered_json;

ordered_json to_json(const Instruction& ins);
Instruction instruction_from_json(const nlohmann::json& j);

struct TokenSequenceRecord {
  std::string scene_id;
  ObjectId target_id = 0;
  std::uint64_t seed = 0;
  std::string serialized;
  std::vector<ObjectId> ambiguous_anchor_ids;
};

ordered_json to_json(const TokenSequenceRecord& rec);

// {"overall_acc", "by_distractors", "errors", ...}
ordered_json to_json(const EvaluationReport& report);
// {"bleu": [..], "rouge_l", "cider"}
ordered_json to_json(const MetricReport& report);
ordered_json to_json(const PerturbationStudy& study);
ordered_json to_json(const RelationThresholds& th);

// One JSON value per non-empty line. Throws MalformedFile.
std::vector<nlohmann::json> read_jsonl(const std::filesystem::path& path);
void write_jsonl(const std::filesystem::path& path, const std::vector<ordered_json>& rows);
void write_json(const std::filesystem::path& path, const ordered_json& value);

std::vector<Instruction> read_instructions(const std::filesystem::path& path);
void write_instructions(const std::filesystem::path& path, const std::vector<Instruction>& rows);

// A directory of *.json scene files (sorted by name) or a single scene file.
// Throws InvariantViolation on a repeated scene id.
SceneStore load_scene_store(const std::filesystem::path& path);

}  // namespace coldkit
