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
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "coldkit/grounding.hpp"
#include "coldkit/instruction.hpp"
#include "coldkit/io.hpp"
#include "coldkit/perturb.hpp"
#include "coldkit/relations.hpp"
#include "coldkit/scene.hpp"

namespace coldkit {

// Everything a command needs; echoed into every report.
struct RunConfig {
  std::uint64_t seed = 0;
  std::string scenes_path;
  std::string output_dir = "out";
  int jobs = 1;

  // gen-scenes
  int scene_count = 10;
  int object_count = 8;
  // "chair:2" means two distractors, i.e. three chairs guaranteed.
  std::optional<DistractorSpec> distractors;
  Eigen::Vector3d room_extent{6.0, 5.0, 3.0};
  double min_separation = 0.3;
  std::vector<std::string> category_pool;  // empty = default pool

  // generate
  std::string classifier = "oracle";  // or "features"
  std::string prototypes_path;
  int max_anchors = 3;
  double ambiguous_rate = 0.3;
  bool all_targets = false;

  // ground / evaluate / perturb
  std::string instructions_path;
  std::string references_path;
  std::optional<PerturbMode> perturb;

  RelationThresholds thresholds;

  // Throws InvariantViolation.
  void validate() const;
  ordered_json to_json() const;
};

// Parses "category:k".
DistractorSpec parse_distractor_flag(const std::string& flag);

SceneGenConfig scene_config_for(const RunConfig& config, int index);
std::vector<Scene> generate_scenes(const RunConfig& config);
// One scene_NNNN.json per scene under output_dir. Returns written paths.
std::vector<std::filesystem::path> cmd_gen_scenes(const RunConfig& config);

struct GeneratedCorpus {
  std::vector<Instruction> instructions;
  std::vector<TokenSequenceRecord> token_sequences;
};

// Targets are objects with at least one distractor (every object with
// all_targets). Scenes are processed in scene-id order.
GeneratedCorpus generate_corpus(const SceneStore& scenes, const RunConfig& config);
// Writes instructions.jsonl and tokens.jsonl under output_dir.
GeneratedCorpus cmd_generate(const RunConfig& config);

std::vector<ordered_json> cmd_ground(const RunConfig& config);

ordered_json evaluation_report(const std::vector<Instruction>& instructions,
                               const SceneStore& scenes, const RunConfig& config,
                               const std::vector<Instruction>* references);
ordered_json cmd_evaluate(const RunConfig& config);

// Perturbed instructions with status re-verified against the scenes.
std::vector<Instruction> perturb_instructions(const std::vector<Instruction>& instructions,
                                              const SceneStore& scenes, PerturbMode mode,
                                              const RelationThresholds& thresholds);
std::vector<Instruction> cmd_perturb(const RunConfig& config);

struct LossSelftestSummary {
  int batches = 0;
  double max_stage1_error = 0.0;
  double max_probability_grad_error = 0.0;
  double max_logit_grad_error = 0.0;
  int zero_iff_failures = 0;
  int gibbs_violations = 0;
  bool passed() const;
};

inline constexpr double kGradientTolerance = 1e-5;

// Gradient checks for both losses over random batches (N <= 8, d <= 16,
// V <= 32), zero-iff-equal checks and Gibbs-inequality checks.
LossSelftestSummary run_loss_selftest(std::uint64_t seed, int batches = 100,
                                      int distribution_pairs = 1000);

}  // namespace coldkit
