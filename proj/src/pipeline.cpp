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

#include "coldkit/pipeline.hpp"

#include <algorithm>
#include <cstdio>
#include <map>
#include <set>

#include "coldkit/distractors.hpp"
#include "coldkit/errors.hpp"
#include "coldkit/instruction_gen.hpp"
#include "coldkit/parallel.hpp"
#include "coldkit/rng.hpp"
#include "coldkit/spatial_encoding.hpp"

namespace coldkit {

void RunConfig::validate() const {
  if (!(ambiguous_rate >= 0.0 && ambiguous_rate <= 1.0)) {
    throw InvariantViolation("ambiguous_rate must be in [0, 1]");
  }
  if (max_anchors < 1) throw InvariantViolation("max_anchors must be >= 1");
  if (jobs < 1) throw InvariantViolation("jobs must be >= 1");
  if (scene_count < 0) throw InvariantViolation("scene count must be >= 0");
  if (classifier != "oracle" && classifier != "features") {
    throw InvariantViolation("classifier must be 'oracle' or 'features'");
  }
  thresholds.validate();
}

ordered_json RunConfig::to_json() const {
  ordered_json j;
  j["seed"] = seed;
  j["scenes"] = scenes_path;
  j["output_dir"] = output_dir;
  j["jobs"] = jobs;
  j["count"] = scene_count;
  j["objects"] = object_count;
  j["distractors"] = distractors
                         ? ordered_json(distractors->category + ":" + std::to_string(distractors->count))
                         : ordered_json(nullptr);
  j["room"] = {room_extent.x(), room_extent.y(), room_extent.z()};
  j["min_separation"] = min_separation;
  j["pool"] = category_pool;
  j["classifier"] = classifier;
  j["prototypes"] = prototypes_path;
  j["max_anchors"] = max_anchors;
  j["ambiguous_rate"] = ambiguous_rate;
  j["all_targets"] = all_targets;
  j["instructions"] = instructions_path;
  j["references"] = references_path;
  j["perturb"] = perturb ? ordered_json(std::string(to_string(*perturb))) : ordered_json(nullptr);
  j["thresholds"] = coldkit::to_json(thresholds);
  return j;
}

DistractorSpec parse_distractor_flag(const std::string& flag) {
  const auto colon = flag.rfind(':');
  if (colon == std::string::npos || colon == 0 || colon + 1 == flag.size()) {
    throw InvariantViolation("distractor flag must look like 'category:count', got '" + flag + "'");
  }
  DistractorSpec spec;
  spec.category = flag.substr(0, colon);
  try {
    std::size_t used = 0;
    spec.count = std::stoi(flag.substr(colon + 1), &used);
    if (used != flag.size() - colon - 1) throw std::invalid_argument("trailing");
  } catch (const std::exception&) {
    throw InvariantViolation("bad distractor count in '" + flag + "'");
  }
  if (spec.count < 0) throw InvariantViolation("distractor count must be >= 0");
  return spec;
}

SceneGenConfig scene_config_for(const RunConfig& config, int index) {
  SceneGenConfig g;
  g.seed = mix_seed(config.seed, static_cast<std::uint64_t>(index));
  g.room_extent = config.room_extent;
  g.category_pool = config.category_pool.empty() ? default_category_pool() : config.category_pool;
  g.object_count = config.object_count;
  if (config.distractors) {
    // k distractors plus the target itself.
    g.distractor_spec = DistractorSpec{config.distractors->category, config.distractors->count + 1};
  }
  g.min_separation = config.min_separation;
  char id[32];
  std::snprintf(id, sizeof(id), "scene_%04d", index);
  g.scene_id = id;
  return g;
}

std::vector<Scene> generate_scenes(const RunConfig& config) {
  config.validate();
  std::vector<Scene> scenes(static_cast<std::size_t>(config.scene_count));
  parallel_for(scenes.size(), config.jobs, [&](std::size_t i) {
    scenes[i] = generate_scene(scene_config_for(config, static_cast<int>(i)));
  });
  return scenes;
}

std::vector<std::filesystem::path> cmd_gen_scenes(const RunConfig& config) {
  const auto scenes = generate_scenes(config);
  std::filesystem::create_directories(config.output_dir);
  std::vector<std::filesystem::path> paths;
  for (const auto& s : scenes) {
    auto p = std::filesystem::path(config.output_dir) / (s.scene_id + ".json");
    save_scene(s, p);
    paths.push_back(std::move(p));
  }
  return paths;
}

namespace {

std::unique_ptr<Classifier> make_classifier(const RunConfig& config) {
  if (config.classifier == "features") {
    if (config.prototypes_path.empty()) {
      throw InvariantViolation("the features classifier needs --prototypes");
    }
    return centroid_feature_classifier(load_prototypes(config.prototypes_path));
  }
  return oracle_classifier();
}

struct SceneOutput {
  std::vector<Instruction> instructions;
  std::vector<TokenSequenceRecord> tokens;
};

SceneOutput process_scene(const Scene& scene, const Classifier& classifier,
                          const RunConfig& config) {
  SceneOutput out;
  const std::uint64_t scene_seed = mix_seed(config.seed, fnv1a(scene.scene_id));
  for (const auto& target : scene.objects) {
    const DistractorSet distractors = identify_distractors(scene, target.id, classifier);
    if (distractors.empty() && !config.all_targets) continue;

    std::vector<AnchorCandidate> anchors;
    try {
      anchors = select_anchor_candidates(scene, target.id, distractors, config.max_anchors);
    } catch (const NoValidAnchor&) {
    }

    const std::uint64_t pair_seed = mix_seed(scene_seed, static_cast<std::uint64_t>(target.id));
    SplitMix64 coin(pair_seed);
    std::vector<AnchorCandidate> token_anchors = anchors;
    if (coin.bernoulli(config.ambiguous_rate)) {
      token_anchors = inject_ambiguous_anchor(token_anchors, scene, target.id, mix_seed(pair_seed, 1));
    }

    std::vector<ObjectId> subset{target.id};
    auto add = [&](ObjectId id) {
      if (std::find(subset.begin(), subset.end(), id) == subset.end()) subset.push_back(id);
    };
    for (ObjectId id : distractors.members) add(id);
    for (const auto& a : token_anchors) add(a.object_id);
    const RelativePositionMap rpm = relative_position_map(scene, subset);

    TokenSequenceRecord rec;
    rec.scene_id = scene.scene_id;
    rec.target_id = target.id;
    rec.seed = mix_seed(pair_seed, 2);
    rec.serialized = serialize_token_sequence(
        build_token_sequence(scene, target.id, token_anchors, rpm, rec.seed));
    for (const auto& a : token_anchors) {
      if (a.ambiguous) rec.ambiguous_anchor_ids.push_back(a.object_id);
    }
    out.tokens.push_back(std::move(rec));
    out.instructions.push_back(
        generate_instruction(scene, target.id, distractors, anchors, config.thresholds));
  }
  return out;
}

}  // namespace

GeneratedCorpus generate_corpus(const SceneStore& scenes, const RunConfig& config) {
  config.validate();
  const auto classifier = make_classifier(config);
  std::vector<const Scene*> ordered;
  for (const auto& [id, s] : scenes) ordered.push_back(&s);

  std::vector<SceneOutput> per_scene(ordered.size());
  parallel_for(ordered.size(), config.jobs, [&](std::size_t i) {
    per_scene[i] = process_scene(*ordered[i], *classifier, config);
  });

  GeneratedCorpus corpus;
  for (auto& s : per_scene) {
    std::move(s.instructions.begin(), s.instructions.end(), std::back_inserter(corpus.instructions));
    std::move(s.tokens.begin(), s.tokens.end(), std::back_inserter(corpus.token_sequences));
  }
  return corpus;
}

GeneratedCorpus cmd_generate(const RunConfig& config) {
  const SceneStore scenes = load_scene_store(config.scenes_path);
  GeneratedCorpus corpus = generate_corpus(scenes, config);
  std::filesystem::create_directories(config.output_dir);
  const std::filesystem::path dir(config.output_dir);
  write_instructions(dir / "instructions.jsonl", corpus.instructions);
  std::vector<ordered_json> rows;
  for (const auto& t : corpus.token_sequences) rows.push_back(to_json(t));
  write_jsonl(dir / "tokens.jsonl", rows);
  ordered_json run;
  run["config"] = config.to_json();
  run["instructions"] = corpus.instructions.size();
  run["token_sequences"] = corpus.token_sequences.size();
  write_json(dir / "run.json", run);
  return corpus;
}

std::vector<ordered_json> cmd_ground(const RunConfig& config) {
  config.validate();
  const SceneStore scenes = load_scene_store(config.scenes_path);
  const auto instructions = read_instructions(config.instructions_path);
  const EvaluationReport report = evaluate_corpus(instructions, scenes, config.thresholds, config.jobs);
  std::vector<ordered_json> rows;
  for (std::size_t i = 0; i < instructions.size(); ++i) {
    const auto& g = report.outcomes[i].grounding;
    ordered_json j;
    j["scene_id"] = instructions[i].scene_id;
    j["target_id"] = instructions[i].target_id;
    j["text"] = instructions[i].text;
    j["matched_ids"] = g.result.matched_ids;
    j["verdict"] = std::string(to_string(g.result.verdict));
    j["error_mode"] = g.result.error_mode ? ordered_json(std::string(to_string(*g.result.error_mode)))
                                          : ordered_json(nullptr);
    j["distractors"] = report.outcomes[i].distractor_count;
    if (g.parse_failed) j["parse_error"] = g.parse_message;
    rows.push_back(std::move(j));
  }
  return rows;
}

ordered_json evaluation_report(const std::vector<Instruction>& instructions,
                               const SceneStore& scenes, const RunConfig& config,
                               const std::vector<Instruction>* references) {
  ordered_json out;
  out["config"] = config.to_json();
  out["grounding"] = to_json(evaluate_corpus(instructions, scenes, config.thresholds, config.jobs));

  if (references) {
    std::map<std::pair<std::string, ObjectId>, std::vector<std::string>> by_key;
    for (const auto& r : *references) by_key[{r.scene_id, r.target_id}].push_back(r.text);
    std::vector<std::string> hyps;
    std::vector<std::vector<std::string>> refs;
    for (const auto& ins : instructions) {
      const auto it = by_key.find({ins.scene_id, ins.target_id});
      if (it == by_key.end()) continue;
      hyps.push_back(ins.text);
      refs.push_back(it->second);
    }
    ordered_json metrics = to_json(compute_metrics(make_corpus(hyps, refs)));
    metrics["pairs"] = hyps.size();
    metrics["unreferenced"] = instructions.size() - hyps.size();
    out["metrics"] = std::move(metrics);
  }
  if (config.perturb) {
    out["perturbation"] =
        to_json(perturbation_study(instructions, scenes, *config.perturb, config.thresholds, config.jobs));
  }
  return out;
}

ordered_json cmd_evaluate(const RunConfig& config) {
  config.validate();
  const SceneStore scenes = load_scene_store(config.scenes_path);
  const auto instructions = read_instructions(config.instructions_path);
  std::optional<std::vector<Instruction>> refs;
  if (!config.references_path.empty()) refs = read_instructions(config.references_path);
  return evaluation_report(instructions, scenes, config, refs ? &*refs : nullptr);
}

std::vector<Instruction> perturb_instructions(const std::vector<Instruction>& instructions,
                                              const SceneStore& scenes, PerturbMode mode,
                                              const RelationThresholds& thresholds) {
  const Lexicon lexicon = corpus_lexicon(scenes);
  std::vector<Instruction> out;
  for (const auto& ins : instructions) {
    const auto it = scenes.find(ins.scene_id);
    if (it == scenes.end()) throw MissingScene("scene '" + ins.scene_id + "' not found");
    Instruction p = ins;
    p.text = perturb_spatial_terms(ins.text, mode);
    if (p.relation) {
      p.relation->kind = mode == PerturbMode::far ? RelationKind::far : RelationKind::near;
      p.relation->anchor_ids.resize(1);
    }
    p.status = verify_status(p.text, it->second, p.target_id, lexicon, thresholds);
    out.push_back(std::move(p));
  }
  return out;
}

std::vector<Instruction> cmd_perturb(const RunConfig& config) {
  config.validate();
  if (!config.perturb) throw InvariantViolation("perturb needs --mode far|close");
  const SceneStore scenes = load_scene_store(config.scenes_path);
  return perturb_instructions(read_instructions(config.instructions_path), scenes, *config.perturb,
                              config.thresholds);
}

}  // namespace coldkit
