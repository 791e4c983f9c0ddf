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

#include "coldkit/instruction_gen.hpp"

#include <limits>

#include "coldkit/errors.hpp"
#include "coldkit/grounding.hpp"

namespace coldkit {

std::string_view to_string(InstructionStatus status) {
  switch (status) {
    case InstructionStatus::exclusive: return "exclusive";
    case InstructionStatus::ambiguous: return "ambiguous";
    case InstructionStatus::failed: return "failed";
  }
  return "failed";
}

std::optional<InstructionStatus> status_from_string(std::string_view name) {
  for (auto s : {InstructionStatus::exclusive, InstructionStatus::ambiguous,
                 InstructionStatus::failed}) {
    if (to_string(s) == name) return s;
  }
  return std::nullopt;
}

std::string render_text(const std::string& category) { return "the " + category; }

std::string render_text(const std::string& category, RelationKind kind,
                        std::span<const std::string> anchors) {
  if (static_cast<int>(anchors.size()) != arity(kind)) {
    throw ArityMismatch(std::string(to_string(kind)) + " takes " + std::to_string(arity(kind)) +
                        " anchor categories, got " + std::to_string(anchors.size()));
  }
  const std::string subject = "the " + category + " ";
  const std::string a = "the " + anchors[0];
  switch (kind) {
    case RelationKind::closest: return subject + "closest to " + a;
    case RelationKind::farthest: return subject + "farthest from " + a;
    case RelationKind::near: return subject + "near " + a;
    case RelationKind::far: return subject + "far from " + a;
    case RelationKind::above: return subject + "above " + a;
    case RelationKind::below: return subject + "below " + a;
    case RelationKind::supported_by: return subject + "on " + a;
    case RelationKind::between: return subject + "between " + a + " and the " + anchors[1];
  }
  return subject;
}

Instruction generate_instruction(const Scene& scene, ObjectId target_id,
                                 const DistractorSet& distractors,
                                 std::span<const AnchorCandidate> anchors,
                                 const RelationThresholds& thresholds) {
  const auto* target = scene.find(target_id);
  if (!target) {
    throw UnknownTarget("target " + std::to_string(target_id) + " not in scene '" +
                        scene.scene_id + "'");
  }
  const Lexicon lexicon = Lexicon::from_scene(scene);
  Instruction ins;
  ins.scene_id = scene.scene_id;
  ins.target_id = target_id;

  if (distractors.empty()) {
    ins.text = render_text(target->category);
    ins.status = verify_status(ins.text, scene, target_id, lexicon, thresholds) ==
                         InstructionStatus::exclusive
                     ? InstructionStatus::exclusive
                     : InstructionStatus::failed;
    return ins;
  }

  ins.text = render_text(target->category);
  ins.status = InstructionStatus::failed;
  std::size_t best_size = std::numeric_limits<std::size_t>::max();
  bool have_best = false;

  auto try_relation = [&](RelationKind kind, std::vector<ObjectId> ids) {
    std::vector<std::string> cats;
    for (ObjectId id : ids) cats.push_back(scene.object(id).category);
    std::string text = render_text(target->category, kind, cats);
    const IdSet matched = ground(parse_instruction(text, lexicon), scene, thresholds);
    const bool includes_target = matched.count(target_id) != 0;
    if (includes_target && matched.size() == 1) {
      ins.text = std::move(text);
      ins.relation = SpatialRelation{kind, std::move(ids)};
      ins.status = InstructionStatus::exclusive;
      return true;
    }
    // Best effort: fewest matches that still include the target; otherwise
    // the first combination tried.
    const std::size_t rank = includes_target ? matched.size() : best_size;
    if (!have_best || (includes_target && rank < best_size)) {
      ins.text = std::move(text);
      ins.relation = SpatialRelation{kind, std::move(ids)};
      if (includes_target) best_size = rank;
      have_best = true;
    }
    return false;
  };

  for (RelationKind kind : kRelationSearchOrder) {
    if (kind == RelationKind::between) {
      for (std::size_t i = 0; i < anchors.size(); ++i) {
        for (std::size_t j = i + 1; j < anchors.size(); ++j) {
          if (try_relation(kind, {anchors[i].object_id, anchors[j].object_id})) return ins;
        }
      }
    } else {
      for (const auto& a : anchors) {
        if (try_relation(kind, {a.object_id})) return ins;
      }
    }
  }
  ins.status = InstructionStatus::failed;
  return ins;
}

Instruction generate_near_only_instruction(const Scene& scene, ObjectId target_id,
                                           const RelationThresholds& thresholds) {
  const auto* target = scene.find(target_id);
  if (!target) throw UnknownTarget("target " + std::to_string(target_id) + " not in scene");

  const ObjectInstance* anchor = nullptr;
  double best = std::numeric_limits<double>::infinity();
  for (const auto& o : scene.objects) {
    if (o.category == target->category) continue;
    const double d = (o.centroid - target->centroid).norm();
    if (d < best) {
      best = d;
      anchor = &o;
    }
  }
  Instruction ins;
  ins.scene_id = scene.scene_id;
  ins.target_id = target_id;
  if (!anchor) {
    ins.text = render_text(target->category);
  } else {
    const std::string cat = anchor->category;
    ins.text = render_text(target->category, RelationKind::near, std::span(&cat, 1));
    ins.relation = SpatialRelation{RelationKind::near, {anchor->id}};
  }
  ins.status = verify_status(ins.text, scene, target_id, Lexicon::from_scene(scene), thresholds);
  return ins;
}

}  // namespace coldkit
