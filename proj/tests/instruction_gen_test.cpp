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

#include <cmath>

#include <gtest/gtest.h>

#include "coldkit/errors.hpp"
#include "coldkit/grounding.hpp"
#include "coldkit/instruction_gen.hpp"
#include "coldkit/relations.hpp"
#include "coldkit/spatial_encoding.hpp"
#include "support/fixtures.hpp"

namespace coldkit {
namespace {

using fixtures::object;

bool check(RelationKind kind, const ObjectInstance& s, std::vector<const ObjectInstance*> anchors,
           std::vector<const ObjectInstance*> comparison = {}) {
  return relation_holds(kind, s, anchors, comparison, RelationThresholds{});
}

TEST(Holds, S1ClosestAndFarthest) {
  const Scene s = fixtures::s1();
  const DistractorSet d{1, {2}};
  // d(1->3) = 1 < d(2->3) = sqrt(5)
  EXPECT_TRUE(holds({RelationKind::closest, {3}}, 1, s, d));
  EXPECT_FALSE(holds({RelationKind::closest, {3}}, 2, s, d));
  EXPECT_FALSE(holds({RelationKind::farthest, {3}}, 1, s, d));
  EXPECT_TRUE(holds({RelationKind::farthest, {3}}, 2, s, d));
}

TEST(Holds, Errors) {
  const Scene s = fixtures::s1();
  EXPECT_THROW(holds({RelationKind::between, {3}}, 1, s, {1, {2}}), ArityMismatch);
  EXPECT_THROW(holds({RelationKind::near, {3, 4}}, 1, s, {1, {2}}), ArityMismatch);
  EXPECT_THROW(holds({RelationKind::near, {9}}, 1, s, {1, {2}}), UnknownId);
}

TEST(RelationHolds, Irreflexive) {
  const auto x = object(1, "box", 0, 0, 1);
  for (RelationKind k : kRelationSearchOrder) {
    std::vector<const ObjectInstance*> anchors(static_cast<std::size_t>(arity(k)), &x);
    EXPECT_FALSE(check(k, x, anchors, {&x})) << to_string(k);
  }
}

TEST(RelationHolds, NearFarThresholds) {
  const auto a = object(1, "a", 0, 0, 0);
  EXPECT_TRUE(check(RelationKind::near, object(2, "b", 1.0, 0, 0), {&a}));
  EXPECT_FALSE(check(RelationKind::near, object(2, "b", 1.01, 0, 0), {&a}));
  EXPECT_TRUE(check(RelationKind::far, object(2, "b", 2.5, 0, 0), {&a}));
  EXPECT_FALSE(check(RelationKind::far, object(2, "b", 2.49, 0, 0), {&a}));
}

TEST(RelationHolds, VerticalRelations) {
  const auto table = object(1, "table", 0, 0, 0.4, 0.8);  // top at 0.8
  const auto lamp = object(2, "lamp", 0.2, 0.1, 1.05, 0.5);  // bottom at 0.8
  const auto shelf = object(3, "shelf", 0.3, 0, 2.0, 0.4);
  const auto far_box = object(4, "box", 2.0, 0, 1.0, 0.5);
  EXPECT_TRUE(check(RelationKind::supported_by, lamp, {&table}));
  EXPECT_TRUE(check(RelationKind::above, lamp, {&table}));
  EXPECT_TRUE(check(RelationKind::below, table, {&lamp}));
  EXPECT_FALSE(check(RelationKind::supported_by, shelf, {&table}));  // gap 1.0
  EXPECT_TRUE(check(RelationKind::above, shelf, {&table}));
  EXPECT_FALSE(check(RelationKind::above, far_box, {&table}));  // no xy overlap
  EXPECT_FALSE(check(RelationKind::above, table, {&lamp}));
}

TEST(RelationHolds, Between) {
  const auto a = object(1, "a", 0, 0, 0);
  const auto b = object(2, "b", 4, 0, 0);
  EXPECT_TRUE(check(RelationKind::between, object(3, "s", 2, 0.4, 0), {&a, &b}));
  EXPECT_FALSE(check(RelationKind::between, object(3, "s", 2, 0.6, 0), {&a, &b}));
  EXPECT_FALSE(check(RelationKind::between, object(3, "s", 0.3, 0, 0), {&a, &b}));  // t = 0.075
  EXPECT_FALSE(check(RelationKind::between, object(3, "s", 3.7, 0, 0), {&a, &b}));  // t = 0.925
  const auto a2 = object(5, "a", 0, 0, 0);
  EXPECT_FALSE(check(RelationKind::between, object(3, "s", 0, 0, 0.1), {&a, &a2}));
}

TEST(RenderText, Templates) {
  const std::vector<std::string> table{"table"};
  EXPECT_EQ(render_text("chair", RelationKind::closest, table), "the chair closest to the table");
  EXPECT_EQ(render_text("chair", RelationKind::farthest, table), "the chair farthest from the table");
  EXPECT_EQ(render_text("chair", RelationKind::near, table), "the chair near the table");
  EXPECT_EQ(render_text("chair", RelationKind::above, table), "the chair above the table");
  EXPECT_EQ(render_text("chair", RelationKind::below, table), "the chair below the table");
  EXPECT_EQ(render_text("chair", RelationKind::supported_by, table), "the chair on the table");
  const std::vector<std::string> can{"trash can"};
  EXPECT_EQ(render_text("sink", RelationKind::far, can), "the sink far from the trash can");
  const std::vector<std::string> two{"lamp", "plant"};
  EXPECT_EQ(render_text("book", RelationKind::between, two),
            "the book between the lamp and the plant");
  EXPECT_EQ(render_text("bed"), "the bed");
  EXPECT_THROW(render_text("book", RelationKind::between, table), ArityMismatch);
  EXPECT_THROW(render_text("book", RelationKind::near, two), ArityMismatch);
}

TEST(GenerateInstruction, S1Target) {
  const Scene s = fixtures::s1();
  const DistractorSet d{1, {2}};
  const auto anchors = select_anchor_candidates(s, 1, d, 3);
  const Instruction ins = generate_instruction(s, 1, d, anchors);
  EXPECT_EQ(ins.text, "the chair closest to the table");
  EXPECT_EQ(ins.status, InstructionStatus::exclusive);
  ASSERT_TRUE(ins.relation.has_value());
  EXPECT_EQ(*ins.relation, (SpatialRelation{RelationKind::closest, {3}}));
  EXPECT_EQ(ins.scene_id, "s1");
  EXPECT_EQ(ins.target_id, 1);
}

TEST(GenerateInstruction, NoDistractors) {
  Scene s;
  s.scene_id = "bedroom";
  s.objects = {object(1, "bed", 2, 2, 0.3), object(2, "lamp", 0, 0, 1), object(3, "lamp", 4, 0, 1)};
  const Instruction ins = generate_instruction(s, 1, {1, {}}, {});
  EXPECT_EQ(ins.text, "the bed");
  EXPECT_EQ(ins.status, InstructionStatus::exclusive);
  EXPECT_FALSE(ins.relation.has_value());
  EXPECT_THROW(generate_instruction(s, 9, {9, {}}, {}), UnknownTarget);
}

TEST(GenerateInstruction, SymmetricChairsFail) {
  Scene s;
  s.scene_id = "sym";
  s.objects = {object(1, "chair", 0, 0, 0.5), object(2, "chair", 2, 0, 0.5),
               object(3, "lamp", 1, 0, 0.5)};
  const DistractorSet d{1, {2}};
  // No single-anchor relation separates the chairs.
  for (RelationKind k : kRelationSearchOrder) {
    if (arity(k) != 1) continue;
    EXPECT_EQ(holds({k, {3}}, 1, s, d), holds({k, {3}}, 2, s, DistractorSet{2, {1}})) << to_string(k);
  }
  const auto anchors = select_anchor_candidates(s, 1, d, 3);
  const Instruction ins = generate_instruction(s, 1, d, anchors);
  EXPECT_EQ(ins.status, InstructionStatus::failed);
  EXPECT_FALSE(ins.text.empty());
}

TEST(GenerateInstruction, SearchOrderPrefersEarlierRelations) {
  // Chair 1 sits on the table and is also closest to it.
  Scene s;
  s.scene_id = "order";
  s.objects = {object(1, "chair", 1, 1, 1.0, 0.4), object(2, "chair", 4, 1, 0.2, 0.4),
               object(3, "table", 1, 1, 0.4, 0.8)};
  const DistractorSet d{1, {2}};
  const Instruction ins = generate_instruction(s, 1, d, select_anchor_candidates(s, 1, d, 3));
  EXPECT_EQ(ins.relation->kind, RelationKind::closest);
}

TEST(GenerateInstruction, ExclusiveTextsGroundToTarget) {
  SceneGenConfig cfg;
  cfg.category_pool = default_category_pool();
  cfg.distractor_spec = DistractorSpec{"chair", 3};
  const auto c = oracle_classifier();
  int exclusive = 0;
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    cfg.seed = seed;
    const Scene s = generate_scene(cfg);
    const Lexicon lex = Lexicon::from_scene(s);
    for (const auto& t : s.objects) {
      const auto d = identify_distractors(s, t.id, *c);
      std::vector<AnchorCandidate> anchors;
      try {
        anchors = select_anchor_candidates(s, t.id, d, 3);
      } catch (const NoValidAnchor&) {
      }
      const Instruction ins = generate_instruction(s, t.id, d, anchors);
      EXPECT_EQ(ins.status, generate_instruction(s, t.id, d, anchors).status);
      if (d.empty()) {
        EXPECT_EQ(ins.text, "the " + t.category);
      }
      if (ins.status != InstructionStatus::exclusive) continue;
      ++exclusive;
      EXPECT_EQ(ground(parse_instruction(ins.text, lex), s), IdSet{t.id}) << ins.text;
    }
  }
  EXPECT_GT(exclusive, 100);
}

TEST(NearOnlyBaseline, UsesClosestOtherCategory) {
  const Scene s = fixtures::s1();
  const Instruction ins = generate_near_only_instruction(s, 1);
  EXPECT_EQ(ins.text, "the chair near the table");
  EXPECT_EQ(ins.status, InstructionStatus::exclusive);  // chair 2 is sqrt(5) from the table
  const Instruction other = generate_near_only_instruction(s, 2);
  EXPECT_EQ(other.text, "the chair near the table");
  EXPECT_EQ(other.status, InstructionStatus::failed);
}

}  // namespace
}  // namespace coldkit
