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

#include <span>
#include <string>
#include <vector>

#include "coldkit/distractors.hpp"
#include "coldkit/instruction.hpp"
#include "coldkit/relations.hpp"
#include "coldkit/scene.hpp"
#include "coldkit/spatial_encoding.hpp"

namespace coldkit {

// Fixed lowercase templates, e.g. "the chair closest to the table".
// Throws ArityMismatch.
std::string render_text(const std::string& category, RelationKind kind,
                        std::span<const std::string> anchor_categories);

// "the <category>"
std::string render_text(const std::string& category);

// Without distractors: "the <category>". Otherwise the first relation x
// anchor combination, in kRelationSearchOrder and then anchor order, whose
// text grounds to exactly the target. Falls back to status failed with the
// combination that grounds to the fewest objects including the target.
// Throws UnknownTarget.
Instruction generate_instruction(const Scene& scene, ObjectId target_id,
                                 const DistractorSet& distractors,
                                 std::span<const AnchorCandidate> anchors,
                                 const RelationThresholds& thresholds = {});

// Deliberately weak baseline: always "near" the closest object of another
// category, with no anchor uniqueness check and no exclusivity search.
// Status reflects what the grounding oracle makes of the text.
Instruction generate_near_only_instruction(const Scene& scene, ObjectId target_id,
                                           const RelationThresholds& thresholds = {});

}  // namespace coldkit
