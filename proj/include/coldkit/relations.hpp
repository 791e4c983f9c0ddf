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

#include <array>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "coldkit/distractors.hpp"
#include "coldkit/scene.hpp"

namespace coldkit {

// View-independent relations only. Order is the generator's search order.
enum class RelationKind { closest, farthest, supported_by, above, below, near, far, between };

inline constexpr std::array<RelationKind, 8> kRelationSearchOrder = {
    RelationKind::closest, RelationKind::farthest, RelationKind::supported_by,
    RelationKind::above,   RelationKind::below,    RelationKind::near,
    RelationKind::far,     RelationKind::between};

std::string_view to_string(RelationKind kind);
std::optional<RelationKind> relation_from_string(std::string_view name);

inline int arity(RelationKind kind) { return kind == RelationKind::between ? 2 : 1; }

struct SpatialRelation {
  RelationKind kind = RelationKind::near;
  std::vector<ObjectId> anchor_ids;

  friend bool operator==(const SpatialRelation&, const SpatialRelation&) = default;
};

struct RelationThresholds {
  double near_max = 1.0;      // near: distance <= near_max
  double far_min = 2.5;       // far: distance >= far_min
  double support_gap = 0.1;   // supported_by: |bottom - top| <= support_gap
  double between_perp = 0.5;  // between: distance to segment line
  double between_t_lo = 0.1;  // between: projection parameter in (lo, hi)
  double between_t_hi = 0.9;

  // Throws InvariantViolation unless all thresholds are positive and ordered.
  void validate() const;
};

// Geometric predicate for `subject` against `anchors`. For closest/farthest
// the subject must be strictly nearer/farther from the anchor than every
// other object in `comparison`. A subject never relates to itself.
bool relation_holds(RelationKind kind, const ObjectInstance& subject,
                    std::span<const ObjectInstance* const> anchors,
                    std::span<const ObjectInstance* const> comparison,
                    const RelationThresholds& thresholds);

// relation_holds with anchors from relation.anchor_ids and, for
// closest/farthest, comparison set {target} + distractor members.
// Throws UnknownId, ArityMismatch.
bool holds(const SpatialRelation& relation, ObjectId subject_id, const Scene& scene,
           const DistractorSet& distractors, const RelationThresholds& thresholds = {});

}  // namespace coldkit
