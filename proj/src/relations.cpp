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

#include "coldkit/relations.hpp"

#include <algorithm>
#include <cmath>

#include "coldkit/errors.hpp"

namespace coldkit {

namespace {

constexpr std::array<std::string_view, 8> kNames = {
    "closest", "farthest", "supported_by", "above", "below", "near", "far", "between"};

double distance(const ObjectInstance& a, const ObjectInstance& b) {
  return (a.centroid - b.centroid).norm();
}

bool horizontally_overlapping(const ObjectInstance& a, const ObjectInstance& b) {
  const Eigen::Vector3d d = (a.centroid - b.centroid).cwiseAbs();
  const Eigen::Vector3d half = 0.5 * (a.size + b.size);
  return d.x() <= half.x() && d.y() <= half.y();
}

bool is_above(const ObjectInstance& s, const ObjectInstance& a) {
  return s.centroid.z() > a.centroid.z() && horizontally_overlapping(s, a);
}

bool is_between(const ObjectInstance& s, const ObjectInstance& a, const ObjectInstance& b,
                const RelationThresholds& th) {
  const Eigen::Vector3d ab = b.centroid - a.centroid;
  const double len2 = ab.squaredNorm();
  if (len2 <= 0.0) return false;
  const double t = (s.centroid - a.centroid).dot(ab) / len2;
  if (!(t > th.between_t_lo && t < th.between_t_hi)) return false;
  return (s.centroid - (a.centroid + t * ab)).norm() <= th.between_perp;
}

}  // namespace

std::string_view to_string(RelationKind kind) { return kNames[static_cast<std::size_t>(kind)]; }

std::optional<RelationKind> relation_from_string(std::string_view name) {
  for (std::size_t i = 0; i < kNames.size(); ++i) {
    if (kNames[i] == name) return static_cast<RelationKind>(i);
  }
  return std::nullopt;
}

void RelationThresholds::validate() const {
  if (!(near_max > 0 && far_min > 0 && support_gap > 0 && between_perp > 0 &&
        between_t_lo > 0 && between_t_hi > between_t_lo && between_t_hi < 1)) {
    throw InvariantViolation("relation thresholds must be positive with 0 < t_lo < t_hi < 1");
  }
}

bool relation_holds(RelationKind kind, const ObjectInstance& subject,
                    std::span<const ObjectInstance* const> anchors,
                    std::span<const ObjectInstance* const> comparison,
                    const RelationThresholds& th) {
  if (static_cast<int>(anchors.size()) != arity(kind)) {
    throw ArityMismatch(std::string(to_string(kind)) + " takes " + std::to_string(arity(kind)) +
                        " anchor(s), got " + std::to_string(anchors.size()));
  }
  for (const auto* a : anchors) {
    if (a->id == subject.id) return false;
  }
  const ObjectInstance& a = *anchors[0];
  switch (kind) {
    case RelationKind::closest:
    case RelationKind::farthest: {
      const double d = distance(subject, a);
      return std::all_of(comparison.begin(), comparison.end(), [&](const ObjectInstance* o) {
        if (o->id == subject.id) return true;
        const double other = distance(*o, a);
        return kind == RelationKind::closest ? d < other : d > other;
      });
    }
    case RelationKind::near:
      return distance(subject, a) <= th.near_max;
    case RelationKind::far:
      return distance(subject, a) >= th.far_min;
    case RelationKind::above:
      return is_above(subject, a);
    case RelationKind::below:
      return is_above(a, subject);
    case RelationKind::supported_by:
      return is_above(subject, a) && std::abs(subject.bottom() - a.top()) <= th.support_gap;
    case RelationKind::between:
      return anchors[0]->id != anchors[1]->id && is_between(subject, a, *anchors[1], th);
  }
  return false;
}

bool holds(const SpatialRelation& relation, ObjectId subject_id, const Scene& scene,
           const DistractorSet& distractors, const RelationThresholds& thresholds) {
  if (static_cast<int>(relation.anchor_ids.size()) != arity(relation.kind)) {
    throw ArityMismatch(std::string(to_string(relation.kind)) + " takes " +
                        std::to_string(arity(relation.kind)) + " anchor(s)");
  }
  const ObjectInstance& subject = scene.object(subject_id);
  std::vector<const ObjectInstance*> anchors;
  for (ObjectId id : relation.anchor_ids) anchors.push_back(&scene.object(id));
  std::vector<const ObjectInstance*> comparison{&scene.object(distractors.target_id)};
  for (ObjectId id : distractors.members) comparison.push_back(&scene.object(id));
  return relation_holds(relation.kind, subject, anchors, comparison, thresholds);
}

}  // namespace coldkit
