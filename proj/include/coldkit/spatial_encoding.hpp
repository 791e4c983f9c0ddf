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
#include <string>
#include <vector>

#include <Eigen/Core>

#include "coldkit/distractors.hpp"
#include "coldkit/scene.hpp"

namespace coldkit {

// Axes whose centroid extent is below this map to zero.
inline constexpr double kExtentEpsilon = 1e-9;

// Pairwise normalized centroid offsets over a subset of objects.
// entry(i, j) = N(c_j - c_i), N dividing each axis by the scene extent.
class RelativePositionMap {
 public:
  RelativePositionMap() = default;
  RelativePositionMap(std::vector<ObjectId> ids, Eigen::Matrix<double, Eigen::Dynamic, 3> rows);

  std::size_t size() const { return ids_.size(); }
  const std::vector<ObjectId>& object_ids() const { return ids_; }

  // Index into object_ids(), or -1.
  int index_of(ObjectId id) const;

  Eigen::Vector3d entry(std::size_t i, std::size_t j) const {
    return entries_.row(static_cast<Eigen::Index>(i * ids_.size() + j)).transpose();
  }
  // Offset of `to` as seen from `from`. Throws UnknownId.
  Eigen::Vector3d between(ObjectId from, ObjectId to) const;

  // n*n rows of xyz, row-major over (i, j).
  const Eigen::Matrix<double, Eigen::Dynamic, 3>& entries() const { return entries_; }

 private:
  std::vector<ObjectId> ids_;
  Eigen::Matrix<double, Eigen::Dynamic, 3> entries_;
};

// Throws UnknownId for ids outside the scene, InvariantViolation for an
// empty or repeated subset.
RelativePositionMap relative_position_map(const Scene& scene, const std::vector<ObjectId>& subset);

struct AnchorCandidate {
  ObjectId object_id = 0;
  double distance_to_target = 0.0;
  bool ambiguous = false;

  friend bool operator==(const AnchorCandidate&, const AnchorCandidate&) = default;
};

// Objects of a category that is not the target's, occurs exactly once in the
// scene, and is not flagged as a distractor; nearest first, truncated.
// Throws UnknownTarget, NoValidAnchor.
std::vector<AnchorCandidate> select_anchor_candidates(const Scene& scene, ObjectId target_id,
                                                      const DistractorSet& distractors,
                                                      int max_anchors);

// Appends one object ranked neither nearest nor farthest from the target
// (among all non-target objects), chosen with splitmix64(seed). No-op when
// fewer than 3 non-target objects exist or nothing is eligible.
std::vector<AnchorCandidate> inject_ambiguous_anchor(std::vector<AnchorCandidate> candidates,
                                                     const Scene& scene, ObjectId target_id,
                                                     std::uint64_t seed);

struct AnchorBlock {
  ObjectId anchor_id = 0;
  Eigen::Vector3d relative_position = Eigen::Vector3d::Zero();

  friend bool operator==(const AnchorBlock& a, const AnchorBlock& b) {
    return a.anchor_id == b.anchor_id && a.relative_position == b.relative_position;
  }
};

struct TokenSequence {
  ObjectId target_id = 0;
  std::vector<AnchorBlock> anchor_blocks;
  std::uint64_t seed = 0;

  friend bool operator==(const TokenSequence& a, const TokenSequence& b) {
    return a.target_id == b.target_id && a.anchor_blocks == b.anchor_blocks && a.seed == b.seed;
  }
};

// Blocks are shuffled with Fisher-Yates over splitmix64(seed); each carries
// the map entry target -> anchor. Throws AnchorNotInMap, UnknownId.
TokenSequence build_token_sequence(const Scene& scene, ObjectId target_id,
                                   const std::vector<AnchorCandidate>& anchors,
                                   const RelativePositionMap& rpm, std::uint64_t seed);

// `<PC> T:7 <Anchor_1> A:3 RP:(0.5,0,0) </Anchor_1> </PC>`
std::string serialize_token_sequence(const TokenSequence& ts);

// Inverse of serialize_token_sequence. The seed is not part of the text.
TokenSequence parse_token_sequence(const std::string& text, std::uint64_t seed = 0);

// Shortest decimal string that parses back to exactly `value`.
std::string shortest_decimal(double value);

}  // namespace coldkit
