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

#include "coldkit/spatial_encoding.hpp"

#include <algorithm>
#include <charconv>
#include <map>
#include <set>
#include <sstream>

#include "coldkit/errors.hpp"
#include "coldkit/rng.hpp"

namespace coldkit {

RelativePositionMap::RelativePositionMap(std::vector<ObjectId> ids,
                                         Eigen::Matrix<double, Eigen::Dynamic, 3> rows)
    : ids_(std::move(ids)), entries_(std::move(rows)) {
  if (static_cast<std::size_t>(entries_.rows()) != ids_.size() * ids_.size()) {
    throw InvariantViolation("relative position map needs n*n rows");
  }
}

int RelativePositionMap::index_of(ObjectId id) const {
  const auto it = std::find(ids_.begin(), ids_.end(), id);
  return it == ids_.end() ? -1 : static_cast<int>(it - ids_.begin());
}

Eigen::Vector3d RelativePositionMap::between(ObjectId from, ObjectId to) const {
  const int i = index_of(from);
  const int j = index_of(to);
  if (i < 0 || j < 0) {
    throw UnknownId("object " + std::to_string(i < 0 ? from : to) + " not in position map");
  }
  return entry(static_cast<std::size_t>(i), static_cast<std::size_t>(j));
}

RelativePositionMap relative_position_map(const Scene& scene, const std::vector<ObjectId>& subset) {
  if (subset.empty()) throw InvariantViolation("position map subset is empty");
  if (std::set<ObjectId>(subset.begin(), subset.end()).size() != subset.size()) {
    throw InvariantViolation("position map subset repeats an id");
  }
  std::vector<Eigen::Vector3d> centroids;
  centroids.reserve(subset.size());
  for (ObjectId id : subset) centroids.push_back(scene.object(id).centroid);

  const Eigen::Vector3d extent = scene_extents(scene);
  Eigen::Vector3d inv = Eigen::Vector3d::Zero();
  for (int k = 0; k < 3; ++k) {
    if (extent[k] >= kExtentEpsilon) inv[k] = 1.0;
  }

  const auto n = static_cast<Eigen::Index>(subset.size());
  Eigen::Matrix<double, Eigen::Dynamic, 3> rows(n * n, 3);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      const Eigen::Vector3d d = centroids[j] - centroids[i];
      Eigen::Vector3d e;
      // Division (not multiplication by a reciprocal) keeps e(i,j) == -e(j,i)
      // and |e| <= 1 exact in floating point.
      for (int k = 0; k < 3; ++k) e[k] = inv[k] != 0.0 ? d[k] / extent[k] : 0.0;
      rows.row(i * n + j) = e.transpose();
    }
  }
  return RelativePositionMap(subset, std::move(rows));
}

std::vector<AnchorCandidate> select_anchor_candidates(const Scene& scene, ObjectId target_id,
                                                      const DistractorSet& distractors,
                                                      int max_anchors) {
  const auto* target = scene.find(target_id);
  if (!target) throw UnknownTarget("target " + std::to_string(target_id) + " not in scene");
  if (max_anchors < 1) throw InvariantViolation("max_anchors must be >= 1");

  std::map<std::string, int> counts;
  for (const auto& o : scene.objects) ++counts[o.category];

  std::vector<AnchorCandidate> out;
  for (const auto& o : scene.objects) {
    if (o.id == target_id || o.category == target->category || counts[o.category] != 1 ||
        distractors.members.count(o.id) != 0) {
      continue;
    }
    out.push_back({o.id, (o.centroid - target->centroid).norm(), false});
  }
  if (out.empty()) {
    throw NoValidAnchor("no category-unique anchor for target " + std::to_string(target_id) +
                        " in scene '" + scene.scene_id + "'");
  }
  std::sort(out.begin(), out.end(), [](const AnchorCandidate& a, const AnchorCandidate& b) {
    return a.distance_to_target != b.distance_to_target
               ? a.distance_to_target < b.distance_to_target
               : a.object_id < b.object_id;
  });
  if (out.size() > static_cast<std::size_t>(max_anchors)) out.resize(max_anchors);
  return out;
}

std::vector<AnchorCandidate> inject_ambiguous_anchor(std::vector<AnchorCandidate> candidates,
                                                     const Scene& scene, ObjectId target_id,
                                                     std::uint64_t seed) {
  const auto& target = scene.object(target_id);
  std::vector<AnchorCandidate> ranked;
  for (const auto& o : scene.objects) {
    if (o.id != target_id) ranked.push_back({o.id, (o.centroid - target.centroid).norm(), true});
  }
  if (ranked.size() < 3) return candidates;
  std::sort(ranked.begin(), ranked.end(), [](const AnchorCandidate& a, const AnchorCandidate& b) {
    return a.distance_to_target != b.distance_to_target
               ? a.distance_to_target < b.distance_to_target
               : a.object_id < b.object_id;
  });

  std::vector<AnchorCandidate> eligible;
  for (std::size_t r = 1; r + 1 < ranked.size(); ++r) {
    const bool taken = std::any_of(candidates.begin(), candidates.end(), [&](const auto& c) {
      return c.object_id == ranked[r].object_id;
    });
    if (!taken) eligible.push_back(ranked[r]);
  }
  if (eligible.empty()) return candidates;

  SplitMix64 rng(seed);
  candidates.push_back(eligible[rng.below(eligible.size())]);
  return candidates;
}

TokenSequence build_token_sequence(const Scene& scene, ObjectId target_id,
                                   const std::vector<AnchorCandidate>& anchors,
                                   const RelativePositionMap& rpm, std::uint64_t seed) {
  if (!scene.contains(target_id)) {
    throw UnknownTarget("target " + std::to_string(target_id) + " not in scene");
  }
  if (rpm.index_of(target_id) < 0) {
    throw UnknownId("target " + std::to_string(target_id) + " not in position map");
  }
  TokenSequence ts;
  ts.target_id = target_id;
  ts.seed = seed;
  std::set<ObjectId> seen;
  for (const auto& a : anchors) {
    if (rpm.index_of(a.object_id) < 0) {
      throw AnchorNotInMap("anchor " + std::to_string(a.object_id) + " not in position map");
    }
    if (!seen.insert(a.object_id).second) {
      throw InvariantViolation("anchor " + std::to_string(a.object_id) + " repeated");
    }
    ts.anchor_blocks.push_back({a.object_id, rpm.between(target_id, a.object_id)});
  }
  SplitMix64 rng(seed);
  fisher_yates(ts.anchor_blocks, rng);
  return ts;
}

std::string shortest_decimal(double value) {
  if (value == 0.0) return "0";  // folds -0
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, res.ptr);
}

std::string serialize_token_sequence(const TokenSequence& ts) {
  std::string out = "<PC> T:" + std::to_string(ts.target_id);
  for (std::size_t i = 0; i < ts.anchor_blocks.size(); ++i) {
    const auto& b = ts.anchor_blocks[i];
    const std::string tag = "Anchor_" + std::to_string(i + 1);
    out += " <" + tag + "> A:" + std::to_string(b.anchor_id) + " RP:(" +
           shortest_decimal(b.relative_position.x()) + "," +
           shortest_decimal(b.relative_position.y()) + "," +
           shortest_decimal(b.relative_position.z()) + ") </" + tag + ">";
  }
  out += " </PC>";
  return out;
}

namespace {

class TokenReader {
 public:
  explicit TokenReader(const std::string& text) : text_(text) {}

  bool at_end() {
    skip_space();
    return pos_ >= text_.size();
  }

  std::string_view word() {
    skip_space();
    const std::size_t start = pos_;
    while (pos_ < text_.size() && text_[pos_] != ' ') ++pos_;
    return std::string_view(text_).substr(start, pos_ - start);
  }

  void expect(std::string_view w) {
    const std::size_t at = offset();
    if (word() != w) throw ParseError("expected '" + std::string(w) + "'", at);
  }

  template <typename T>
  T number(std::string_view s, std::size_t at) {
    T v{};
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc() || res.ptr != s.data() + s.size()) {
      throw ParseError("bad number '" + std::string(s) + "'", at);
    }
    return v;
  }

  // "<prefix><number>"
  template <typename T>
  T prefixed(std::string_view prefix) {
    const std::size_t at = offset();
    const auto w = word();
    if (w.substr(0, prefix.size()) != prefix) {
      throw ParseError("expected '" + std::string(prefix) + "'", at);
    }
    return number<T>(w.substr(prefix.size()), at + prefix.size());
  }

  std::size_t offset() {
    skip_space();
    return pos_;
  }

 private:
  void skip_space() {
    while (pos_ < text_.size() && text_[pos_] == ' ') ++pos_;
  }

  const std::string& text_;
  std::size_t pos_ = 0;
};

}  // namespace

TokenSequence parse_token_sequence(const std::string& text, std::uint64_t seed) {
  TokenReader r(text);
  TokenSequence ts;
  ts.seed = seed;
  r.expect("<PC>");
  ts.target_id = r.prefixed<int>("T:");
  for (std::size_t i = 1;; ++i) {
    const std::size_t at = r.offset();
    const auto w = r.word();
    if (w == "</PC>") break;
    const std::string tag = "Anchor_" + std::to_string(i);
    if (w != "<" + tag + ">") throw ParseError("expected <" + tag + "> or </PC>", at);
    AnchorBlock b;
    b.anchor_id = r.prefixed<int>("A:");
    const std::size_t rp_at = r.offset();
    const auto rp = r.word();
    if (rp.size() < 5 || rp.substr(0, 4) != "RP:(" || rp.back() != ')') {
      throw ParseError("expected RP:(x,y,z)", rp_at);
    }
    auto body = rp.substr(4, rp.size() - 5);
    for (int k = 0; k < 3; ++k) {
      const auto comma = body.find(',');
      if ((k < 2) != (comma != std::string_view::npos)) {
        throw ParseError("expected three RP components", rp_at);
      }
      b.relative_position[k] = r.number<double>(body.substr(0, comma), rp_at);
      body = k < 2 ? body.substr(comma + 1) : std::string_view{};
    }
    r.expect("</" + tag + ">");
    ts.anchor_blocks.push_back(b);
  }
  if (!r.at_end()) throw ParseError("trailing text after </PC>", r.offset());
  return ts;
}

}  // namespace coldkit
