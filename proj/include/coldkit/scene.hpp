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
#include <utility>
#include <vector>

#include <Eigen/Core>

namespace coldkit {

using ObjectId = int;

struct ObjectInstance {
  ObjectId id = 0;
  std::string category;
  Eigen::Vector3d centroid = Eigen::Vector3d::Zero();
  // Full axis-aligned extents, meters.
  Eigen::Vector3d size = Eigen::Vector3d::Ones();
  std::optional<Eigen::VectorXd> feature;

  double bottom() const { return centroid.z() - 0.5 * size.z(); }
  double top() const { return centroid.z() + 0.5 * size.z(); }

  friend bool operator==(const ObjectInstance& a, const ObjectInstance& b);
};

struct Scene {
  std::string scene_id;
  std::vector<ObjectInstance> objects;
  std::optional<int> feature_dim;

  // Throws UnknownId when absent.
  const ObjectInstance& object(ObjectId id) const;
  const ObjectInstance* find(ObjectId id) const;
  bool contains(ObjectId id) const { return find(id) != nullptr; }

  // Number of objects whose category equals `category`.
  int count_category(const std::string& category) const;

  friend bool operator==(const Scene& a, const Scene& b);
};

// Checks every Scene / ObjectInstance invariant. Throws InvariantViolation
// or FeatureDimMismatch.
void validate(const Scene& scene);

Scene scene_from_json_text(const std::string& text);
std::string scene_to_json_text(const Scene& scene);

// Reads a scene JSON file; object order is preserved from the file.
Scene load_scene(const std::filesystem::path& path);
// Writes objects in id order with a trailing newline.
void save_scene(const Scene& scene, const std::filesystem::path& path);

// Per-axis span (max - min) of object centroids.
Eigen::Vector3d scene_extents(const Scene& scene);

struct DistractorSpec {
  std::string category;
  int count = 0;
};

struct SceneGenConfig {
  std::uint64_t seed = 0;
  Eigen::Vector3d room_extent{6.0, 5.0, 3.0};
  std::vector<std::string> category_pool;
  // Objects drawn from the pool. Forced distractor placements come on top.
  int object_count = 8;
  std::optional<DistractorSpec> distractor_spec;
  double min_separation = 0.3;
  double min_object_size = 0.2;
  double max_object_size = 1.0;
  // Chance that an object is stacked on an already placed one.
  double stack_probability = 0.2;
  std::string scene_id = "scene";
};

inline constexpr int kMaxPlacementAttempts = 10000;

// Pure function of the config. Throws PlacementExhausted when an object
// cannot be placed within kMaxPlacementAttempts rejection-sampling draws.
Scene generate_scene(const SceneGenConfig& config);

// ScanNet-style indoor category vocabulary used as the default pool.
const std::vector<std::string>& default_category_pool();

}  // namespace coldkit
