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

#include "coldkit/scene.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

#include "coldkit/errors.hpp"
#include "coldkit/rng.hpp"
#include "json.hpp"

namespace coldkit {

namespace {

using ordered_json = nlohmann::ordered_json;

Eigen::Vector3d read_vec3(const nlohmann::json& j, const char* what) {
  if (!j.is_array() || j.size() != 3) {
    throw MalformedFile(std::string(what) + " must be an array of 3 numbers");
  }
  Eigen::Vector3d v;
  for (int k = 0; k < 3; ++k) {
    if (!j[k].is_number()) throw MalformedFile(std::string(what) + " must be numeric");
    v[k] = j[k].get<double>();
  }
  return v;
}

ordered_json write_vec(const Eigen::VectorXd& v) {
  ordered_json a = ordered_json::array();
  for (Eigen::Index k = 0; k < v.size(); ++k) a.push_back(v[k]);
  return a;
}

bool is_lowercase_category(const std::string& c) {
  if (c.empty() || c.front() == ' ' || c.back() == ' ') return false;
  return std::none_of(c.begin(), c.end(),
                      [](unsigned char ch) { return std::isupper(ch) != 0; });
}

}  // namespace

bool operator==(const ObjectInstance& a, const ObjectInstance& b) {
  if (a.id != b.id || a.category != b.category || a.centroid != b.centroid ||
      a.size != b.size || a.feature.has_value() != b.feature.has_value()) {
    return false;
  }
  if (!a.feature) return true;
  return a.feature->size() == b.feature->size() && *a.feature == *b.feature;
}

bool operator==(const Scene& a, const Scene& b) {
  return a.scene_id == b.scene_id && a.feature_dim == b.feature_dim &&
         a.objects == b.objects;
}

const ObjectInstance* Scene::find(ObjectId id) const {
  for (const auto& o : objects) {
    if (o.id == id) return &o;
  }
  return nullptr;
}

const ObjectInstance& Scene::object(ObjectId id) const {
  if (const auto* o = find(id)) return *o;
  throw UnknownId("object " + std::to_string(id) + " not in scene '" + scene_id + "'");
}

int Scene::count_category(const std::string& category) const {
  return static_cast<int>(std::count_if(
      objects.begin(), objects.end(),
      [&](const ObjectInstance& o) { return o.category == category; }));
}

void validate(const Scene& scene) {
  if (scene.objects.size() < 2) {
    throw InvariantViolation("scene '" + scene.scene_id + "' has fewer than 2 objects");
  }
  if (scene.feature_dim && *scene.feature_dim <= 0) {
    throw InvariantViolation("feature_dim must be positive");
  }
  std::set<ObjectId> seen;
  for (const auto& o : scene.objects) {
    if (o.id < 0) throw InvariantViolation("negative object id " + std::to_string(o.id));
    if (!seen.insert(o.id).second) {
      throw InvariantViolation("duplicate object id " + std::to_string(o.id));
    }
    if (!is_lowercase_category(o.category)) {
      throw InvariantViolation("category '" + o.category + "' is not a lowercase token string");
    }
    if (!o.centroid.allFinite() || !o.size.allFinite() || (o.size.array() <= 0.0).any()) {
      throw InvariantViolation("object " + std::to_string(o.id) +
                               " has non-finite centroid or non-positive size");
    }
    if (scene.feature_dim.has_value() != o.feature.has_value()) {
      throw FeatureDimMismatch("object " + std::to_string(o.id) +
                               (o.feature ? " carries a feature but the scene declares none"
                                          : " lacks a feature vector"));
    }
    if (o.feature) {
      if (o.feature->size() != *scene.feature_dim) {
        throw FeatureDimMismatch("object " + std::to_string(o.id) + " feature has length " +
                                 std::to_string(o.feature->size()) + ", expected " +
                                 std::to_string(*scene.feature_dim));
      }
      if (std::abs(o.feature->norm() - 1.0) > 1e-6) {
        throw InvariantViolation("object " + std::to_string(o.id) +
                                 " feature is not unit-normalized");
      }
    }
  }
}

Scene scene_from_json_text(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw MalformedFile(std::string("invalid JSON: ") + e.what());
  }
  Scene scene;
  try {
    if (!j.is_object()) throw MalformedFile("scene must be a JSON object");
    scene.scene_id = j.at("scene_id").get<std::string>();
    const auto& fd = j.at("feature_dim");
    if (!fd.is_null()) scene.feature_dim = fd.get<int>();
    const auto& objs = j.at("objects");
    if (!objs.is_array()) throw MalformedFile("objects must be an array");
    for (const auto& jo : objs) {
      ObjectInstance o;
      o.id = jo.at("id").get<int>();
      o.category = jo.at("category").get<std::string>();
      o.centroid = read_vec3(jo.at("centroid"), "centroid");
      o.size = read_vec3(jo.at("size"), "size");
      if (jo.contains("feature") && !jo["feature"].is_null()) {
        const auto f = jo["feature"].get<std::vector<double>>();
        o.feature = Eigen::Map<const Eigen::VectorXd>(f.data(), static_cast<Eigen::Index>(f.size()));
      }
      scene.objects.push_back(std::move(o));
    }
  } catch (const nlohmann::json::exception& e) {
    throw MalformedFile(std::string("bad scene field: ") + e.what());
  }
  validate(scene);
  return scene;
}

std::string scene_to_json_text(const Scene& scene) {
  std::vector<const ObjectInstance*> sorted;
  for (const auto& o : scene.objects) sorted.push_back(&o);
  std::stable_sort(sorted.begin(), sorted.end(),
                   [](const auto* a, const auto* b) { return a->id < b->id; });

  ordered_json j;
  j["scene_id"] = scene.scene_id;
  j["feature_dim"] = scene.feature_dim ? ordered_json(*scene.feature_dim) : ordered_json(nullptr);
  j["objects"] = ordered_json::array();
  for (const auto* o : sorted) {
    ordered_json jo;
    jo["id"] = o->id;
    jo["category"] = o->category;
    jo["centroid"] = write_vec(o->centroid);
    jo["size"] = write_vec(o->size);
    jo["feature"] = o->feature ? write_vec(*o->feature) : ordered_json(nullptr);
    j["objects"].push_back(std::move(jo));
  }
  return j.dump() + "\n";
}

Scene load_scene(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw MalformedFile("cannot open scene file " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return scene_from_json_text(buf.str());
}

void save_scene(const Scene& scene, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw MalformedFile("cannot write scene file " + path.string());
  out << scene_to_json_text(scene);
}

Eigen::Vector3d scene_extents(const Scene& scene) {
  if (scene.objects.empty()) return Eigen::Vector3d::Zero();
  Eigen::Vector3d lo = Eigen::Vector3d::Constant(std::numeric_limits<double>::infinity());
  Eigen::Vector3d hi = -lo;
  for (const auto& o : scene.objects) {
    lo = lo.cwiseMin(o.centroid);
    hi = hi.cwiseMax(o.centroid);
  }
  return hi - lo;
}

const std::vector<std::string>& default_category_pool() {
  static const std::vector<std::string> pool = {
      "armchair",     "backpack",  "bathtub",       "bed",        "bench",
      "book shelf",   "box",       "cabinet",       "chair",      "coffee table",
      "curtain",      "desk",      "door",          "dresser",    "kitchen cabinet",
      "lamp",         "laundry basket", "mirror",   "monitor",    "night stand",
      "office chair", "picture",   "pillow",        "plant",      "radiator",
      "refrigerator", "shelf",     "sink",          "sofa",       "table",
      "toilet",       "towel",     "trash can",     "tv stand",   "window"};
  return pool;
}

namespace {

bool separated(const std::vector<ObjectInstance>& placed, const Eigen::Vector3d& c,
               double min_sep) {
  return std::all_of(placed.begin(), placed.end(), [&](const ObjectInstance& o) {
    return (o.centroid - c).norm() >= min_sep;
  });
}

bool inside(const Eigen::Vector3d& c, const Eigen::Vector3d& room) {
  return (c.array() >= 0.0).all() && (c.array() <= room.array()).all();
}

}  // namespace

Scene generate_scene(const SceneGenConfig& config) {
  if (config.object_count < 2 && !config.distractor_spec) {
    throw InvariantViolation("object_count must be at least 2");
  }
  if (config.object_count < 0) throw InvariantViolation("object_count must be non-negative");
  if ((config.room_extent.array() <= 0.0).any()) {
    throw InvariantViolation("room_extent components must be positive");
  }
  if (config.min_separation < 0.0) throw InvariantViolation("min_separation must be >= 0");
  if (config.min_object_size <= 0.0 || config.max_object_size < config.min_object_size) {
    throw InvariantViolation("object size range is invalid");
  }
  if (config.object_count > 0 && config.category_pool.empty()) {
    throw InvariantViolation("category_pool is empty");
  }
  if (config.distractor_spec && config.distractor_spec->count < 0) {
    throw InvariantViolation("distractor count must be non-negative");
  }
  const int forced = config.distractor_spec ? config.distractor_spec->count : 0;
  if (config.object_count + forced < 2) {
    throw InvariantViolation("a scene needs at least 2 objects");
  }

  SplitMix64 rng(config.seed);

  std::vector<std::string> categories;
  categories.reserve(static_cast<std::size_t>(config.object_count + forced));
  for (int i = 0; i < config.object_count; ++i) {
    categories.push_back(config.category_pool[rng.below(config.category_pool.size())]);
  }
  for (int i = 0; i < forced; ++i) categories.push_back(config.distractor_spec->category);
  fisher_yates(categories, rng);

  const Eigen::Vector3d& room = config.room_extent;
  Scene scene;
  scene.scene_id = config.scene_id;
  for (std::size_t i = 0; i < categories.size(); ++i) {
    ObjectInstance o;
    o.id = static_cast<ObjectId>(i);
    o.category = categories[i];
    for (int k = 0; k < 3; ++k) {
      o.size[k] = rng.uniform(config.min_object_size, config.max_object_size);
    }
    o.size.z() = std::min(o.size.z(), room.z());

    bool placed = false;
    for (int attempt = 0; attempt < kMaxPlacementAttempts && !placed; ++attempt) {
      // Fixed number of draws per attempt keeps the stream layout stable.
      const double stack_roll = rng.uniform();
      const auto support_pick = rng.next();
      const double u = rng.uniform();
      const double v = rng.uniform();

      Eigen::Vector3d c;
      if (!scene.objects.empty() && stack_roll < config.stack_probability) {
        const auto& support = scene.objects[support_pick % scene.objects.size()];
        c.x() = support.centroid.x() + (u - 0.5) * 0.2;
        c.y() = support.centroid.y() + (v - 0.5) * 0.2;
        c.z() = support.top() + 0.5 * o.size.z();
      } else {
        c = Eigen::Vector3d(u * room.x(), v * room.y(), 0.5 * o.size.z());
      }
      if (inside(c, room) && separated(scene.objects, c, config.min_separation)) {
        o.centroid = c;
        placed = true;
      }
    }
    if (!placed) {
      throw PlacementExhausted("could not place object " + std::to_string(i) + " of " +
                               std::to_string(categories.size()) + " after " +
                               std::to_string(kMaxPlacementAttempts) + " attempts");
    }
    scene.objects.push_back(std::move(o));
  }
  return scene;
}

}  // namespace coldkit
