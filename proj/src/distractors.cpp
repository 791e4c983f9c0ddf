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

#include "coldkit/distractors.hpp"

#include <cmath>
#include <fstream>

#include "coldkit/errors.hpp"
#include "json.hpp"

namespace coldkit {

std::string argmax_category(const CategoryScores& scores) {
  std::string best;
  double best_score = -std::numeric_limits<double>::infinity();
  // std::map iterates in lexicographic order, so strict > keeps the
  // smallest label among ties.
  for (const auto& [category, s] : scores) {
    if (best.empty() || s > best_score) {
      best = category;
      best_score = s;
    }
  }
  return best;
}

CategoryScores OracleClassifier::score(const ObjectInstance& object) const {
  return {{object.category, 1.0}};
}

CentroidFeatureClassifier::CentroidFeatureClassifier(
    std::map<std::string, Eigen::VectorXd> prototypes)
    : prototypes_(std::move(prototypes)) {
  if (prototypes_.empty()) throw InvariantViolation("prototype map is empty");
  dim_ = prototypes_.begin()->second.size();
  for (const auto& [category, p] : prototypes_) {
    if (p.size() != dim_ || dim_ == 0) {
      throw InvariantViolation("prototype '" + category + "' has inconsistent dimension");
    }
    if (std::abs(p.norm() - 1.0) > 1e-6) {
      throw InvariantViolation("prototype '" + category + "' is not unit-normalized");
    }
  }
}

CategoryScores CentroidFeatureClassifier::score(const ObjectInstance& object) const {
  if (!object.feature) {
    throw MissingFeature("object " + std::to_string(object.id) + " has no feature vector");
  }
  if (object.feature->size() != dim_) {
    throw FeatureDimMismatch("object " + std::to_string(object.id) +
                             " feature dimension differs from prototypes");
  }
  CategoryScores scores;
  for (const auto& [category, p] : prototypes_) scores[category] = object.feature->dot(p);
  return scores;
}

std::unique_ptr<Classifier> oracle_classifier() { return std::make_unique<OracleClassifier>(); }

std::unique_ptr<Classifier> centroid_feature_classifier(
    std::map<std::string, Eigen::VectorXd> prototypes) {
  return std::make_unique<CentroidFeatureClassifier>(std::move(prototypes));
}

std::map<std::string, Eigen::VectorXd> load_prototypes(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw MalformedFile("cannot open prototype file " + path.string());
  std::map<std::string, Eigen::VectorXd> out;
  try {
    const auto j = nlohmann::json::parse(in);
    const int dim = j.at("dim").get<int>();
    for (const auto& [category, arr] : j.at("prototypes").items()) {
      const auto v = arr.get<std::vector<double>>();
      if (static_cast<int>(v.size()) != dim) {
        throw FeatureDimMismatch("prototype '" + category + "' has length " +
                                 std::to_string(v.size()) + ", expected " + std::to_string(dim));
      }
      out[category] = Eigen::Map<const Eigen::VectorXd>(v.data(), dim);
    }
  } catch (const nlohmann::json::exception& e) {
    throw MalformedFile(std::string("bad prototype file: ") + e.what());
  }
  return out;
}

DistractorSet identify_distractors(const Scene& scene, ObjectId target_id,
                                   const Classifier& classifier) {
  const auto* target = scene.find(target_id);
  if (!target) {
    throw UnknownTarget("target " + std::to_string(target_id) + " not in scene '" +
                        scene.scene_id + "'");
  }
  DistractorSet d{target_id, {}};
  for (const auto& o : scene.objects) {
    if (o.id == target_id) continue;
    if (argmax_category(classifier.score(o)) == target->category) d.members.insert(o.id);
  }
  return d;
}

}  // namespace coldkit
