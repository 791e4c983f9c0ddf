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

#include <filesystem>
#include <map>
#include <memory>
#include <set>
#include <string>

#include <Eigen/Core>

#include "coldkit/scene.hpp"

namespace coldkit {

using CategoryScores = std::map<std::string, double>;

// Scores an object against a label set. Implementations are immutable and
// deterministic.
class Classifier {
 public:
  virtual ~Classifier() = default;
  virtual CategoryScores score(const ObjectInstance& object) const = 0;
};

// Highest-scoring category; ties go to the lexicographically smallest label.
std::string argmax_category(const CategoryScores& scores);

// Scores 1 for the object's own label and nothing else.
class OracleClassifier final : public Classifier {
 public:
  CategoryScores score(const ObjectInstance& object) const override;
};

// Dot product of the object's unit feature against unit category prototypes.
class CentroidFeatureClassifier final : public Classifier {
 public:
  // Throws InvariantViolation for non-unit or mismatched prototypes.
  explicit CentroidFeatureClassifier(std::map<std::string, Eigen::VectorXd> prototypes);

  // Throws MissingFeature / FeatureDimMismatch.
  CategoryScores score(const ObjectInstance& object) const override;

  Eigen::Index dim() const { return dim_; }

 private:
  std::map<std::string, Eigen::VectorXd> prototypes_;
  Eigen::Index dim_ = 0;
};

std::unique_ptr<Classifier> oracle_classifier();
std::unique_ptr<Classifier> centroid_feature_classifier(
    std::map<std::string, Eigen::VectorXd> prototypes);

// Reads {"dim": int, "prototypes": {category: [floats]}}.
std::map<std::string, Eigen::VectorXd> load_prototypes(const std::filesystem::path& path);

struct DistractorSet {
  ObjectId target_id = 0;
  std::set<ObjectId> members;

  std::size_t size() const { return members.size(); }
  bool empty() const { return members.empty(); }
  friend bool operator==(const DistractorSet&, const DistractorSet&) = default;
};

// Objects (other than the target) whose argmax category equals the target's
// ground-truth category. Throws UnknownTarget.
DistractorSet identify_distractors(const Scene& scene, ObjectId target_id,
                                   const Classifier& classifier);

}  // namespace coldkit
