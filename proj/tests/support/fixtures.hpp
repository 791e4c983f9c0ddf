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

#include <string>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "coldkit/grounding.hpp"
#include "coldkit/scene.hpp"

namespace fixtures {

inline coldkit::ObjectInstance object(int id, const std::string& category, double x, double y,
                                      double z, double size = 0.5) {
  coldkit::ObjectInstance o;
  o.id = id;
  o.category = category;
  o.centroid = Eigen::Vector3d(x, y, z);
  o.size = Eigen::Vector3d::Constant(size);
  return o;
}

// Two chairs, a table and a door on the floor plane.
inline coldkit::Scene s1() {
  coldkit::Scene s;
  s.scene_id = "s1";
  s.objects = {object(1, "chair", 1, 1, 0), object(2, "chair", 3, 1, 0),
               object(3, "table", 1, 2, 0), object(4, "door", 5, 3, 0)};
  return s;
}

struct ErrorCase {
  std::string name;
  coldkit::Scene scene;
  std::string text;
  coldkit::ObjectId target;
  coldkit::ErrorMode expected;
};

// One scene per failure mode of a grounding description, using the
// instructions of the classic failure examples.
inline std::vector<ErrorCase> error_cases() {
  using coldkit::ErrorMode;
  std::vector<ErrorCase> out;

  // There is no sink in the room.
  coldkit::Scene a;
  a.scene_id = "fig_a";
  a.objects = {object(1, "backpack", 1, 1, 0.25), object(2, "backpack", 4, 1, 0.25),
               object(3, "toilet", 1, 2, 0.4), object(4, "door", 5, 4, 1.0)};
  out.push_back({"hallucination", a, "The backpack next to the sink.", 1,
                 ErrorMode::hallucination});

  // Two tables, each next to a different armchair.
  coldkit::Scene b;
  b.scene_id = "fig_b";
  b.objects = {object(1, "armchair", 1, 1, 0.4), object(2, "armchair", 4, 1, 0.4),
               object(3, "table", 1, 1.8, 0.4), object(4, "table", 4, 1.8, 0.4),
               object(5, "door", 6, 4, 1.0)};
  out.push_back({"ambiguous_anchor", b, "The armchair close to the table.", 1,
                 ErrorMode::ambiguous_anchor});

  // The monitor is unique but both chairs are near it.
  coldkit::Scene c;
  c.scene_id = "fig_c";
  c.objects = {object(1, "chair", 1, 1, 0.4), object(2, "chair", 2.2, 1, 0.4),
               object(3, "monitor", 1.6, 1.5, 0.9, 0.4), object(4, "bed", 5, 4, 0.3)};
  out.push_back({"wrong_anchor", c, "The chair near the monitor.", 1, ErrorMode::wrong_anchor});

  // The target sink is next to the trash can; the other sink is far from it.
  coldkit::Scene d;
  d.scene_id = "fig_d";
  d.objects = {object(1, "sink", 1, 1, 0.8), object(2, "sink", 5, 4, 0.8),
               object(3, "trash can", 1.5, 1.5, 0.3), object(4, "mirror", 3, 0.2, 1.5)};
  out.push_back({"wrong_description", d, "The sink far from the trash can.", 1,
                 ErrorMode::wrong_description});
  return out;
}

// Thirty hypothesis/reference groups in the style of generated instructions,
// with varied lengths, repeated words and partial overlaps.
inline std::vector<std::pair<std::string, std::vector<std::string>>> hand_corpus() {
  return {
      {"the chair closest to the table", {"the chair closest to the table", "the chair next to the table"}},
      {"the chair near the door", {"the chair far from the door"}},
      {"the lamp on the night stand", {"the lamp on top of the night stand", "the lamp on the stand"}},
      {"the pillow on the bed", {"the pillow lying on the bed near the window"}},
      {"the box below the shelf", {"the box under the shelf", "the box below the book shelf"}},
      {"the chair between the desk and the window", {"the chair between the window and the desk"}},
      {"the office chair farthest from the door", {"the office chair farthest from the door"}},
      {"the towel near the sink near the mirror", {"the towel near the sink", "the towel by the mirror"}},
      {"the the the chair", {"the chair by the table"}},
      {"the trash can next to the desk", {"the trash can close to the desk", "the bin next to the desk"}},
      {"the cabinet far from the sofa", {"the kitchen cabinet far from the sofa"}},
      {"the monitor above the desk", {"the monitor on the desk", "the monitor above the office desk"}},
      {"the picture above the bed", {"the picture hanging above the bed"}},
      {"the plant closest to the window", {"the plant farthest from the window", "the plant by the window"}},
      {"the armchair near the coffee table", {"the armchair beside the coffee table"}},
      {"the book shelf between the door and the window",
       {"the book shelf between the window and the door", "the shelf between the door and the window"}},
      {"the laundry basket closest to the dresser", {"the laundry basket close to the dresser"}},
      {"the chair chair chair near the table", {"the chair near the table"}},
      {"the sofa farthest from the tv stand", {"the sofa far from the tv stand", "the couch farthest from the tv"}},
      {"the backpack on the bench", {"the backpack on the bench by the door"}},
      {"the radiator below the window", {"the radiator under the window", "the radiator below the big window"}},
      {"the curtain closest to the bed", {"the curtain next to the bed"}},
      {"the toilet near the bathtub", {"the toilet near the sink", "the toilet close to the bathtub"}},
      {"the refrigerator far from the window", {"the refrigerator far away from the window"}},
      {"the desk between the bed and the dresser", {"the desk between the dresser and the bed"}},
      {"the mirror above the sink", {"the mirror above the sink"}},
      {"the lamp farthest from the sofa", {"the lamp near the sofa", "a lamp far from the sofa"}},
      {"the chair on the left", {"the chair closest to the door"}},
      {"the tv stand below the picture", {"the tv stand under the picture", "the stand below the picture"}},
      {"the table closest to the kitchen cabinet", {"the table close to the cabinet", "the table next to the kitchen cabinet"}},
  };
}

}  // namespace fixtures
