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

#include <optional>
#include <string>
#include <string_view>

#include "coldkit/relations.hpp"
#include "coldkit/scene.hpp"

namespace coldkit {

enum class InstructionStatus { exclusive, ambiguous, failed };

std::string_view to_string(InstructionStatus status);
std::optional<InstructionStatus> status_from_string(std::string_view name);

// A referring expression for one target. `relation` is empty for the bare
// "the <category>" form.
struct Instruction {
  std::string scene_id;
  ObjectId target_id = 0;
  std::string text;
  std::optional<SpatialRelation> relation;
  InstructionStatus status = InstructionStatus::failed;

  friend bool operator==(const Instruction&, const Instruction&) = default;
};

}  // namespace coldkit
