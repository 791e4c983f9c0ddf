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
#include <span>
#include <string>
#include <string_view>

#include "coldkit/grounding.hpp"
#include "coldkit/instruction.hpp"
#include "coldkit/metrics.hpp"

namespace coldkit {

enum class PerturbMode { far, close };

std::string_view to_string(PerturbMode mode);
std::optional<PerturbMode> perturb_mode_from_string(std::string_view name);

// Replaces every spatial relation phrase with "far from" or "close to".
// "between A and B" keeps only A. Idempotent. Words are re-joined with
// single spaces.
std::string perturb_spatial_terms(std::string_view text, PerturbMode mode);

struct PerturbationStudy {
  PerturbMode mode = PerturbMode::close;
  MetricReport original;   // originals scored against themselves
  MetricReport perturbed;  // perturbed texts against the originals
  double grounding_acc_original = 0.0;
  double grounding_acc_perturbed = 0.0;

  static double relative_change(double before, double after) {
    if (before == after) return 0.0;
    return before == 0.0 ? after : (after - before) / before;
  }
  double bleu_delta(int k) const {
    return relative_change(original.bleu[k - 1], perturbed.bleu[k - 1]);
  }
  double rouge_l_delta() const { return relative_change(original.rouge_l, perturbed.rouge_l); }
  double cider_delta() const { return relative_change(original.cider, perturbed.cider); }
  double grounding_delta() const {
    return relative_change(grounding_acc_original, grounding_acc_perturbed);
  }
};

// Throws MissingScene, TooFewPairs.
PerturbationStudy perturbation_study(std::span<const Instruction> instructions,
                                     const SceneStore& scenes, PerturbMode mode,
                                     const RelationThresholds& thresholds = {}, int jobs = 1);

}  // namespace coldkit
