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

#include <array>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "coldkit/instruction.hpp"
#include "coldkit/relations.hpp"
#include "coldkit/scene.hpp"

namespace coldkit {

// Category vocabulary with longest-match lookup over multi-word entries.
class Lexicon {
 public:
  Lexicon() = default;
  explicit Lexicon(std::span<const std::string> categories);

  static Lexicon from_scene(const Scene& scene);

  void add(const std::string& category);
  bool contains(const std::string& category) const { return entries_.count(category) != 0; }
  bool empty() const { return entries_.empty(); }

  // Number of words of the longest entry matching words[pos...], or 0.
  std::size_t longest_match(std::span<const std::string> words, std::size_t pos) const;

 private:
  std::set<std::string> entries_;
  std::map<std::string, std::vector<std::vector<std::string>>> by_first_word_;
};

struct ParsedInstruction {
  std::string target_category;
  std::optional<RelationKind> relation;
  std::vector<std::string> anchor_categories;

  friend bool operator==(const ParsedInstruction&, const ParsedInstruction&) = default;
};

// Grammar: "the" CAT [RELPHRASE "the" CAT ["and" "the" CAT]]. Case and a
// trailing period are ignored; "close to"/"next to" read as near and "on" as
// supported_by. Throws ParseError (byte offset) or UnknownCategory.
ParsedInstruction parse_instruction(std::string_view text, const Lexicon& lexicon);

using IdSet = std::set<ObjectId>;

// Candidates of the target category satisfying the relation for at least one
// assignment of anchor instances.
IdSet ground(const ParsedInstruction& parsed, const Scene& scene,
             const RelationThresholds& thresholds = {});

// Matched candidates per anchor assignment (one entry, the full candidate
// set, when there is no relation).
std::vector<IdSet> ground_per_assignment(const ParsedInstruction& parsed, const Scene& scene,
                                         const RelationThresholds& thresholds = {});

enum class Verdict { unique_target, unique_wrong, ambiguous, empty };
enum class ErrorMode { hallucination, ambiguous_anchor, wrong_anchor, wrong_description };

inline constexpr std::array<ErrorMode, 4> kAllErrorModes = {
    ErrorMode::hallucination, ErrorMode::ambiguous_anchor, ErrorMode::wrong_anchor,
    ErrorMode::wrong_description};

std::string_view to_string(Verdict verdict);
std::string_view to_string(ErrorMode mode);

struct GroundingResult {
  IdSet matched_ids;
  Verdict verdict = Verdict::empty;
  std::optional<ErrorMode> error_mode;
};

// Verdict for `result_ids` plus the first matching failure rule:
// hallucination > ambiguous_anchor > wrong_description > wrong_anchor.
// Throws UnknownTarget.
GroundingResult classify_error(const ParsedInstruction& parsed, const IdSet& result_ids,
                               const Scene& scene, ObjectId expected_target,
                               const RelationThresholds& thresholds = {});

// Parse, ground and classify one text. Unknown categories are reported as
// hallucinations; other parse failures set parse_failed with no error mode.
struct TextGrounding {
  GroundingResult result;
  std::optional<ParsedInstruction> parsed;
  bool parse_failed = false;
  std::string parse_message;
};

TextGrounding ground_text(std::string_view text, const Scene& scene, ObjectId expected_target,
                          const Lexicon& lexicon, const RelationThresholds& thresholds = {});

// exclusive / ambiguous (target among several matches) / failed.
InstructionStatus verify_status(std::string_view text, const Scene& scene, ObjectId target,
                                const Lexicon& lexicon, const RelationThresholds& thresholds = {});

using SceneStore = std::map<std::string, Scene>;

// Default categories plus every category found in the store.
Lexicon corpus_lexicon(const SceneStore& scenes);

// "0", "1", "2", "3" or "4+".
std::string distractor_stratum(std::size_t distractor_count);

struct StratumCount {
  std::size_t total = 0;
  std::size_t correct = 0;
  double accuracy() const {
    return total == 0 ? 0.0 : static_cast<double>(correct) / static_cast<double>(total);
  }
};

struct InstructionOutcome {
  TextGrounding grounding;
  std::size_t distractor_count = 0;
};

struct EvaluationReport {
  StratumCount overall;
  std::map<std::string, StratumCount> by_distractors;
  std::map<ErrorMode, std::size_t> errors;
  std::size_t parse_failures = 0;
  std::vector<InstructionOutcome> outcomes;  // instruction order

  double overall_acc() const { return overall.accuracy(); }
};

// Grounding accuracy overall, per distractor stratum and per error mode.
// Distractors are counted with ground-truth labels. Throws MissingScene.
EvaluationReport evaluate_corpus(std::span<const Instruction> instructions,
                                 const SceneStore& scenes,
                                 const RelationThresholds& thresholds = {}, int jobs = 1);

}  // namespace coldkit
