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

#include "coldkit/perturb.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <vector>

namespace coldkit {

namespace {

std::string lower(std::string s) {
  for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

bool ends_clause(const std::string& w) {
  return !w.empty() && std::string_view(".,;!?").find(w.back()) != std::string_view::npos;
}

// Longest first.
const std::vector<std::vector<std::string>>& spatial_lexicon() {
  static const std::vector<std::vector<std::string>> phrases = {
      {"closest", "to"}, {"farthest", "from"}, {"close", "to"}, {"far", "from"},
      {"next", "to"},    {"near"},             {"above"},       {"below"},
      {"on"},            {"between"}};
  return phrases;
}

}  // namespace

std::string_view to_string(PerturbMode mode) { return mode == PerturbMode::far ? "far" : "close"; }

std::optional<PerturbMode> perturb_mode_from_string(std::string_view name) {
  if (name == "far") return PerturbMode::far;
  if (name == "close") return PerturbMode::close;
  return std::nullopt;
}

std::string perturb_spatial_terms(std::string_view text, PerturbMode mode) {
  std::vector<std::string> words;
  {
    std::string cur;
    for (char c : text) {
      if (std::isspace(static_cast<unsigned char>(c))) {
        if (!cur.empty()) words.push_back(std::move(cur));
        cur.clear();
      } else {
        cur.push_back(c);
      }
    }
    if (!cur.empty()) words.push_back(std::move(cur));
  }
  const std::array<std::string, 2> replacement =
      mode == PerturbMode::far ? std::array<std::string, 2>{"far", "from"}
                               : std::array<std::string, 2>{"close", "to"};

  std::vector<std::string> out;
  std::size_t i = 0;
  while (i < words.size()) {
    const std::vector<std::string>* hit = nullptr;
    for (const auto& p : spatial_lexicon()) {
      if (i + p.size() > words.size()) continue;
      bool same = true;
      for (std::size_t k = 0; k < p.size() && same; ++k) same = lower(words[i + k]) == p[k];
      if (same) {
        hit = &p;
        break;
      }
    }
    if (!hit) {
      out.push_back(words[i++]);
      continue;
    }
    out.insert(out.end(), replacement.begin(), replacement.end());
    i += hit->size();
    if (hit->front() != "between") continue;

    // Keep the first anchor; drop "and <second anchor>" up to the clause end.
    bool clause_done = false;
    while (i < words.size() && lower(words[i]) != "and" && !clause_done) {
      clause_done = ends_clause(words[i]);
      out.push_back(words[i++]);
    }
    if (!clause_done && i < words.size()) {
      while (i < words.size() && !ends_clause(words[i])) ++i;
      if (i < words.size()) {
        out.back().push_back(words[i].back());
        ++i;
      }
    }
  }

  std::string joined;
  for (std::size_t k = 0; k < out.size(); ++k) {
    if (k) joined += ' ';
    joined += out[k];
  }
  return joined;
}

PerturbationStudy perturbation_study(std::span<const Instruction> instructions,
                                     const SceneStore& scenes, PerturbMode mode,
                                     const RelationThresholds& thresholds, int jobs) {
  std::vector<Instruction> perturbed(instructions.begin(), instructions.end());
  std::vector<std::string> originals, hypotheses;
  std::vector<std::vector<std::string>> references;
  for (auto& ins : perturbed) {
    originals.push_back(ins.text);
    references.push_back({ins.text});
    ins.text = perturb_spatial_terms(ins.text, mode);
    hypotheses.push_back(ins.text);
  }

  PerturbationStudy study;
  study.mode = mode;
  study.original = compute_metrics(make_corpus(originals, references));
  study.perturbed = compute_metrics(make_corpus(hypotheses, references));
  study.grounding_acc_original = evaluate_corpus(instructions, scenes, thresholds, jobs).overall_acc();
  study.grounding_acc_perturbed = evaluate_corpus(perturbed, scenes, thresholds, jobs).overall_acc();
  return study;
}

}  // namespace coldkit
