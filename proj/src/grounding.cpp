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

#include "coldkit/grounding.hpp"

#include <algorithm>
#include <cctype>

#include "coldkit/distractors.hpp"
#include "coldkit/errors.hpp"
#include "coldkit/parallel.hpp"

namespace coldkit {

namespace {

std::vector<std::string> split_words(const std::string& s) {
  std::vector<std::string> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && s[i] == ' ') ++i;
    const std::size_t start = i;
    while (i < s.size() && s[i] != ' ') ++i;
    if (i > start) out.push_back(s.substr(start, i - start));
  }
  return out;
}

struct RelPhrase {
  std::vector<std::string> words;
  RelationKind kind;
};

const std::vector<RelPhrase>& rel_phrases() {
  // Two-word phrases first so that the first match is the longest.
  static const std::vector<RelPhrase> phrases = {
      {{"closest", "to"}, RelationKind::closest},
      {{"farthest", "from"}, RelationKind::farthest},
      {{"close", "to"}, RelationKind::near},
      {{"next", "to"}, RelationKind::near},
      {{"far", "from"}, RelationKind::far},
      {{"near"}, RelationKind::near},
      {{"above"}, RelationKind::above},
      {{"below"}, RelationKind::below},
      {{"on"}, RelationKind::supported_by},
      {{"between"}, RelationKind::between},
  };
  return phrases;
}

bool starts_rel_phrase(const std::string& word) {
  const auto& ps = rel_phrases();
  return std::any_of(ps.begin(), ps.end(), [&](const RelPhrase& p) { return p.words[0] == word; });
}

class InstructionParser {
 public:
  InstructionParser(std::string_view text, const Lexicon& lexicon)
      : text_(text), lexicon_(lexicon) {
    tokenize();
  }

  ParsedInstruction parse() {
    ParsedInstruction out;
    expect("the");
    out.target_category = category();
    if (at_end()) return out;

    const RelationKind kind = relation();
    out.relation = kind;
    expect("the");
    out.anchor_categories.push_back(category());
    if (kind == RelationKind::between) {
      expect("and");
      expect("the");
      out.anchor_categories.push_back(category());
    }
    if (!at_end()) throw ParseError("unexpected word '" + words_[pos_] + "'", offsets_[pos_]);
    return out;
  }

 private:
  void tokenize() {
    std::size_t end = text_.size();
    while (end > 0 && std::isspace(static_cast<unsigned char>(text_[end - 1]))) --end;
    if (end > 0 && text_[end - 1] == '.') --end;
    std::size_t i = 0;
    while (i < end) {
      while (i < end && std::isspace(static_cast<unsigned char>(text_[i]))) ++i;
      const std::size_t start = i;
      std::string w;
      while (i < end && !std::isspace(static_cast<unsigned char>(text_[i]))) {
        w.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(text_[i]))));
        ++i;
      }
      if (!w.empty()) {
        words_.push_back(std::move(w));
        offsets_.push_back(start);
      }
    }
  }

  bool at_end() const { return pos_ >= words_.size(); }
  std::size_t offset() const { return at_end() ? text_.size() : offsets_[pos_]; }

  void expect(const char* word) {
    if (at_end() || words_[pos_] != word) {
      throw ParseError(std::string("expected '") + word + "'", offset());
    }
    ++pos_;
  }

  bool boundary(std::size_t i) const {
    return i >= words_.size() || words_[i] == "and" || starts_rel_phrase(words_[i]);
  }

  std::string category() {
    if (at_end()) throw ParseError("expected category", offset());
    const std::size_t m = lexicon_.longest_match(words_, pos_);
    if (m > 0 && boundary(pos_ + m)) {
      std::string c = join(pos_, pos_ + m);
      pos_ += m;
      return c;
    }
    std::size_t end = pos_;
    while (!boundary(end)) ++end;
    if (end == pos_) throw ParseError("expected category", offset());
    const std::string phrase = join(pos_, end);
    throw UnknownCategory("unknown category '" + phrase + "' at byte " +
                          std::to_string(offsets_[pos_]));
  }

  RelationKind relation() {
    for (const auto& p : rel_phrases()) {
      if (pos_ + p.words.size() > words_.size()) continue;
      if (std::equal(p.words.begin(), p.words.end(), words_.begin() + static_cast<long>(pos_))) {
        pos_ += p.words.size();
        return p.kind;
      }
    }
    throw ParseError("expected relation phrase", offset());
  }

  std::string join(std::size_t from, std::size_t to) const {
    std::string s;
    for (std::size_t i = from; i < to; ++i) {
      if (i > from) s += ' ';
      s += words_[i];
    }
    return s;
  }

  std::string_view text_;
  const Lexicon& lexicon_;
  std::vector<std::string> words_;
  std::vector<std::size_t> offsets_;
  std::size_t pos_ = 0;
};

std::vector<const ObjectInstance*> objects_of(const Scene& scene, const std::string& category) {
  std::vector<const ObjectInstance*> out;
  for (const auto& o : scene.objects) {
    if (o.category == category) out.push_back(&o);
  }
  return out;
}

// Cartesian product of anchor instances, skipping repeated objects.
std::vector<std::vector<const ObjectInstance*>> anchor_assignments(
    const Scene& scene, const std::vector<std::string>& categories) {
  std::vector<std::vector<const ObjectInstance*>> out{{}};
  for (const auto& c : categories) {
    const auto instances = objects_of(scene, c);
    std::vector<std::vector<const ObjectInstance*>> next;
    for (const auto& partial : out) {
      for (const auto* o : instances) {
        if (std::find(partial.begin(), partial.end(), o) != partial.end()) continue;
        auto extended = partial;
        extended.push_back(o);
        next.push_back(std::move(extended));
      }
    }
    out = std::move(next);
  }
  return out;
}

}  // namespace

Lexicon::Lexicon(std::span<const std::string> categories) {
  for (const auto& c : categories) add(c);
}

Lexicon Lexicon::from_scene(const Scene& scene) {
  Lexicon lex;
  for (const auto& o : scene.objects) lex.add(o.category);
  return lex;
}

void Lexicon::add(const std::string& category) {
  if (!entries_.insert(category).second) return;
  auto words = split_words(category);
  if (words.empty()) return;
  auto& bucket = by_first_word_[words.front()];
  bucket.push_back(std::move(words));
  std::stable_sort(bucket.begin(), bucket.end(),
                   [](const auto& a, const auto& b) { return a.size() > b.size(); });
}

std::size_t Lexicon::longest_match(std::span<const std::string> words, std::size_t pos) const {
  if (pos >= words.size()) return 0;
  const auto it = by_first_word_.find(words[pos]);
  if (it == by_first_word_.end()) return 0;
  for (const auto& entry : it->second) {
    if (pos + entry.size() <= words.size() &&
        std::equal(entry.begin(), entry.end(), words.begin() + static_cast<long>(pos))) {
      return entry.size();
    }
  }
  return 0;
}

ParsedInstruction parse_instruction(std::string_view text, const Lexicon& lexicon) {
  if (lexicon.empty()) throw InvariantViolation("lexicon is empty");
  return InstructionParser(text, lexicon).parse();
}

std::vector<IdSet> ground_per_assignment(const ParsedInstruction& parsed, const Scene& scene,
                                         const RelationThresholds& thresholds) {
  const auto candidates = objects_of(scene, parsed.target_category);
  if (!parsed.relation) {
    IdSet all;
    for (const auto* c : candidates) all.insert(c->id);
    return {all};
  }
  if (static_cast<int>(parsed.anchor_categories.size()) != arity(*parsed.relation)) {
    throw ArityMismatch("parsed instruction has wrong anchor count");
  }
  std::vector<IdSet> out;
  for (const auto& assignment : anchor_assignments(scene, parsed.anchor_categories)) {
    IdSet matched;
    for (const auto* c : candidates) {
      if (relation_holds(*parsed.relation, *c, assignment, candidates, thresholds)) {
        matched.insert(c->id);
      }
    }
    out.push_back(std::move(matched));
  }
  return out;
}

IdSet ground(const ParsedInstruction& parsed, const Scene& scene,
             const RelationThresholds& thresholds) {
  IdSet out;
  for (const auto& s : ground_per_assignment(parsed, scene, thresholds)) {
    out.insert(s.begin(), s.end());
  }
  return out;
}

std::string_view to_string(Verdict verdict) {
  switch (verdict) {
    case Verdict::unique_target: return "unique_target";
    case Verdict::unique_wrong: return "unique_wrong";
    case Verdict::ambiguous: return "ambiguous";
    case Verdict::empty: return "empty";
  }
  return "empty";
}

std::string_view to_string(ErrorMode mode) {
  switch (mode) {
    case ErrorMode::hallucination: return "hallucination";
    case ErrorMode::ambiguous_anchor: return "ambiguous_anchor";
    case ErrorMode::wrong_anchor: return "wrong_anchor";
    case ErrorMode::wrong_description: return "wrong_description";
  }
  return "hallucination";
}

GroundingResult classify_error(const ParsedInstruction& parsed, const IdSet& result_ids,
                               const Scene& scene, ObjectId expected_target,
                               const RelationThresholds& thresholds) {
  if (!scene.contains(expected_target)) {
    throw UnknownTarget("expected target " + std::to_string(expected_target) + " not in scene");
  }
  GroundingResult r;
  r.matched_ids = result_ids;
  if (result_ids.empty()) {
    r.verdict = Verdict::empty;
  } else if (result_ids.size() == 1) {
    r.verdict = *result_ids.begin() == expected_target ? Verdict::unique_target
                                                       : Verdict::unique_wrong;
  } else {
    r.verdict = Verdict::ambiguous;
  }
  if (r.verdict == Verdict::unique_target) return r;

  bool missing = scene.count_category(parsed.target_category) == 0;
  bool repeated_anchor = false;
  for (const auto& c : parsed.anchor_categories) {
    const int n = scene.count_category(c);
    missing = missing || n == 0;
    repeated_anchor = repeated_anchor || n >= 2;
  }
  if (missing) {
    r.error_mode = ErrorMode::hallucination;
    return r;
  }
  if (repeated_anchor) {
    const auto per = ground_per_assignment(parsed, scene, thresholds);
    if (std::any_of(per.begin(), per.end(), [&](const IdSet& s) { return s != per.front(); })) {
      r.error_mode = ErrorMode::ambiguous_anchor;
      return r;
    }
  }
  r.error_mode = result_ids.count(expected_target) == 0 ? ErrorMode::wrong_description
                                                        : ErrorMode::wrong_anchor;
  return r;
}

TextGrounding ground_text(std::string_view text, const Scene& scene, ObjectId expected_target,
                          const Lexicon& lexicon, const RelationThresholds& thresholds) {
  if (!scene.contains(expected_target)) {
    throw UnknownTarget("expected target " + std::to_string(expected_target) + " not in scene");
  }
  TextGrounding out;
  try {
    out.parsed = parse_instruction(text, lexicon);
  } catch (const UnknownCategory& e) {
    out.result.verdict = Verdict::empty;
    out.result.error_mode = ErrorMode::hallucination;
    out.parse_message = e.what();
    return out;
  } catch (const ParseError& e) {
    out.result.verdict = Verdict::empty;
    out.parse_failed = true;
    out.parse_message = e.what();
    return out;
  }
  const IdSet matched = ground(*out.parsed, scene, thresholds);
  out.result = classify_error(*out.parsed, matched, scene, expected_target, thresholds);
  return out;
}

InstructionStatus verify_status(std::string_view text, const Scene& scene, ObjectId target,
                                const Lexicon& lexicon, const RelationThresholds& thresholds) {
  const auto g = ground_text(text, scene, target, lexicon, thresholds);
  if (g.result.verdict == Verdict::unique_target) return InstructionStatus::exclusive;
  if (g.result.matched_ids.count(target) != 0) return InstructionStatus::ambiguous;
  return InstructionStatus::failed;
}

Lexicon corpus_lexicon(const SceneStore& scenes) {
  Lexicon lex(default_category_pool());
  for (const auto& [id, scene] : scenes) {
    for (const auto& o : scene.objects) lex.add(o.category);
  }
  return lex;
}

std::string distractor_stratum(std::size_t n) {
  return n >= 4 ? std::string("4+") : std::to_string(n);
}

EvaluationReport evaluate_corpus(std::span<const Instruction> instructions,
                                 const SceneStore& scenes, const RelationThresholds& thresholds,
                                 int jobs) {
  for (const auto& ins : instructions) {
    if (scenes.count(ins.scene_id) == 0) throw MissingScene("scene '" + ins.scene_id + "' not found");
  }
  const Lexicon lexicon = corpus_lexicon(scenes);
  const OracleClassifier oracle;

  EvaluationReport report;
  report.outcomes.resize(instructions.size());
  parallel_for(instructions.size(), jobs, [&](std::size_t i) {
    const auto& ins = instructions[i];
    const Scene& scene = scenes.at(ins.scene_id);
    auto& out = report.outcomes[i];
    out.distractor_count = identify_distractors(scene, ins.target_id, oracle).size();
    out.grounding = ground_text(ins.text, scene, ins.target_id, lexicon, thresholds);
  });

  for (const auto& out : report.outcomes) {
    const bool ok = out.grounding.result.verdict == Verdict::unique_target;
    auto& stratum = report.by_distractors[distractor_stratum(out.distractor_count)];
    ++report.overall.total;
    ++stratum.total;
    if (ok) {
      ++report.overall.correct;
      ++stratum.correct;
    }
    if (out.grounding.result.error_mode) ++report.errors[*out.grounding.result.error_mode];
    if (out.grounding.parse_failed) ++report.parse_failures;
  }
  return report;
}

}  // namespace coldkit
