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

#include <cmath>

#include <gtest/gtest.h>

#include "coldkit/errors.hpp"
#include "coldkit/metrics.hpp"
#include "coldkit/perturb.hpp"
#include "coldkit/rng.hpp"
#include "support/fixtures.hpp"
#include "support/oracles.hpp"

namespace coldkit {
namespace {

TokenizedCorpus corpus_of(const std::vector<std::pair<std::string, std::vector<std::string>>>& rows) {
  std::vector<std::string> hyps;
  std::vector<std::vector<std::string>> refs;
  for (const auto& [h, r] : rows) {
    hyps.push_back(h);
    refs.push_back(r);
  }
  return make_corpus(hyps, refs);
}

std::vector<oracle::Pair> oracle_pairs(const TokenizedCorpus& c) {
  std::vector<oracle::Pair> out;
  for (const auto& p : c.pairs) out.push_back({p.hypothesis, p.references});
  return out;
}

TEST(Tokenize, LowercasesAndDropsPunctuation) {
  EXPECT_EQ(tokenize("The Chair, near the TABLE."), (Tokens{"the", "chair", "near", "the", "table"}));
  EXPECT_TRUE(tokenize("  . ").empty());
}

TEST(Bleu, HandExample) {
  const auto c = corpus_of({{"the chair near the table", {"the chair close to the table"}}});
  const auto b = bleu(c);
  // p1 = 4/5, p2 = 2/4, p3 = 0, brevity exp(1 - 6/5).
  EXPECT_NEAR(b[0], 0.8 * std::exp(-0.2), 1e-12);
  EXPECT_NEAR(b[0], 0.6550, 1e-4);
  EXPECT_NEAR(b[1], std::sqrt(0.8 * 0.5) * std::exp(-0.2), 1e-12);
  EXPECT_EQ(b[2], 0.0);
  EXPECT_EQ(b[3], 0.0);
}

TEST(Bleu, IdentityIsOne) {
  const auto c = corpus_of({{"the chair closest to the table", {"the chair closest to the table"}}});
  for (double v : bleu(c)) EXPECT_DOUBLE_EQ(v, 1.0);
}

TEST(Bleu, CountsEmptyHypotheses) {
  const auto c = corpus_of({{"", {"the chair"}}, {"the chair", {"the chair"}}});
  std::size_t empty = 0;
  bleu(c, 4, &empty);
  EXPECT_EQ(empty, 1u);
}

TEST(RougeL, HandExample) {
  EXPECT_NEAR(rouge_l(corpus_of({{"a b c", {"a x c"}}})), 2.0 / 3.0, 1e-15);
  EXPECT_NEAR(rouge_l(corpus_of({{"a b c", {"x y", "c b a", "a b"}}})), 0.8, 1e-15);
}

TEST(Cider, IdentityPairsScoreTen) {
  const auto c = corpus_of({{"the red chair near the table", {"the red chair near the table"}},
                            {"a lamp on a desk", {"a lamp on a desk"}}});
  for (double v : cider_per_pair(c)) EXPECT_NEAR(v, 10.0, 1e-12);
  EXPECT_NEAR(cider(c), 10.0, 1e-12);
}

TEST(Cider, RepeatedTokensKeepSelfSimilarity) {
  const auto c = corpus_of({{"lamp lamp desk desk", {"lamp lamp desk desk"}},
                            {"chair near the table", {"chair near the table"}}});
  for (double v : cider_per_pair(c)) EXPECT_NEAR(v, 10.0, 1e-12);
}

TEST(Cider, ShortPairsMissHigherOrders) {
  // Two tokens give one bigram and no trigrams, so only two of four orders count.
  const auto c = corpus_of({{"chair table", {"chair table"}}, {"lamp desk bed", {"lamp desk bed"}}});
  const auto v = cider_per_pair(c);
  EXPECT_NEAR(v[0], 5.0, 1e-12);
  EXPECT_NEAR(v[1], 7.5, 1e-12);
}

TEST(Cider, TooFewPairs) {
  EXPECT_THROW(cider(corpus_of({{"the chair", {"the chair"}}})), TooFewPairs);
}

TEST(Cider, PairOrderDoesNotMatter) {
  auto rows = fixtures::hand_corpus();
  const auto before = cider_per_pair(corpus_of(rows));
  std::reverse(rows.begin(), rows.end());
  auto after = cider_per_pair(corpus_of(rows));
  std::reverse(after.begin(), after.end());
  for (std::size_t i = 0; i < before.size(); ++i) EXPECT_NEAR(before[i], after[i], 1e-12);
}

TEST(Corpus, ValidateRejectsMissingReferences) {
  TokenizedCorpus c;
  c.pairs.push_back({{"a"}, {}});
  EXPECT_THROW(c.validate(), InvariantViolation);
  c.pairs[0].references = {{"a", ""}};
  EXPECT_THROW(c.validate(), InvariantViolation);
}

std::vector<std::pair<std::string, std::vector<std::string>>> random_corpus(std::uint64_t seed) {
  static const std::vector<std::string> vocab = {"the", "chair", "table", "near", "far", "from",
                                                 "to", "lamp", "closest", "a", "on", "door"};
  SplitMix64 g(seed);
  auto sentence = [&] {
    std::string s;
    const int n = 1 + static_cast<int>(g.next() % 9);
    for (int i = 0; i < n; ++i) s += (i ? " " : "") + vocab[g.next() % vocab.size()];
    return s;
  };
  std::vector<std::pair<std::string, std::vector<std::string>>> rows;
  const int pairs = 2 + static_cast<int>(g.next() % 6);
  for (int i = 0; i < pairs; ++i) {
    std::vector<std::string> refs;
    const int r = 1 + static_cast<int>(g.next() % 3);
    for (int k = 0; k < r; ++k) refs.push_back(sentence());
    rows.push_back({sentence(), refs});
  }
  return rows;
}

TEST(Metrics, MatchOracleOnRandomCorpora) {
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    const auto c = corpus_of(random_corpus(seed));
    const auto o = oracle_pairs(c);
    const auto b = bleu(c);
    const auto ob = oracle::bleu(o);
    for (int k = 0; k < 4; ++k) EXPECT_NEAR(b[k], ob[k], 1e-9) << "seed " << seed;
    EXPECT_NEAR(rouge_l(c), oracle::rouge_l(o), 1e-9);
    const auto cp = cider_per_pair(c);
    const auto oc = oracle::cider(o);
    ASSERT_EQ(cp.size(), oc.size());
    for (std::size_t i = 0; i < cp.size(); ++i) EXPECT_NEAR(cp[i], oc[i], 1e-9);
  }
}

TEST(Metrics, BoundsHold) {
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    const auto m = compute_metrics(corpus_of(random_corpus(seed)));
    for (double v : m.bleu) {
      EXPECT_GE(v, 0.0);
      EXPECT_LE(v, 1.0);
    }
    EXPECT_GE(m.rouge_l, 0.0);
    EXPECT_LE(m.rouge_l, 1.0);
    EXPECT_GE(m.cider, 0.0);
  }
}

TEST(Bleu, MonotoneOnInstructionCorpus) {
  const auto b = bleu(corpus_of(fixtures::hand_corpus()));
  EXPECT_GE(b[0], b[1]);
  EXPECT_GE(b[1], b[2]);
  EXPECT_GE(b[2], b[3]);
}

TEST(Bleu, NotMonotoneInGeneral) {
  // Clipped unigram matches are scarce while the one bigram match is worth
  // more relative to the bigram count.
  const auto b = bleu(corpus_of({{"b b b b c b", {"b c c d", "c b d d a"}}}));
  EXPECT_NEAR(b[0], 1.0 / 3.0, 1e-12);
  EXPECT_GT(b[1], b[0]);
}

TEST(Perturb, Examples) {
  EXPECT_EQ(perturb_spatial_terms("the chair closest to the table", PerturbMode::close),
            "the chair close to the table");
  EXPECT_EQ(perturb_spatial_terms("the chair closest to the table", PerturbMode::far),
            "the chair far from the table");
  EXPECT_EQ(perturb_spatial_terms("the lamp on the table", PerturbMode::far),
            "the lamp far from the table");
  EXPECT_EQ(perturb_spatial_terms("the book between the lamp and the plant", PerturbMode::close),
            "the book close to the lamp");
  EXPECT_EQ(perturb_spatial_terms("the  bed", PerturbMode::close), "the bed");
}

TEST(Perturb, IdempotentAndModesDiffer) {
  for (const auto& [h, refs] : fixtures::hand_corpus()) {
    for (PerturbMode m : {PerturbMode::far, PerturbMode::close}) {
      const auto once = perturb_spatial_terms(h, m);
      EXPECT_EQ(perturb_spatial_terms(once, m), once) << h;
    }
  }
  EXPECT_NE(perturb_spatial_terms("the chair near the door", PerturbMode::far),
            perturb_spatial_terms("the chair near the door", PerturbMode::close));
  EXPECT_EQ(perturb_mode_from_string("far"), PerturbMode::far);
  EXPECT_EQ(perturb_mode_from_string("sideways"), std::nullopt);
}

TEST(PerturbationStudy, NoOpCorpusHasZeroDeltas) {
  SceneStore store;
  std::vector<Instruction> ins;
  for (int i = 0; i < 3; ++i) {
    Scene s = fixtures::s1();
    s.scene_id = "s" + std::to_string(i);
    store[s.scene_id] = s;
    ins.push_back({s.scene_id, 4, "the door", std::nullopt, InstructionStatus::exclusive});
  }
  ins.push_back({"s0", 1, "the chair close to the table", std::nullopt, InstructionStatus::exclusive});
  const auto st = perturbation_study(ins, store, PerturbMode::close);
  for (int k = 1; k <= 4; ++k) EXPECT_EQ(st.bleu_delta(k), 0.0);
  EXPECT_EQ(st.rouge_l_delta(), 0.0);
  EXPECT_EQ(st.cider_delta(), 0.0);
  EXPECT_EQ(st.grounding_delta(), 0.0);
  EXPECT_EQ(st.grounding_acc_original, 1.0);
}

TEST(PerturbationStudy, RelationWordsMatterForGrounding) {
  SceneStore store;
  std::vector<Instruction> ins;
  for (int i = 0; i < 3; ++i) {
    Scene s = fixtures::s1();
    s.scene_id = "s" + std::to_string(i);
    store[s.scene_id] = s;
    ins.push_back({s.scene_id, 2, "the chair farthest from the table", std::nullopt,
                   InstructionStatus::exclusive});
  }
  const auto st = perturbation_study(ins, store, PerturbMode::close);
  EXPECT_EQ(st.grounding_acc_original, 1.0);
  EXPECT_EQ(st.grounding_acc_perturbed, 0.0);
  EXPECT_EQ(st.grounding_delta(), -1.0);
  EXPECT_LT(st.bleu_delta(1), 0.0);
}

}  // namespace
}  // namespace coldkit
