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
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace coldkit {

using Tokens = std::vector<std::string>;

// Lowercase, drop . , ; ! ? and split on whitespace.
Tokens tokenize(std::string_view text);

struct CorpusPair {
  Tokens hypothesis;
  std::vector<Tokens> references;
};

struct TokenizedCorpus {
  std::vector<CorpusPair> pairs;

  // Throws InvariantViolation for a pair without references or an empty token.
  void validate() const;
};

TokenizedCorpus make_corpus(std::span<const std::string> hypotheses,
                            std::span<const std::vector<std::string>> references);

using BleuScores = std::array<double, 4>;

// Corpus-level BLEU without smoothing. Entry k-1 is B-k for k <= max_n and
// 0 beyond. Empty hypotheses are counted in `empty_hypotheses` when given.
BleuScores bleu(const TokenizedCorpus& corpus, int max_n = 4,
                std::size_t* empty_hypotheses = nullptr);

// Mean over pairs of the best LCS F1 against any reference.
double rouge_l(const TokenizedCorpus& corpus);

// Plain CIDEr (no length penalty), x10, one value per pair. Throws TooFewPairs.
std::vector<double> cider_per_pair(const TokenizedCorpus& corpus);
double cider(const TokenizedCorpus& corpus);

struct MetricReport {
  BleuScores bleu{};
  double rouge_l = 0.0;
  double cider = 0.0;
  std::size_t empty_hypotheses = 0;
};

MetricReport compute_metrics(const TokenizedCorpus& corpus);

}  // namespace coldkit
