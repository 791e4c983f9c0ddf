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

#include "coldkit/metrics.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <map>
#include <set>

#include "coldkit/errors.hpp"

namespace coldkit {

namespace {

using NgramCounts = std::map<std::string, double>;

NgramCounts ngrams(const Tokens& t, int n) {
  NgramCounts out;
  for (std::size_t i = 0; i + static_cast<std::size_t>(n) <= t.size(); ++i) {
    std::string key = t[i];
    for (int k = 1; k < n; ++k) {
      key += '\x1f';
      key += t[i + static_cast<std::size_t>(k)];
    }
    out[key] += 1.0;
  }
  return out;
}

std::size_t lcs_length(const Tokens& a, const Tokens& b) {
  std::vector<std::size_t> prev(b.size() + 1, 0), cur(b.size() + 1, 0);
  for (std::size_t i = 1; i <= a.size(); ++i) {
    for (std::size_t j = 1; j <= b.size(); ++j) {
      cur[j] = a[i - 1] == b[j - 1] ? prev[j - 1] + 1 : std::max(prev[j], cur[j - 1]);
    }
    std::swap(prev, cur);
  }
  return prev[b.size()];
}

}  // namespace

Tokens tokenize(std::string_view text) {
  Tokens out;
  std::string cur;
  for (char ch : text) {
    const auto c = static_cast<unsigned char>(ch);
    if (std::isspace(c)) {
      if (!cur.empty()) out.push_back(std::move(cur));
      cur.clear();
    } else if (ch == '.' || ch == ',' || ch == ';' || ch == '!' || ch == '?') {
      continue;
    } else {
      cur.push_back(static_cast<char>(std::tolower(c)));
    }
  }
  if (!cur.empty()) out.push_back(std::move(cur));
  return out;
}

void TokenizedCorpus::validate() const {
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    if (pairs[i].references.empty()) {
      throw InvariantViolation("pair " + std::to_string(i) + " has no reference");
    }
    auto has_empty = [](const Tokens& t) {
      return std::any_of(t.begin(), t.end(), [](const std::string& s) { return s.empty(); });
    };
    if (has_empty(pairs[i].hypothesis) ||
        std::any_of(pairs[i].references.begin(), pairs[i].references.end(), has_empty)) {
      throw InvariantViolation("pair " + std::to_string(i) + " contains an empty token");
    }
  }
}

TokenizedCorpus make_corpus(std::span<const std::string> hypotheses,
                            std::span<const std::vector<std::string>> references) {
  if (hypotheses.size() != references.size()) {
    throw InvariantViolation("hypothesis and reference counts differ");
  }
  TokenizedCorpus c;
  for (std::size_t i = 0; i < hypotheses.size(); ++i) {
    CorpusPair p;
    p.hypothesis = tokenize(hypotheses[i]);
    for (const auto& r : references[i]) p.references.push_back(tokenize(r));
    c.pairs.push_back(std::move(p));
  }
  c.validate();
  return c;
}

BleuScores bleu(const TokenizedCorpus& corpus, int max_n, std::size_t* empty_hypotheses) {
  corpus.validate();
  if (max_n < 1 || max_n > 4) throw InvariantViolation("max_n must be in 1..4");

  std::array<double, 4> matched{}, total{};
  double hyp_len = 0.0, ref_len = 0.0;
  std::size_t empties = 0;
  for (const auto& p : corpus.pairs) {
    const auto c = p.hypothesis.size();
    if (c == 0) ++empties;
    hyp_len += static_cast<double>(c);
    // Closest reference length; shorter wins ties.
    std::size_t best = p.references.front().size();
    for (const auto& r : p.references) {
      const auto d = [&](std::size_t len) { return len > c ? len - c : c - len; };
      if (d(r.size()) < d(best) || (d(r.size()) == d(best) && r.size() < best)) best = r.size();
    }
    ref_len += static_cast<double>(best);

    for (int n = 1; n <= max_n; ++n) {
      const auto hyp = ngrams(p.hypothesis, n);
      NgramCounts max_ref;
      for (const auto& r : p.references) {
        for (const auto& [g, k] : ngrams(r, n)) max_ref[g] = std::max(max_ref[g], k);
      }
      for (const auto& [g, k] : hyp) {
        const auto it = max_ref.find(g);
        if (it != max_ref.end()) matched[n - 1] += std::min(k, it->second);
        total[n - 1] += k;
      }
    }
  }
  if (empty_hypotheses) *empty_hypotheses = empties;

  BleuScores out{};
  if (hyp_len == 0.0) return out;
  const double bp = hyp_len > ref_len ? 1.0 : std::exp(1.0 - ref_len / hyp_len);
  double log_sum = 0.0;
  for (int k = 1; k <= max_n; ++k) {
    if (matched[k - 1] == 0.0) break;  // this and every higher order stay 0
    log_sum += std::log(matched[k - 1] / total[k - 1]);
    out[k - 1] = bp * std::exp(log_sum / k);
  }
  return out;
}

double rouge_l(const TokenizedCorpus& corpus) {
  corpus.validate();
  if (corpus.pairs.empty()) return 0.0;
  double sum = 0.0;
  for (const auto& p : corpus.pairs) {
    double best = 0.0;
    for (const auto& r : p.references) {
      if (p.hypothesis.empty() || r.empty()) continue;
      const auto lcs = static_cast<double>(lcs_length(p.hypothesis, r));
      const double prec = lcs / static_cast<double>(p.hypothesis.size());
      const double rec = lcs / static_cast<double>(r.size());
      if (prec + rec > 0.0) best = std::max(best, 2.0 * prec * rec / (prec + rec));
    }
    sum += best;
  }
  return sum / static_cast<double>(corpus.pairs.size());
}

std::vector<double> cider_per_pair(const TokenizedCorpus& corpus) {
  corpus.validate();
  const std::size_t n_pairs = corpus.pairs.size();
  if (n_pairs < 2) throw TooFewPairs("CIDEr needs at least 2 pairs, got " + std::to_string(n_pairs));
  const double log_n = std::log(static_cast<double>(n_pairs));

  std::vector<double> scores(n_pairs, 0.0);
  for (int n = 1; n <= 4; ++n) {
    std::map<std::string, double> df;
    for (const auto& p : corpus.pairs) {
      std::set<std::string> seen;
      for (const auto& r : p.references) {
        for (const auto& [g, k] : ngrams(r, n)) seen.insert(g);
      }
      for (const auto& g : seen) df[g] += 1.0;
    }
    auto weigh = [&](NgramCounts counts) {
      for (auto& [g, v] : counts) {
        const auto it = df.find(g);
        v *= log_n - std::log(std::max(1.0, it == df.end() ? 0.0 : it->second));
      }
      return counts;
    };
    auto squared_norm = [](const NgramCounts& v) {
      double s = 0.0;
      for (const auto& [g, x] : v) s += x * x;
      return s;
    };

    for (std::size_t i = 0; i < n_pairs; ++i) {
      const auto& p = corpus.pairs[i];
      const auto hyp = weigh(ngrams(p.hypothesis, n));
      const double hyp_sq = squared_norm(hyp);
      double sum = 0.0;
      for (const auto& r : p.references) {
        const auto ref = weigh(ngrams(r, n));
        const double ref_sq = squared_norm(ref);
        if (hyp_sq == 0.0 || ref_sq == 0.0) continue;
        double dot = 0.0;
        for (const auto& [g, x] : hyp) {
          const auto it = ref.find(g);
          if (it != ref.end()) dot += x * it->second;
        }
        // sqrt(a*a) == a exactly, so a self-pair scores exactly 1.
        sum += dot / std::sqrt(hyp_sq * ref_sq);
      }
      scores[i] += sum / static_cast<double>(p.references.size());
    }
  }
  for (double& s : scores) s = s / 4.0 * 10.0;
  return scores;
}

double cider(const TokenizedCorpus& corpus) {
  const auto per = cider_per_pair(corpus);
  double s = 0.0;
  for (double x : per) s += x;
  return s / static_cast<double>(per.size());
}

MetricReport compute_metrics(const TokenizedCorpus& corpus) {
  MetricReport r;
  r.bleu = bleu(corpus, 4, &r.empty_hypotheses);
  r.rouge_l = rouge_l(corpus);
  r.cider = cider(corpus);
  return r;
}

}  // namespace coldkit
