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

#include <algorithm>

#include "coldkit/losses.hpp"
#include "coldkit/pipeline.hpp"
#include "coldkit/rng.hpp"

namespace coldkit {

namespace {

Matrix<double> random_matrix(SplitMix64& rng, Eigen::Index rows, Eigen::Index cols) {
  Matrix<double> m(rows, cols);
  for (Eigen::Index k = 0; k < m.size(); ++k) m.data()[k] = rng.uniform(-1.0, 1.0);
  return m;
}

Vector<double> random_distribution(SplitMix64& rng, Eigen::Index size) {
  Vector<double> p(size);
  for (Eigen::Index k = 0; k < size; ++k) p[k] = rng.uniform(0.01, 1.0);
  return p / p.sum();
}

// Probabilities go down to ~5e-4 where the third derivative of the log is
// ~1e10, so the default step's truncation error dominates.
constexpr double kProbabilityStep = 1e-7;

}  // namespace

bool LossSelftestSummary::passed() const {
  return batches > 0 && max_stage1_error <= kGradientTolerance &&
         max_probability_grad_error <= kGradientTolerance &&
         max_logit_grad_error <= kGradientTolerance && zero_iff_failures == 0 &&
         gibbs_violations == 0;
}

LossSelftestSummary run_loss_selftest(std::uint64_t seed, int batches, int distribution_pairs) {
  LossSelftestSummary s;
  SplitMix64 rng(seed);
  for (int b = 0; b < batches; ++b) {
    const auto n = static_cast<Eigen::Index>(1 + rng.below(8));
    const auto d = static_cast<Eigen::Index>(1 + rng.below(16));
    const double alpha = rng.uniform(0.0, 2.0);
    const double beta = rng.uniform(0.0, 2.0);
    const Matrix<double> v = random_matrix(rng, n, d);
    const Matrix<double> t = random_matrix(rng, n, d);

    const Matrix<double> analytic = stage1_loss_grad(v, t, alpha, beta);
    const Matrix<double> numeric = numerical_gradient<double>(
        [&](const Matrix<double>& x) { return stage1_loss(x, t, alpha, beta); }, v);
    s.max_stage1_error = std::max(s.max_stage1_error, gradient_relative_error(analytic, numeric));

    const double a_pos = alpha + 0.1;
    if (stage1_loss(v, v, a_pos, beta) != 0.0 || !(stage1_loss(v, t, a_pos, beta) > 0.0)) {
      ++s.zero_iff_failures;
    }

    const auto vocab = static_cast<Eigen::Index>(2 + rng.below(31));
    const Vector<double> truth = random_distribution(rng, vocab);
    const Vector<double> predicted = random_distribution(rng, vocab);
    const Matrix<double> p_analytic = cross_entropy_grad(truth, predicted);
    const Matrix<double> p_numeric = numerical_gradient<double>(
        [&](const Matrix<double>& x) {
          return -(truth.array() * x.array().log()).sum();
        },
        predicted, kProbabilityStep);
    s.max_probability_grad_error =
        std::max(s.max_probability_grad_error, gradient_relative_error(p_analytic, p_numeric));

    const Vector<double> logits = 3.0 * random_matrix(rng, vocab, 1);
    const Matrix<double> l_analytic = cross_entropy_logits_grad(truth, logits);
    const Matrix<double> l_numeric = numerical_gradient<double>(
        [&](const Matrix<double>& x) { return cross_entropy_from_logits(truth, x.col(0)); },
        logits);
    s.max_logit_grad_error =
        std::max(s.max_logit_grad_error, gradient_relative_error(l_analytic, l_numeric));
    ++s.batches;
  }
  for (int k = 0; k < distribution_pairs; ++k) {
    const auto vocab = static_cast<Eigen::Index>(1 + rng.below(32));
    const Vector<double> y = random_distribution(rng, vocab);
    const Vector<double> yhat = random_distribution(rng, vocab);
    if (cross_entropy(y, yhat) < cross_entropy(y, y)) ++s.gibbs_violations;
  }
  return s;
}

}  // namespace coldkit
