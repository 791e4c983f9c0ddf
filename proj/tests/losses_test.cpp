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
#include "coldkit/losses.hpp"
#include "coldkit/pipeline.hpp"
#include "coldkit/rng.hpp"

namespace coldkit {
namespace {

using Mat = Matrix<double>;
using Vec = Vector<double>;

Mat random_matrix(SplitMix64& g, int rows, int cols) {
  Mat m(rows, cols);
  for (Eigen::Index k = 0; k < m.size(); ++k) m.data()[k] = g.uniform(-1, 1);
  return m;
}

Vec random_distribution(SplitMix64& g, int n) {
  Vec p(n);
  for (int i = 0; i < n; ++i) p[i] = 0.05 + g.uniform();
  return p / p.sum();
}

TEST(Stage1Loss, HandExample) {
  Mat v(1, 2), t(1, 2);
  v << 1, 0;
  t << 0, 1;
  // mse = (1 + 1) / 2, 1 - cos = 1
  EXPECT_NEAR(stage1_loss(v, t, 1.0, 1.0), 2.0, 1e-15);
  EXPECT_NEAR(stage1_loss(v, t, 1.0, 0.0), 1.0, 1e-15);
  EXPECT_NEAR(stage1_loss(v, t, 0.0, 1.0), 1.0, 1e-15);
}

TEST(Stage1Loss, ZeroExactlyAtTarget) {
  SplitMix64 g(3);
  for (int i = 0; i < 50; ++i) {
    const Mat v = random_matrix(g, 1 + i % 8, 1 + i % 16);
    EXPECT_EQ(stage1_loss(v, v, 1.0, 1.0), 0.0);
    EXPECT_TRUE(stage1_loss_grad(v, v, 1.0, 1.0).isZero(1e-15));
  }
}

TEST(Stage1Loss, CosineIgnoresScale) {
  SplitMix64 g(4);
  const Mat t = random_matrix(g, 4, 6);
  const Mat v = 2.0 * t;
  EXPECT_NEAR(stage1_loss(v, t, 0.0, 1.0), 0.0, 1e-15);
  EXPECT_GT(stage1_loss(v, t, 1.0, 1.0), 0.0);
}

TEST(Stage1Loss, MseGradient) {
  SplitMix64 g(5);
  const Mat v = random_matrix(g, 3, 4);
  const Mat t = random_matrix(g, 3, 4);
  const Mat expected = 2.0 * (v - t) / 12.0;
  EXPECT_TRUE(stage1_loss_grad(v, t, 1.0, 0.0).isApprox(expected, 1e-14));
}

TEST(Stage1Loss, LinearInWeights) {
  SplitMix64 g(6);
  const Mat v = random_matrix(g, 5, 7);
  const Mat t = random_matrix(g, 5, 7);
  const double mse = stage1_loss(v, t, 1.0, 0.0);
  const double cos = stage1_loss(v, t, 0.0, 1.0);
  EXPECT_NEAR(stage1_loss(v, t, 3.0, 0.5), 3.0 * mse + 0.5 * cos, 1e-12);
  EXPECT_NEAR(stage1_loss(v, t, 6.0, 1.0), 2.0 * stage1_loss(v, t, 3.0, 0.5), 1e-12);
}

TEST(Stage1Loss, Errors) {
  Mat v = Mat::Ones(2, 3), t = Mat::Ones(2, 3);
  v.row(1).setZero();
  EXPECT_THROW(stage1_loss(v, t, 1.0, 1.0), ZeroNormVector);
  EXPECT_NO_THROW(stage1_loss(v, t, 1.0, 0.0));
  EXPECT_THROW(stage1_loss(Mat::Ones(2, 3), Mat::Ones(3, 2), 1.0, 1.0), InvariantViolation);
  EXPECT_THROW(stage1_loss(t, t, -1.0, 1.0), InvariantViolation);
  v = t;
  v(0, 0) = std::nan("");
  EXPECT_THROW(stage1_loss(v, t, 1.0, 1.0), InvariantViolation);
}

TEST(Stage1Loss, GradientMatchesFiniteDifferences) {
  SplitMix64 g(7);
  for (int i = 0; i < 30; ++i) {
    const int n = 1 + static_cast<int>(g.next() % 8);
    const int d = 1 + static_cast<int>(g.next() % 16);
    const Mat v = random_matrix(g, n, d);
    const Mat t = random_matrix(g, n, d);
    const double alpha = g.uniform(0, 2), beta = g.uniform(0, 2);
    const Mat numeric = numerical_gradient<double>(
        [&](const Mat& x) { return stage1_loss(x, t, alpha, beta); }, v);
    EXPECT_LT(gradient_relative_error(stage1_loss_grad(v, t, alpha, beta), numeric), 1e-5);
  }
}

TEST(CrossEntropy, HandExamples) {
  EXPECT_NEAR(cross_entropy(Eigen::Vector2d(1, 0), Eigen::Vector2d(0.5, 0.5)), std::log(2.0), 1e-15);
  for (int v : {2, 5, 32}) {
    const Vec u = Vec::Constant(v, 1.0 / v);
    EXPECT_NEAR(cross_entropy(u, u), std::log(static_cast<double>(v)), 1e-12);
  }
  EXPECT_EQ(cross_entropy(Eigen::Vector3d(0, 1, 0), Eigen::Vector3d(0, 1, 0)), 0.0);
  EXPECT_NEAR(cross_entropy(Eigen::Vector3d(0, 1, 0), Eigen::Vector3d(0.25, 0.5, 0.25)),
              std::log(2.0), 1e-15);
  // A zero prediction under positive truth hits the floor, not infinity.
  EXPECT_NEAR(cross_entropy(Eigen::Vector2d(1, 0), Eigen::Vector2d(0, 1)), -std::log(1e-12), 1e-9);
}

TEST(CrossEntropy, Errors) {
  EXPECT_THROW(cross_entropy(Eigen::Vector2d(0.5, 0.4), Eigen::Vector2d(0.5, 0.5)), InvariantViolation);
  EXPECT_THROW(cross_entropy(Eigen::Vector2d(1, 0), Eigen::Vector3d(0.2, 0.3, 0.5)), InvariantViolation);
  EXPECT_THROW(cross_entropy(Eigen::Vector2d(1.5, -0.5), Eigen::Vector2d(0.5, 0.5)), InvariantViolation);
  EXPECT_THROW(cross_entropy(Eigen::Vector2d(0.5, 0.5), Eigen::Vector2d(1.5, -0.5)), InvariantViolation);
}

TEST(CrossEntropy, GibbsInequality) {
  SplitMix64 g(8);
  for (int i = 0; i < 500; ++i) {
    const int n = 2 + static_cast<int>(g.next() % 31);
    const Vec y = random_distribution(g, n);
    const Vec p = random_distribution(g, n);
    EXPECT_GE(cross_entropy(y, p), cross_entropy(y, y) - 1e-12);
  }
}

TEST(CrossEntropy, LogitsAgreeWithProbabilities) {
  SplitMix64 g(9);
  for (int i = 0; i < 100; ++i) {
    const int n = 2 + static_cast<int>(g.next() % 31);
    Vec logits(n);
    for (int k = 0; k < n; ++k) logits[k] = g.uniform(-5, 5);
    const Vec y = random_distribution(g, n);
    EXPECT_NEAR(cross_entropy_from_logits(y, logits), cross_entropy(y, softmax(logits)), 1e-10);
    const Mat numeric = numerical_gradient<double>(
        [&](const Mat& x) { return cross_entropy_from_logits(y, Vec(x)); }, Mat(logits));
    EXPECT_LT(gradient_relative_error(Mat(cross_entropy_logits_grad(y, logits)), numeric), 1e-5);
  }
}

TEST(CrossEntropy, ProbabilityGradient) {
  const Eigen::Vector3d y(0.2, 0.3, 0.5);
  const Eigen::Vector3d p(0.4, 0.4, 0.2);
  EXPECT_TRUE(cross_entropy_grad(y, p).isApprox(Eigen::Vector3d(-0.5, -0.75, -2.5), 1e-15));
}

TEST(LossSelftest, Passes) {
  const auto s = run_loss_selftest(1, 20, 200);
  EXPECT_TRUE(s.passed());
  EXPECT_EQ(s.batches, 20);
  EXPECT_EQ(s.zero_iff_failures, 0);
  EXPECT_EQ(s.gibbs_violations, 0);
}

}  // namespace
}  // namespace coldkit
