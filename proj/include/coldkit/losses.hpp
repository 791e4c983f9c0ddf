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

#include <algorithm>
#include <cmath>
#include <functional>

#include <Eigen/Core>

#include "coldkit/errors.hpp"

namespace coldkit {

template <typename Scalar>
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

// Projected features `vectors` against target embeddings `targets`, one row
// per example.
template <typename Scalar>
struct EmbeddingBatch {
  Matrix<Scalar> vectors;
  Matrix<Scalar> targets;
  Scalar alpha = Scalar(1);
  Scalar beta = Scalar(1);
};

namespace detail {

template <typename A, typename B, typename Scalar>
void check_batch(const Eigen::MatrixBase<A>& v, const Eigen::MatrixBase<B>& t, Scalar alpha,
                 Scalar beta) {
  if (v.rows() != t.rows() || v.cols() != t.cols() || v.rows() == 0 || v.cols() == 0) {
    throw InvariantViolation("embedding batch shapes differ or are empty");
  }
  if (!v.allFinite() || !t.allFinite()) throw InvariantViolation("embedding batch is not finite");
  if (!(alpha >= Scalar(0)) || !(beta >= Scalar(0))) {
    throw InvariantViolation("alpha and beta must be non-negative");
  }
  if (beta > Scalar(0)) {
    for (Eigen::Index i = 0; i < v.rows(); ++i) {
      if (v.row(i).squaredNorm() == Scalar(0) || t.row(i).squaredNorm() == Scalar(0)) {
        throw ZeroNormVector("row " + std::to_string(i) + " has zero norm");
      }
    }
  }
}

}  // namespace detail

// alpha * mean((v - t)^2 over batch and dims) + beta * mean_i(1 - cos(v_i, t_i)).
template <typename A, typename B, typename Scalar = typename A::Scalar>
Scalar stage1_loss(const Eigen::MatrixBase<A>& v, const Eigen::MatrixBase<B>& t, Scalar alpha,
                   Scalar beta) {
  detail::check_batch(v, t, alpha, beta);
  const auto n = static_cast<Scalar>(v.rows());
  const auto count = static_cast<Scalar>(v.size());
  Scalar loss = alpha * (v - t).squaredNorm() / count;
  if (beta > Scalar(0)) {
    Scalar cos_term(0);
    for (Eigen::Index i = 0; i < v.rows(); ++i) {
      // 1 - cos(a, b) == |a/|a| - b/|b||^2 / 2, which is exactly 0 for a == b.
      cos_term += (v.row(i).normalized() - t.row(i).normalized()).squaredNorm() / Scalar(2);
    }
    loss += beta * cos_term / n;
  }
  return loss;
}

template <typename Scalar>
Scalar stage1_loss(const EmbeddingBatch<Scalar>& batch) {
  return stage1_loss(batch.vectors, batch.targets, batch.alpha, batch.beta);
}

// d loss / d v.
template <typename A, typename B, typename Scalar = typename A::Scalar>
Matrix<Scalar> stage1_loss_grad(const Eigen::MatrixBase<A>& v, const Eigen::MatrixBase<B>& t,
                                Scalar alpha, Scalar beta) {
  detail::check_batch(v, t, alpha, beta);
  const auto n = static_cast<Scalar>(v.rows());
  const auto count = static_cast<Scalar>(v.size());
  Matrix<Scalar> grad = (Scalar(2) * alpha / count) * (v - t);
  if (beta > Scalar(0)) {
    for (Eigen::Index i = 0; i < v.rows(); ++i) {
      const Scalar vn = v.row(i).norm();
      const Scalar tn = t.row(i).norm();
      const Scalar cos = v.row(i).dot(t.row(i)) / (vn * tn);
      // d cos / d v = t / (|v||t|) - cos * v / |v|^2
      grad.row(i) -= (beta / n) * (t.row(i) / (vn * tn) - cos * v.row(i) / (vn * vn));
    }
  }
  return grad;
}

template <typename Scalar>
Matrix<Scalar> stage1_loss_grad(const EmbeddingBatch<Scalar>& batch) {
  return stage1_loss_grad(batch.vectors, batch.targets, batch.alpha, batch.beta);
}

// Predicted probabilities are floored here before the log.
template <typename Scalar>
inline constexpr Scalar kProbabilityFloor = Scalar(1e-12);

// Throws InvariantViolation unless both vectors are distributions of equal
// length (sums within 1e-9 of 1, no negative entries). Predicted entries
// below the floor are raised to it before the log.
template <typename A, typename B>
void check_distributions(const Eigen::MatrixBase<A>& truth, const Eigen::MatrixBase<B>& predicted) {
  using Scalar = typename A::Scalar;
  if (truth.size() != predicted.size() || truth.size() == 0) {
    throw InvariantViolation("distribution sizes differ or are empty");
  }
  if (std::abs(truth.sum() - Scalar(1)) > Scalar(1e-9) ||
      std::abs(predicted.sum() - Scalar(1)) > Scalar(1e-9)) {
    throw InvariantViolation("distribution does not sum to 1");
  }
  if ((truth.array() < Scalar(0)).any() || (predicted.array() < Scalar(0)).any()) {
    throw InvariantViolation("distribution has out-of-range entries");
  }
}

// -sum_i y_i ln(yhat_i), natural log.
template <typename A, typename B, typename Scalar = typename A::Scalar>
Scalar cross_entropy(const Eigen::MatrixBase<A>& truth, const Eigen::MatrixBase<B>& predicted) {
  check_distributions(truth, predicted);
  Scalar loss(0);
  for (Eigen::Index i = 0; i < truth.size(); ++i) {
    if (truth[i] == Scalar(0)) continue;
    loss -= truth[i] * std::log(std::max(predicted[i], kProbabilityFloor<Scalar>));
  }
  return loss;
}

// d/d yhat of the unconstrained expression -sum y ln yhat.
template <typename A, typename B, typename Scalar = typename A::Scalar>
Vector<Scalar> cross_entropy_grad(const Eigen::MatrixBase<A>& truth,
                                  const Eigen::MatrixBase<B>& predicted) {
  check_distributions(truth, predicted);
  return -(truth.array() / predicted.array().max(kProbabilityFloor<Scalar>)).matrix();
}

template <typename A, typename Scalar = typename A::Scalar>
Vector<Scalar> softmax(const Eigen::MatrixBase<A>& logits) {
  const Vector<Scalar> e = (logits.array() - logits.maxCoeff()).exp().matrix();
  return e / e.sum();
}

// Cross-entropy of softmax(logits) against `truth`, via log-sum-exp.
template <typename A, typename B, typename Scalar = typename A::Scalar>
Scalar cross_entropy_from_logits(const Eigen::MatrixBase<A>& truth,
                                 const Eigen::MatrixBase<B>& logits) {
  if (truth.size() != logits.size() || truth.size() == 0) {
    throw InvariantViolation("distribution sizes differ or are empty");
  }
  const Scalar m = logits.maxCoeff();
  const Scalar lse = m + std::log((logits.array() - m).exp().sum());
  return -(truth.array() * (logits.array() - lse)).sum();
}

// softmax(logits) - truth, for truth summing to 1.
template <typename A, typename B, typename Scalar = typename A::Scalar>
Vector<Scalar> cross_entropy_logits_grad(const Eigen::MatrixBase<A>& truth,
                                         const Eigen::MatrixBase<B>& logits) {
  return softmax(logits) - truth;
}

// Central differences of f around x, step h per coordinate.
template <typename Scalar>
Matrix<Scalar> numerical_gradient(const std::function<Scalar(const Matrix<Scalar>&)>& f,
                                  Matrix<Scalar> x, Scalar h = Scalar(1e-5)) {
  Matrix<Scalar> g(x.rows(), x.cols());
  for (Eigen::Index k = 0; k < x.size(); ++k) {
    const Scalar orig = x.data()[k];
    x.data()[k] = orig + h;
    const Scalar up = f(x);
    x.data()[k] = orig - h;
    const Scalar down = f(x);
    x.data()[k] = orig;
    g.data()[k] = (up - down) / (Scalar(2) * h);
  }
  return g;
}

// ||a - n|| / max(||a||, ||n||, floor).
template <typename A, typename B, typename Scalar = typename A::Scalar>
Scalar gradient_relative_error(const Eigen::MatrixBase<A>& analytic,
                               const Eigen::MatrixBase<B>& numeric, Scalar floor = Scalar(1e-6)) {
  const Scalar denom = std::max({analytic.norm(), numeric.norm(), floor});
  return (analytic - numeric).norm() / denom;
}

}  // namespace coldkit
