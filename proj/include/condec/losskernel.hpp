/* Copyright 2026 The ConDec Toolkit Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#ifndef CONDEC_LOSSKERNEL_HPP_
#define CONDEC_LOSSKERNEL_HPP_

// Reference implementation of the stepwise contrastive objective.
//
// Every function returns a quantity to minimize: log-likelihood and
// log-softmax terms are negated.
//
//   z        = mean_t ReLU(W m_t + b)                       (projection)
//   l_i      = -log( exp(s(zx_i, zs_i)/tau) /
//                    (sum_k exp(s(zx_i, zs_k)/tau) + [exp(s(zx_i, zbar_i)/tau)]) )
//   L_cont   = sum_i l_i
//   L_total  = L_mle + alpha * L_cont
//
// The positive pair is part of the denominator; the bracketed hard-negative
// term is present only for instances that carry one.

#include <Eigen/Dense>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "condec/errors.hpp"

namespace condec::loss {

using Matrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using Vector = Eigen::VectorXd;

enum class SimKind { kDot, kCosine };

struct LossConfig {
  double tau = 0.05;
  double alpha = 0.1;
  SimKind sim = SimKind::kDot;

  /// Throws Error(kInvalidArgument) unless tau > 0 and alpha >= 0.
  void Validate() const;
};

/// Mean over token rows of ReLU(W m_t + b). Throws Error(kShapeMismatch).
Vector Project(const Matrix& tokens, const Matrix& w, const Vector& b);

/// Throws Error(kShapeMismatch), or Error(kZeroNorm) for cosine on a zero
/// vector.
double Similarity(const Vector& a, const Vector& b, SimKind kind);

/// -log softmax(logits)[positive], computed with a max shift and log1p so the
/// result keeps full relative precision when it is close to zero.
double NegLogSoftmax(std::span<const double> logits, std::size_t positive);

double ContrastiveLoss(std::span<const Vector> zx, std::span<const Vector> zs,
                       const LossConfig& cfg);

/// `zbar` must have one (possibly empty) entry per instance.
double ContrastiveLossHard(std::span<const Vector> zx, std::span<const Vector> zs,
                           std::span<const std::optional<Vector>> zbar,
                           const LossConfig& cfg);

/// -sum of gold-token log-probabilities over all instances.
/// Throws Error(kEmptySequence) for an empty batch or an empty instance and
/// Error(kInvalidArgument) for a positive log-probability.
double MleLoss(const std::vector<std::vector<double>>& token_logprobs);

double TotalLoss(double mle, double contrastive_hard, const LossConfig& cfg);

struct BatchInstance {
  Matrix source;                       // src_len x d
  Matrix target;                       // tgt_len x d
  std::optional<Matrix> hard_negative;  // neg_len x d
};

/// Hidden states for one batch plus the shared projection head.
struct HiddenBatch {
  Eigen::Index d = 0;  // hidden width
  Eigen::Index p = 0;  // projection width
  Matrix w_proj;       // p x d
  Vector b_proj;       // p
  std::vector<BatchInstance> instances;

  std::size_t n() const { return instances.size(); }

  /// Throws Error(kShapeMismatch) on any inconsistent dimension.
  void Validate() const;
};

struct Projections {
  std::vector<Vector> zx;
  std::vector<Vector> zs;
  std::vector<std::optional<Vector>> zbar;
};

Projections ProjectBatch(const HiddenBatch& batch);

/// Contrastive loss with hard negatives for a whole batch.
double BatchLoss(const HiddenBatch& batch, const LossConfig& cfg);

/// Analytic gradient of BatchLoss with respect to every batch input.
struct BatchGradient {
  Matrix w_proj;
  Vector b_proj;
  std::vector<Matrix> source;
  std::vector<Matrix> target;
  std::vector<std::optional<Matrix>> hard_negative;
};

BatchGradient BatchLossGradient(const HiddenBatch& batch, const LossConfig& cfg);

struct GradCheckReport {
  double max_relative_error = 0.0;
  std::string worst_entry;  // e.g. "w_proj[1,3]"
  std::size_t entries = 0;
};

/// Compares BatchLossGradient against central finite differences over every
/// entry of W, b and the source/target/hard-negative matrices. Relative error
/// is |a - f| / max(|a|, |f|, 1e-8). The perturbed losses are evaluated in
/// extended precision. epsilon must lie in [1e-7, 1e-3].
GradCheckReport GradCheck(const HiddenBatch& batch, const LossConfig& cfg,
                          double epsilon = 1e-5);

}  // namespace condec::loss

#endif  // CONDEC_LOSSKERNEL_HPP_
