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

#include "condec/losskernel.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

namespace condec::loss {
namespace {

template <typename T>
using MatT = Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
template <typename T>
using VecT = Eigen::Matrix<T, Eigen::Dynamic, 1>;

[[noreturn]] void Shape(const std::string& what) {
  throw Error(ErrorCode::kShapeMismatch, what);
}

template <typename T>
VecT<T> ProjectT(const Matrix& tokens, const Matrix& w, const Vector& b) {
  const MatT<T> wt = w.cast<T>();
  const VecT<T> bt = b.cast<T>();
  VecT<T> acc = VecT<T>::Zero(w.rows());
  for (Eigen::Index t = 0; t < tokens.rows(); ++t) {
    const VecT<T> pre = wt * tokens.row(t).transpose().cast<T>() + bt;
    acc += pre.cwiseMax(T(0));
  }
  return acc / static_cast<T>(tokens.rows());
}

template <typename T>
T SimilarityT(const VecT<T>& a, const VecT<T>& b, SimKind kind) {
  if (a.size() != b.size()) Shape("similarity of vectors with different widths");
  const T dot = a.dot(b);
  if (kind == SimKind::kDot) return dot;
  const T na = a.norm();
  const T nb = b.norm();
  if (na == T(0) || nb == T(0)) {
    throw Error(ErrorCode::kZeroNorm, "cosine similarity of a zero vector");
  }
  return dot / (na * nb);
}

template <typename T>
T NegLogSoftmaxT(const std::vector<T>& logits, std::size_t positive) {
  using std::exp;
  using std::log1p;
  const auto arg = static_cast<std::size_t>(
      std::max_element(logits.begin(), logits.end()) - logits.begin());
  const T m = logits[arg];
  T rest = 0;
  for (std::size_t k = 0; k < logits.size(); ++k) {
    if (k != arg) rest += exp(logits[k] - m);
  }
  return (m - logits[positive]) + log1p(rest);
}

template <typename T>
std::vector<T> InstanceLogits(std::size_t i, std::span<const VecT<T>> zx,
                              std::span<const VecT<T>> zs,
                              const std::optional<VecT<T>>& zbar,
                              const LossConfig& cfg) {
  const T tau = static_cast<T>(cfg.tau);
  std::vector<T> logits;
  logits.reserve(zs.size() + 1);
  for (const auto& target : zs) logits.push_back(SimilarityT<T>(zx[i], target, cfg.sim) / tau);
  if (zbar) logits.push_back(SimilarityT<T>(zx[i], *zbar, cfg.sim) / tau);
  return logits;
}

template <typename T>
T ContrastiveHardT(std::span<const VecT<T>> zx, std::span<const VecT<T>> zs,
                   std::span<const std::optional<VecT<T>>> zbar,
                   const LossConfig& cfg) {
  cfg.Validate();
  if (zx.empty()) throw Error(ErrorCode::kInvalidArgument, "empty batch");
  if (zx.size() != zs.size() || zbar.size() != zx.size()) {
    Shape("zx, zs and zbar must have one entry per instance");
  }
  T total = 0;
  for (std::size_t i = 0; i < zx.size(); ++i) {
    total += NegLogSoftmaxT<T>(InstanceLogits<T>(i, zx, zs, zbar[i], cfg), i);
  }
  return total;
}

template <typename T>
T BatchLossT(const HiddenBatch& batch, const LossConfig& cfg) {
  std::vector<VecT<T>> zx, zs;
  std::vector<std::optional<VecT<T>>> zbar;
  for (const auto& inst : batch.instances) {
    zx.push_back(ProjectT<T>(inst.source, batch.w_proj, batch.b_proj));
    zs.push_back(ProjectT<T>(inst.target, batch.w_proj, batch.b_proj));
    if (inst.hard_negative) {
      zbar.emplace_back(ProjectT<T>(*inst.hard_negative, batch.w_proj, batch.b_proj));
    } else {
      zbar.emplace_back();
    }
  }
  return ContrastiveHardT<T>(zx, zs, zbar, cfg);
}

// Accumulates coef * d s(u, v) / du into gu and coef * d s(u, v) / dv into gv.
void SimilarityGrad(const Vector& u, const Vector& v, SimKind kind, double coef,
                    Vector& gu, Vector& gv) {
  if (kind == SimKind::kDot) {
    gu += coef * v;
    gv += coef * u;
    return;
  }
  const double nu = u.norm();
  const double nv = v.norm();
  const double s = u.dot(v) / (nu * nv);
  gu += coef * (v / (nu * nv) - s * u / (nu * nu));
  gv += coef * (u / (nu * nv) - s * v / (nv * nv));
}

// Back-propagates dL/dz through z = mean_t ReLU(W m_t + b).
Matrix ProjectBackward(const Matrix& tokens, const Matrix& w, const Vector& b,
                       const Vector& grad_z, Matrix& grad_w, Vector& grad_b) {
  Matrix grad_tokens = Matrix::Zero(tokens.rows(), tokens.cols());
  const double inv_len = 1.0 / static_cast<double>(tokens.rows());
  for (Eigen::Index t = 0; t < tokens.rows(); ++t) {
    const Vector pre = w * tokens.row(t).transpose() + b;
    const Vector delta =
        (pre.array() > 0.0).select(grad_z * inv_len, Vector::Zero(pre.size()));
    grad_w += delta * tokens.row(t);
    grad_b += delta;
    grad_tokens.row(t) = (w.transpose() * delta).transpose();
  }
  return grad_tokens;
}

}  // namespace

void LossConfig::Validate() const {
  if (!(tau > 0.0) || !std::isfinite(tau)) {
    throw Error(ErrorCode::kInvalidArgument, "tau must be a positive number");
  }
  if (!(alpha >= 0.0) || !std::isfinite(alpha)) {
    throw Error(ErrorCode::kInvalidArgument, "alpha must be non-negative");
  }
}

Vector Project(const Matrix& tokens, const Matrix& w, const Vector& b) {
  if (tokens.rows() < 1) Shape("projection needs at least one token");
  if (tokens.cols() != w.cols()) Shape("token width differs from W columns");
  if (b.size() != w.rows()) Shape("bias length differs from W rows");
  return ProjectT<double>(tokens, w, b);
}

double Similarity(const Vector& a, const Vector& b, SimKind kind) {
  return SimilarityT<double>(a, b, kind);
}

double NegLogSoftmax(std::span<const double> logits, std::size_t positive) {
  if (positive >= logits.size()) Shape("positive index outside the logits");
  return NegLogSoftmaxT<double>({logits.begin(), logits.end()}, positive);
}

double ContrastiveLoss(std::span<const Vector> zx, std::span<const Vector> zs,
                       const LossConfig& cfg) {
  const std::vector<std::optional<Vector>> none(zx.size());
  return ContrastiveHardT<double>(zx, zs, none, cfg);
}

double ContrastiveLossHard(std::span<const Vector> zx, std::span<const Vector> zs,
                           std::span<const std::optional<Vector>> zbar,
                           const LossConfig& cfg) {
  return ContrastiveHardT<double>(zx, zs, zbar, cfg);
}

double MleLoss(const std::vector<std::vector<double>>& token_logprobs) {
  if (token_logprobs.empty()) {
    throw Error(ErrorCode::kEmptySequence, "no instances");
  }
  double total = 0.0;
  for (const auto& seq : token_logprobs) {
    if (seq.empty()) throw Error(ErrorCode::kEmptySequence, "instance without tokens");
    for (double lp : seq) {
      if (!(lp <= 0.0)) {
        throw Error(ErrorCode::kInvalidArgument, "log-probability must be <= 0");
      }
      total -= lp;
    }
  }
  return total;
}

double TotalLoss(double mle, double contrastive_hard, const LossConfig& cfg) {
  cfg.Validate();
  return mle + cfg.alpha * contrastive_hard;
}

void HiddenBatch::Validate() const {
  if (d < 1 || p < 1) Shape("d and p must be >= 1");
  if (w_proj.rows() != p || w_proj.cols() != d) Shape("W must be p x d");
  if (b_proj.size() != p) Shape("b must have length p");
  if (instances.empty()) Shape("batch has no instances");
  for (std::size_t i = 0; i < instances.size(); ++i) {
    const auto& inst = instances[i];
    auto check = [&](const Matrix& m, const char* name) {
      if (m.rows() < 1 || m.cols() != d) {
        Shape("instance " + std::to_string(i) + " " + name + " must be len x d, len >= 1");
      }
    };
    check(inst.source, "source");
    check(inst.target, "target");
    if (inst.hard_negative) check(*inst.hard_negative, "hard_negative");
  }
}

Projections ProjectBatch(const HiddenBatch& batch) {
  batch.Validate();
  Projections out;
  for (const auto& inst : batch.instances) {
    out.zx.push_back(Project(inst.source, batch.w_proj, batch.b_proj));
    out.zs.push_back(Project(inst.target, batch.w_proj, batch.b_proj));
    if (inst.hard_negative) {
      out.zbar.emplace_back(Project(*inst.hard_negative, batch.w_proj, batch.b_proj));
    } else {
      out.zbar.emplace_back();
    }
  }
  return out;
}

double BatchLoss(const HiddenBatch& batch, const LossConfig& cfg) {
  const auto pr = ProjectBatch(batch);
  return ContrastiveLossHard(pr.zx, pr.zs, pr.zbar, cfg);
}

BatchGradient BatchLossGradient(const HiddenBatch& batch, const LossConfig& cfg) {
  cfg.Validate();
  const auto pr = ProjectBatch(batch);
  const std::size_t n = batch.n();
  const auto p = batch.p;

  std::vector<Vector> gx(n, Vector::Zero(p));
  std::vector<Vector> gs(n, Vector::Zero(p));
  std::vector<Vector> gbar(n, Vector::Zero(p));
  for (std::size_t i = 0; i < n; ++i) {
    const auto logits = InstanceLogits<double>(
        i, std::span<const Vector>(pr.zx), std::span<const Vector>(pr.zs),
        pr.zbar[i], cfg);
    const double m = *std::max_element(logits.begin(), logits.end());
    std::vector<double> prob(logits.size());
    double sum = 0.0;
    for (std::size_t k = 0; k < logits.size(); ++k) {
      prob[k] = std::exp(logits[k] - m);
      sum += prob[k];
    }
    for (auto& v : prob) v /= sum;
    for (std::size_t k = 0; k < n; ++k) {
      const double coef = (prob[k] - (k == i ? 1.0 : 0.0)) / cfg.tau;
      SimilarityGrad(pr.zx[i], pr.zs[k], cfg.sim, coef, gx[i], gs[k]);
    }
    if (pr.zbar[i]) {
      SimilarityGrad(pr.zx[i], *pr.zbar[i], cfg.sim, prob[n] / cfg.tau, gx[i], gbar[i]);
    }
  }

  BatchGradient grad;
  grad.w_proj = Matrix::Zero(p, batch.d);
  grad.b_proj = Vector::Zero(p);
  for (std::size_t i = 0; i < n; ++i) {
    const auto& inst = batch.instances[i];
    grad.source.push_back(ProjectBackward(inst.source, batch.w_proj, batch.b_proj,
                                          gx[i], grad.w_proj, grad.b_proj));
    grad.target.push_back(ProjectBackward(inst.target, batch.w_proj, batch.b_proj,
                                          gs[i], grad.w_proj, grad.b_proj));
    if (inst.hard_negative) {
      grad.hard_negative.emplace_back(
          ProjectBackward(*inst.hard_negative, batch.w_proj, batch.b_proj, gbar[i],
                          grad.w_proj, grad.b_proj));
    } else {
      grad.hard_negative.emplace_back();
    }
  }
  return grad;
}

GradCheckReport GradCheck(const HiddenBatch& batch, const LossConfig& cfg,
                          double epsilon) {
  if (!(epsilon >= 1e-7 && epsilon <= 1e-3)) {
    throw Error(ErrorCode::kInvalidArgument, "epsilon must lie in [1e-7, 1e-3]");
  }
  const auto analytic = BatchLossGradient(batch, cfg);
  HiddenBatch work = batch;
  GradCheckReport report;

  auto probe = [&](double& entry, double expected, const std::string& name) {
    const double original = entry;
    const double up = original + epsilon;
    const double down = original - epsilon;
    entry = up;
    const long double loss_up = BatchLossT<long double>(work, cfg);
    entry = down;
    const long double loss_down = BatchLossT<long double>(work, cfg);
    entry = original;
    const double numeric =
        static_cast<double>((loss_up - loss_down) / static_cast<long double>(up - down));
    const double denom = std::max({std::abs(expected), std::abs(numeric), 1e-8});
    const double rel = std::abs(expected - numeric) / denom;
    ++report.entries;
    if (report.entries == 1 || rel > report.max_relative_error) {
      report.max_relative_error = rel;
      report.worst_entry = name;
    }
  };
  auto probe_matrix = [&](Matrix& m, const Matrix& g, const std::string& name) {
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
      for (Eigen::Index c = 0; c < m.cols(); ++c) {
        probe(m(r, c), g(r, c),
              name + "[" + std::to_string(r) + "," + std::to_string(c) + "]");
      }
    }
  };

  probe_matrix(work.w_proj, analytic.w_proj, "w_proj");
  for (Eigen::Index r = 0; r < work.b_proj.size(); ++r) {
    probe(work.b_proj(r), analytic.b_proj(r), "b_proj[" + std::to_string(r) + "]");
  }
  for (std::size_t i = 0; i < work.n(); ++i) {
    const auto tag = "[" + std::to_string(i) + "]";
    probe_matrix(work.instances[i].source, analytic.source[i], "source" + tag);
    probe_matrix(work.instances[i].target, analytic.target[i], "target" + tag);
    if (work.instances[i].hard_negative) {
      probe_matrix(*work.instances[i].hard_negative, *analytic.hard_negative[i],
                   "hard_negative" + tag);
    }
  }
  return report;
}

}  // namespace condec::loss
