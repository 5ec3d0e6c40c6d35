// Copyright 2026 pcgvae authors
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

#include <filesystem>
#include <stdexcept>
#include <utility>
#include <vector>

#include "pcgvae/scoring.hpp"
#include "pcgvae/types.hpp"

namespace pcgvae {

// ROC curve from a threshold sweep over the distinct score values, Abnormal
// as the positive class. Ties follow the Mann-Whitney convention, so
// auc = P(score_abn > score_nrm) + 0.5 P(equal). The area numerator is
// accumulated in exact integer arithmetic (auc = auc_num / auc_den with
// auc_den = 2 * n_abnormal * n_normal); the stored ratio is its only
// floating-point rounding.
struct RocCurve {
  std::vector<std::pair<Scalar, Scalar>> points;  // (fpr, tpr), (0,0) .. (1,1)
  Scalar auc = 0.0;
  long long auc_num = 0;
  long long auc_den = 0;
};

// Requires at least one report of each class; higher score means more
// anomalous.
RocCurve roc_auc(const std::vector<ScoreReport>& reports);

// Pearson correlation coefficient. Throws std::invalid_argument on length
// mismatch or fewer than 2 points, std::runtime_error on zero-variance
// input. The result is clamped to [-1, 1].
template <typename DerivedA, typename DerivedB>
Scalar pearson(const Eigen::MatrixBase<DerivedA>& xs,
               const Eigen::MatrixBase<DerivedB>& ys) {
  const Index n = xs.size();
  if (n != ys.size()) {
    throw std::invalid_argument("pearson: length mismatch");
  }
  if (n < 2) throw std::invalid_argument("pearson: need at least 2 points");

  const Scalar mx = xs.mean();
  const Scalar my = ys.mean();
  const Scalar sxx = (xs.array() - mx).square().sum();
  const Scalar syy = (ys.array() - my).square().sum();
  const bool x_const = (xs.array() == xs[0]).all();
  const bool y_const = (ys.array() == ys[0]).all();
  if (x_const || y_const || sxx == 0.0 || syy == 0.0) {
    throw std::runtime_error("pearson: zero-variance input");
  }
  const Scalar sxy = ((xs.array() - mx) * (ys.array() - my)).sum();
  const Scalar rho = sxy / (std::sqrt(sxx) * std::sqrt(syy));
  return std::clamp(rho, Scalar(-1.0), Scalar(1.0));
}

Scalar pearson(const std::vector<Scalar>& xs, const std::vector<Scalar>& ys);

// Pools every FrameScore across the reports and correlates reconstruction
// loss against KL divergence.
Scalar kl_recon_correlation(const std::vector<ScoreReport>& reports);

// CSV: header `fpr,tpr`.
void write_roc_csv(const std::filesystem::path& path, const RocCurve& curve);

}  // namespace pcgvae
