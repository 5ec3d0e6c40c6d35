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

#include "pcgvae/metrics.hpp"

#include <algorithm>
#include <sstream>

#include "pcgvae/text_io.hpp"

namespace pcgvae {

RocCurve roc_auc(const std::vector<ScoreReport>& reports) {
  std::vector<std::pair<Scalar, bool>> scored;  // (score, is_abnormal)
  scored.reserve(reports.size());
  long long n_pos = 0, n_neg = 0;
  for (const auto& r : reports) {
    const bool abnormal = r.label == Label::Abnormal;
    scored.emplace_back(r.score, abnormal);
    (abnormal ? n_pos : n_neg) += 1;
  }
  if (n_pos == 0 || n_neg == 0) {
    throw std::runtime_error("roc_auc: need both classes, got " +
                             std::to_string(n_pos) + " abnormal / " +
                             std::to_string(n_neg) + " normal");
  }

  std::sort(scored.begin(), scored.end(),
            [](const auto& a, const auto& b) { return a.first > b.first; });

  RocCurve curve;
  curve.points.emplace_back(0.0, 0.0);
  curve.auc_den = 2 * n_pos * n_neg;

  long long tp = 0, fp = 0;
  std::size_t i = 0;
  while (i < scored.size()) {
    // One threshold step per distinct score value; ties move diagonally.
    long long d_tp = 0, d_fp = 0;
    const Scalar value = scored[i].first;
    for (; i < scored.size() && scored[i].first == value; ++i) {
      (scored[i].second ? d_tp : d_fp) += 1;
    }
    // Trapezoid slice in integer arithmetic: d_fp * (tp_before + tp_after).
    curve.auc_num += d_fp * (2 * tp + d_tp);
    tp += d_tp;
    fp += d_fp;
    curve.points.emplace_back(static_cast<Scalar>(fp) / n_neg,
                              static_cast<Scalar>(tp) / n_pos);
  }
  curve.auc = static_cast<Scalar>(curve.auc_num) / curve.auc_den;
  return curve;
}

Scalar pearson(const std::vector<Scalar>& xs, const std::vector<Scalar>& ys) {
  return pearson(Eigen::Map<const Vector>(xs.data(), static_cast<Index>(xs.size())),
                 Eigen::Map<const Vector>(ys.data(), static_cast<Index>(ys.size())));
}

Scalar kl_recon_correlation(const std::vector<ScoreReport>& reports) {
  std::vector<Scalar> recon, kl;
  for (const auto& r : reports) {
    for (const auto& fs : r.frame_scores) {
      recon.push_back(fs.recon_loss);
      kl.push_back(fs.kl);
    }
  }
  if (recon.size() < 2) {
    throw std::invalid_argument("kl_recon_correlation: need at least 2 frame scores");
  }
  return pearson(recon, kl);
}

void write_roc_csv(const std::filesystem::path& path, const RocCurve& curve) {
  std::ostringstream out;
  out << "fpr,tpr\n";
  for (const auto& [fpr, tpr] : curve.points) {
    out << format_double(fpr) << ',' << format_double(tpr) << '\n';
  }
  write_text_file(path, out.str());
}

}  // namespace pcgvae
