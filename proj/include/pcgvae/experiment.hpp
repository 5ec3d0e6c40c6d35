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

#include <functional>
#include <string>
#include <vector>

#include "pcgvae/dataset.hpp"
#include "pcgvae/metrics.hpp"
#include "pcgvae/scoring.hpp"
#include "pcgvae/synth.hpp"
#include "pcgvae/vae.hpp"

namespace pcgvae {

// One sweep configuration: either the plain auto-encoder baseline ("ae") or
// a beta-VAE with the given beta.
struct SweepEntry {
  ModelMode mode = ModelMode::BetaVae;
  Scalar beta = 0.0;
  std::string label;
};

// "ae,0,0.01,0.1,1,10,100" -> entries; "ae" selects PlainAe mode.
std::vector<SweepEntry> parse_beta_list(const std::string& csv);
inline const char* default_beta_list() { return "ae,0,0.01,0.1,1,10,100"; }

// Pools the super-frames of every recording.
std::vector<SuperFrame> collect_super_frames(const std::vector<Recording>& recordings,
                                             const PipelineConfig& config);

// Per-seed training pool / evaluation set. Training recordings must all be
// Normal; the provider owns that guarantee.
struct TrainEvalData {
  std::vector<Recording> train;
  std::vector<Recording> eval;
};
using DataProvider = std::function<TrainEvalData(std::uint64_t seed)>;

// Provider that re-splits a fixed pool of labeled recordings per seed.
DataProvider split_provider(std::vector<Recording> pool, double train_fraction);

// Provider generating a fresh synthetic train corpus (normals only) and a
// mixed evaluation corpus per seed, on independent seed streams.
struct SynthProtocol {
  int train_normal = 200;
  int eval_normal = 20;
  int eval_abnormal = 20;
  double duration_seconds = 8.0;
  int sample_rate = 2000;
  double min_bpm = 60.0;
  double max_bpm = 100.0;
  AnomalyKind anomaly = AnomalyKind::Murmur;
};
TrainEvalData make_synth_data(const SynthProtocol& protocol, std::uint64_t seed);
DataProvider synth_provider(const SynthProtocol& protocol);

// Train-then-evaluate for one configuration. The correlation column is
// undefined for the auto-encoder baseline (every frame KL is zero).
struct RunOutcome {
  TrainResult trained;
  std::vector<ScoreReport> reports;
  RocCurve roc;
  bool corr_defined = false;
  Scalar corr = 0.0;
};
RunOutcome run_single(const SweepEntry& entry, const TrainEvalData& data,
                      TrainConfig train_config, const PipelineConfig& pipeline,
                      const VaeArch& arch = {});

struct SweepRow {
  SweepEntry entry;
  std::vector<Scalar> aucs;
  std::vector<Scalar> corrs;  // empty when the correlation is undefined
  Scalar auc_mean = 0.0, auc_std = 0.0;
  Scalar corr_mean = 0.0, corr_std = 0.0;
  bool corr_defined = false;
};

// Fresh data, model and training run per seed; aggregates mean and sample
// standard deviation.
SweepRow run_sweep_entry(const SweepEntry& entry, const DataProvider& provider,
                         const std::vector<std::uint64_t>& seeds,
                         TrainConfig train_config, const PipelineConfig& pipeline,
                         const VaeArch& arch = {});

std::vector<std::uint64_t> seed_range(std::uint64_t base, int count);

// CSV: header `beta,auc_mean,auc_std,corr_mean,corr_std,runs`; undefined
// correlations serialize as nan.
std::string sweep_csv(const std::vector<SweepRow>& rows);

// CSV: header `epoch,mse,kl,total`.
void write_loss_history_csv(const std::filesystem::path& path,
                            const std::vector<LossBreakdown>& history);

}  // namespace pcgvae
