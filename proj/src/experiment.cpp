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

#include "pcgvae/experiment.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "pcgvae/rng.hpp"
#include "pcgvae/text_io.hpp"

namespace pcgvae {

std::vector<SweepEntry> parse_beta_list(const std::string& csv) {
  std::vector<SweepEntry> entries;
  for (const auto& raw : split(csv, ',')) {
    const std::string token(trim(raw));
    if (token.empty()) continue;
    SweepEntry entry;
    entry.label = token;
    if (token == "ae") {
      entry.mode = ModelMode::PlainAe;
    } else {
      entry.mode = ModelMode::BetaVae;
      entry.beta = parse_double(token);
      if (!(entry.beta >= 0.0)) {
        throw std::invalid_argument("beta must be >= 0, got " + token);
      }
    }
    entries.push_back(std::move(entry));
  }
  if (entries.empty()) throw std::invalid_argument("empty beta list");
  return entries;
}

std::vector<SuperFrame> collect_super_frames(const std::vector<Recording>& recordings,
                                             const PipelineConfig& config) {
  std::vector<SuperFrame> frames;
  for (const auto& rec : recordings) {
    auto more = pipeline_super_frames(rec, config);
    frames.insert(frames.end(), std::make_move_iterator(more.begin()),
                  std::make_move_iterator(more.end()));
  }
  return frames;
}

DataProvider split_provider(std::vector<Recording> pool, double train_fraction) {
  return [pool = std::move(pool), train_fraction](std::uint64_t seed) {
    DatasetSplit s = split_normals(pool, train_fraction, seed);
    return TrainEvalData{std::move(s.train), std::move(s.eval)};
  };
}

TrainEvalData make_synth_data(const SynthProtocol& protocol, std::uint64_t seed) {
  SynthConfig train_cfg;
  train_cfg.seed = mix_seed(seed, 1);
  train_cfg.count_normal = protocol.train_normal;
  train_cfg.count_abnormal = 0;
  train_cfg.duration_seconds = protocol.duration_seconds;
  train_cfg.sample_rate = protocol.sample_rate;
  train_cfg.min_bpm = protocol.min_bpm;
  train_cfg.max_bpm = protocol.max_bpm;
  train_cfg.anomaly = protocol.anomaly;

  SynthConfig eval_cfg = train_cfg;
  eval_cfg.seed = mix_seed(seed, 2);
  eval_cfg.count_normal = protocol.eval_normal;
  eval_cfg.count_abnormal = protocol.eval_abnormal;

  return TrainEvalData{generate(train_cfg), generate(eval_cfg)};
}

DataProvider synth_provider(const SynthProtocol& protocol) {
  return [protocol](std::uint64_t seed) { return make_synth_data(protocol, seed); };
}

RunOutcome run_single(const SweepEntry& entry, const TrainEvalData& data,
                      TrainConfig train_config, const PipelineConfig& pipeline,
                      const VaeArch& arch) {
  for (const auto& rec : data.train) {
    if (rec.label != Label::Normal) {
      throw std::invalid_argument("run_single: abnormal recording in training set");
    }
  }
  const std::vector<SuperFrame> frames = collect_super_frames(data.train, pipeline);
  VaeModel model = init_model(entry.beta, train_config.seed, entry.mode, arch);

  RunOutcome out;
  out.trained = train(std::move(model), frames, train_config);
  out.reports = score_recordings(out.trained.model, data.eval, pipeline);
  out.roc = roc_auc(out.reports);
  if (entry.mode == ModelMode::BetaVae) {
    try {
      out.corr = kl_recon_correlation(out.reports);
      out.corr_defined = true;
    } catch (const std::runtime_error&) {
      out.corr_defined = false;  // degenerate frame scores
    }
  }
  return out;
}

namespace {

std::pair<Scalar, Scalar> mean_and_sample_std(const std::vector<Scalar>& xs) {
  const auto n = static_cast<Scalar>(xs.size());
  Scalar mean = 0.0;
  for (const Scalar x : xs) mean += x;
  mean /= n;
  if (xs.size() < 2) return {mean, 0.0};
  Scalar ss = 0.0;
  for (const Scalar x : xs) ss += (x - mean) * (x - mean);
  return {mean, std::sqrt(ss / (n - 1.0))};
}

}  // namespace

SweepRow run_sweep_entry(const SweepEntry& entry, const DataProvider& provider,
                         const std::vector<std::uint64_t>& seeds,
                         TrainConfig train_config, const PipelineConfig& pipeline,
                         const VaeArch& arch) {
  if (seeds.empty()) throw std::invalid_argument("run_sweep_entry: no seeds");
  SweepRow row;
  row.entry = entry;
  for (const std::uint64_t seed : seeds) {
    const TrainEvalData data = provider(seed);
    train_config.seed = seed;
    RunOutcome outcome = run_single(entry, data, train_config, pipeline, arch);
    row.aucs.push_back(outcome.roc.auc);
    if (outcome.corr_defined) row.corrs.push_back(outcome.corr);
  }
  std::tie(row.auc_mean, row.auc_std) = mean_and_sample_std(row.aucs);
  row.corr_defined = row.corrs.size() == row.aucs.size();
  if (row.corr_defined) {
    std::tie(row.corr_mean, row.corr_std) = mean_and_sample_std(row.corrs);
  }
  return row;
}

std::vector<std::uint64_t> seed_range(std::uint64_t base, int count) {
  std::vector<std::uint64_t> seeds;
  seeds.reserve(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) seeds.push_back(base + static_cast<std::uint64_t>(i));
  return seeds;
}

std::string sweep_csv(const std::vector<SweepRow>& rows) {
  std::ostringstream out;
  out << "beta,auc_mean,auc_std,corr_mean,corr_std,runs\n";
  for (const auto& row : rows) {
    out << row.entry.label << ',' << format_double(row.auc_mean) << ','
        << format_double(row.auc_std) << ',';
    if (row.corr_defined) {
      out << format_double(row.corr_mean) << ',' << format_double(row.corr_std);
    } else {
      out << "nan,nan";
    }
    out << ',' << row.aucs.size() << '\n';
  }
  return out.str();
}

void write_loss_history_csv(const std::filesystem::path& path,
                            const std::vector<LossBreakdown>& history) {
  std::ostringstream out;
  out << "epoch,mse,kl,total\n";
  for (std::size_t i = 0; i < history.size(); ++i) {
    out << i << ',' << format_double(history[i].mse) << ','
        << format_double(history[i].kl) << ',' << format_double(history[i].total)
        << '\n';
  }
  write_text_file(path, out.str());
}

}  // namespace pcgvae
