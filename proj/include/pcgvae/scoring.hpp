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
#include <string>
#include <vector>

#include "pcgvae/recording.hpp"
#include "pcgvae/vae.hpp"

namespace pcgvae {

// Diagnostics for one super-frame: its reconstruction MSE (the raw anomaly
// score) and its posterior KL divergence from N(0, I).
struct FrameScore {
  Scalar recon_loss = 0.0;
  Scalar kl = 0.0;
  Index origin_frame = 0;
};

// Per-recording result; `score` is the mean of the frame reconstruction
// losses.
struct ScoreReport {
  std::string recording_id;
  Scalar score = 0.0;
  std::vector<FrameScore> frame_scores;
  Label label = Label::Normal;
};

// Runs the full pre-processing chain, then a deterministic inference pass
// (running statistics, latent = posterior mean). The per-frame MSE uses the
// same mean-over-components reduction as the training loss, so scores are
// comparable to training loss magnitudes. In PlainAe mode every frame KL
// is zero.
ScoreReport score_recording(const VaeModel& model, const Recording& recording,
                            const PipelineConfig& config = {});

std::vector<ScoreReport> score_recordings(const VaeModel& model,
                                          const std::vector<Recording>& recordings,
                                          const PipelineConfig& config = {});

// CSV: header `recording_id,label,score`.
void write_scores_csv(const std::filesystem::path& path,
                      const std::vector<ScoreReport>& reports);

// CSV: header `recording_id,frame_index,recon_loss,kl`.
void write_frame_scores_csv(const std::filesystem::path& path,
                            const std::vector<ScoreReport>& reports);

}  // namespace pcgvae
