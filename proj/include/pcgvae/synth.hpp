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

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "pcgvae/recording.hpp"

namespace pcgvae {

enum class AnomalyKind { Murmur, ExtraSound, Arrhythmia };

const char* anomaly_name(AnomalyKind kind);
AnomalyKind anomaly_from_name(const std::string& name);

struct SynthConfig {
  std::uint64_t seed = 0;
  int count_normal = 0;
  int count_abnormal = 0;
  double duration_seconds = 8.0;
  int sample_rate = 2000;
  double min_bpm = 60.0;
  double max_bpm = 100.0;
  AnomalyKind anomaly = AnomalyKind::Murmur;
};

// Deterministic synthetic phonocardiograms. Normal recordings are periodic
// S1/S2 damped-sinusoid pulse pairs with per-recording jitter and ~20 dB SNR
// white noise. Abnormal recordings add the configured pathology: Murmur is a
// band-limited noise burst between S1 and S2, ExtraSound a third pulse, and
// Arrhythmia a per-cycle length perturbation of at least 25%.
//
// The abnormal recording at offset j shares its pulse layout and noise
// streams with the normal recording at offset j, so (normal_j, abnormal_j)
// pairs differ only by the pathology.
std::vector<Recording> generate(const SynthConfig& config);

// Emits the corpus as <id>.wav files plus REFERENCE.csv, the same on-disk
// layout the dataset loader ingests.
void write_corpus(const std::vector<Recording>& recordings,
                  const std::filesystem::path& dir);

}  // namespace pcgvae
