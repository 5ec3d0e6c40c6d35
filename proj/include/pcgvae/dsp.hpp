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
#include <vector>

#include "pcgvae/recording.hpp"
#include "pcgvae/types.hpp"

namespace pcgvae {

// A super-frame spans five consecutive spectrogram frames.
inline constexpr int kSuperFrameSpan = 5;

// Additive floor inside the log so silent frames stay finite.
inline constexpr Scalar kLogEnergyFloor = 1e-10;

// Rows with population variance at or below this are treated as carrying no
// information and z-score to all zeros.
inline constexpr Scalar kDegenerateRowVariance = 1e-12;

struct FrameParams {
  int window = 1024;  // samples per analysis frame
  int hop = 512;      // samples between frame starts
  int mel_bins = 14;
};

struct PipelineConfig {
  Scalar target_seconds = 8.0;
  FrameParams frames{};
};

// M x N log-Mel energies: M frequency bins (rows), N frames (columns).
struct MelSpectrogram {
  Matrix values;
  int window = 0;
  int hop = 0;
  int sample_rate = 0;

  Index mel_bins() const { return values.rows(); }
  Index n_frames() const { return values.cols(); }
};

// Same layout with every non-degenerate row z-scored across frames.
struct NormalizedSpectrogram {
  Matrix values;
  int window = 0;
  int hop = 0;
  int sample_rate = 0;

  Index mel_bins() const { return values.rows(); }
  Index n_frames() const { return values.cols(); }
};

// Flattened window of kSuperFrameSpan consecutive frames, column by column.
struct SuperFrame {
  Vector values;  // length mel_bins * kSuperFrameSpan
  Index origin_frame = 0;
};

// Triangular Mel filterbank over the power-spectrum bins 0..window/2.
struct MelFilterbank {
  Matrix weights;    // mel_bins x (window/2 + 1)
  Vector center_hz;  // one center frequency per filter
};

Scalar hz_to_mel(Scalar hz);
Scalar mel_to_hz(Scalar mel);

// HTK-style mel scale, triangular filters spanning 0 Hz to Nyquist.
MelFilterbank mel_filterbank(int window, int sample_rate, int mel_bins);

inline Index frame_count(Index n_samples, int window, int hop) {
  return (n_samples - window) / hop + 1;
}

// Tiles shorter recordings end-to-end and keeps the leading target_seconds
// of longer ones, so the output is exactly target_seconds * sample_rate
// samples. Idempotent for inputs already at the target length.
Recording normalize_length(const Recording& recording, Scalar target_seconds);

// Per frame: Hann window, magnitude-squared DFT of size `window`, Mel
// filterbank, then ln(energy + kLogEnergyFloor). Requires at least one full
// window of samples.
MelSpectrogram mel_spectrogram(const Recording& recording, int window, int hop,
                               int mel_bins);

// Z-scores each frequency bin across its N frames with the population
// standard deviation; degenerate rows become all zeros. Requires N >= 2.
NormalizedSpectrogram normalize_bins(const MelSpectrogram& spec);

// All N-4 overlapping super-frames; requires N >= kSuperFrameSpan.
std::vector<SuperFrame> super_frames(const NormalizedSpectrogram& spec);

// Full pre-processing chain for one recording.
std::vector<SuperFrame> pipeline_super_frames(const Recording& recording,
                                              const PipelineConfig& config = {});

// Stacks super-frames as rows of a batch matrix.
Matrix pack_super_frames(const std::vector<SuperFrame>& frames);

// Debug dump: row-major CSV matrix, one header line naming columns.
void write_matrix_csv(const std::filesystem::path& path, const Matrix& m);

}  // namespace pcgvae
