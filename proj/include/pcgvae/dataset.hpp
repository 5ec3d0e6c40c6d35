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
#include <utility>
#include <vector>

#include "pcgvae/recording.hpp"

namespace pcgvae {

// Training/evaluation partition. `train` holds Normal recordings only;
// `eval` holds the remaining Normal recordings plus every Abnormal one.
struct DatasetSplit {
  std::vector<Recording> train;
  std::vector<Recording> eval;
  std::uint64_t seed = 0;
};

// Parses a REFERENCE.csv label file: one `basename,label` row per recording,
// label -1 (normal) or 1 (abnormal), no header. Blank lines are skipped.
std::vector<std::pair<std::string, int>> read_reference_csv(
    const std::filesystem::path& path);

// Serializes recordings back into REFERENCE.csv rows.
void write_reference_csv(const std::filesystem::path& path,
                         const std::vector<Recording>& recordings);

// Loads every recording listed in `dir`/REFERENCE.csv from `dir`/<name>.wav.
// Recordings at a sample rate other than `expected_sample_rate` are rejected;
// there is no resampler. Throws std::runtime_error on a missing reference
// file, a listed-but-absent WAV, an unparseable WAV, or a label outside
// {-1, 1}. An empty reference file yields an empty list.
std::vector<Recording> load_directory(const std::filesystem::path& dir,
                                      const std::string& subset,
                                      int expected_sample_rate = 2000);

// Deterministic split: shuffles the Normal recordings with `seed`, sends the
// first floor(train_fraction * n_normal) to train and everything else
// (remaining Normal, then all Abnormal in input order) to eval.
// Requires 0 < train_fraction < 1 and at least one Normal recording.
DatasetSplit split_normals(const std::vector<Recording>& recordings,
                           double train_fraction, std::uint64_t seed);

}  // namespace pcgvae
