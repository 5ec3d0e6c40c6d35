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

#include "pcgvae/types.hpp"

namespace pcgvae {

struct WavData {
  Vector samples;  // int16 values scaled by 1/32768
  int sample_rate = 0;
};

// Reads a PCM 16-bit mono RIFF/WAVE file. Throws std::runtime_error on any
// other encoding or on malformed input.
WavData read_wav(const std::filesystem::path& path);

// Writes PCM 16-bit mono; samples are scaled by 32768 and clamped to the
// int16 range.
void write_wav(const std::filesystem::path& path, const Vector& samples,
               int sample_rate);

}  // namespace pcgvae
