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

#include "pcgvae/vae.hpp"

namespace pcgvae {

struct Checkpoint {
  VaeModel model;
  TrainConfig train_config;
};

// Versioned plain-text document: header (mode, beta, dims, training config)
// followed by every tensor, batch-norm running statistics included. Doubles
// use the shortest round-trip decimal form, so serialize(parse(s)) == s.
std::string serialize_checkpoint(const VaeModel& model,
                                 const TrainConfig& train_config);
Checkpoint parse_checkpoint(const std::string& text);

void save_checkpoint(const std::filesystem::path& path, const VaeModel& model,
                     const TrainConfig& train_config);
Checkpoint load_checkpoint(const std::filesystem::path& path);

}  // namespace pcgvae
