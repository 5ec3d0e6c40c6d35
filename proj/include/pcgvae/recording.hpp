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

#include <string>

#include "pcgvae/types.hpp"

namespace pcgvae {

enum class Label { Normal, Abnormal };

inline const char* label_name(Label label) {
  return label == Label::Normal ? "normal" : "abnormal";
}

// One labeled heart-sound clip. Immutable after construction; safe to share
// across threads.
struct Recording {
  std::string id;
  std::string subset;  // "a".."f" or "synthetic"
  Vector samples;      // amplitudes in [-1, 1]
  int sample_rate = 0;
  Label label = Label::Normal;

  double duration_seconds() const {
    return static_cast<double>(samples.size()) / sample_rate;
  }
};

}  // namespace pcgvae
