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

#include "pcgvae/dataset.hpp"

#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "pcgvae/rng.hpp"
#include "pcgvae/text_io.hpp"
#include "pcgvae/wav.hpp"

namespace pcgvae {

std::vector<std::pair<std::string, int>> read_reference_csv(
    const std::filesystem::path& path) {
  if (!std::filesystem::exists(path)) {
    throw std::runtime_error("reference file not found: " + path.string());
  }
  const std::string text = read_text_file(path);
  std::vector<std::pair<std::string, int>> rows;
  std::size_t line_no = 0;
  for (const auto& raw : split(text, '\n')) {
    ++line_no;
    const auto line = trim(raw);
    if (line.empty()) continue;
    const auto fields = split(line, ',');
    if (fields.size() != 2) {
      throw std::runtime_error(path.string() + ":" + std::to_string(line_no) +
                               ": expected 'name,label'");
    }
    const std::string name(trim(fields[0]));
    const long long label = parse_int(trim(fields[1]));
    if (label != -1 && label != 1) {
      throw std::runtime_error(path.string() + ":" + std::to_string(line_no) +
                               ": label must be -1 or 1, got " +
                               std::to_string(label));
    }
    rows.emplace_back(name, static_cast<int>(label));
  }
  return rows;
}

void write_reference_csv(const std::filesystem::path& path,
                         const std::vector<Recording>& recordings) {
  std::ostringstream out;
  for (const auto& rec : recordings) {
    out << rec.id << ',' << (rec.label == Label::Normal ? -1 : 1) << '\n';
  }
  write_text_file(path, out.str());
}

std::vector<Recording> load_directory(const std::filesystem::path& dir,
                                      const std::string& subset,
                                      int expected_sample_rate) {
  const auto rows = read_reference_csv(dir / "REFERENCE.csv");
  std::vector<Recording> recordings;
  recordings.reserve(rows.size());
  for (const auto& [name, label] : rows) {
    const auto wav_path = dir / (name + ".wav");
    if (!std::filesystem::exists(wav_path)) {
      throw std::runtime_error("recording listed in reference but absent: " +
                               wav_path.string());
    }
    WavData wav = read_wav(wav_path);
    if (expected_sample_rate > 0 && wav.sample_rate != expected_sample_rate) {
      throw std::runtime_error(
          wav_path.string() + ": sample rate " + std::to_string(wav.sample_rate) +
          " Hz, expected " + std::to_string(expected_sample_rate) +
          " Hz (resampling is unsupported)");
    }
    recordings.push_back(Recording{name, subset, std::move(wav.samples),
                                   wav.sample_rate,
                                   label == -1 ? Label::Normal : Label::Abnormal});
  }
  return recordings;
}

DatasetSplit split_normals(const std::vector<Recording>& recordings,
                           double train_fraction, std::uint64_t seed) {
  if (!(train_fraction > 0.0 && train_fraction < 1.0)) {
    throw std::invalid_argument("train_fraction must be in (0, 1)");
  }
  std::vector<std::size_t> normal_idx;
  for (std::size_t i = 0; i < recordings.size(); ++i) {
    if (recordings[i].label == Label::Normal) normal_idx.push_back(i);
  }
  if (normal_idx.empty()) {
    throw std::runtime_error("split_normals: no Normal recordings");
  }

  Rng rng(seed);
  rng.shuffle(normal_idx);
  const auto n_train = static_cast<std::size_t>(
      std::floor(train_fraction * static_cast<double>(normal_idx.size())));

  DatasetSplit out;
  out.seed = seed;
  for (std::size_t i = 0; i < normal_idx.size(); ++i) {
    auto& dst = i < n_train ? out.train : out.eval;
    dst.push_back(recordings[normal_idx[i]]);
  }
  for (const auto& rec : recordings) {
    if (rec.label == Label::Abnormal) out.eval.push_back(rec);
  }
  return out;
}

}  // namespace pcgvae
