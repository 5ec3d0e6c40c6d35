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

#include "pcgvae/scoring.hpp"

#include <cmath>
#include <sstream>

#include "pcgvae/text_io.hpp"

namespace pcgvae {

ScoreReport score_recording(const VaeModel& model, const Recording& recording,
                            const PipelineConfig& config) {
  const std::vector<SuperFrame> frames = pipeline_super_frames(recording, config);
  const Matrix batch = pack_super_frames(frames);
  const InferenceResult inf = infer_batch(model, batch);

  ScoreReport report;
  report.recording_id = recording.id;
  report.label = recording.label;
  report.frame_scores.resize(frames.size());

  const Scalar inv_dim = 1.0 / static_cast<Scalar>(batch.cols());
  Scalar sum = 0.0;
  for (std::size_t i = 0; i < frames.size(); ++i) {
    const auto r = static_cast<Index>(i);
    FrameScore& fs = report.frame_scores[i];
    fs.origin_frame = frames[i].origin_frame;
    fs.recon_loss = (inf.recon.row(r) - batch.row(r)).squaredNorm() * inv_dim;
    if (model.has_logvar_head()) {
      fs.kl = 0.5 * (inf.mu.row(r).squaredNorm() +
                     inf.logvar.row(r)
                         .unaryExpr([](Scalar v) { return std::expm1(v) - v; })
                         .sum());
    }
    sum += fs.recon_loss;
  }
  report.score = sum / static_cast<Scalar>(frames.size());
  return report;
}

std::vector<ScoreReport> score_recordings(const VaeModel& model,
                                          const std::vector<Recording>& recordings,
                                          const PipelineConfig& config) {
  std::vector<ScoreReport> reports;
  reports.reserve(recordings.size());
  for (const auto& rec : recordings) {
    reports.push_back(score_recording(model, rec, config));
  }
  return reports;
}

void write_scores_csv(const std::filesystem::path& path,
                      const std::vector<ScoreReport>& reports) {
  std::ostringstream out;
  out << "recording_id,label,score\n";
  for (const auto& r : reports) {
    out << r.recording_id << ',' << label_name(r.label) << ','
        << format_double(r.score) << '\n';
  }
  write_text_file(path, out.str());
}

void write_frame_scores_csv(const std::filesystem::path& path,
                            const std::vector<ScoreReport>& reports) {
  std::ostringstream out;
  out << "recording_id,frame_index,recon_loss,kl\n";
  for (const auto& r : reports) {
    for (const auto& fs : r.frame_scores) {
      out << r.recording_id << ',' << fs.origin_frame << ','
          << format_double(fs.recon_loss) << ',' << format_double(fs.kl) << '\n';
    }
  }
  write_text_file(path, out.str());
}

}  // namespace pcgvae
