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

#include "pcgvae/dsp.hpp"

#include <cmath>
#include <complex>
#include <sstream>
#include <stdexcept>
#include <vector>

#include <unsupported/Eigen/FFT>

#include "pcgvae/text_io.hpp"

namespace pcgvae {

Scalar hz_to_mel(Scalar hz) { return 2595.0 * std::log10(1.0 + hz / 700.0); }

Scalar mel_to_hz(Scalar mel) {
  return 700.0 * (std::pow(10.0, mel / 2595.0) - 1.0);
}

MelFilterbank mel_filterbank(int window, int sample_rate, int mel_bins) {
  if (window < 2 || sample_rate <= 0 || mel_bins < 1) {
    throw std::invalid_argument("mel_filterbank: bad parameters");
  }
  const Index n_fft_bins = window / 2 + 1;
  const Scalar nyquist = static_cast<Scalar>(sample_rate) / 2.0;

  // mel_bins triangles need mel_bins + 2 equally spaced mel points.
  Vector hz_points(mel_bins + 2);
  const Scalar mel_hi = hz_to_mel(nyquist);
  for (int j = 0; j < mel_bins + 2; ++j) {
    hz_points[j] = mel_to_hz(mel_hi * static_cast<Scalar>(j) /
                             static_cast<Scalar>(mel_bins + 1));
  }

  MelFilterbank fb;
  fb.weights = Matrix::Zero(mel_bins, n_fft_bins);
  fb.center_hz = hz_points.segment(1, mel_bins);
  for (int m = 0; m < mel_bins; ++m) {
    const Scalar left = hz_points[m];
    const Scalar center = hz_points[m + 1];
    const Scalar right = hz_points[m + 2];
    for (Index k = 0; k < n_fft_bins; ++k) {
      const Scalar f = static_cast<Scalar>(k) * sample_rate / window;
      Scalar w = 0.0;
      if (f > left && f < center) {
        w = (f - left) / (center - left);
      } else if (f == center) {
        w = 1.0;
      } else if (f > center && f < right) {
        w = (right - f) / (right - center);
      }
      fb.weights(m, k) = w;
    }
  }
  return fb;
}

Recording normalize_length(const Recording& recording, Scalar target_seconds) {
  if (recording.samples.size() == 0) {
    throw std::invalid_argument("normalize_length: empty recording");
  }
  if (!(target_seconds > 0.0)) {
    throw std::invalid_argument("normalize_length: target_seconds must be positive");
  }
  const auto target_len = static_cast<Index>(
      std::llround(target_seconds * recording.sample_rate));
  const Index n = recording.samples.size();

  Recording out = recording;
  if (n == target_len) return out;
  out.samples.resize(target_len);
  if (n > target_len) {
    out.samples = recording.samples.head(target_len);
  } else {
    for (Index i = 0; i < target_len; ++i) {
      out.samples[i] = recording.samples[i % n];
    }
  }
  return out;
}

MelSpectrogram mel_spectrogram(const Recording& recording, int window, int hop,
                               int mel_bins) {
  if (window < 2 || hop < 1 || mel_bins < 1) {
    throw std::invalid_argument("mel_spectrogram: bad framing parameters");
  }
  const Index n = recording.samples.size();
  if (n < window) {
    throw std::invalid_argument("mel_spectrogram: recording shorter than one window");
  }
  const Index n_frames = frame_count(n, window, hop);
  const Index n_fft_bins = window / 2 + 1;
  const MelFilterbank fb = mel_filterbank(window, recording.sample_rate, mel_bins);

  // Periodic Hann analysis window.
  Vector hann(window);
  for (int i = 0; i < window; ++i) {
    hann[i] = 0.5 - 0.5 * std::cos(2.0 * M_PI * i / window);
  }

  Eigen::FFT<Scalar> fft;
  std::vector<Scalar> frame(static_cast<std::size_t>(window));
  std::vector<std::complex<Scalar>> spectrum;
  Vector power(n_fft_bins);

  MelSpectrogram spec;
  spec.window = window;
  spec.hop = hop;
  spec.sample_rate = recording.sample_rate;
  spec.values.resize(mel_bins, n_frames);
  for (Index t = 0; t < n_frames; ++t) {
    const Index start = t * hop;
    for (int i = 0; i < window; ++i) {
      frame[static_cast<std::size_t>(i)] = recording.samples[start + i] * hann[i];
    }
    fft.fwd(spectrum, frame);
    for (Index k = 0; k < n_fft_bins; ++k) {
      power[k] = std::norm(spectrum[static_cast<std::size_t>(k)]);
    }
    spec.values.col(t) =
        ((fb.weights * power).array() + kLogEnergyFloor).log().matrix();
  }
  return spec;
}

NormalizedSpectrogram normalize_bins(const MelSpectrogram& spec) {
  const Index n = spec.n_frames();
  if (n < 2) {
    throw std::invalid_argument("normalize_bins: need at least 2 frames");
  }
  NormalizedSpectrogram out;
  out.window = spec.window;
  out.hop = spec.hop;
  out.sample_rate = spec.sample_rate;
  out.values.resizeLike(spec.values);
  for (Index m = 0; m < spec.mel_bins(); ++m) {
    const auto row = spec.values.row(m);
    const Scalar mean = row.mean();
    const Scalar var = (row.array() - mean).square().mean();
    if (var <= kDegenerateRowVariance) {
      out.values.row(m).setZero();
    } else {
      out.values.row(m) = (row.array() - mean) / std::sqrt(var);
    }
  }
  return out;
}

std::vector<SuperFrame> super_frames(const NormalizedSpectrogram& spec) {
  const Index n = spec.n_frames();
  const Index m = spec.mel_bins();
  if (n < kSuperFrameSpan) {
    throw std::invalid_argument("super_frames: need at least " +
                                std::to_string(kSuperFrameSpan) + " frames, got " +
                                std::to_string(n));
  }
  std::vector<SuperFrame> frames;
  frames.reserve(static_cast<std::size_t>(n - kSuperFrameSpan + 1));
  for (Index i = 0; i + kSuperFrameSpan <= n; ++i) {
    SuperFrame sf;
    sf.origin_frame = i;
    sf.values.resize(m * kSuperFrameSpan);
    for (int j = 0; j < kSuperFrameSpan; ++j) {
      sf.values.segment(j * m, m) = spec.values.col(i + j);
    }
    frames.push_back(std::move(sf));
  }
  return frames;
}

std::vector<SuperFrame> pipeline_super_frames(const Recording& recording,
                                              const PipelineConfig& config) {
  const Recording fixed = normalize_length(recording, config.target_seconds);
  const MelSpectrogram spec =
      mel_spectrogram(fixed, config.frames.window, config.frames.hop,
                      config.frames.mel_bins);
  return super_frames(normalize_bins(spec));
}

Matrix pack_super_frames(const std::vector<SuperFrame>& frames) {
  if (frames.empty()) return Matrix(0, 0);
  Matrix batch(static_cast<Index>(frames.size()), frames.front().values.size());
  for (std::size_t i = 0; i < frames.size(); ++i) {
    if (frames[i].values.size() != batch.cols()) {
      throw std::invalid_argument("pack_super_frames: inconsistent dimensions");
    }
    batch.row(static_cast<Index>(i)) = frames[i].values.transpose();
  }
  return batch;
}

void write_matrix_csv(const std::filesystem::path& path, const Matrix& m) {
  std::ostringstream out;
  for (Index j = 0; j < m.cols(); ++j) {
    out << (j ? "," : "") << 'c' << j;
  }
  out << '\n';
  for (Index i = 0; i < m.rows(); ++i) {
    for (Index j = 0; j < m.cols(); ++j) {
      if (j) out << ',';
      out << format_double(m(i, j));
    }
    out << '\n';
  }
  write_text_file(path, out.str());
}

}  // namespace pcgvae
