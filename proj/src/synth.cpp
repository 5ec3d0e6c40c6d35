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

#include "pcgvae/synth.hpp"

#include <cmath>
#include <iomanip>
#include <sstream>
#include <stdexcept>

#include "pcgvae/dataset.hpp"
#include "pcgvae/rng.hpp"
#include "pcgvae/wav.hpp"

namespace pcgvae {

namespace {

constexpr double kS1Duration = 0.12, kS1Tau = 0.035;
constexpr double kS2Duration = 0.10, kS2Tau = 0.025;
constexpr double kMurmurGain = 0.35;     // relative to the cycle's S1 amplitude
constexpr int kMurmurComponents = 10;    // random-phase sines, band-limited
constexpr double kSnrDb = 20.0;

// Heart sounds are broadband transients: each pulse carries overtones of its
// base frequency so the upper Mel bins see the cardiac rhythm too.
constexpr double kOvertoneRatio[] = {1.0, 2.3, 4.7, 9.1};
constexpr double kOvertoneAmp[] = {1.0, 0.5, 0.28, 0.15};

void add_pulse(Vector& signal, int sample_rate, double onset_s, double freq_hz,
               double amp, double duration_s, double tau_s) {
  const auto begin = static_cast<Index>(std::ceil(onset_s * sample_rate));
  const auto end = std::min<Index>(
      signal.size(),
      static_cast<Index>(std::ceil((onset_s + duration_s) * sample_rate)));
  const double nyquist = sample_rate / 2.0;
  for (Index i = std::max<Index>(begin, 0); i < end; ++i) {
    const double u = static_cast<double>(i) / sample_rate - onset_s;
    const double env = amp * std::exp(-u / tau_s);
    double v = 0.0;
    for (std::size_t c = 0; c < std::size(kOvertoneRatio); ++c) {
      const double f = freq_hz * kOvertoneRatio[c];
      if (f >= 0.95 * nyquist) break;
      v += kOvertoneAmp[c] * std::sin(2.0 * M_PI * f * u);
    }
    signal[i] += env * v;
  }
}

struct MurmurBand {
  double freq[kMurmurComponents];
  double phase[kMurmurComponents];
  double amp[kMurmurComponents];
};

// Hann-shaped band-limited noise burst over [from_s, to_s) with peak-envelope
// RMS close to `rms`.
void add_murmur(Vector& signal, int sample_rate, double from_s, double to_s,
                double rms, const MurmurBand& band) {
  if (to_s <= from_s) return;
  double sum_sq = 0.0;
  for (int c = 0; c < kMurmurComponents; ++c) sum_sq += band.amp[c] * band.amp[c];
  const double scale = rms / std::sqrt(sum_sq / 2.0);
  const auto begin = static_cast<Index>(std::ceil(from_s * sample_rate));
  const auto end =
      std::min<Index>(signal.size(),
                      static_cast<Index>(std::ceil(to_s * sample_rate)));
  const double span = to_s - from_s;
  for (Index i = std::max<Index>(begin, 0); i < end; ++i) {
    const double t = static_cast<double>(i) / sample_rate;
    const double env = std::sin(M_PI * (t - from_s) / span);
    double v = 0.0;
    for (int c = 0; c < kMurmurComponents; ++c) {
      v += band.amp[c] * std::sin(2.0 * M_PI * band.freq[c] * t + band.phase[c]);
    }
    signal[i] += scale * env * env * v;
  }
}

std::string make_id(bool abnormal, int offset) {
  std::ostringstream id;
  id << "syn_" << (abnormal ? 'a' : 'n') << '_' << std::setw(4)
     << std::setfill('0') << offset;
  return id.str();
}

Recording synthesize(const SynthConfig& cfg, bool abnormal, int offset) {
  // Streams are keyed by the offset only, never the class, so the abnormal
  // recording at an offset shares layout and noise with its normal twin.
  Rng layout(mix_seed(mix_seed(cfg.seed, offset), 0));
  Rng patho(mix_seed(mix_seed(cfg.seed, offset), 1));
  Rng noise(mix_seed(mix_seed(cfg.seed, offset), 2));

  const auto n = static_cast<Index>(
      std::llround(cfg.duration_seconds * cfg.sample_rate));
  Vector signal = Vector::Zero(n);

  const double bpm = layout.uniform(cfg.min_bpm, cfg.max_bpm);
  const double base_cycle = 60.0 / bpm;

  double t = layout.uniform(0.02, 0.12);
  while (t < cfg.duration_seconds) {
    double cycle = base_cycle * (1.0 + layout.uniform(-0.03, 0.03));
    const double s1_freq = layout.uniform(35.0, 55.0);
    const double s1_amp = layout.uniform(0.75, 1.0);
    const double s2_frac = layout.uniform(0.28, 0.34);
    const double s2_freq = layout.uniform(55.0, 85.0);
    const double s2_amp = layout.uniform(0.45, 0.65);

    add_pulse(signal, cfg.sample_rate, t, s1_freq, s1_amp, kS1Duration, kS1Tau);
    add_pulse(signal, cfg.sample_rate, t + s2_frac * cycle, s2_freq, s2_amp,
              kS2Duration, kS2Tau);

    if (abnormal) {
      switch (cfg.anomaly) {
        case AnomalyKind::Murmur: {
          MurmurBand band;
          for (int c = 0; c < kMurmurComponents; ++c) {
            band.freq[c] = patho.uniform(120.0, 300.0);
            band.phase[c] = patho.uniform(0.0, 2.0 * M_PI);
            band.amp[c] = patho.uniform(0.5, 1.0);
          }
          add_murmur(signal, cfg.sample_rate, t + kS1Duration,
                     t + s2_frac * cycle, kMurmurGain * s1_amp, band);
          break;
        }
        case AnomalyKind::ExtraSound:
          add_pulse(signal, cfg.sample_rate, t + cycle * patho.uniform(0.55, 0.70),
                    patho.uniform(40.0, 70.0), patho.uniform(0.4, 0.6),
                    kS1Duration, kS1Tau);
          break;
        case AnomalyKind::Arrhythmia: {
          const double magnitude = patho.uniform(0.25, 0.45);
          cycle *= patho.below(2) == 0 ? 1.0 - magnitude : 1.0 + magnitude;
          break;
        }
      }
    }
    t += cycle;
  }

  const double rms = std::sqrt(signal.squaredNorm() / n);
  const double noise_std =
      rms > 0.0 ? rms * std::pow(10.0, -kSnrDb / 20.0) : 0.01;
  for (Index i = 0; i < n; ++i) signal[i] += noise_std * noise.normal();

  const double peak = signal.cwiseAbs().maxCoeff();
  if (peak > 0.0) signal *= 0.9 / peak;

  Recording rec;
  rec.id = make_id(abnormal, offset);
  rec.subset = "synthetic";
  rec.samples = std::move(signal);
  rec.sample_rate = cfg.sample_rate;
  rec.label = abnormal ? Label::Abnormal : Label::Normal;
  return rec;
}

}  // namespace

const char* anomaly_name(AnomalyKind kind) {
  switch (kind) {
    case AnomalyKind::Murmur: return "murmur";
    case AnomalyKind::ExtraSound: return "extra_sound";
    case AnomalyKind::Arrhythmia: return "arrhythmia";
  }
  return "murmur";
}

AnomalyKind anomaly_from_name(const std::string& name) {
  if (name == "murmur") return AnomalyKind::Murmur;
  if (name == "extra_sound") return AnomalyKind::ExtraSound;
  if (name == "arrhythmia") return AnomalyKind::Arrhythmia;
  throw std::runtime_error("unknown anomaly kind: " + name);
}

std::vector<Recording> generate(const SynthConfig& config) {
  if (config.count_normal < 0 || config.count_abnormal < 0) {
    throw std::invalid_argument("synth: counts must be >= 0");
  }
  if (!(config.duration_seconds > 0.0) || config.sample_rate <= 0) {
    throw std::invalid_argument("synth: duration and sample rate must be positive");
  }
  if (!(config.min_bpm > 0.0) || config.max_bpm < config.min_bpm) {
    throw std::invalid_argument("synth: bad heart-rate range");
  }
  std::vector<Recording> out;
  out.reserve(static_cast<std::size_t>(config.count_normal + config.count_abnormal));
  for (int j = 0; j < config.count_normal; ++j) {
    out.push_back(synthesize(config, false, j));
  }
  for (int j = 0; j < config.count_abnormal; ++j) {
    out.push_back(synthesize(config, true, j));
  }
  return out;
}

void write_corpus(const std::vector<Recording>& recordings,
                  const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  for (const auto& rec : recordings) {
    write_wav(dir / (rec.id + ".wav"), rec.samples, rec.sample_rate);
  }
  write_reference_csv(dir / "REFERENCE.csv", recordings);
}

}  // namespace pcgvae
