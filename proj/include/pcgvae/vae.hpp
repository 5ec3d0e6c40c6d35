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
#include <string>
#include <vector>

#include "pcgvae/dsp.hpp"
#include "pcgvae/types.hpp"

namespace pcgvae {

inline constexpr Scalar kBnEps = 1e-5;
inline constexpr Scalar kBnMomentum = 0.9;  // running = m*running + (1-m)*batch

enum class ModelMode { BetaVae, PlainAe };
enum class Activation { ReLU, Identity };

struct LayerSpec {
  int in_dim = 0;
  int out_dim = 0;
  Activation activation = Activation::ReLU;
  bool batch_norm = false;
};

// Fully-connected layer: linear map, then (optionally) batch normalization,
// then the activation. Batch-norm state rides along with the weights.
struct DenseLayer {
  LayerSpec spec;
  Matrix weight;   // in_dim x out_dim
  RowVector bias;  // 1 x out_dim
  RowVector bn_scale, bn_shift;         // learned; empty without batch_norm
  RowVector bn_run_mean, bn_run_var;    // inference statistics
};

struct VaeArch {
  int input_dim = 70;
  std::vector<int> encoder_hidden = {32, 32, 16, 16};
  int latent_dim = 16;
};

// Full parameter set: encoder stack, mu/logvar heads, mirrored decoder stack
// whose final layer maps back to input_dim with identity activation.
// In PlainAe mode the logvar head is absent and the latent is the mu head
// output directly (no sampling anywhere).
struct VaeModel {
  ModelMode mode = ModelMode::BetaVae;
  Scalar beta = 0.0;
  int input_dim = 0;
  int latent_dim = 0;
  std::vector<DenseLayer> encoder;  // hidden stack
  DenseLayer mu_head;               // linear, identity, no batch norm
  DenseLayer logvar_head;           // BetaVae only
  std::vector<DenseLayer> decoder;  // hidden stack + output layer (last)

  bool has_logvar_head() const { return mode == ModelMode::BetaVae; }
  std::vector<int> encoder_hidden_dims() const;
};

struct LatentDistribution {
  Vector mu;
  Vector logvar;  // empty in PlainAe mode
};

struct LossBreakdown {
  Scalar mse = 0.0;
  Scalar kl = 0.0;
  Scalar beta = 0.0;
  Scalar total = 0.0;
};

struct TrainConfig {
  int batch_size = 640;
  int epochs = 50;
  Scalar learning_rate = 1e-3;
  std::uint64_t seed = 0;
  // Optimizer is Adam with beta1 = 0.9, beta2 = 0.999, eps = 1e-8.
};

struct LayerGrads {
  Matrix weight;
  RowVector bias, bn_scale, bn_shift;
};

// Mirrors the VaeModel parameter layout.
struct VaeGradients {
  std::vector<LayerGrads> encoder;
  LayerGrads mu_head, logvar_head;
  std::vector<LayerGrads> decoder;
};

// Per-batch-norm-layer batch statistics from a training-mode forward pass,
// in canonical layer order (encoder stack, then decoder stack).
struct BatchStats {
  std::vector<RowVector> means;
  std::vector<RowVector> vars;
};

// Weights drawn uniformly with He fan-in scaling from a deterministic stream;
// biases zero, batch-norm scale 1 / shift 0 / running stats (0, 1).
VaeModel init_model(Scalar beta, std::uint64_t seed, ModelMode mode,
                    const VaeArch& arch = {});

// Per-sample posterior parameters. training=true normalizes with batch
// statistics (requires >= 2 samples); training=false uses running statistics.
// Neither touches model state.
std::vector<LatentDistribution> encode(const VaeModel& model,
                                       const std::vector<SuperFrame>& batch,
                                       bool training);

// z_k = mu_k + exp(logvar_k / 2) * noise_k.
Vector reparameterize(const LatentDistribution& latent, const Vector& noise);

// Reconstruction of a single latent vector. training=true is rejected (a
// single sample has no batch statistics).
Vector decode(const VaeModel& model, const Vector& z, bool training = false);

// Training-mode loss on a batch (rows = super-frames): mse is the mean
// squared error over all samples and components, kl the per-sample mean of
// the closed-form divergence from N(0, I), total = mse + beta * kl.
// `noise` must be batch_rows x latent_dim in BetaVae mode; it is unused in
// PlainAe mode. Throws on non-finite activations, reporting the offending
// batch row.
LossBreakdown loss(const VaeModel& model, const Matrix& batch,
                   const Matrix& noise);
LossBreakdown loss(const VaeModel& model, const std::vector<SuperFrame>& batch,
                   const Matrix& noise);

// Analytic gradients of `loss` with respect to every weight, bias and
// batch-norm scale/shift; the reparameterization is differentiated pathwise
// through the fixed noise. Optionally reports the batch statistics used.
LossBreakdown loss_gradients(const VaeModel& model, const Matrix& batch,
                             const Matrix& noise, VaeGradients& grads,
                             BatchStats* stats = nullptr);

// Inference-mode (running statistics, z = mu) forward pass for a batch.
struct InferenceResult {
  Matrix mu;      // n x latent_dim
  Matrix logvar;  // empty in PlainAe mode
  Matrix recon;   // n x input_dim
};
InferenceResult infer_batch(const VaeModel& model, const Matrix& batch);

struct TrainResult {
  VaeModel model;
  std::vector<LossBreakdown> history;  // one entry per epoch
};

// Deterministic in config.seed: epoch shuffles and noise draws come from one
// stream seeded with it. Batch-norm running statistics are updated from each
// batch with momentum kBnMomentum. Aborts with an epoch/batch report when the
// loss stops being finite.
TrainResult train(VaeModel model, const std::vector<SuperFrame>& frames,
                  const TrainConfig& config);

// Flat views over the learned parameters (running statistics excluded), in
// canonical traversal order: encoder layers, mu head, logvar head, decoder
// layers; per layer weight (row-major), bias, bn scale, bn shift.
Index parameter_count(const VaeModel& model);
Vector flatten_parameters(const VaeModel& model);
void set_parameters(VaeModel& model, const Vector& params);
Vector flatten_gradients(const VaeGradients& grads);

const char* mode_name(ModelMode mode);
ModelMode mode_from_name(const std::string& name);

}  // namespace pcgvae
