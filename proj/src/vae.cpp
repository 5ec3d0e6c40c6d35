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

#include "pcgvae/vae.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>

#include "pcgvae/rng.hpp"

namespace pcgvae {

namespace {

Scalar expm1_minus(Scalar v) { return std::expm1(v) - v; }

DenseLayer make_layer(int in_dim, int out_dim, Activation act, bool batch_norm) {
  if (in_dim < 1 || out_dim < 1) {
    throw std::invalid_argument("layer dimensions must be positive");
  }
  DenseLayer layer;
  layer.spec = LayerSpec{in_dim, out_dim, act, batch_norm};
  layer.weight.resize(in_dim, out_dim);
  layer.bias = RowVector::Zero(out_dim);
  if (batch_norm) {
    layer.bn_scale = RowVector::Ones(out_dim);
    layer.bn_shift = RowVector::Zero(out_dim);
    layer.bn_run_mean = RowVector::Zero(out_dim);
    layer.bn_run_var = RowVector::Ones(out_dim);
  }
  return layer;
}

void init_weights(DenseLayer& layer, Rng& rng) {
  const Scalar limit = std::sqrt(6.0 / layer.spec.in_dim);
  for (Index i = 0; i < layer.weight.rows(); ++i) {
    for (Index j = 0; j < layer.weight.cols(); ++j) {
      layer.weight(i, j) = rng.uniform(-limit, limit);
    }
  }
}

// Backward-pass bookkeeping for one layer.
struct LayerCache {
  Matrix input;     // n x in_dim
  Matrix centered;  // linear output minus batch mean (batch-norm training)
  RowVector istd;   // 1/sqrt(var + eps)
  Matrix xhat;
  Matrix preact;    // input to the activation
};

Matrix dense_forward(const DenseLayer& layer, const Matrix& x, bool training,
                     LayerCache* cache, RowVector* batch_mean = nullptr,
                     RowVector* batch_var = nullptr) {
  if (x.cols() != layer.spec.in_dim) {
    throw std::invalid_argument("dimension mismatch: batch has " +
                                std::to_string(x.cols()) + " columns, layer expects " +
                                std::to_string(layer.spec.in_dim));
  }
  Matrix lin = (x * layer.weight).rowwise() + layer.bias;
  Matrix pre;
  if (layer.spec.batch_norm) {
    RowVector mean, istd;
    Matrix centered;
    if (training) {
      if (x.rows() < 2) {
        throw std::invalid_argument(
            "batch statistics undefined for a single-sample training batch");
      }
      mean = lin.colwise().mean();
      centered = lin.rowwise() - mean;
      const RowVector var = centered.array().square().colwise().mean().matrix();
      istd = (var.array() + kBnEps).sqrt().inverse().matrix();
      if (batch_mean) *batch_mean = mean;
      if (batch_var) *batch_var = var;
    } else {
      mean = layer.bn_run_mean;
      centered = lin.rowwise() - mean;
      istd = (layer.bn_run_var.array() + kBnEps).sqrt().inverse().matrix();
    }
    Matrix xhat = (centered.array().rowwise() * istd.array()).matrix();
    pre = ((xhat.array().rowwise() * layer.bn_scale.array()).rowwise() +
           layer.bn_shift.array())
              .matrix();
    if (cache) {
      cache->centered = std::move(centered);
      cache->istd = std::move(istd);
      cache->xhat = std::move(xhat);
    }
  } else {
    pre = std::move(lin);
  }
  Matrix out =
      layer.spec.activation == Activation::ReLU ? pre.cwiseMax(0.0) : pre;
  if (cache) {
    cache->input = x;
    cache->preact = std::move(pre);
  }
  return out;
}

// Propagates d(loss)/d(layer output) to d(loss)/d(layer input), filling the
// parameter gradients. Only valid for training-mode caches.
Matrix dense_backward(const DenseLayer& layer, const LayerCache& cache,
                      Matrix d_out, LayerGrads& grads) {
  if (layer.spec.activation == Activation::ReLU) {
    d_out.array() *= (cache.preact.array() > 0.0).cast<Scalar>();
  }
  Matrix d_lin;
  if (layer.spec.batch_norm) {
    const Scalar n = static_cast<Scalar>(cache.input.rows());
    grads.bn_scale = (d_out.array() * cache.xhat.array()).colwise().sum().matrix();
    grads.bn_shift = d_out.colwise().sum();
    const Matrix d_xhat =
        (d_out.array().rowwise() * layer.bn_scale.array()).matrix();
    const RowVector d_var =
        ((d_xhat.array() * cache.centered.array()).colwise().sum() *
         cache.istd.array().cube() * Scalar(-0.5))
            .matrix();
    const RowVector d_mean =
        (-(d_xhat.array().rowwise() * cache.istd.array()).colwise().sum() +
         d_var.array() * cache.centered.colwise().sum().array() * (-2.0 / n))
            .matrix();
    const RowVector d_var_scaled = d_var * (2.0 / n);
    d_lin = ((d_xhat.array().rowwise() * cache.istd.array()) +
             (cache.centered.array().rowwise() * d_var_scaled.array()))
                .matrix()
                .rowwise() +
            (d_mean / n);
  } else {
    d_lin = std::move(d_out);
  }
  grads.weight.noalias() = cache.input.transpose() * d_lin;
  grads.bias = d_lin.colwise().sum();
  return d_lin * layer.weight.transpose();
}

LayerGrads zero_grads_like(const DenseLayer& layer) {
  LayerGrads g;
  g.weight = Matrix::Zero(layer.weight.rows(), layer.weight.cols());
  g.bias = RowVector::Zero(layer.bias.size());
  if (layer.spec.batch_norm) {
    g.bn_scale = RowVector::Zero(layer.bn_scale.size());
    g.bn_shift = RowVector::Zero(layer.bn_shift.size());
  }
  return g;
}

struct ForwardPass {
  std::vector<LayerCache> encoder;
  LayerCache mu_cache, logvar_cache;
  std::vector<LayerCache> decoder;
  Matrix mu, logvar, sigma_half, z, recon;
  BatchStats stats;
};

void check_finite(const Matrix& m, const char* stage) {
  if (m.allFinite()) return;
  for (Index i = 0; i < m.rows(); ++i) {
    if (!m.row(i).allFinite()) {
      throw std::runtime_error(std::string("non-finite activation in ") + stage +
                               " at batch row " + std::to_string(i));
    }
  }
}

// Training-mode forward pass through the whole model with caches.
ForwardPass forward_train(const VaeModel& model, const Matrix& batch,
                          const Matrix& noise) {
  if (batch.rows() == 0) throw std::invalid_argument("empty batch");
  if (batch.cols() != model.input_dim) {
    throw std::invalid_argument("dimension mismatch: super-frames of length " +
                                std::to_string(batch.cols()) + ", model input is " +
                                std::to_string(model.input_dim));
  }
  ForwardPass fp;
  fp.encoder.resize(model.encoder.size());
  fp.decoder.resize(model.decoder.size());

  auto forward_stage = [&fp](const DenseLayer& layer, Matrix h,
                             LayerCache& cache) {
    RowVector mean, var;
    const bool bn = layer.spec.batch_norm;
    Matrix out = dense_forward(layer, h, true, &cache, bn ? &mean : nullptr,
                               bn ? &var : nullptr);
    if (bn) {
      fp.stats.means.push_back(std::move(mean));
      fp.stats.vars.push_back(std::move(var));
    }
    return out;
  };

  Matrix h = batch;
  for (std::size_t i = 0; i < model.encoder.size(); ++i) {
    h = forward_stage(model.encoder[i], std::move(h), fp.encoder[i]);
  }
  fp.mu = dense_forward(model.mu_head, h, true, &fp.mu_cache);
  check_finite(fp.mu, "encoder mu head");
  if (model.has_logvar_head()) {
    if (noise.rows() != batch.rows() || noise.cols() != model.latent_dim) {
      throw std::invalid_argument("noise must be batch_rows x latent_dim");
    }
    fp.logvar = dense_forward(model.logvar_head, h, true, &fp.logvar_cache);
    check_finite(fp.logvar, "encoder logvar head");
    fp.sigma_half = (0.5 * fp.logvar.array()).exp().matrix();
    fp.z = (fp.mu.array() + fp.sigma_half.array() * noise.array()).matrix();
  } else {
    fp.z = fp.mu;
  }

  Matrix g = fp.z;
  for (std::size_t i = 0; i < model.decoder.size(); ++i) {
    g = forward_stage(model.decoder[i], std::move(g), fp.decoder[i]);
  }
  fp.recon = std::move(g);
  check_finite(fp.recon, "decoder output");
  return fp;
}

LossBreakdown loss_from_forward(const VaeModel& model, const Matrix& batch,
                                const ForwardPass& fp) {
  const Scalar n = static_cast<Scalar>(batch.rows());
  LossBreakdown lb;
  lb.beta = model.beta;
  lb.mse = (fp.recon - batch).squaredNorm() / (n * batch.cols());
  if (model.has_logvar_head()) {
    // 0.5 * (mu^2 + e^lv - lv - 1) per dimension; the expm1 form keeps every
    // term non-negative under floating-point rounding.
    const Scalar kl_sum =
        0.5 * (fp.mu.squaredNorm() + fp.logvar.unaryExpr(&expm1_minus).sum());
    lb.kl = kl_sum / n;
  }
  lb.total = lb.mse + lb.beta * lb.kl;
  return lb;
}

}  // namespace

std::vector<int> VaeModel::encoder_hidden_dims() const {
  std::vector<int> dims;
  dims.reserve(encoder.size());
  for (const auto& layer : encoder) dims.push_back(layer.spec.out_dim);
  return dims;
}

const char* mode_name(ModelMode mode) {
  return mode == ModelMode::BetaVae ? "beta_vae" : "plain_ae";
}

ModelMode mode_from_name(const std::string& name) {
  if (name == "beta_vae") return ModelMode::BetaVae;
  if (name == "plain_ae") return ModelMode::PlainAe;
  throw std::runtime_error("unknown model mode: " + name);
}

VaeModel init_model(Scalar beta, std::uint64_t seed, ModelMode mode,
                    const VaeArch& arch) {
  if (!(beta >= 0.0) || !std::isfinite(beta)) {
    throw std::invalid_argument("beta must be finite and >= 0");
  }
  if (arch.input_dim < 1 || arch.latent_dim < 1) {
    throw std::invalid_argument("input_dim and latent_dim must be positive");
  }

  VaeModel model;
  model.mode = mode;
  model.beta = mode == ModelMode::PlainAe ? 0.0 : beta;
  model.input_dim = arch.input_dim;
  model.latent_dim = arch.latent_dim;

  int prev = arch.input_dim;
  for (const int h : arch.encoder_hidden) {
    model.encoder.push_back(make_layer(prev, h, Activation::ReLU, true));
    prev = h;
  }
  model.mu_head = make_layer(prev, arch.latent_dim, Activation::Identity, false);
  if (mode == ModelMode::BetaVae) {
    model.logvar_head =
        make_layer(prev, arch.latent_dim, Activation::Identity, false);
  }
  prev = arch.latent_dim;
  for (auto it = arch.encoder_hidden.rbegin(); it != arch.encoder_hidden.rend();
       ++it) {
    model.decoder.push_back(make_layer(prev, *it, Activation::ReLU, true));
    prev = *it;
  }
  model.decoder.push_back(
      make_layer(prev, arch.input_dim, Activation::Identity, false));

  Rng rng(seed);
  for (auto& layer : model.encoder) init_weights(layer, rng);
  init_weights(model.mu_head, rng);
  if (model.has_logvar_head()) init_weights(model.logvar_head, rng);
  for (auto& layer : model.decoder) init_weights(layer, rng);
  return model;
}

std::vector<LatentDistribution> encode(const VaeModel& model,
                                       const std::vector<SuperFrame>& batch,
                                       bool training) {
  const Matrix x = pack_super_frames(batch);
  if (x.rows() == 0) return {};
  Matrix h = x;
  for (const auto& layer : model.encoder) {
    h = dense_forward(layer, h, training, nullptr);
  }
  const Matrix mu = dense_forward(model.mu_head, h, training, nullptr);
  Matrix logvar;
  if (model.has_logvar_head()) {
    logvar = dense_forward(model.logvar_head, h, training, nullptr);
  }
  std::vector<LatentDistribution> out(batch.size());
  for (std::size_t i = 0; i < batch.size(); ++i) {
    const auto r = static_cast<Index>(i);
    out[i].mu = mu.row(r).transpose();
    if (model.has_logvar_head()) out[i].logvar = logvar.row(r).transpose();
  }
  return out;
}

Vector reparameterize(const LatentDistribution& latent, const Vector& noise) {
  if (latent.logvar.size() != latent.mu.size()) {
    throw std::invalid_argument("reparameterize: latent has no logvar");
  }
  if (noise.size() != latent.mu.size()) {
    throw std::invalid_argument("reparameterize: noise length mismatch");
  }
  return (latent.mu.array() + (0.5 * latent.logvar.array()).exp() * noise.array())
      .matrix();
}

Vector decode(const VaeModel& model, const Vector& z, bool training) {
  if (training) {
    throw std::invalid_argument(
        "decode: batch statistics undefined for a single sample");
  }
  if (z.size() != model.latent_dim) {
    throw std::invalid_argument("decode: latent vector length mismatch");
  }
  Matrix g = z.transpose();
  for (const auto& layer : model.decoder) {
    g = dense_forward(layer, g, false, nullptr);
  }
  return g.row(0).transpose();
}

LossBreakdown loss(const VaeModel& model, const Matrix& batch,
                   const Matrix& noise) {
  const ForwardPass fp = forward_train(model, batch, noise);
  return loss_from_forward(model, batch, fp);
}

LossBreakdown loss(const VaeModel& model, const std::vector<SuperFrame>& batch,
                   const Matrix& noise) {
  return loss(model, pack_super_frames(batch), noise);
}

LossBreakdown loss_gradients(const VaeModel& model, const Matrix& batch,
                             const Matrix& noise, VaeGradients& grads,
                             BatchStats* stats) {
  const ForwardPass fp = forward_train(model, batch, noise);
  const LossBreakdown lb = loss_from_forward(model, batch, fp);
  if (stats) *stats = fp.stats;

  grads.encoder.clear();
  grads.decoder.clear();
  for (const auto& layer : model.encoder)
    grads.encoder.push_back(zero_grads_like(layer));
  grads.mu_head = zero_grads_like(model.mu_head);
  grads.logvar_head = LayerGrads{};
  if (model.has_logvar_head())
    grads.logvar_head = zero_grads_like(model.logvar_head);
  for (const auto& layer : model.decoder)
    grads.decoder.push_back(zero_grads_like(layer));

  const Scalar n = static_cast<Scalar>(batch.rows());
  const Scalar inv_elems = 1.0 / (n * batch.cols());

  // Reconstruction path back through the decoder.
  Matrix d = 2.0 * inv_elems * (fp.recon - batch);
  for (std::size_t i = model.decoder.size(); i-- > 0;) {
    d = dense_backward(model.decoder[i], fp.decoder[i], std::move(d),
                       grads.decoder[i]);
  }

  // d is now dL/dz. Sampling: z = mu + sigma_half * eps, so the logvar head
  // sees 0.5 * sigma_half * eps times the z gradient.
  Matrix d_mu = d;
  Matrix d_h;
  if (model.has_logvar_head()) {
    Matrix d_logvar =
        (d.array() * noise.array() * 0.5 * fp.sigma_half.array()).matrix();
    // KL term: d/dmu = mu/n, d/dlogvar = expm1(logvar)/(2n), scaled by beta.
    d_mu.array() += (model.beta / n) * fp.mu.array();
    d_logvar.array() +=
        (model.beta * 0.5 / n) *
        fp.logvar.unaryExpr([](Scalar v) { return std::expm1(v); }).array();
    d_h = dense_backward(model.mu_head, fp.mu_cache, std::move(d_mu),
                         grads.mu_head) +
          dense_backward(model.logvar_head, fp.logvar_cache, std::move(d_logvar),
                         grads.logvar_head);
  } else {
    d_h = dense_backward(model.mu_head, fp.mu_cache, std::move(d_mu),
                         grads.mu_head);
  }

  for (std::size_t i = model.encoder.size(); i-- > 0;) {
    d_h = dense_backward(model.encoder[i], fp.encoder[i], std::move(d_h),
                         grads.encoder[i]);
  }
  return lb;
}

InferenceResult infer_batch(const VaeModel& model, const Matrix& batch) {
  InferenceResult out;
  Matrix h = batch;
  for (const auto& layer : model.encoder) {
    h = dense_forward(layer, h, false, nullptr);
  }
  out.mu = dense_forward(model.mu_head, h, false, nullptr);
  if (model.has_logvar_head()) {
    out.logvar = dense_forward(model.logvar_head, h, false, nullptr);
  }
  Matrix g = out.mu;  // z = mu: deterministic inference
  for (const auto& layer : model.decoder) {
    g = dense_forward(layer, g, false, nullptr);
  }
  out.recon = std::move(g);
  return out;
}

namespace {

template <typename ModelT, typename Fn>
void for_each_layer(ModelT& model, Fn&& fn) {
  for (auto& layer : model.encoder) fn(layer);
  fn(model.mu_head);
  if (model.has_logvar_head()) fn(model.logvar_head);
  for (auto& layer : model.decoder) fn(layer);
}

}  // namespace

Index parameter_count(const VaeModel& model) {
  Index count = 0;
  for_each_layer(model, [&count](const DenseLayer& layer) {
    count += layer.weight.size() + layer.bias.size();
    if (layer.spec.batch_norm)
      count += layer.bn_scale.size() + layer.bn_shift.size();
  });
  return count;
}

Vector flatten_parameters(const VaeModel& model) {
  Vector out(parameter_count(model));
  Index pos = 0;
  for_each_layer(model, [&](const DenseLayer& layer) {
    for (Index i = 0; i < layer.weight.rows(); ++i)
      for (Index j = 0; j < layer.weight.cols(); ++j)
        out[pos++] = layer.weight(i, j);
    for (Index j = 0; j < layer.bias.size(); ++j) out[pos++] = layer.bias[j];
    if (layer.spec.batch_norm) {
      for (Index j = 0; j < layer.bn_scale.size(); ++j)
        out[pos++] = layer.bn_scale[j];
      for (Index j = 0; j < layer.bn_shift.size(); ++j)
        out[pos++] = layer.bn_shift[j];
    }
  });
  return out;
}

void set_parameters(VaeModel& model, const Vector& params) {
  if (params.size() != parameter_count(model)) {
    throw std::invalid_argument("set_parameters: length mismatch");
  }
  Index pos = 0;
  for_each_layer(model, [&](DenseLayer& layer) {
    for (Index i = 0; i < layer.weight.rows(); ++i)
      for (Index j = 0; j < layer.weight.cols(); ++j)
        layer.weight(i, j) = params[pos++];
    for (Index j = 0; j < layer.bias.size(); ++j) layer.bias[j] = params[pos++];
    if (layer.spec.batch_norm) {
      for (Index j = 0; j < layer.bn_scale.size(); ++j)
        layer.bn_scale[j] = params[pos++];
      for (Index j = 0; j < layer.bn_shift.size(); ++j)
        layer.bn_shift[j] = params[pos++];
    }
  });
}

Vector flatten_gradients(const VaeGradients& grads) {
  Index count = 0;
  auto tensor_sizes = [&count](const LayerGrads& g) {
    count += g.weight.size() + g.bias.size() + g.bn_scale.size() + g.bn_shift.size();
  };
  for (const auto& g : grads.encoder) tensor_sizes(g);
  tensor_sizes(grads.mu_head);
  tensor_sizes(grads.logvar_head);
  for (const auto& g : grads.decoder) tensor_sizes(g);

  Vector out(count);
  Index pos = 0;
  auto emit = [&](const LayerGrads& g) {
    for (Index i = 0; i < g.weight.rows(); ++i)
      for (Index j = 0; j < g.weight.cols(); ++j) out[pos++] = g.weight(i, j);
    for (Index j = 0; j < g.bias.size(); ++j) out[pos++] = g.bias[j];
    for (Index j = 0; j < g.bn_scale.size(); ++j) out[pos++] = g.bn_scale[j];
    for (Index j = 0; j < g.bn_shift.size(); ++j) out[pos++] = g.bn_shift[j];
  };
  for (const auto& g : grads.encoder) emit(g);
  emit(grads.mu_head);
  emit(grads.logvar_head);
  for (const auto& g : grads.decoder) emit(g);
  return out;
}

namespace {

class AdamOptimizer {
 public:
  AdamOptimizer(Scalar lr, Index n)
      : lr_(lr), m_(Vector::Zero(n)), v_(Vector::Zero(n)) {}

  void step(Vector& params, const Vector& grads) {
    ++t_;
    m_ = kBeta1 * m_ + (1.0 - kBeta1) * grads;
    v_.array() = kBeta2 * v_.array() + (1.0 - kBeta2) * grads.array().square();
    const Scalar corr1 = 1.0 - std::pow(kBeta1, t_);
    const Scalar corr2 = 1.0 - std::pow(kBeta2, t_);
    params.array() -=
        lr_ * (m_.array() / corr1) / ((v_.array() / corr2).sqrt() + kEps);
  }

 private:
  static constexpr Scalar kBeta1 = 0.9;
  static constexpr Scalar kBeta2 = 0.999;
  static constexpr Scalar kEps = 1e-8;
  Scalar lr_;
  Vector m_, v_;
  int t_ = 0;
};

void update_running_stats(VaeModel& model, const BatchStats& stats) {
  std::size_t next = 0;
  auto update = [&](DenseLayer& layer) {
    if (!layer.spec.batch_norm) return;
    layer.bn_run_mean = kBnMomentum * layer.bn_run_mean +
                        (1.0 - kBnMomentum) * stats.means.at(next);
    layer.bn_run_var = kBnMomentum * layer.bn_run_var +
                       (1.0 - kBnMomentum) * stats.vars.at(next);
    ++next;
  };
  for (auto& layer : model.encoder) update(layer);
  for (auto& layer : model.decoder) update(layer);
}

}  // namespace

TrainResult train(VaeModel model, const std::vector<SuperFrame>& frames,
                  const TrainConfig& config) {
  if (frames.empty()) throw std::invalid_argument("train: no super-frames");
  if (frames.size() < 2) {
    throw std::invalid_argument("train: need at least 2 super-frames");
  }
  if (config.batch_size < 1) {
    throw std::invalid_argument("train: batch_size must be >= 1");
  }
  if (!(config.learning_rate > 0.0)) {
    throw std::invalid_argument("train: learning_rate must be positive");
  }
  if (config.epochs < 0) throw std::invalid_argument("train: negative epochs");

  const Matrix all = pack_super_frames(frames);
  if (all.cols() != model.input_dim) {
    throw std::invalid_argument(
        "train: super-frame length " + std::to_string(all.cols()) +
        " does not match model input " + std::to_string(model.input_dim));
  }
  const Index n = all.rows();

  Rng rng(config.seed);
  Vector params = flatten_parameters(model);
  AdamOptimizer adam(config.learning_rate, params.size());
  std::vector<Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Index{0});

  TrainResult result;
  result.history.reserve(static_cast<std::size_t>(config.epochs));
  VaeGradients grads;
  BatchStats stats;

  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    rng.shuffle(order);
    Scalar mse_sum = 0.0, kl_sum = 0.0;
    Index seen = 0;
    for (Index start = 0; start < n; start += config.batch_size) {
      const Index rows = std::min<Index>(config.batch_size, n - start);
      if (rows == 1) break;  // trailing singleton: batch statistics undefined

      Matrix batch(rows, all.cols());
      for (Index r = 0; r < rows; ++r) {
        batch.row(r) = all.row(order[static_cast<std::size_t>(start + r)]);
      }
      Matrix noise;
      if (model.has_logvar_head()) {
        noise.resize(rows, model.latent_dim);
        for (Index r = 0; r < rows; ++r) {
          for (Index k = 0; k < model.latent_dim; ++k) noise(r, k) = rng.normal();
        }
      }

      LossBreakdown lb;
      try {
        lb = loss_gradients(model, batch, noise, grads, &stats);
      } catch (const std::runtime_error& e) {
        throw std::runtime_error("training diverged at epoch " +
                                 std::to_string(epoch) + ", batch " +
                                 std::to_string(start / config.batch_size) +
                                 ": " + e.what());
      }
      if (!std::isfinite(lb.total)) {
        throw std::runtime_error("training diverged at epoch " +
                                 std::to_string(epoch) + ", batch " +
                                 std::to_string(start / config.batch_size) +
                                 ": non-finite loss");
      }

      adam.step(params, flatten_gradients(grads));
      set_parameters(model, params);
      update_running_stats(model, stats);

      mse_sum += lb.mse * static_cast<Scalar>(rows);
      kl_sum += lb.kl * static_cast<Scalar>(rows);
      seen += rows;
    }
    LossBreakdown epoch_loss;
    epoch_loss.beta = model.beta;
    epoch_loss.mse = mse_sum / static_cast<Scalar>(seen);
    epoch_loss.kl = kl_sum / static_cast<Scalar>(seen);
    epoch_loss.total = epoch_loss.mse + epoch_loss.beta * epoch_loss.kl;
    result.history.push_back(epoch_loss);
  }

  result.model = std::move(model);
  return result;
}

}  // namespace pcgvae
